#include <gtest/gtest.h>

#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "cli.hpp"
#include "support.hpp"
#include "triage/config.hpp"

using namespace triage;
using namespace triage::testing;

namespace {

struct CliResult {
  int code;
  std::string out, err;
};

CliResult cli(std::vector<std::string> args) {
  args.insert(args.begin(), "triage-lab");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::filesystem::path scratch(const std::string& name) {
  auto p = std::filesystem::temp_directory_path() / ("triage_cli_" + name);
  std::filesystem::remove_all(p);
  std::filesystem::create_directories(p);
  return p;
}

void write(const std::filesystem::path& p, const std::string& text) {
  std::ofstream(p, std::ios::binary) << text;
}

}  // namespace

TEST(Cli, HelpAndUsageErrors) {
  EXPECT_EQ(cli({"eval", "--help"}).code, 0);
  EXPECT_EQ(cli({"--help"}).code, 0);
  EXPECT_EQ(cli({}).code, 1);
  EXPECT_EQ(cli({"bogus"}).code, 1);
  EXPECT_EQ(cli({"run", "--dataset", mini_dataset().string()}).code, 1);  // --approach missing
  const auto bad = cli({"run", "--approach", "magic", "--dataset", mini_dataset().string()});
  EXPECT_EQ(bad.code, 1);
  EXPECT_NE(bad.err.find("magic"), std::string::npos);
  EXPECT_EQ(cli({"ingest"}).code, 1);  // no dataset
}

TEST(Cli, MissingDatasetIsDataError) {
  const auto r = cli({"ingest", "--dataset", "/nonexistent/dir"});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("/nonexistent/dir"), std::string::npos) << r.err;
}

TEST(Cli, IngestPrintsStatistics) {
  const auto r = cli({"ingest", "--dataset", mini_dataset().string()});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j["reports"], 120);
  EXPECT_EQ(j["code_files"], 30);
  EXPECT_EQ(j["ground_truth_developers"], 8);
}

TEST(Cli, FeaturesCsv) {
  const auto dir = scratch("features");
  const auto r = cli({"features", "--dataset", mini_dataset().string(), "--out", (dir / "f.csv").string()});
  ASSERT_EQ(r.code, 0) << r.err;
  std::ifstream in(dir / "f.csv");
  std::string header;
  std::getline(in, header);
  EXPECT_EQ(header.rfind("report_id,created_at,avgIDF,", 0), 0u);
  std::size_t rows = 0, commas = 0;
  for (std::string line; std::getline(in, line); ++rows) commas = std::count(line.begin(), line.end(), ',');
  EXPECT_GE(rows, 100u);
  EXPECT_EQ(commas, 24u);
}

TEST(Cli, RunThenEval) {
  const auto dir = scratch("run");
  const auto recs = (dir / "freq.json").string();
  const auto r = cli({"run", "--approach", "freq", "--dataset", mini_dataset().string(), "--out", recs});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto e = cli({"eval", recs, "--dataset", mini_dataset().string(), "--out", (dir / "eval.json").string()});
  ASSERT_EQ(e.code, 0) << e.err;
  EXPECT_NE(e.out.find("FREQ"), std::string::npos);
  std::ifstream in(dir / "eval.json");
  const auto j = nlohmann::json::parse(in);
  EXPECT_TRUE(j["metrics"].contains("FREQ"));
  const auto rendered = cli({"report", (dir / "eval.json").string()});
  EXPECT_EQ(rendered.code, 0);
  EXPECT_NE(rendered.out.find("MRR"), std::string::npos);
}

TEST(Cli, EvalRejectsUnknownReports) {
  const auto dir = scratch("eval_bad");
  write(dir / "recs.json",
        R"({"approach": "FREQ", "recommendations": [{"report_id": "nope", "developers": []}]})");
  const auto r = cli({"eval", (dir / "recs.json").string(), "--dataset", mini_dataset().string()});
  EXPECT_EQ(r.code, 2) << r.err;
}

TEST(Cli, MineFromFixture) {
  const auto dir = scratch("mine");
  const auto r = cli({"mine", "--repo", "acme/widget", "--fixture", fixture_dir("paged").string(),
                      "--out", dir.string()});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_TRUE(std::filesystem::exists(dir / "reports.jsonl"));
  EXPECT_NE(r.out.find("wrote 201 issues"), std::string::npos) << r.out;
  EXPECT_EQ(cli({"mine", "--repo", "acme/widget", "--fixture", fixture_dir("unauthorized").string(),
                 "--out", dir.string()}).code, 2);
  EXPECT_EQ(cli({"mine", "--repo", "bad", "--fixture", fixture_dir("paged").string(), "--out", dir.string()}).code, 1);
}

TEST(Config, KeyValueParsing) {
  const auto dir = scratch("config");
  write(dir / "ok.conf", "# settings\nseeds = 1, 2,3\nfold_count=5\n\nbm25.k1 = 1.5\nclassifiers = DT,LR\n");
  RunSettings s;
  apply_settings(s, read_key_values(dir / "ok.conf"));
  EXPECT_EQ(s.experiment.seeds, (std::vector<std::uint64_t>{1, 2, 3}));
  EXPECT_EQ(s.experiment.fold_count, 5u);
  EXPECT_DOUBLE_EQ(s.experiment.bm25.k1, 1.5);
  EXPECT_EQ(s.experiment.classifiers,
            (std::vector<ClassifierKind>{ClassifierKind::DecisionTree, ClassifierKind::LogisticRegression}));

  write(dir / "dup.conf", "seed = 1\nseed = 2\n");
  try {
    read_key_values(dir / "dup.conf");
    FAIL();
  } catch (const DataError& e) {
    EXPECT_NE(std::string(e.what()).find("dup.conf:2"), std::string::npos) << e.what();
  }
  write(dir / "bad.conf", "no equals sign\n");
  EXPECT_THROW(read_key_values(dir / "bad.conf"), DataError);
  EXPECT_THROW(apply_settings(s, {{"unknown", "1"}}), DataError);
  EXPECT_THROW(apply_settings(s, {{"seed", "abc"}}), DataError);
}

TEST(Config, CanonicalSettingsIgnoreJobs) {
  RunSettings a, b;
  b.experiment.jobs = 8;
  EXPECT_EQ(canonical_settings(a), canonical_settings(b));
  b.experiment.seed = 2;
  EXPECT_NE(canonical_settings(a), canonical_settings(b));
}
