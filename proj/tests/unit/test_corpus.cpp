#include <gtest/gtest.h>

#include <fstream>

#include "support.hpp"
#include "triage/corpus.hpp"

using namespace triage;
using namespace triage::testing;

namespace {

std::filesystem::path temp_dir(const std::string& name) {
  auto p = std::filesystem::temp_directory_path() / ("triage_corpus_" + name);
  std::filesystem::remove_all(p);
  std::filesystem::create_directories(p);
  return p;
}

void write(const std::filesystem::path& p, const std::string& text) {
  std::ofstream(p, std::ios::binary) << text;
}

}  // namespace

TEST(Timestamps, ParsesOffsetsAndFractions) {
  EXPECT_EQ(parse_rfc3339("2023-01-02T00:00:00Z"), day(1));
  EXPECT_EQ(parse_rfc3339("2023-01-02T03:00:00.250+03:00"), day(1));
  EXPECT_EQ(parse_rfc3339("2023-01-01T22:30:00-01:30"), day(1));
  EXPECT_EQ(format_rfc3339(day(1, 5)), "2023-01-02T05:00:00Z");
  EXPECT_THROW(parse_rfc3339("02/01/2023"), DataError);
  EXPECT_THROW(parse_rfc3339("2023-13-01T00:00:00Z"), DataError);
}

TEST(LinkCommits, KeywordReference) {
  std::vector<BugReport> reports{bug("123", day(0), "x"), bug("12", day(0), "y")};
  Commit c = fix_commit("123", "dev", day(1));
  Commit other = fix_commit("9", "dev", day(1));
  other.message = "refactor module";
  const auto links = link_commits(reports, {c, other});
  ASSERT_EQ(links.count("123"), 1u);
  EXPECT_EQ(links.at("123"), std::set<std::string>{c.sha});
  // "#123" must not link report "12": the id has to end at a word boundary.
  EXPECT_EQ(links.count("12"), 0u);
}

TEST(LinkCommits, KeywordVariants) {
  std::vector<BugReport> reports{bug("7", day(0), "x")};
  for (const char* msg : {"fixes #7", "Fixed #7", "CLOSES: #7", "resolved  #7.", "close #7", "Fix:#7"}) {
    Commit c = fix_commit("7", "dev", day(1));
    c.message = msg;
    EXPECT_EQ(link_commits(reports, {c}).count("7"), 1u) << msg;
  }
  for (const char* msg : {"see #7", "fixes #70", "fixes 7", "fix #7a"}) {
    Commit c = fix_commit("7", "dev", day(1));
    c.message = msg;
    EXPECT_EQ(link_commits(reports, {c}).count("7"), 0u) << msg;
  }
}

TEST(LinkCommits, HexPrefixInReportText) {
  Commit c = fix_commit("x", "dev", day(1));
  c.sha = "deadbeef0a1b2c3d4e5f60718293a4b5c6d7e8f9";
  c.message = "unrelated";
  std::vector<BugReport> reports{bug("1", day(0), "crash", "reverted by deadbeef0 maybe"),
                                 bug("2", day(0), "crash", "short deadbee"),
                                 bug("3", day(0), "crash", "too short deadbe")};
  const auto links = link_commits(reports, {c});
  EXPECT_EQ(links.count("1"), 1u);
  EXPECT_EQ(links.count("2"), 1u);  // 7 hex chars is enough
  EXPECT_EQ(links.count("3"), 0u);
}

TEST(IdentityMap, ResolvesChainsAndRejectsCycles) {
  IdentityMap m({{"a", "b"}, {"b", "c"}});
  EXPECT_EQ(m.canonical("a"), "c");
  EXPECT_EQ(m.canonical("b"), "c");
  EXPECT_EQ(m.canonical("c"), "c");
  EXPECT_EQ(m.canonical("zed"), "zed");
  EXPECT_THROW(IdentityMap({{"a", "b"}, {"b", "a"}}), DataError);
}

TEST(GroundTruth, UnionOfAssigneesAndCommitPeople) {
  BugReport r = bug("1", day(0), "x", "", {"carol-alias"});
  Commit c = fix_commit("1", "alice", day(1));
  c.committer_id = "bob";
  IdentityMap ids(std::map<std::string, std::string>{{"carol-alias", "carol"}});
  const auto gt = build_ground_truth(r, {&c}, ids);
  EXPECT_EQ(gt.developers, (std::set<DeveloperId>{"alice", "bob", "carol"}));

  BugReport empty = bug("2", day(0), "x");
  EXPECT_THROW(build_ground_truth(empty, {}, ids), std::invalid_argument);
}

TEST(Corpus, SortsAndFiltersExperimentalReports) {
  std::vector<BugReport> reports{bug("12", day(2), "second"), bug("11", day(2), "tie"),
                                 bug("13", day(1), "first")};
  BugReport open = bug("14", day(3), "open");
  open.status = ReportStatus::Open;
  open.closed_at.reset();
  BugReport feature = bug("15", day(3), "feature");
  feature.labels = {"enhancement"};
  BugReport unlinked = bug("16", day(3), "no commit");
  BugReport upper = bug("17", day(4), "label case");
  upper.labels = {"Bug"};
  reports.insert(reports.end(), {open, feature, unlinked, upper});

  std::vector<Commit> commits;
  for (const char* id : {"11", "12", "13", "14", "15", "17"}) commits.push_back(fix_commit(id, "dev", day(5)));

  Corpus corpus(reports, commits, {{"z.cpp", "int z;"}, {"a.cpp", "int a;"}});
  std::vector<std::string> order;
  for (const auto& r : corpus.reports()) order.push_back(r.id);
  EXPECT_EQ(order, (std::vector<std::string>{"13", "11", "12", "14", "15", "16", "17"}));

  std::vector<std::string> experimental;
  for (const auto& e : corpus.experimental()) experimental.push_back(e.report->id);
  EXPECT_EQ(experimental, (std::vector<std::string>{"13", "11", "12", "17"}));
  EXPECT_EQ(corpus.code_files().front().path, "a.cpp");
}

TEST(Corpus, RejectsDuplicatesAndClosingBeforeCreation) {
  EXPECT_THROW(Corpus({bug("1", day(0), "x"), bug("1", day(1), "y")}, {}, {}), DataError);
  BugReport r = bug("1", day(5), "x");
  r.closed_at = day(4);
  EXPECT_THROW(Corpus({r}, {}, {}), DataError);
}

TEST(Corpus, LastModifiedByTracksCommits) {
  Commit c1 = fix_commit("1", "alice", day(1), {"a.cpp"});
  Commit c2 = fix_commit("2", "bob", day(2), {"a.cpp", "missing.cpp"});
  Corpus corpus({bug("1", day(0), "x"), bug("2", day(0, 1), "y")}, {c1, c2}, {{"a.cpp", "x"}});
  const auto* f = corpus.find_code_file("a.cpp");
  ASSERT_NE(f, nullptr);
  EXPECT_EQ(f->last_modified_by.size(), 2u);
}

TEST(JsonLines, ReportRoundTrip) {
  BugReport r = bug("42", day(3), "Title \"quoted\"", "multi\nline", {"alice"});
  r.labels = {"bug", "ui"};
  const auto back = report_from_json_line(report_to_json_line(r));
  EXPECT_EQ(back.id, r.id);
  EXPECT_EQ(back.title, r.title);
  EXPECT_EQ(back.description, r.description);
  EXPECT_EQ(back.created_at, r.created_at);
  EXPECT_EQ(back.closed_at, r.closed_at);
  EXPECT_EQ(back.labels, r.labels);
  EXPECT_EQ(back.tracker_assignees, r.tracker_assignees);
  EXPECT_EQ(back.status, r.status);
}

TEST(JsonLines, IntegerIdsAndCommitDefaults) {
  const auto r = report_from_json_line(
      R"({"id": 5, "title": "t", "created_at": "2023-01-01T00:00:00Z", "status": "open"})");
  EXPECT_EQ(r.id, "5");
  const auto c = commit_from_json_line(
      R"({"sha": "abcdef1", "author": "a", "timestamp": "2023-01-01T00:00:00Z"})");
  EXPECT_EQ(c.committer_id, "a");
  EXPECT_THROW(commit_from_json_line(R"({"sha": "xyz", "author": "a", "timestamp": "2023-01-01T00:00:00Z"})"),
               DataError);
}

TEST(LoadDataset, ErrorsNameFileAndLine) {
  const auto dir = temp_dir("bad");
  write(dir / "reports.jsonl",
        R"({"id": "1", "title": "a", "created_at": "2023-01-01T00:00:00Z", "status": "open"})"
        "\n\n"
        R"({"id": 5)"
        "\n");
  write(dir / "commits.jsonl", "");
  write(dir / "code.jsonl", "");
  try {
    load_dataset({dir / "reports.jsonl", dir / "commits.jsonl", dir / "code.jsonl", std::nullopt});
    FAIL() << "expected DataError";
  } catch (const DataError& e) {
    EXPECT_NE(std::string(e.what()).find("reports.jsonl:3:"), std::string::npos) << e.what();
  }
}

TEST(LoadDataset, MissingFileNamesPath) {
  const auto dir = temp_dir("missing");
  try {
    load_dataset({dir / "nope.jsonl", dir / "c.jsonl", dir / "k.jsonl", std::nullopt});
    FAIL() << "expected DataError";
  } catch (const DataError& e) {
    EXPECT_NE(std::string(e.what()).find("nope.jsonl"), std::string::npos);
  }
}

TEST(LoadDataset, MiniDatasetLoads) {
  DatasetPaths p{mini_dataset() / "reports.jsonl", mini_dataset() / "commits.jsonl",
                 mini_dataset() / "code.jsonl", mini_dataset() / "identities.json"};
  const Corpus corpus = load_dataset(p);
  EXPECT_EQ(corpus.reports().size(), 120u);
  EXPECT_EQ(corpus.code_files().size(), 30u);
  EXPECT_GE(corpus.experimental().size(), 100u);
  std::set<DeveloperId> devs;
  for (const auto& e : corpus.experimental())
    devs.insert(e.ground_truth.developers.begin(), e.ground_truth.developers.end());
  EXPECT_EQ(devs.size(), 8u);  // the alias resolves onto bob
  for (std::size_t i = 1; i < corpus.reports().size(); ++i)
    EXPECT_LE(corpus.reports()[i - 1].created_at, corpus.reports()[i].created_at);
}
