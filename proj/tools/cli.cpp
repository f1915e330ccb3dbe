#include "cli.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>

#include "triage/config.hpp"
#include "triage/manifest.hpp"
#include "triage/miner.hpp"
#include "triage/random.hpp"
#include "triage/report_io.hpp"

namespace triage {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Globals {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> jobs;
  std::string out;
  std::string dataset;
};

RunSettings resolve(const Globals& g) {
  RunSettings s;
  if (!g.config.empty()) apply_settings(s, read_key_values(g.config));
  if (!g.dataset.empty()) s.dataset = dataset_in(g.dataset);
  if (g.seed) s.experiment.seed = *g.seed;
  if (g.jobs) s.experiment.jobs = *g.jobs;
  if (s.dataset.reports.empty())
    throw UsageError("no dataset given (use --dataset DIR or a 'dataset' config key)");
  try {
    s.experiment.validate();
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  return s;
}

void write_text(const fs::path& p, const std::string& text) {
  if (p.has_parent_path()) fs::create_directories(p.parent_path());
  std::ofstream os(p, std::ios::binary | std::ios::trunc);
  if (!os || !(os << text)) throw DataError("cannot write " + p.string());
}

/// Writes to --out when given, else to the output stream.
void emit(const Globals& g, std::ostream& out, const std::string& text) {
  if (g.out.empty())
    out << text;
  else
    write_text(g.out, text);
}

std::vector<DatasetDigest> digests(const DatasetPaths& d) {
  std::vector<DatasetDigest> out;
  auto add = [&](const char* role, const fs::path& p) {
    out.push_back({role, p.string(), sha256_file(p)});
  };
  add("reports", d.reports);
  add("commits", d.commits);
  add("code", d.code);
  if (d.identities) add("identities", *d.identities);
  return out;
}

std::string csv_number(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

// ---------------------------------------------------------------------------
// Subcommands

int cmd_ingest(const Globals& g, std::ostream& out) {
  const auto s = resolve(g);
  const Corpus corpus = load_dataset(s.dataset);
  std::set<DeveloperId> devs;
  for (const auto& e : corpus.experimental())
    devs.insert(e.ground_truth.developers.begin(), e.ground_truth.developers.end());
  std::size_t closed = 0, bugs = 0;
  for (const auto& r : corpus.reports()) {
    closed += r.status == ReportStatus::Closed;
    bugs += r.has_label("bug");
  }
  json stats{{"reports", corpus.reports().size()},
             {"closed_reports", closed},
             {"bug_labeled_reports", bugs},
             {"commits", corpus.commits().size()},
             {"code_files", corpus.code_files().size()},
             {"linked_reports", corpus.links().size()},
             {"experimental_reports", corpus.experimental().size()},
             {"ground_truth_developers", devs.size()}};
  emit(g, out, dump_stable(stats));
  return kExitOk;
}

int cmd_features(const Globals& g, std::ostream& out) {
  const auto s = resolve(g);
  const Corpus corpus = load_dataset(s.dataset);
  const InvertedIndex code_index = build_code_index(corpus);
  std::string csv = "report_id,created_at";
  for (auto name : kMetaFeatureNames) csv += "," + std::string(name);
  csv += "\n";
  for (const auto& e : corpus.experimental()) {
    const History history(corpus, e.report->created_at);
    const auto f = compute_meta_features(e.query, history, code_index,
                                         derive_seed(s.experiment.seed, fnv1a(e.report->id)));
    csv += e.report->id + "," + format_rfc3339(e.report->created_at);
    for (double v : f.values) csv += "," + csv_number(v);
    csv += "\n";
  }
  emit(g, out, csv);
  return kExitOk;
}

int cmd_run(const Globals& g, const std::string& approach_name, std::ostream& out) {
  const auto approach = parse_approach(approach_name);
  if (!approach) throw UsageError("unknown approach '" + approach_name + "'");
  const auto s = resolve(g);
  const Corpus corpus = load_dataset(s.dataset);
  const auto protocol = run_l2r_protocol(corpus, s.experiment);

  std::vector<RankedRecommendation> recs;
  if (*approach == Approach::Lupin) {
    const auto rep = run_lupin_on_protocol(protocol, s.experiment);
    const auto split = split_evaluation(protocol.evaluation, s.experiment.train_fraction);
    const auto& preds = rep.runs.front().classifiers.at(rep.selected).predictions;
    for (std::size_t i = 0; i < split.test.size(); ++i) {
      auto rec = split.test[i]->recommendations[class_index(preds[i])];
      rec.approach = Approach::Lupin;
      rec.dispatched = preds[i];
      recs.push_back(std::move(rec));
    }
  } else {
    for (const auto& q : protocol.evaluation) {
      const Approach pick = *approach == Approach::Oracle ? oracle_choice(q.outcomes) : *approach;
      auto rec = q.recommendations[class_index(pick)];
      if (*approach == Approach::Oracle) {
        rec.approach = Approach::Oracle;
        rec.dispatched = pick;
      }
      recs.push_back(std::move(rec));
    }
  }
  emit(g, out, dump_stable(recommendations_to_json(*approach, recs)));
  return kExitOk;
}

int cmd_eval(const Globals& g, const std::string& recs_path, std::ostream& out) {
  const auto s = resolve(g);
  const Corpus corpus = load_dataset(s.dataset);
  std::ifstream in(recs_path);
  if (!in) throw DataError("cannot read " + recs_path);
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::exception& e) {
    throw DataError(recs_path + ": " + e.what());
  }
  const auto recs = recommendations_from_json(doc);
  if (recs.empty()) throw DataError(recs_path + ": no recommendations");

  std::map<std::string, const ExperimentalReport*> by_id;
  for (const auto& e : corpus.experimental()) by_id[e.report->id] = &e;
  std::vector<QueryResult> results;
  for (const auto& r : recs) {
    auto it = by_id.find(r.report_id);
    if (it == by_id.end())
      throw DataError(recs_path + ": report '" + r.report_id + "' is not an experimental report");
    results.push_back(
        evaluate_query(r.report_id, r.approach, r.developers(), it->second->ground_truth.developers));
  }
  const Metrics m = aggregate(results);
  const std::string name(to_string(recs.front().approach));
  json result{{"metrics", {{name, to_json(m)}}}};
  if (!g.out.empty()) write_text(g.out, dump_stable(result));
  out << render_metrics_table({{name, m}});
  return kExitOk;
}

int cmd_experiment(const Globals& g, const std::vector<std::uint64_t>& seeds, std::ostream& out,
                   const std::string& command_line) {
  const auto started = std::chrono::steady_clock::now();
  auto s = resolve(g);
  if (!seeds.empty()) s.experiment.seeds = seeds;
  if (g.out.empty()) throw UsageError("experiment needs --out DIR");
  const fs::path dir = g.out;

  const Corpus corpus = load_dataset(s.dataset);
  const auto report = run_lupin_experiment(corpus, s.experiment);
  const auto doc = to_json(report);
  const std::string text = dump_stable(doc);
  write_text(dir / "report.json", text);

  RunManifest m;
  m.command = command_line;
  m.config_hash = sha256_hex(canonical_settings(s));
  m.datasets = digests(s.dataset);
  m.seeds = s.experiment.seeds;
  m.master_seed = s.experiment.seed;
  m.version = toolkit_version();
  m.outputs = {{"report.json", sha256_hex(text)}};
  m.duration_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  write_text(dir / "manifest.json", dump_stable(m.to_json()));
  out << render_report(doc);
  return kExitOk;
}

int cmd_report(const Globals& g, const std::string& path, std::ostream& out) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot read " + path);
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::exception& e) {
    throw DataError(path + ": " + e.what());
  }
  emit(g, out, render_report(doc));
  return kExitOk;
}

int cmd_mine(const Globals& g, const std::string& repo, const std::string& fixture,
             const std::string& since, int page_size, std::ostream& out) {
  if (g.out.empty()) throw UsageError("mine needs --out DIR");
  MinerConfig c;
  c.repository = repo;
  c.page_size = page_size;
  c.output_dir = g.out;
  c.mode = fixture.empty() ? MinerMode::Live : MinerMode::Fixture;
  c.fixture_path = fixture;
  if (!since.empty()) c.since = parse_rfc3339(since);
  c.token = token_from_env();
  try {
    c.validate();
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }

  std::unique_ptr<Transport> transport;
  if (c.mode == MinerMode::Fixture)
    transport = std::make_unique<FixtureTransport>(c.fixture_path);
  else
    transport = make_live_transport();
  Miner miner(c, *transport);
  const auto issues = miner.fetch_issues();
  const auto commits = miner.fetch_commits();
  const auto paths = export_dataset(issues, commits, c.output_dir);
  out << "wrote " << issues.size() << " issues to " << paths.reports.string() << "\n"
      << "wrote " << commits.size() << " commits to " << paths.commits.string() << "\n"
      << miner.requests() << " requests\n";
  return kExitOk;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Bug-triage recommenders, meta-recommender and evaluation protocol", "triage-lab"};
  app.require_subcommand(1);
  app.set_version_flag("--version", toolkit_version());

  Globals g;
  app.add_option("--config", g.config, "Key-value settings file")->check(CLI::ExistingFile);
  app.add_option("--seed", g.seed, "Master seed (rank learner, coherency sampling)");
  app.add_option("--jobs", g.jobs, "Worker threads")->check(CLI::PositiveNumber);
  app.add_option("--out", g.out, "Output file or directory");
  app.add_option("--dataset", g.dataset, "Directory with reports/commits/code.jsonl");

  auto* mine = app.add_subcommand("mine", "Harvest issues and commits into a dataset");
  std::string repo, fixture, since;
  int page_size = 100;
  mine->add_option("--repo", repo, "owner/name")->required();
  mine->add_option("--fixture", fixture, "Replay recorded responses from this directory");
  mine->add_option("--since", since, "Only items updated after this RFC 3339 time");
  mine->add_option("--page-size", page_size, "Items per page (1-100)");

  auto* ingest = app.add_subcommand("ingest", "Validate a dataset and print statistics");
  auto* features = app.add_subcommand("features", "Export the 23 query features as CSV");

  auto* run = app.add_subcommand("run", "Per-query recommendations as JSON");
  std::string approach;
  run->add_option("--approach", approach, "freq|textsim|l2r|lupin|oracle")->required();

  auto* eval = app.add_subcommand("eval", "Metrics for a recommendations document");
  std::string recs;
  eval->add_option("recommendations", recs, "Output of `run`")->required();

  auto* experiment = app.add_subcommand("experiment", "Full protocol; writes report.json and manifest.json");
  std::vector<std::uint64_t> seeds;
  experiment->add_option("--seeds", seeds, "Labeling seeds, one run each")->delimiter(',');

  auto* report = app.add_subcommand("report", "Render a JSON report as text tables");
  std::string report_path;
  report->add_option("file", report_path, "report.json or eval output")->required();

  for (auto* sub : {mine, ingest, features, run, eval, experiment, report}) sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  std::string command_line;
  for (int i = 1; i < argc; ++i) command_line += (i > 1 ? " " : "") + std::string(argv[i]);

  try {
    if (*mine) return cmd_mine(g, repo, fixture, since, page_size, out);
    if (*ingest) return cmd_ingest(g, out);
    if (*features) return cmd_features(g, out);
    if (*run) return cmd_run(g, approach, out);
    if (*eval) return cmd_eval(g, recs, out);
    if (*experiment) return cmd_experiment(g, seeds, out, command_line);
    if (*report) return cmd_report(g, report_path, out);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const DataError& e) {
    err << "data error: " << e.what() << "\n";
    return kExitData;
  } catch (const MinerError& e) {
    err << "mining failed: " << e.what() << "\n";
    return kExitData;
  } catch (const std::invalid_argument& e) {
    err << "data error: " << e.what() << "\n";
    return kExitData;
  } catch (const fs::filesystem_error& e) {
    err << "data error: " << e.what() << "\n";
    return kExitData;
  }
  return kExitUsage;
}

}  // namespace triage
