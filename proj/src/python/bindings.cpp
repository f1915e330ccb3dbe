#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "triage/config.hpp"
#include "triage/random.hpp"
#include "triage/report_io.hpp"
#include "triage/text.hpp"

namespace py = pybind11;
using namespace triage;

namespace {

py::dict metrics_dict(const Metrics& m) {
  py::dict d;
  d["MRR"] = m.mrr;
  d["MAP"] = m.map;
  for (int k = 0; k < kMaxHitK; ++k) d[("H@" + std::to_string(k + 1)).c_str()] = m.hit[static_cast<std::size_t>(k)];
  d["query_count"] = m.query_count;
  return d;
}

py::list scored(const std::vector<ScoredDoc>& docs) {
  py::list out;
  for (const auto& d : docs) out.append(py::make_tuple(d.doc_id, d.score));
  return out;
}

ExperimentConfig make_config(std::optional<std::vector<std::uint64_t>> seeds, std::uint64_t seed,
                             std::size_t jobs) {
  ExperimentConfig c;
  if (seeds) c.seeds = *seeds;
  c.seed = seed;
  c.jobs = jobs;
  return c;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Bug-triage recommenders and evaluation";
  m.attr("__version__") = TRIAGE_VERSION;

  py::register_exception<DataError>(m, "DataError", PyExc_ValueError);

  m.def("tokenize", &tokenize, py::arg("text"));
  m.def("porter_stem", &porter_stem, py::arg("word"));
  m.def("preprocess", &preprocess, py::arg("text"));
  m.def("is_stop_word", &is_stop_word, py::arg("token"));

  py::class_<InvertedIndex>(m, "Index")
      .def(py::init([](const std::map<std::string, std::string>& docs) {
             std::vector<std::pair<std::string, TokenList>> d;
             for (const auto& [id, text] : docs) d.emplace_back(id, preprocess(text));
             return build_index(std::move(d));
           }),
           py::arg("documents"), "Index raw texts keyed by document id.")
      .def_property_readonly("doc_count", &InvertedIndex::doc_count)
      .def("df", &InvertedIndex::df, py::arg("term"))
      .def("idf", &InvertedIndex::idf, py::arg("term"))
      .def(
          "cosine",
          [](const InvertedIndex& idx, const std::string& q) { return scored(cosine_tfidf(preprocess(q), idx)); },
          py::arg("query"))
      .def(
          "bm25",
          [](const InvertedIndex& idx, const std::string& q, double k1, double b) {
            return scored(bm25(preprocess(q), idx, {k1, b}));
          },
          py::arg("query"), py::arg("k1") = 1.2, py::arg("b") = 0.75)
      .def(
          "localize",
          [](const InvertedIndex& idx, const std::string& q, std::size_t n) {
            return scored(localize(preprocess(q), idx, n));
          },
          py::arg("query"), py::arg("n") = kDefaultLocalizerDepth);

  m.def(
      "rank_of_first_hit",
      [](const std::vector<DeveloperId>& ranked, const std::set<DeveloperId>& gt) {
        return rank_of_first_hit(ranked, gt);
      },
      py::arg("ranked"), py::arg("ground_truth"), "1-based rank, or None for a miss.");
  m.def("average_precision", &average_precision, py::arg("ranked"), py::arg("ground_truth"));
  m.def(
      "evaluate",
      [](const std::vector<std::pair<std::vector<DeveloperId>, std::set<DeveloperId>>>& queries) {
        std::vector<QueryResult> rs;
        for (std::size_t i = 0; i < queries.size(); ++i)
          rs.push_back(evaluate_query(std::to_string(i), Approach::Freq, queries[i].first, queries[i].second));
        return metrics_dict(aggregate(rs));
      },
      py::arg("queries"), "Metrics over (ranked developers, ground truth) pairs.");

  m.def(
      "dataset_summary",
      [](const std::filesystem::path& dir) {
        const Corpus c = load_dataset(dataset_in(dir));
        py::dict d;
        d["reports"] = c.reports().size();
        d["commits"] = c.commits().size();
        d["code_files"] = c.code_files().size();
        d["experimental_reports"] = c.experimental().size();
        return d;
      },
      py::arg("dataset_dir"));

  m.def(
      "meta_features",
      [](const std::filesystem::path& dir, std::uint64_t seed) {
        const Corpus c = load_dataset(dataset_in(dir));
        const InvertedIndex code = build_code_index(c);
        py::list rows;
        for (const auto& e : c.experimental()) {
          const History h(c, e.report->created_at);
          const auto f = compute_meta_features(e.query, h, code, derive_seed(seed, fnv1a(e.report->id)));
          py::dict row;
          row["report_id"] = e.report->id;
          for (std::size_t i = 0; i < kMetaFeatureCount; ++i) row[py::str(std::string(kMetaFeatureNames[i]))] = f.values[i];
          rows.append(row);
        }
        return rows;
      },
      py::arg("dataset_dir"), py::arg("seed") = 1);

  m.def(
      "run_experiment_json",
      [](const std::filesystem::path& dir, std::optional<std::vector<std::uint64_t>> seeds,
         std::uint64_t seed, std::size_t jobs) {
        const Corpus c = load_dataset(dataset_in(dir));
        const auto cfg = make_config(std::move(seeds), seed, jobs);
        ExperimentReport rep;
        {
          py::gil_scoped_release release;
          rep = run_lupin_experiment(c, cfg);
        }
        return dump_stable(to_json(rep));
      },
      py::arg("dataset_dir"), py::arg("seeds") = py::none(), py::arg("seed") = 1, py::arg("jobs") = 1);

  m.def("render_report_json", [](const std::string& text) { return render_report(nlohmann::json::parse(text)); },
        py::arg("report_json"));
}
