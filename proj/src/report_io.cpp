#include "triage/report_io.hpp"

#include <cstdio>
#include <sstream>

namespace triage {

using nlohmann::json;

namespace {

const char* kHitKeys[kMaxHitK] = {"H@1", "H@2", "H@3", "H@4", "H@5"};

std::string pct(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.1f", 100.0 * v);
  return buf;
}

std::string pad(const std::string& s, std::size_t width, bool left = false) {
  if (s.size() >= width) return s;
  const std::string fill(width - s.size(), ' ');
  return left ? s + fill : fill + s;
}

json hyper_json(const Hyperparameters& h) {
  json j = json::object();
  for (const auto& [k, v] : h) {
    if (std::isinf(v))
      j[k] = "unlimited";
    else
      j[k] = v;
  }
  return j;
}

}  // namespace

json to_json(const Metrics& m) {
  json j;
  j["MRR"] = m.mrr;
  j["MAP"] = m.map;
  for (int k = 0; k < kMaxHitK; ++k) j[kHitKeys[k]] = m.hit[static_cast<std::size_t>(k)];
  j["query_count"] = m.query_count;
  return j;
}

Metrics metrics_from_json(const json& j) {
  try {
    Metrics m;
    m.mrr = j.at("MRR").get<double>();
    m.map = j.at("MAP").get<double>();
    for (int k = 0; k < kMaxHitK; ++k)
      m.hit[static_cast<std::size_t>(k)] = j.at(kHitKeys[k]).get<double>();
    m.query_count = j.at("query_count").get<std::size_t>();
    return m;
  } catch (const json::exception& e) {
    throw DataError(std::string("malformed metrics: ") + e.what());
  }
}

json to_json(const ClassificationReport& r) {
  json j;
  json per = json::object();
  for (std::size_t c = 0; c < kBaseApproachCount; ++c) {
    const auto& m = r.per_class[c];
    per[std::string(to_string(kBaseApproaches[c]))] = {
        {"precision", m.precision}, {"recall", m.recall}, {"f1", m.f1}, {"support", m.support}};
  }
  j["per_class"] = per;
  j["weighted_precision"] = r.weighted_precision;
  j["weighted_recall"] = r.weighted_recall;
  j["weighted_f1"] = r.weighted_f1;
  j["confusion"] = r.confusion;
  return j;
}

json to_json(const BestApproachLabeling& l) {
  json j;
  json cells = json::object();
  for (std::size_t i = 0; i < kDistributionCells; ++i) cells[kDistributionCellNames[i]] = l.distribution[i];
  j["cells"] = cells;
  j["cell_order"] = kDistributionCellNames;
  j["total"] = l.total;
  j["all_miss"] = l.all_miss;
  return j;
}

json to_json(const ExperimentReport& r) {
  json j;
  j["fold_count"] = r.fold_sizes.size();
  j["fold_sizes"] = r.fold_sizes;
  j["evaluation_queries"] = r.evaluation_queries;
  j["train_queries"] = r.train_queries;
  j["test_queries"] = r.test_queries;
  j["test_report_ids"] = r.test_report_ids;
  j["seeds"] = r.seeds;

  auto approach_block = [](const std::map<Approach, Metrics>& m) {
    json b = json::object();
    for (const auto& [a, metrics] : m) b[std::string(to_string(a))] = to_json(metrics);
    return b;
  };
  j["evaluation_metrics"] = approach_block(r.evaluation_metrics);
  j["test_metrics"] = approach_block(r.test_metrics);
  j["distribution"] = to_json(r.distribution);

  json runs = json::array();
  for (const auto& run : r.runs) {
    json jr;
    jr["seed"] = run.seed;
    jr["labeled_train"] = run.labeled_train;
    jr["labeled_test"] = run.labeled_test;
    json cls = json::object();
    for (const auto& [kind, c] : run.classifiers) {
      json jc;
      jc["hyperparameters"] = hyper_json(c.hyperparameters);
      jc["classification"] = to_json(c.classification);
      jc["lupin"] = to_json(c.lupin);
      json preds = json::array();
      for (auto p : c.predictions) preds.push_back(std::string(to_string(p)));
      jc["predictions"] = preds;
      cls[std::string(to_string(kind))] = jc;
    }
    jr["classifiers"] = cls;
    runs.push_back(jr);
  }
  j["runs"] = runs;

  json mean = json::object();
  for (const auto& [kind, m] : r.lupin_mean) mean[std::string(to_string(kind))] = to_json(m);
  j["lupin_mean"] = mean;
  j["selected_classifier"] = std::string(to_string(r.selected));
  return j;
}

json recommendations_to_json(Approach approach, const std::vector<RankedRecommendation>& recs) {
  json j;
  j["approach"] = std::string(to_string(approach));
  json arr = json::array();
  for (const auto& r : recs) {
    json jr;
    jr["report_id"] = r.report_id;
    if (r.dispatched) jr["dispatched"] = std::string(to_string(*r.dispatched));
    json devs = json::array();
    for (const auto& [dev, score] : r.ranked_developers) devs.push_back(json::array({dev, score}));
    jr["developers"] = devs;
    arr.push_back(jr);
  }
  j["recommendations"] = arr;
  return j;
}

std::vector<RankedRecommendation> recommendations_from_json(const json& j) {
  try {
    const auto approach = parse_approach(j.at("approach").get<std::string>());
    if (!approach) throw DataError("unknown approach '" + j.at("approach").get<std::string>() + "'");
    std::vector<RankedRecommendation> out;
    for (const auto& jr : j.at("recommendations")) {
      RankedRecommendation r;
      r.report_id = jr.at("report_id").get<std::string>();
      r.approach = *approach;
      if (jr.contains("dispatched")) r.dispatched = parse_approach(jr["dispatched"].get<std::string>());
      for (const auto& d : jr.at("developers"))
        r.ranked_developers.emplace_back(d.at(0).get<std::string>(), d.at(1).get<double>());
      out.push_back(std::move(r));
    }
    return out;
  } catch (const json::exception& e) {
    throw DataError(std::string("malformed recommendations document: ") + e.what());
  }
}

std::string render_metrics_table(const std::vector<std::pair<std::string, Metrics>>& rows) {
  std::ostringstream os;
  std::size_t name_w = 8;
  for (const auto& [name, m] : rows) name_w = std::max(name_w, name.size());
  os << pad("Approach", name_w, true);
  for (const char* h : kHitKeys) os << pad(h, 8);
  os << pad("MRR", 8) << pad("MAP", 8) << pad("n", 6) << '\n';
  for (const auto& [name, m] : rows) {
    os << pad(name, name_w, true);
    for (double h : m.hit) os << pad(pct(h), 8);
    os << pad(pct(m.mrr), 8) << pad(pct(m.map), 8) << pad(std::to_string(m.query_count), 6) << '\n';
  }
  return os.str();
}

std::string render_distribution_table(const BestApproachLabeling& l) {
  return render_distribution_table(to_json(l));
}

std::string render_distribution_table(const json& d) {
  std::ostringstream os;
  const auto total = d.at("total").get<std::size_t>();
  os << pad("Best approach", 14, true) << pad("queries", 9) << pad("%", 8) << '\n';
  for (const char* name : kDistributionCellNames) {
    const auto n = d.at("cells").at(name).get<std::size_t>();
    os << pad(name, 14, true) << pad(std::to_string(n), 9)
       << pad(total ? pct(static_cast<double>(n) / static_cast<double>(total)) : "0.0", 8) << '\n';
  }
  os << pad("total", 14, true) << pad(std::to_string(total), 9) << '\n';
  os << pad("all-miss", 14, true) << pad(std::to_string(d.at("all_miss").get<std::size_t>()), 9)
     << '\n';
  return os.str();
}

std::string render_report(const json& doc) {
  try {
    std::ostringstream os;
    auto block_rows = [](const json& block) {
      std::vector<std::pair<std::string, Metrics>> rows;
      for (const char* name : {"FREQ", "TEXTSIM", "L2R", "LUPIN", "ORACLE"})
        if (block.contains(name)) rows.emplace_back(name, metrics_from_json(block[name]));
      return rows;
    };
    if (doc.contains("test_metrics")) {
      os << "Evaluation set (" << doc.at("evaluation_queries").get<std::size_t>() << " queries)\n"
         << render_metrics_table(block_rows(doc.at("evaluation_metrics"))) << '\n';
      os << "Best-approach distribution\n" << render_distribution_table(doc.at("distribution")) << '\n';
      auto rows = block_rows(doc.at("test_metrics"));
      for (const auto& [kind, m] : doc.at("lupin_mean").items())
        rows.emplace_back("LUPIN-" + kind, metrics_from_json(m));
      os << "Test split (" << doc.at("test_queries").get<std::size_t>() << " queries, mean over "
         << doc.at("runs").size() << " runs)\n"
         << render_metrics_table(rows) << '\n';
      os << "Selected classifier: " << doc.at("selected_classifier").get<std::string>() << '\n';
      return os.str();
    }
    if (doc.contains("metrics")) return render_metrics_table(block_rows(doc.at("metrics")));
  } catch (const json::exception& e) {
    throw DataError(std::string("malformed report: ") + e.what());
  }
  throw DataError("document is neither an experiment report nor an eval result");
}

std::string dump_stable(const json& j) { return j.dump(2) + "\n"; }

}  // namespace triage
