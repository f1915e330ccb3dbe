#include "triage/lupin.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "parallel.hpp"
#include "triage/random.hpp"

namespace triage {

void ExperimentConfig::validate() const {
  if (fold_count < 2) throw std::invalid_argument("fold_count must be >= 2");
  if (!(train_fraction > 0.0 && train_fraction < 1.0))
    throw std::invalid_argument("train_fraction must lie in (0, 1)");
  if (seeds.empty()) throw std::invalid_argument("at least one labeling seed is required");
  if (k_max < 1 || k_max > kMaxHitK) throw std::invalid_argument("k_max must lie in [1, 5]");
  if (classifiers.empty()) throw std::invalid_argument("no classifier kinds configured");
  if (localizer_depth == 0) throw std::invalid_argument("localizer depth must be >= 1");
  if (rank.epochs < 1 || !(rank.learning_rate > 0.0) || rank.lambda < 0.0)
    throw std::invalid_argument("invalid rank learner settings");
}

Grid ExperimentConfig::grid(ClassifierKind kind) const {
  auto it = grids.find(kind);
  return it != grids.end() ? it->second : default_grid(kind);
}

std::vector<double> feature_row(const MetaFeatureVector& f) {
  return {f.values.begin(), f.values.end()};
}

Metrics mean_metrics(const std::vector<Metrics>& runs) {
  if (runs.empty()) throw std::invalid_argument("no runs to average");
  Metrics m;
  m.query_count = runs.front().query_count;
  for (const auto& r : runs) {
    m.mrr += r.mrr;
    m.map += r.map;
    for (std::size_t k = 0; k < m.hit.size(); ++k) m.hit[k] += r.hit[k];
  }
  const double n = static_cast<double>(runs.size());
  m.mrr /= n;
  m.map /= n;
  for (auto& h : m.hit) h /= n;
  return m;
}

// ---------------------------------------------------------------------------
// Chronological ten-fold protocol

namespace {

struct Prepared {
  RankedRecommendation freq;
  RankedRecommendation textsim;
  std::vector<std::pair<DeveloperId, L2RFeatureVector>> candidates;
  std::vector<RankTuple> tuples;
  MetaFeatureVector features;
};

Prepared prepare(const Corpus& corpus, const ExperimentalReport& e, const InvertedIndex& code_index,
                 const ExperimentConfig& config, bool evaluated) {
  Prepared p;
  const History history(corpus, e.report->created_at);
  p.freq = freq_recommend(e.query, history);
  p.textsim = textsim_recommend(e.query, history);

  const auto ctx = make_l2r_context(e.query, history, code_index, config.bm25, config.localizer_depth);
  std::map<DeveloperId, const L2RFeatureVector*> by_dev;
  p.candidates.reserve(ctx.candidates.size());
  for (const auto& dev : ctx.candidates)
    p.candidates.emplace_back(dev, l2r_features(e.query, *history.profile(dev), ctx));
  for (const auto& [dev, x] : p.candidates) by_dev.emplace(dev, &x);

  const auto& gt = e.ground_truth.developers;
  for (const auto& dev : gt)
    if (auto it = by_dev.find(dev); it != by_dev.end())
      p.tuples.push_back({e.report->id, *it->second, true});
  std::size_t negatives = 0;
  for (const auto& [dev, score] : p.freq.ranked_developers) {
    if (negatives == config.negatives_per_query) break;
    if (gt.count(dev)) continue;
    auto it = by_dev.find(dev);
    if (it == by_dev.end()) continue;
    p.tuples.push_back({e.report->id, *it->second, false});
    ++negatives;
  }

  if (evaluated)
    p.features = compute_meta_features(e.query, history, code_index,
                                       derive_seed(config.seed, fnv1a(e.report->id)));
  return p;
}

}  // namespace

ProtocolResult run_l2r_protocol(const Corpus& corpus, const ExperimentConfig& config) {
  config.validate();
  const auto& reports = corpus.experimental();
  const std::size_t n = reports.size();
  if (n < config.fold_count)
    throw std::invalid_argument("protocol needs at least " + std::to_string(config.fold_count) +
                                " experimental reports, found " + std::to_string(n));

  ProtocolResult out;
  out.fold_sizes = chronological_fold_sizes(n, config.fold_count);
  std::vector<std::size_t> fold_of(n);
  std::vector<std::size_t> fold_start(config.fold_count + 1, 0);
  for (std::size_t f = 0, i = 0; f < config.fold_count; ++f) {
    fold_start[f] = i;
    for (std::size_t k = 0; k < out.fold_sizes[f]; ++k) fold_of[i++] = f;
  }
  fold_start[config.fold_count] = n;

  const InvertedIndex code_index = build_code_index(corpus);
  std::vector<Prepared> prepared(n);
  detail::parallel_for(n, config.jobs, [&](std::size_t i) {
    prepared[i] = prepare(corpus, reports[i], code_index, config, fold_of[i] > 0);
  });

  std::vector<LinearRankModel> models(config.fold_count);
  out.rank_training_pairs.assign(config.fold_count - 1, 0);
  detail::parallel_for(config.fold_count - 1, config.jobs, [&](std::size_t x0) {
    const std::size_t x = x0 + 1;  // folds [0, x) train, fold x is scored
    std::vector<RankTuple> tuples;
    for (std::size_t i = 0; i < fold_start[x]; ++i)
      tuples.insert(tuples.end(), prepared[i].tuples.begin(), prepared[i].tuples.end());
    RankLearnerConfig rc = config.rank;
    rc.seed = derive_seed(config.rank.seed ^ config.seed, x);
    RankTrainingTrace trace;
    try {
      models[x] = ranksvm_train(tuples, rc, &trace);
      out.rank_training_pairs[x0] = trace.pair_count;
    } catch (const std::invalid_argument&) {
      // No contrasting pair yet: an untrained model ranks candidates by id.
      models[x] = LinearRankModel{};
      models[x].config = rc;
    }
  });

  out.evaluation.resize(n - fold_start[1]);
  detail::parallel_for(out.evaluation.size(), config.jobs, [&](std::size_t j) {
    const std::size_t i = fold_start[1] + j;
    const auto& e = reports[i];
    auto& p = prepared[i];
    ProtocolQuery& q = out.evaluation[j];
    q.report_id = e.report->id;
    q.created_at = e.report->created_at;
    q.fold = fold_of[i];
    q.ground_truth = e.ground_truth.developers;
    q.recommendations[class_index(Approach::Freq)] = std::move(p.freq);
    q.recommendations[class_index(Approach::TextSim)] = std::move(p.textsim);
    q.recommendations[class_index(Approach::L2R)] =
        l2r_recommend(e.report->id, models[fold_of[i]], p.candidates);
    q.outcomes.report_id = q.report_id;
    for (std::size_t a = 0; a < kBaseApproachCount; ++a)
      q.outcomes.by_approach[a] = evaluate_query(q.report_id, kBaseApproaches[a],
                                                 q.recommendations[a].developers(), q.ground_truth);
    q.features = p.features;
  });
  return out;
}

// ---------------------------------------------------------------------------
// Lupin

ExperimentSplit split_evaluation(const std::vector<ProtocolQuery>& evaluation,
                                 double train_fraction) {
  const auto cut = static_cast<std::size_t>(
      std::floor(train_fraction * static_cast<double>(evaluation.size()) + 1e-9));
  if (cut == 0 || cut >= evaluation.size())
    throw std::invalid_argument("train/test split leaves one side empty");
  ExperimentSplit s;
  for (std::size_t i = 0; i < evaluation.size(); ++i)
    (i < cut ? s.train : s.test).push_back(&evaluation[i]);
  return s;
}

Metrics lupin_dispatch_metrics(const std::vector<const ProtocolQuery*>& queries,
                               const ApproachPredictor& predictor) {
  std::vector<QueryResult> rs;
  rs.reserve(queries.size());
  for (const auto* q : queries) rs.push_back(q->outcomes.by_approach[class_index(predictor(*q))]);
  return aggregate(rs);
}

namespace {

std::vector<ApproachOutcomes> outcomes_of(const std::vector<const ProtocolQuery*>& qs) {
  std::vector<ApproachOutcomes> out;
  out.reserve(qs.size());
  for (const auto* q : qs) out.push_back(q->outcomes);
  return out;
}

std::vector<LabeledExample> labeled(const std::vector<const ProtocolQuery*>& qs,
                                    const BestApproachLabeling& labels) {
  std::vector<LabeledExample> out;
  for (const auto* q : qs) {
    auto it = labels.labels.find(q->report_id);
    if (it == labels.labels.end()) continue;
    out.push_back({q->report_id, feature_row(q->features), it->second, q->created_at});
  }
  return out;
}

ClassifierModel fit_selected(ClassifierKind kind, const std::vector<LabeledExample>& train,
                             const ExperimentConfig& config, std::uint64_t seed,
                             Hyperparameters& chosen) {
  std::set<Approach> distinct;
  for (const auto& e : train) distinct.insert(e.label);
  if (distinct.empty()) throw std::invalid_argument("no labeled training queries");
  if (distinct.size() == 1) {
    chosen = {{"label", static_cast<double>(class_index(*distinct.begin()))}};
    return ClassifierModel::constant(*distinct.begin());
  }
  const Grid grid = config.grid(kind);
  chosen = grid.size() == 1 || train.size() < kGridSearchFolds
               ? grid.front()
               : grid_search_chronological(train, kind, grid, seed).best;
  return train_classifier(kind, train, chosen, seed);
}

}  // namespace

ExperimentReport run_lupin_on_protocol(const ProtocolResult& protocol,
                                       const ExperimentConfig& config) {
  config.validate();
  const auto split = split_evaluation(protocol.evaluation, config.train_fraction);

  ExperimentReport rep;
  rep.fold_sizes = protocol.fold_sizes;
  rep.evaluation_queries = protocol.evaluation.size();
  rep.train_queries = split.train.size();
  rep.test_queries = split.test.size();
  rep.seeds = config.seeds;
  for (const auto* q : split.test) rep.test_report_ids.push_back(q->report_id);

  std::vector<ApproachOutcomes> all;
  for (const auto& q : protocol.evaluation) all.push_back(q.outcomes);
  const auto test = outcomes_of(split.test);
  for (auto a : kBaseApproaches) {
    rep.evaluation_metrics[a] = approach_metrics(all, a);
    rep.test_metrics[a] = approach_metrics(test, a);
  }
  rep.evaluation_metrics[Approach::Oracle] = oracle_metrics(all);
  rep.test_metrics[Approach::Oracle] = oracle_metrics(test);
  rep.distribution = best_approach_labels(all, config.seeds.front());

  rep.runs.resize(config.seeds.size());
  const std::size_t kinds = config.classifiers.size();
  std::vector<BestApproachLabeling> labels(config.seeds.size());
  for (std::size_t r = 0; r < config.seeds.size(); ++r) {
    labels[r] = best_approach_labels(all, config.seeds[r]);
    rep.runs[r].seed = config.seeds[r];
  }
  std::vector<ClassifierRun> cells(config.seeds.size() * kinds);
  detail::parallel_for(cells.size(), config.jobs, [&](std::size_t c) {
    const std::size_t r = c / kinds;
    const ClassifierKind kind = config.classifiers[c % kinds];
    const auto train = labeled(split.train, labels[r]);
    const std::uint64_t seed = derive_seed(config.seeds[r], static_cast<std::uint64_t>(kind));
    ClassifierRun& run = cells[c];
    const ClassifierModel model = fit_selected(kind, train, config, seed, run.hyperparameters);

    for (const auto* q : split.test) run.predictions.push_back(model.predict(feature_row(q->features)));
    run.lupin = dispatched_metrics(test, run.predictions);

    std::vector<Approach> preds, truth;
    for (std::size_t i = 0; i < split.test.size(); ++i) {
      auto it = labels[r].labels.find(split.test[i]->report_id);
      if (it == labels[r].labels.end()) continue;
      preds.push_back(run.predictions[i]);
      truth.push_back(it->second);
    }
    if (!truth.empty()) run.classification = classification_report(preds, truth);
  });

  for (std::size_t r = 0; r < config.seeds.size(); ++r) {
    rep.runs[r].labeled_train = labeled(split.train, labels[r]).size();
    rep.runs[r].labeled_test = labeled(split.test, labels[r]).size();
    for (std::size_t k = 0; k < kinds; ++k)
      rep.runs[r].classifiers[config.classifiers[k]] = std::move(cells[r * kinds + k]);
  }

  double best_mrr = -1.0;
  for (auto kind : config.classifiers) {
    std::vector<Metrics> per_run;
    for (const auto& run : rep.runs) per_run.push_back(run.classifiers.at(kind).lupin);
    rep.lupin_mean[kind] = mean_metrics(per_run);
    if (rep.lupin_mean[kind].mrr > best_mrr) {
      best_mrr = rep.lupin_mean[kind].mrr;
      rep.selected = kind;
    }
  }
  return rep;
}

ExperimentReport run_lupin_experiment(const Corpus& corpus, const ExperimentConfig& config) {
  return run_lupin_on_protocol(run_l2r_protocol(corpus, config), config);
}

RankedRecommendation lupin_recommend(const Query& query, const ClassifierModel& classifier,
                                     const History& history, const InvertedIndex& code_index,
                                     const LinearRankModel& rank_model,
                                     const ExperimentConfig& config) {
  const auto features = compute_meta_features(query, history, code_index,
                                              derive_seed(config.seed, fnv1a(query.report_id)));
  const Approach choice = classifier.predict(feature_row(features));
  RankedRecommendation rec;
  switch (choice) {
    case Approach::Freq:
      rec = freq_recommend(query, history);
      break;
    case Approach::TextSim:
      rec = textsim_recommend(query, history);
      break;
    default: {
      const auto ctx =
          make_l2r_context(query, history, code_index, config.bm25, config.localizer_depth);
      rec = l2r_recommend(query, rank_model, ctx);
      break;
    }
  }
  rec.approach = Approach::Lupin;
  rec.dispatched = choice;
  return rec;
}

}  // namespace triage
