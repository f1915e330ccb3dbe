#include "triage/recommenders.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "triage/random.hpp"

namespace triage {

std::vector<DeveloperId> RankedRecommendation::developers() const {
  std::vector<DeveloperId> out;
  out.reserve(ranked_developers.size());
  for (const auto& [d, s] : ranked_developers) out.push_back(d);
  return out;
}

void sort_ranking(std::vector<std::pair<DeveloperId, double>>& ranking) {
  std::sort(ranking.begin(), ranking.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });
}

// ---------------------------------------------------------------------------
// History

History::History(const Corpus& corpus, Timestamp boundary, const HistoryObserver& observer)
    : corpus_(&corpus), boundary_(boundary) {
  auto admit = [&](std::string_view kind, std::string_view id, Timestamp at) {
    if (at >= boundary_)
      throw std::logic_error("history leak: " + std::string(kind) + " " + std::string(id) +
                             " is not before the boundary");
    if (observer) observer(kind, id, at);
  };

  std::vector<std::pair<std::string, TokenList>> docs;
  for (const auto& e : corpus.experimental()) {
    if (e.report->created_at >= boundary_) break;  // chronological
    admit("report", e.report->id, e.report->created_at);
    reports_.push_back(&e);
    report_by_id_.emplace(e.report->id, &e);
    docs.emplace_back(e.report->id, e.query.tokens);
    for (const auto& dev : e.ground_truth.developers) {
      auto& p = profiles_[dev];
      p.developer_id = dev;
      p.fixed_report_ids.push_back(e.report->id);
      p.fix_timestamps.push_back(e.report->created_at);
    }
  }
  report_index_ = build_index(std::move(docs));

  for (const auto& c : corpus.commits()) {
    if (c.timestamp >= boundary_) break;
    admit("commit", c.sha, c.timestamp);
    commits_.push_back(&c);
    auto& author = profiles_[c.author_id];
    author.developer_id = c.author_id;
    author.commit_count += 1;
    author.touched_files.insert(c.changed_files.begin(), c.changed_files.end());
    if (c.committer_id != c.author_id) {
      auto& committer = profiles_[c.committer_id];
      committer.developer_id = c.committer_id;
      committer.touched_files.insert(c.changed_files.begin(), c.changed_files.end());
    }
  }
}

const DeveloperProfile* History::profile(const DeveloperId& dev) const {
  auto it = profiles_.find(dev);
  return it == profiles_.end() ? nullptr : &it->second;
}

const ExperimentalReport* History::past_report(const std::string& id) const {
  auto it = report_by_id_.find(id);
  return it == report_by_id_.end() ? nullptr : it->second;
}

std::map<DeveloperId, std::size_t> History::fix_counts() const {
  std::map<DeveloperId, std::size_t> out;
  for (const auto& [dev, p] : profiles_)
    if (!p.fixed_report_ids.empty()) out[dev] = p.fixed_report_ids.size();
  return out;
}

std::vector<DeveloperId> History::active_developers() const {
  std::vector<DeveloperId> out;
  for (const auto& [dev, p] : profiles_) out.push_back(dev);
  return out;
}

InvertedIndex build_code_index(const Corpus& corpus) {
  std::vector<std::pair<std::string, TokenList>> docs;
  docs.reserve(corpus.code_files().size());
  for (const auto& f : corpus.code_files()) docs.emplace_back(f.path, f.content_tokens);
  return build_index(std::move(docs));
}

// ---------------------------------------------------------------------------
// FREQ / TEXTSIM

RankedRecommendation freq_recommend(const Query& query, const History& history) {
  RankedRecommendation rec{query.report_id, {}, Approach::Freq, std::nullopt};
  for (const auto& [dev, n] : history.fix_counts())
    rec.ranked_developers.emplace_back(dev, static_cast<double>(n));
  sort_ranking(rec.ranked_developers);
  return rec;
}

RankedRecommendation textsim_recommend(const Query& query, const InvertedIndex& past_reports_index,
                                       const std::map<std::string, std::set<DeveloperId>>& fixers) {
  RankedRecommendation rec{query.report_id, {}, Approach::TextSim, std::nullopt};
  std::set<DeveloperId> emitted;
  for (const auto& hit : cosine_tfidf(query.tokens, past_reports_index)) {
    auto it = fixers.find(hit.doc_id);
    if (it == fixers.end()) continue;
    for (const auto& dev : it->second)  // std::set: ascending id
      if (emitted.insert(dev).second) rec.ranked_developers.emplace_back(dev, hit.score);
  }
  return rec;
}

RankedRecommendation textsim_recommend(const Query& query, const History& history) {
  std::map<std::string, std::set<DeveloperId>> fixers;
  for (const auto* e : history.past_reports()) fixers[e->report->id] = e->ground_truth.developers;
  return textsim_recommend(query, history.report_index(), fixers);
}

// ---------------------------------------------------------------------------
// L2R features

namespace {

std::map<std::string, double> keyed(const InvertedIndex& index,
                                    const std::vector<std::pair<std::uint32_t, double>>& scores) {
  std::map<std::string, double> out;
  for (const auto& [doc, s] : scores) out.emplace(index.doc_id(doc), s);
  return out;
}

double lookup(const std::map<std::string, double>& m, const std::string& key) {
  auto it = m.find(key);
  return it == m.end() ? 0.0 : it->second;
}

}  // namespace

L2RQueryContext make_l2r_context(const Query& query, const History& history,
                                 const InvertedIndex& code_index, Bm25Params bm25_params,
                                 std::size_t localizer_depth) {
  L2RQueryContext ctx;
  ctx.history = &history;
  ctx.bm25 = bm25_params;
  ctx.localizer_depth = localizer_depth;
  ctx.candidates = history.active_developers();

  IndexBuilder code_profiles;
  IndexBuilder report_profiles;
  const Corpus& corpus = history.corpus();
  for (const auto& dev : ctx.candidates) {
    code_profiles.touch(dev);
    report_profiles.touch(dev);
    const auto* p = history.profile(dev);
    for (const auto& path : p->touched_files)
      if (const auto* f = corpus.find_code_file(path)) code_profiles.add_tokens(dev, f->content_tokens);
    for (const auto& rid : p->fixed_report_ids)
      if (const auto* r = history.past_report(rid)) report_profiles.add_tokens(dev, r->query.tokens);
  }
  ctx.code_profiles = std::move(code_profiles).build();
  ctx.report_profiles = std::move(report_profiles).build();

  ctx.localized = localize(query.tokens, code_index, localizer_depth);
  ctx.code_cosine = keyed(code_index, cosine_scores(query.tokens, code_index));
  ctx.code_bm25 = keyed(code_index, bm25_scores(query.tokens, code_index, bm25_params));
  ctx.report_cosine = keyed(history.report_index(), cosine_scores(query.tokens, history.report_index()));
  ctx.code_profile_cosine = keyed(ctx.code_profiles, cosine_scores(query.tokens, ctx.code_profiles));
  ctx.code_profile_bm25 =
      keyed(ctx.code_profiles, bm25_scores(query.tokens, ctx.code_profiles, bm25_params));
  ctx.report_profile_cosine =
      keyed(ctx.report_profiles, cosine_scores(query.tokens, ctx.report_profiles));
  ctx.report_profile_bm25 =
      keyed(ctx.report_profiles, bm25_scores(query.tokens, ctx.report_profiles, bm25_params));
  return ctx;
}

L2RFeatureVector l2r_features(const Query& query, const DeveloperProfile& dev,
                              const L2RQueryContext& ctx) {
  (void)query;  // all query-dependent scores are precomputed in ctx
  L2RFeatureVector f{};

  // Query vs. the developer's code profile and individual touched files.
  f[0] = lookup(ctx.code_profile_cosine, dev.developer_id);
  f[1] = lookup(ctx.code_profile_bm25, dev.developer_id);
  for (const auto& path : dev.touched_files) {
    f[2] = std::max(f[2], lookup(ctx.code_cosine, path));
    f[3] = std::max(f[3], lookup(ctx.code_bm25, path));
  }

  // Localizer-mediated overlap.
  double total = 0.0;
  std::size_t overlap = 0;
  for (const auto& hit : ctx.localized) {
    total += hit.score;
    if (!dev.touched_files.count(hit.doc_id)) continue;
    ++overlap;
    f[5] += hit.score;
    f[6] = std::max(f[6], hit.score);
  }
  f[4] = static_cast<double>(overlap) / static_cast<double>(ctx.localizer_depth);
  f[7] = total > 0.0 ? f[5] / total : 0.0;

  // Query vs. the developer's past reports.
  f[8] = lookup(ctx.report_profile_cosine, dev.developer_id);
  f[9] = lookup(ctx.report_profile_bm25, dev.developer_id);
  for (const auto& rid : dev.fixed_report_ids) f[10] = std::max(f[10], lookup(ctx.report_cosine, rid));

  // History and activity.
  f[11] = static_cast<double>(dev.fixed_report_ids.size());
  if (!dev.fix_timestamps.empty() && ctx.history) {
    const auto last = *std::max_element(dev.fix_timestamps.begin(), dev.fix_timestamps.end());
    const double days = static_cast<double>((ctx.history->boundary() - last).count()) / 86400.0;
    f[12] = 1.0 / (1.0 + days);
    const auto window_start = ctx.history->boundary() - std::chrono::days{90};
    f[13] = static_cast<double>(std::count_if(dev.fix_timestamps.begin(), dev.fix_timestamps.end(),
                                              [&](Timestamp t) { return t >= window_start; }));
  }
  f[14] = static_cast<double>(dev.commit_count);
  f[15] = static_cast<double>(dev.touched_files.size());
  return f;
}

// ---------------------------------------------------------------------------
// Rank learner

double LinearRankModel::score(const L2RFeatureVector& x) const {
  double s = 0.0;
  for (std::size_t i = 0; i < kL2RFeatureCount; ++i) s += weights[i] * (x[i] / scale[i]);
  return s;
}

LinearRankModel ranksvm_train(const std::vector<RankTuple>& tuples, const RankLearnerConfig& cfg,
                              RankTrainingTrace* trace) {
  LinearRankModel model;
  model.config = cfg;

  std::map<std::string, std::pair<std::vector<std::size_t>, std::vector<std::size_t>>> groups;
  for (std::size_t i = 0; i < tuples.size(); ++i) {
    auto& g = groups[tuples[i].query_id];
    (tuples[i].relevant ? g.first : g.second).push_back(i);
  }
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  for (const auto& [q, g] : groups)
    for (auto pos : g.first)
      for (auto neg : g.second) pairs.emplace_back(pos, neg);
  if (pairs.empty()) throw std::invalid_argument("rank learner needs at least one (relevant, non-relevant) pair");

  // Per-feature spread, so a single learning rate suits counts and similarities alike.
  for (std::size_t k = 0; k < kL2RFeatureCount; ++k) {
    double mean = 0.0;
    for (const auto& t : tuples) mean += t.features[k];
    mean /= static_cast<double>(tuples.size());
    double var = 0.0;
    for (const auto& t : tuples) var += (t.features[k] - mean) * (t.features[k] - mean);
    const double sd = std::sqrt(var / static_cast<double>(tuples.size()));
    model.scale[k] = (sd > 0.0 && std::isfinite(sd)) ? sd : 1.0;
  }

  std::vector<std::array<double, kL2RFeatureCount>> diffs(pairs.size());
  for (std::size_t p = 0; p < pairs.size(); ++p)
    for (std::size_t k = 0; k < kL2RFeatureCount; ++k)
      diffs[p][k] = (tuples[pairs[p].first].features[k] - tuples[pairs[p].second].features[k]) /
                    model.scale[k];

  auto& w = model.weights;
  auto objective = [&]() {
    double hinge = 0.0;
    for (const auto& d : diffs) {
      double m = 0.0;
      for (std::size_t k = 0; k < kL2RFeatureCount; ++k) m += w[k] * d[k];
      hinge += std::max(0.0, 1.0 - m);
    }
    double norm = 0.0;
    for (double x : w) norm += x * x;
    return hinge / static_cast<double>(diffs.size()) + cfg.lambda * norm;
  };

  Rng rng(cfg.seed);
  std::vector<std::size_t> order(diffs.size());
  std::iota(order.begin(), order.end(), 0);
  if (trace) {
    trace->pair_count = diffs.size();
    trace->epoch_objective.clear();
  }
  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    shuffle(order, rng);
    for (auto p : order) {
      const auto& d = diffs[p];
      double m = 0.0;
      for (std::size_t k = 0; k < kL2RFeatureCount; ++k) m += w[k] * d[k];
      const bool active = m < 1.0;
      for (std::size_t k = 0; k < kL2RFeatureCount; ++k) {
        const double grad = 2.0 * cfg.lambda * w[k] - (active ? d[k] : 0.0);
        w[k] -= cfg.learning_rate * grad;
      }
    }
    if (trace) trace->epoch_objective.push_back(objective());
  }
  return model;
}

RankedRecommendation l2r_recommend(
    const std::string& report_id, const LinearRankModel& model,
    const std::vector<std::pair<DeveloperId, L2RFeatureVector>>& candidates) {
  RankedRecommendation rec{report_id, {}, Approach::L2R, std::nullopt};
  rec.ranked_developers.reserve(candidates.size());
  for (const auto& [dev, x] : candidates) rec.ranked_developers.emplace_back(dev, model.score(x));
  sort_ranking(rec.ranked_developers);
  return rec;
}

RankedRecommendation l2r_recommend(const Query& query, const LinearRankModel& model,
                                   const L2RQueryContext& ctx) {
  std::vector<std::pair<DeveloperId, L2RFeatureVector>> cands;
  for (const auto& dev : ctx.candidates)
    cands.emplace_back(dev, l2r_features(query, *ctx.history->profile(dev), ctx));
  return l2r_recommend(query.report_id, model, cands);
}

}  // namespace triage
