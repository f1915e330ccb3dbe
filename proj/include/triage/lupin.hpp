#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "triage/classifiers.hpp"
#include "triage/corpus.hpp"
#include "triage/evalkit.hpp"
#include "triage/metafeatures.hpp"
#include "triage/recommenders.hpp"

namespace triage {

struct ExperimentConfig {
  std::size_t fold_count = 10;
  double train_fraction = 0.70;
  std::vector<std::uint64_t> seeds{11, 22, 33, 44, 55};
  int k_max = kMaxHitK;
  /// Seeds everything outside the labeling runs (rank learner, CS sampling).
  std::uint64_t seed = 1;
  std::vector<ClassifierKind> classifiers{kTrainableKinds.begin(), kTrainableKinds.end()};
  std::map<ClassifierKind, Grid> grids;  // missing kinds use default_grid()
  RankLearnerConfig rank;
  Bm25Params bm25;
  std::size_t localizer_depth = kDefaultLocalizerDepth;
  /// Non-relevant developers per training query, taken in FREQ order.
  std::size_t negatives_per_query = 10;
  std::size_t jobs = 1;

  /// Throws std::invalid_argument when a field is out of range.
  void validate() const;
  Grid grid(ClassifierKind kind) const;
};

/// One evaluation query with every base approach's answer precomputed.
struct ProtocolQuery {
  std::string report_id;
  Timestamp created_at{};
  std::size_t fold = 0;  // 0-based
  std::set<DeveloperId> ground_truth;
  std::array<RankedRecommendation, kBaseApproachCount> recommendations;
  ApproachOutcomes outcomes;
  MetaFeatureVector features;
};

struct ProtocolResult {
  std::vector<std::size_t> fold_sizes;
  /// Queries of folds 2..fold_count in chronological order.
  std::vector<ProtocolQuery> evaluation;
  /// Training pairs of the rank model that scored fold x+1, x = 1..fold_count-1.
  std::vector<std::size_t> rank_training_pairs;
};

/// Throws std::invalid_argument when there are fewer experimental reports
/// than folds.
ProtocolResult run_l2r_protocol(const Corpus& corpus, const ExperimentConfig& config);

struct ExperimentSplit {
  std::vector<const ProtocolQuery*> train;
  std::vector<const ProtocolQuery*> test;
};

/// First floor(train_fraction * n) queries train. Throws std::invalid_argument
/// when either side is empty.
ExperimentSplit split_evaluation(const std::vector<ProtocolQuery>& evaluation,
                                 double train_fraction);

using ApproachPredictor = std::function<Approach(const ProtocolQuery&)>;

/// Metrics when each query is answered by the predicted approach's
/// precomputed recommendation.
Metrics lupin_dispatch_metrics(const std::vector<const ProtocolQuery*>& queries,
                               const ApproachPredictor& predictor);

std::vector<double> feature_row(const MetaFeatureVector& f);

struct ClassifierRun {
  Hyperparameters hyperparameters;
  ClassificationReport classification;  // on labeled test queries
  Metrics lupin;
  std::vector<Approach> predictions;  // per test query
};

struct RunReport {
  std::uint64_t seed = 0;
  std::size_t labeled_train = 0;
  std::size_t labeled_test = 0;
  std::map<ClassifierKind, ClassifierRun> classifiers;
};

struct ExperimentReport {
  std::vector<std::size_t> fold_sizes;
  std::size_t evaluation_queries = 0;
  std::size_t train_queries = 0;
  std::size_t test_queries = 0;
  std::vector<std::string> test_report_ids;
  std::vector<std::uint64_t> seeds;

  std::map<Approach, Metrics> evaluation_metrics;  // base approaches + oracle, full evaluation set
  std::map<Approach, Metrics> test_metrics;        // base approaches + oracle, test split
  BestApproachLabeling distribution;               // full evaluation set, first seed

  std::vector<RunReport> runs;
  std::map<ClassifierKind, Metrics> lupin_mean;  // per classifier, mean over runs
  ClassifierKind selected = ClassifierKind::Constant;
};

/// Labeling, grid search, training and dispatch over precomputed protocol
/// output. The selected classifier has the highest mean MRR.
ExperimentReport run_lupin_on_protocol(const ProtocolResult& protocol,
                                       const ExperimentConfig& config);

ExperimentReport run_lupin_experiment(const Corpus& corpus, const ExperimentConfig& config);

/// Component-wise mean.
Metrics mean_metrics(const std::vector<Metrics>& runs);

/// Two-step recommendation for a live query: meta-features, predicted
/// approach, then that approach's ranking. approach is LUPIN and dispatched
/// records the delegate.
RankedRecommendation lupin_recommend(const Query& query, const ClassifierModel& classifier,
                                     const History& history, const InvertedIndex& code_index,
                                     const LinearRankModel& rank_model,
                                     const ExperimentConfig& config);

}  // namespace triage
