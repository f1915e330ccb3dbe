#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "triage/corpus.hpp"
#include "triage/index.hpp"

namespace triage {

struct RankedRecommendation {
  std::string report_id;
  std::vector<std::pair<DeveloperId, double>> ranked_developers;
  Approach approach = Approach::Freq;
  /// Set on Lupin output: the base approach the query was delegated to.
  std::optional<Approach> dispatched;

  std::vector<DeveloperId> developers() const;
};

/// Sorts by score descending, then developer id ascending.
void sort_ranking(std::vector<std::pair<DeveloperId, double>>& ranking);

struct DeveloperProfile {
  DeveloperId developer_id;
  std::vector<std::string> fixed_report_ids;  // chronological
  std::vector<Timestamp> fix_timestamps;      // chronological
  std::set<std::string> touched_files;
  std::size_t commit_count = 0;  // commits authored
};

/// Called once per artifact admitted into a History (kind is "report" or
/// "commit"). Tests inject one to assert the temporal boundary.
using HistoryObserver =
    std::function<void(std::string_view kind, std::string_view id, Timestamp at)>;

/// Everything a recommender may know when answering a query created at
/// `boundary`: experimental reports created strictly before it (with their
/// fixers), commits strictly before it, and the developer profiles derived
/// from those. A fixed report's fix time is its created_at.
class History {
 public:
  History(const Corpus& corpus, Timestamp boundary, const HistoryObserver& observer = {});

  History(const History&) = delete;
  History& operator=(const History&) = delete;

  Timestamp boundary() const { return boundary_; }
  const Corpus& corpus() const { return *corpus_; }
  const std::vector<const ExperimentalReport*>& past_reports() const { return reports_; }
  const std::vector<const Commit*>& past_commits() const { return commits_; }
  /// Index over past report queries; doc ids are report ids.
  const InvertedIndex& report_index() const { return report_index_; }
  const std::map<DeveloperId, DeveloperProfile>& profiles() const { return profiles_; }
  const DeveloperProfile* profile(const DeveloperId& dev) const;
  const ExperimentalReport* past_report(const std::string& id) const;

  /// Developers with at least one fix, and their fix counts.
  std::map<DeveloperId, std::size_t> fix_counts() const;
  /// Developers that fixed a report or authored/committed a commit.
  std::vector<DeveloperId> active_developers() const;

 private:
  const Corpus* corpus_;
  Timestamp boundary_;
  std::vector<const ExperimentalReport*> reports_;
  std::vector<const Commit*> commits_;
  std::map<std::string, const ExperimentalReport*> report_by_id_;
  InvertedIndex report_index_;
  std::map<DeveloperId, DeveloperProfile> profiles_;
};

/// Corpus-wide code index; doc ids are file paths.
InvertedIndex build_code_index(const Corpus& corpus);

// ---------------------------------------------------------------------------
// Base approaches

RankedRecommendation freq_recommend(const Query& query, const History& history);

RankedRecommendation textsim_recommend(
    const Query& query, const InvertedIndex& past_reports_index,
    const std::map<std::string, std::set<DeveloperId>>& fixers);

/// Convenience overload pulling the index and fixer sets from `history`.
RankedRecommendation textsim_recommend(const Query& query, const History& history);

// ---------------------------------------------------------------------------
// L2R

inline constexpr std::size_t kL2RFeatureCount = 16;
using L2RFeatureVector = std::array<double, kL2RFeatureCount>;

/// Per-query state shared by all candidate developers.
struct L2RQueryContext {
  const History* history = nullptr;
  InvertedIndex code_profiles;    // one doc per candidate: its touched files
  InvertedIndex report_profiles;  // one doc per candidate: its fixed reports
  std::vector<ScoredDoc> localized;
  std::map<std::string, double> code_cosine;  // path -> cosine vs query
  std::map<std::string, double> code_bm25;
  std::map<std::string, double> report_cosine;  // past report id -> cosine
  // Query vs. profile documents, keyed by developer.
  std::map<DeveloperId, double> code_profile_cosine;
  std::map<DeveloperId, double> code_profile_bm25;
  std::map<DeveloperId, double> report_profile_cosine;
  std::map<DeveloperId, double> report_profile_bm25;
  std::vector<DeveloperId> candidates;
  Bm25Params bm25;
  std::size_t localizer_depth = kDefaultLocalizerDepth;
};

L2RQueryContext make_l2r_context(const Query& query, const History& history,
                                 const InvertedIndex& code_index, Bm25Params bm25 = {},
                                 std::size_t localizer_depth = kDefaultLocalizerDepth);

/// The 16 features for one (query, developer) pair; see README for the list.
L2RFeatureVector l2r_features(const Query& query, const DeveloperProfile& dev,
                              const L2RQueryContext& ctx);

struct RankTuple {
  std::string query_id;
  L2RFeatureVector features{};
  bool relevant = false;
};

struct RankLearnerConfig {
  double learning_rate = 0.01;
  int epochs = 50;
  double lambda = 1e-4;
  std::uint64_t seed = 1;
};

/// w applied to features divided by `scale` (per-feature spread of the
/// training tuples). A default-constructed model has unit scale.
struct LinearRankModel {
  std::array<double, kL2RFeatureCount> weights{};
  std::array<double, kL2RFeatureCount> scale{1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1};
  RankLearnerConfig config;

  double score(const L2RFeatureVector& x) const;
};

struct RankTrainingTrace {
  std::vector<double> epoch_objective;  // mean hinge + lambda * |w|^2 after each epoch
  std::size_t pair_count = 0;
};

/// Pairwise hinge-loss linear ranker trained by seeded SGD from w = 0.
/// Throws std::invalid_argument when no (relevant, non-relevant) pair exists.
LinearRankModel ranksvm_train(const std::vector<RankTuple>& tuples, const RankLearnerConfig& cfg,
                              RankTrainingTrace* trace = nullptr);

/// Scores `candidates` with precomputed features.
RankedRecommendation l2r_recommend(
    const std::string& report_id, const LinearRankModel& model,
    const std::vector<std::pair<DeveloperId, L2RFeatureVector>>& candidates);

/// Full path: computes features for every active developer in ctx.
RankedRecommendation l2r_recommend(const Query& query, const LinearRankModel& model,
                                   const L2RQueryContext& ctx);

}  // namespace triage
