#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "triage/common.hpp"

namespace triage {

/// 1-based rank of the first ground-truth developer; nullopt is a MISS.
using Rank = std::optional<int>;

inline constexpr int kMaxHitK = 5;

struct QueryResult {
  std::string report_id;
  Approach approach = Approach::Freq;
  Rank rank;
  double reciprocal_rank = 0.0;
  double average_precision = 0.0;
};

struct Metrics {
  double mrr = 0.0;
  double map = 0.0;
  std::array<double, kMaxHitK> hit{};  // hit[k-1] = H@k
  std::size_t query_count = 0;

  bool operator==(const Metrics&) const = default;
};

/// Throws std::invalid_argument on empty ground truth.
Rank rank_of_first_hit(const std::vector<DeveloperId>& ranked, const std::set<DeveloperId>& gt);
double average_precision(const std::vector<DeveloperId>& ranked, const std::set<DeveloperId>& gt);

QueryResult evaluate_query(const std::string& report_id, Approach approach,
                           const std::vector<DeveloperId>& ranked,
                           const std::set<DeveloperId>& gt);

/// Throws std::invalid_argument on empty input.
Metrics aggregate(const std::vector<QueryResult>& results);

/// One query's outcome under each base approach, indexed by class_index().
struct ApproachOutcomes {
  std::string report_id;
  std::array<QueryResult, kBaseApproachCount> by_approach;
};

/// Best-approach distribution cells. Order: FREQ, TEXTSIM, L2R exclusive; FREQ/TEXTSIM,
/// FREQ/L2R, TEXTSIM/L2R ties; three-way tie.
inline constexpr std::size_t kDistributionCells = 7;
inline constexpr std::array<const char*, kDistributionCells> kDistributionCellNames{
    "FREQ", "TEXTSIM", "L2R", "FREQ/TEXTSIM", "FREQ/L2R", "TEXTSIM/L2R", "ALL"};

struct BestApproachLabeling {
  std::map<std::string, Approach> labels;
  std::array<std::size_t, kDistributionCells> distribution{};
  std::size_t total = 0;     // labeled queries (sum of the cells)
  std::size_t all_miss = 0;  // excluded queries
};

/// Bit mask over class indices of the approaches achieving the minimum rank;
/// 0 when every approach missed.
unsigned best_approach_mask(const ApproachOutcomes& q);
std::size_t distribution_cell(unsigned mask);

/// Ties are broken by a per-query generator seeded from the report id and
/// `seed`, so a query's label does not depend on which other queries exist.
BestApproachLabeling best_approach_labels(const std::vector<ApproachOutcomes>& queries,
                                          std::uint64_t seed);

/// Approach the oracle picks: minimum rank, ties resolved by higher AP, then
/// lower class index. FREQ on an all-MISS query.
Approach oracle_choice(const ApproachOutcomes& q);

Metrics approach_metrics(const std::vector<ApproachOutcomes>& queries, Approach approach);
Metrics oracle_metrics(const std::vector<ApproachOutcomes>& queries);

/// Per-query results when each query is answered by the approach in `choice`.
Metrics dispatched_metrics(const std::vector<ApproachOutcomes>& queries,
                           const std::vector<Approach>& choice);

}  // namespace triage
