#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <string_view>

#include "triage/common.hpp"
#include "triage/index.hpp"

namespace triage {

class History;
struct Query;

inline constexpr std::size_t kMetaFeatureCount = 23;

/// Column order of MetaFeatureVector (and of the features CSV).
inline constexpr std::array<std::string_view, kMetaFeatureCount> kMetaFeatureNames{
    // specificity
    "avgIDF", "maxIDF", "devIDF", "avgICTF", "maxICTF", "devICTF", "SCS", "QS", "avgVAR",
    "maxVAR", "sumVAR",
    // similarity
    "avgSCQ_reports", "maxSCQ_reports", "sumSCQ_reports", "avgSCQ_code", "maxSCQ_code",
    "sumSCQ_code",
    // coherency
    "CS",
    // developer
    "activeDevs", "avgFixes", "medianFixes", "maxFixes", "fixEntropy"};

enum class MetaFeature : std::size_t {
  AvgIDF, MaxIDF, DevIDF, AvgICTF, MaxICTF, DevICTF, SCS, QS, AvgVAR, MaxVAR, SumVAR,
  AvgSCQReports, MaxSCQReports, SumSCQReports, AvgSCQCode, MaxSCQCode, SumSCQCode,
  CS,
  ActiveDevs, AvgFixes, MedianFixes, MaxFixes, FixEntropy
};

struct MetaFeatureVector {
  std::array<double, kMetaFeatureCount> values{};

  double operator[](MetaFeature f) const { return values[static_cast<std::size_t>(f)]; }
  double& operator[](MetaFeature f) { return values[static_cast<std::size_t>(f)]; }
  bool operator==(const MetaFeatureVector&) const = default;
};

inline constexpr std::size_t kCoherencyPairCap = 100;

/// Pre-retrieval features of one query against the past-report and code
/// indices plus the developers' fix counts. Terms missing from a collection
/// contribute nothing to that collection's aggregates; empty aggregates are 0.
MetaFeatureVector compute_meta_features(const TokenList& query, const InvertedIndex& report_index,
                                        const InvertedIndex& code_index,
                                        const std::map<DeveloperId, std::size_t>& fix_counts,
                                        std::uint64_t coherency_seed = 0);

MetaFeatureVector compute_meta_features(const Query& query, const History& history,
                                        const InvertedIndex& code_index,
                                        std::uint64_t coherency_seed = 0);

}  // namespace triage
