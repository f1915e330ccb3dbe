#pragma once

#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "triage/lupin.hpp"

namespace triage {

nlohmann::json to_json(const Metrics& m);
Metrics metrics_from_json(const nlohmann::json& j);
nlohmann::json to_json(const ClassificationReport& r);
nlohmann::json to_json(const BestApproachLabeling& l);
nlohmann::json to_json(const ExperimentReport& r);

/// {"approach": ..., "recommendations": [{"report_id", "dispatched"?, "developers": [[id, score]...]}]}
nlohmann::json recommendations_to_json(Approach approach,
                                       const std::vector<RankedRecommendation>& recs);
/// Throws DataError on a malformed document.
std::vector<RankedRecommendation> recommendations_from_json(const nlohmann::json& j);

/// Fixed-width table, one row per entry; all columns are percentages with one
/// decimal.
std::string render_metrics_table(const std::vector<std::pair<std::string, Metrics>>& rows);
std::string render_distribution_table(const BestApproachLabeling& l);
std::string render_distribution_table(const nlohmann::json& distribution);

/// Renders an experiment report or an eval output document. Throws DataError
/// for anything else.
std::string render_report(const nlohmann::json& doc);

/// JSON text with a trailing newline; stable key order and number format.
std::string dump_stable(const nlohmann::json& j);

}  // namespace triage
