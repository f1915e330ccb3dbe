#pragma once

#include <filesystem>
#include <map>
#include <string>

#include "triage/corpus.hpp"
#include "triage/lupin.hpp"

namespace triage {

/// Parsed `key = value` lines. '#' starts a comment; blank lines are skipped.
/// Throws DataError naming file and line on a malformed line or repeated key.
std::map<std::string, std::string> read_key_values(const std::filesystem::path& file);

struct RunSettings {
  ExperimentConfig experiment;
  DatasetPaths dataset;
};

/// Applies settings in key order. Recognized keys:
///   dataset (directory holding reports/commits/code.jsonl and identities.json),
///   reports, commits, code, identities,
///   fold_count, train_fraction, seeds (comma list), seed, k_max,
///   classifiers (comma list of DT, NB, LR, RF), negatives_per_query,
///   localizer_depth, jobs, bm25.k1, bm25.b,
///   rank.learning_rate, rank.epochs, rank.lambda, rank.seed.
/// Throws DataError on an unknown key or unparseable value.
void apply_settings(RunSettings& settings, const std::map<std::string, std::string>& kv);

/// Dataset file layout under a directory. identities.json is optional.
DatasetPaths dataset_in(const std::filesystem::path& dir);

/// Every output-affecting setting as sorted `key=value` lines; the manifest's
/// config hash is taken over this text. Worker count is excluded.
std::string canonical_settings(const RunSettings& settings);

std::string to_string(const std::vector<std::uint64_t>& seeds);

}  // namespace triage
