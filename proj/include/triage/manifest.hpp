#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

namespace triage {

std::string sha256_hex(std::string_view data);
/// Throws DataError when the file cannot be read.
std::string sha256_file(const std::filesystem::path& file);

std::string toolkit_version();

struct DatasetDigest {
  std::string role;  // reports, commits, code, identities
  std::string path;
  std::string sha256;
};

/// Written next to every experiment output. Everything except the duration is
/// a function of the inputs.
struct RunManifest {
  std::string command;
  std::string config_hash;
  std::vector<DatasetDigest> datasets;
  std::vector<std::uint64_t> seeds;
  std::uint64_t master_seed = 0;
  std::string version;
  double duration_seconds = 0.0;
  /// Digest of each output file keyed by file name.
  std::vector<std::pair<std::string, std::string>> outputs;

  nlohmann::json to_json() const;
};

}  // namespace triage
