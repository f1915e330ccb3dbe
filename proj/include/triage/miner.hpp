#pragma once

#include <chrono>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "triage/corpus.hpp"

namespace triage {

struct HttpResponse {
  int status = 0;  // 0: the request never reached the server
  std::map<std::string, std::string> headers;  // lowercase names
  std::string body;

  std::string header(const std::string& name) const;
};

/// `target` is a path plus query, e.g. "/repos/o/r/issues?state=all&page=1".
class Transport {
 public:
  virtual ~Transport() = default;
  virtual HttpResponse get(const std::string& target,
                           const std::map<std::string, std::string>& headers) = 0;
};

/// HTTPS client for the hosted tracker API.
std::unique_ptr<Transport> make_live_transport(const std::string& base_url = "https://api.github.com");

/// Replays recorded responses. `index.json` holds
/// {"responses": [{"target", "status", "headers", "file"}]}; entries for the
/// same target are served in order, so a retried request sees the next one.
/// Bodies live in `<endpoint-hash>-<page>.json` next to the index.
class FixtureTransport : public Transport {
 public:
  explicit FixtureTransport(std::filesystem::path dir);
  HttpResponse get(const std::string& target,
                   const std::map<std::string, std::string>& headers) override;
  std::size_t calls() const { return calls_; }
  const std::vector<std::string>& requested() const { return requested_; }

 private:
  std::filesystem::path dir_;
  std::map<std::string, std::vector<HttpResponse>> queue_;
  std::map<std::string, std::size_t> served_;
  std::vector<std::string> requested_;
  std::size_t calls_ = 0;
};

/// Fixture body file name for a request target: FNV-1a of the target with
/// its page parameter removed, then the page number (1 when absent).
std::string fixture_file_name(const std::string& target);

enum class MinerMode { Live, Fixture };

struct MinerConfig {
  std::string repository;  // owner/name
  std::optional<std::string> token;
  std::optional<Timestamp> since;
  int page_size = 100;
  std::filesystem::path output_dir;
  MinerMode mode = MinerMode::Fixture;
  std::filesystem::path fixture_path;

  /// Throws std::invalid_argument.
  void validate() const;
};

inline constexpr const char* kTokenEnvVar = "TRIAGE_LAB_TOKEN";
std::optional<std::string> token_from_env();

struct RetryPolicy {
  std::chrono::seconds base{1};
  int factor = 2;
  int max_tries = 5;
};

using Sleeper = std::function<void(std::chrono::seconds)>;
using Clock = std::function<Timestamp()>;

/// Terminal failure talking to the tracker.
class MinerError : public std::runtime_error {
 public:
  MinerError(const std::string& what, int status) : std::runtime_error(what), status_(status) {}
  int status() const { return status_; }

 private:
  int status_;
};

class Miner {
 public:
  Miner(MinerConfig config, Transport& transport, Sleeper sleeper = {}, Clock clock = {},
        RetryPolicy retry = {});

  /// Pull requests are dropped; fields map onto reports.jsonl.
  std::vector<BugReport> fetch_issues();
  /// One detail request per commit for its changed files.
  std::vector<Commit> fetch_commits();

  std::size_t requests() const { return requests_; }
  std::chrono::seconds slept() const { return slept_; }

 private:
  HttpResponse request(const std::string& target);
  std::vector<HttpResponse> paginate(const std::string& first_target);

  MinerConfig config_;
  Transport& transport_;
  Sleeper sleeper_;
  Clock clock_;
  RetryPolicy retry_;
  std::size_t requests_ = 0;
  std::chrono::seconds slept_{0};
};

/// Parses the `rel="next"` target out of a Link header, as path plus query.
std::optional<std::string> next_link(const std::string& link_header);

/// Raw API records to dataset records.
/// `detail` is the single-commit response carrying the file list.
BugReport issue_from_api(const nlohmann::json& issue);
Commit commit_from_api(const nlohmann::json& detail);

struct ExportedPaths {
  std::filesystem::path reports;
  std::filesystem::path commits;
};

/// Writes reports.jsonl and commits.jsonl in input order. Throws DataError
/// when the directory cannot be written.
ExportedPaths export_dataset(const std::vector<BugReport>& issues,
                             const std::vector<Commit>& commits,
                             const std::filesystem::path& output_dir);

}  // namespace triage
