#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "triage/common.hpp"
#include "triage/text.hpp"

namespace triage {

enum class ReportStatus { Open, Closed };

struct BugReport {
  std::string id;
  std::string title;
  std::string description;
  Timestamp created_at{};
  std::optional<Timestamp> closed_at;
  std::vector<std::string> labels;
  std::vector<DeveloperId> tracker_assignees;
  ReportStatus status = ReportStatus::Open;

  bool has_label(std::string_view label) const;  // case-insensitive
};

struct Commit {
  std::string sha;
  DeveloperId author_id;
  DeveloperId committer_id;
  Timestamp timestamp{};
  std::string message;
  std::vector<std::string> changed_files;
};

struct FileModification {
  DeveloperId developer;
  Timestamp at{};
  auto operator<=>(const FileModification&) const = default;
};

struct CodeFile {
  std::string path;
  TokenList content_tokens;
  std::set<FileModification> last_modified_by;
};

struct Query {
  std::string report_id;
  TokenList tokens;
};

struct GroundTruthDevelopers {
  std::string report_id;
  std::set<DeveloperId> developers;
};

/// Alias -> canonical developer id. Chains are resolved on construction so
/// lookups are a single step and canonical ids map to themselves.
class IdentityMap {
 public:
  IdentityMap() = default;
  /// Throws DataError on a cycle.
  explicit IdentityMap(const std::map<std::string, std::string>& aliases);

  const DeveloperId& canonical(const DeveloperId& id) const;
  const std::map<std::string, std::string>& entries() const { return map_; }

 private:
  std::map<std::string, std::string> map_;
};

/// Reports linked to commit shas.
using CommitLinks = std::map<std::string, std::set<std::string>>;

/// Keyword-reference rule plus hex-prefix rule; see README for the exact
/// pattern.
CommitLinks link_commits(const std::vector<BugReport>& reports, const std::vector<Commit>& commits);

/// Union of tracker assignees with authors/committers of the linked commits,
/// all canonicalized. Throws std::invalid_argument when the union is empty.
GroundTruthDevelopers build_ground_truth(const BugReport& report,
                                         const std::vector<const Commit*>& linked_commits,
                                         const IdentityMap& identities);

/// A report that passed the experiment filter (closed, labelled bug, linked to
/// at least one fixing commit).
struct ExperimentalReport {
  const BugReport* report = nullptr;
  Query query;
  GroundTruthDevelopers ground_truth;
  std::vector<const Commit*> fixing_commits;
};

struct DatasetPaths {
  std::filesystem::path reports;
  std::filesystem::path commits;
  std::filesystem::path code;
  std::optional<std::filesystem::path> identities;
};

/// Immutable dataset. Reports are ordered by (created_at, id); commits by
/// (timestamp, sha); code files by path. Identity merging has already been
/// applied to every developer id it holds.
class Corpus {
 public:
  Corpus(std::vector<BugReport> reports, std::vector<Commit> commits,
         std::vector<std::pair<std::string, std::string>> code_files, IdentityMap identities = {});

  Corpus(const Corpus&) = delete;
  Corpus& operator=(const Corpus&) = delete;
  Corpus(Corpus&&) = default;
  Corpus& operator=(Corpus&&) = default;

  const std::vector<BugReport>& reports() const { return reports_; }
  const std::vector<Commit>& commits() const { return commits_; }
  const std::vector<CodeFile>& code_files() const { return code_files_; }
  const IdentityMap& identities() const { return identities_; }
  const CommitLinks& links() const { return links_; }

  /// Chronologically ordered experiment-eligible reports.
  const std::vector<ExperimentalReport>& experimental() const { return experimental_; }

  const BugReport* find_report(const std::string& id) const;
  const CodeFile* find_code_file(const std::string& path) const;

 private:
  std::vector<BugReport> reports_;
  std::vector<Commit> commits_;
  std::vector<CodeFile> code_files_;
  IdentityMap identities_;
  CommitLinks links_;
  std::vector<ExperimentalReport> experimental_;
  std::map<std::string, std::size_t> report_pos_;
  std::map<std::string, std::size_t> code_pos_;
};

/// Reads the JSON-lines dataset. Errors carry "<file>:<line>: ..." context.
Corpus load_dataset(const DatasetPaths& paths);

/// JSON-lines (de)serialization shared by the loader and the miner export.
BugReport report_from_json_line(const std::string& line);
Commit commit_from_json_line(const std::string& line);
std::string report_to_json_line(const BugReport& r);
std::string commit_to_json_line(const Commit& c);

}  // namespace triage
