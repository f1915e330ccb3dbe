#pragma once

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <string>
#include <vector>

#include "triage/corpus.hpp"
#include "triage/random.hpp"

namespace triage::testing {

inline std::filesystem::path source_dir() { return TRIAGE_SOURCE_DIR; }
inline std::filesystem::path mini_dataset() { return source_dir() / "data" / "mini"; }
inline std::filesystem::path fixture_dir(const std::string& name) {
  return source_dir() / "tests" / "fixtures" / name;
}

/// Midnight UTC on 2023-01-01 plus `d` days and `h` hours.
inline Timestamp day(int d, int h = 0) {
  using namespace std::chrono;
  return sys_days{year{2023} / January / 1} + days{d} + hours{h};
}

/// Deterministic 40-hex sha derived from a label.
inline std::string sha_of(const std::string& label) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%016llx%016llx%08x",
                static_cast<unsigned long long>(fnv1a(label)),
                static_cast<unsigned long long>(mix_seed(fnv1a(label))),
                static_cast<unsigned>(fnv1a(label + "!") & 0xffffffffu));
  return buf;
}

inline BugReport bug(const std::string& id, Timestamp created, const std::string& title,
                     const std::string& description = "",
                     std::vector<DeveloperId> assignees = {}) {
  BugReport r;
  r.id = id;
  r.title = title;
  r.description = description;
  r.created_at = created;
  r.closed_at = created + std::chrono::hours{12};
  r.labels = {"bug"};
  r.tracker_assignees = std::move(assignees);
  r.status = ReportStatus::Closed;
  return r;
}

inline Commit fix_commit(const std::string& report_id, const DeveloperId& author, Timestamp at,
                         std::vector<std::string> files = {}) {
  Commit c;
  c.sha = sha_of("fix-" + report_id + "-" + author);
  c.author_id = author;
  c.committer_id = author;
  c.timestamp = at;
  c.message = "Fixes #" + report_id;
  c.changed_files = std::move(files);
  return c;
}

}  // namespace triage::testing
