#include "triage/corpus.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <regex>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace triage {

using nlohmann::json;

namespace {

std::string lower(std::string_view s) {
  std::string out(s);
  for (auto& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

bool is_hex(std::string_view s) {
  return std::all_of(s.begin(), s.end(),
                     [](char c) { return std::isxdigit(static_cast<unsigned char>(c)) != 0; });
}

bool is_word_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) != 0 || c == '_';
}

const json& require(const json& obj, const char* key) {
  auto it = obj.find(key);
  if (it == obj.end()) throw DataError(std::string("missing field '") + key + "'");
  return *it;
}

std::string require_string(const json& obj, const char* key) {
  const auto& v = require(obj, key);
  if (!v.is_string()) throw DataError(std::string("field '") + key + "' must be a string");
  return v.get<std::string>();
}

std::string optional_string(const json& obj, const char* key) {
  auto it = obj.find(key);
  if (it == obj.end() || it->is_null()) return {};
  if (!it->is_string()) throw DataError(std::string("field '") + key + "' must be a string");
  return it->get<std::string>();
}

std::vector<std::string> string_array(const json& obj, const char* key) {
  std::vector<std::string> out;
  auto it = obj.find(key);
  if (it == obj.end() || it->is_null()) return out;
  if (!it->is_array()) throw DataError(std::string("field '") + key + "' must be an array");
  for (const auto& e : *it) {
    if (!e.is_string()) throw DataError(std::string("field '") + key + "' must hold strings");
    out.push_back(e.get<std::string>());
  }
  return out;
}

json parse_object(const std::string& line) {
  json j;
  try {
    j = json::parse(line);
  } catch (const json::parse_error& e) {
    throw DataError(std::string("malformed JSON: ") + e.what());
  }
  if (!j.is_object()) throw DataError("expected a JSON object");
  return j;
}

template <typename Fn>
void for_each_line(const std::filesystem::path& path, Fn&& fn) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open '" + path.string() + "'");
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    try {
      fn(line);
    } catch (const DataError& e) {
      throw DataError(path.string() + ":" + std::to_string(line_no) + ": " + e.what());
    }
  }
}

}  // namespace

bool BugReport::has_label(std::string_view label) const {
  const auto want = lower(label);
  return std::any_of(labels.begin(), labels.end(),
                     [&](const std::string& l) { return lower(l) == want; });
}

// ---------------------------------------------------------------------------
// IdentityMap

IdentityMap::IdentityMap(const std::map<std::string, std::string>& aliases) {
  for (const auto& [alias, target] : aliases) {
    std::string cur = target;
    std::set<std::string> seen{alias};
    while (true) {
      auto it = aliases.find(cur);
      if (it == aliases.end() || it->second == cur) break;
      if (!seen.insert(cur).second) throw DataError("identity map cycle through '" + alias + "'");
      cur = it->second;
    }
    if (cur != alias) map_[alias] = cur;
  }
}

const DeveloperId& IdentityMap::canonical(const DeveloperId& id) const {
  auto it = map_.find(id);
  return it == map_.end() ? id : it->second;
}

// ---------------------------------------------------------------------------
// Linking

CommitLinks link_commits(const std::vector<BugReport>& reports, const std::vector<Commit>& commits) {
  CommitLinks links;
  static const std::regex kKeyword(R"((fix(es|ed)?|close(s|d)?|resolve(s|d)?)\s*(:)?\s*#)",
                                   std::regex::icase | std::regex::ECMAScript);

  // Keyword rule: "<keyword>[:] #<id>" followed by a word boundary.
  for (const auto& c : commits) {
    for (auto it = std::sregex_iterator(c.message.begin(), c.message.end(), kKeyword);
         it != std::sregex_iterator(); ++it) {
      const std::size_t after = static_cast<std::size_t>(it->position() + it->length());
      const std::string_view rest = std::string_view(c.message).substr(after);
      for (const auto& r : reports) {
        if (r.id.empty() || rest.substr(0, r.id.size()) != r.id) continue;
        const char last = r.id.back();
        const bool next_word = rest.size() > r.id.size() && is_word_char(rest[r.id.size()]);
        if (is_word_char(last) == next_word) continue;  // no \b after the id
        links[r.id].insert(c.sha);
      }
    }
  }

  // Hex-prefix rule: a >=7 char hex token in the report text prefixes a sha.
  std::vector<std::string> shas;
  shas.reserve(commits.size());
  for (const auto& c : commits) shas.push_back(lower(c.sha));
  std::vector<std::size_t> order(shas.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](auto a, auto b) { return shas[a] < shas[b]; });

  for (const auto& r : reports) {
    const std::string text = r.title + " " + r.description;
    for (const auto& tok : tokenize(text)) {
      if (tok.size() < 7 || !is_hex(tok)) continue;
      auto lo = std::lower_bound(order.begin(), order.end(), tok,
                                 [&](std::size_t i, const std::string& t) { return shas[i] < t; });
      for (; lo != order.end() && shas[*lo].compare(0, tok.size(), tok) == 0; ++lo)
        links[r.id].insert(commits[*lo].sha);
    }
  }
  return links;
}

GroundTruthDevelopers build_ground_truth(const BugReport& report,
                                         const std::vector<const Commit*>& linked_commits,
                                         const IdentityMap& identities) {
  GroundTruthDevelopers gt{report.id, {}};
  for (const auto& a : report.tracker_assignees)
    if (!a.empty()) gt.developers.insert(identities.canonical(a));
  for (const Commit* c : linked_commits) {
    if (!c->author_id.empty()) gt.developers.insert(identities.canonical(c->author_id));
    if (!c->committer_id.empty()) gt.developers.insert(identities.canonical(c->committer_id));
  }
  if (gt.developers.empty())
    throw std::invalid_argument("report " + report.id + " has no ground-truth developers");
  return gt;
}

// ---------------------------------------------------------------------------
// Corpus

Corpus::Corpus(std::vector<BugReport> reports, std::vector<Commit> commits,
               std::vector<std::pair<std::string, std::string>> code_files, IdentityMap identities)
    : reports_(std::move(reports)), commits_(std::move(commits)), identities_(std::move(identities)) {
  std::sort(reports_.begin(), reports_.end(), [](const BugReport& a, const BugReport& b) {
    return std::tie(a.created_at, a.id) < std::tie(b.created_at, b.id);
  });
  for (std::size_t i = 0; i < reports_.size(); ++i) {
    auto& r = reports_[i];
    if (!report_pos_.emplace(r.id, i).second) throw DataError("duplicate report id '" + r.id + "'");
    if (r.closed_at && *r.closed_at < r.created_at)
      throw DataError("report '" + r.id + "' closed before it was created");
    for (auto& a : r.tracker_assignees) a = identities_.canonical(a);
  }

  std::sort(commits_.begin(), commits_.end(), [](const Commit& a, const Commit& b) {
    return std::tie(a.timestamp, a.sha) < std::tie(b.timestamp, b.sha);
  });
  std::set<std::string> shas;
  for (auto& c : commits_) {
    if (!shas.insert(c.sha).second) throw DataError("duplicate commit sha '" + c.sha + "'");
    c.author_id = identities_.canonical(c.author_id);
    c.committer_id = identities_.canonical(c.committer_id);
  }

  std::sort(code_files.begin(), code_files.end());
  for (auto& [path, content] : code_files) {
    if (!code_pos_.emplace(path, code_files_.size()).second)
      throw DataError("duplicate code file path '" + path + "'");
    code_files_.push_back(CodeFile{path, preprocess(content), {}});
  }
  for (const auto& c : commits_) {
    for (const auto& f : c.changed_files) {
      auto it = code_pos_.find(f);
      if (it == code_pos_.end()) continue;
      auto& mods = code_files_[it->second].last_modified_by;
      mods.insert({c.author_id, c.timestamp});
      if (c.committer_id != c.author_id) mods.insert({c.committer_id, c.timestamp});
    }
  }

  links_ = link_commits(reports_, commits_);

  std::map<std::string, const Commit*> by_sha;
  for (const auto& c : commits_) by_sha.emplace(c.sha, &c);
  for (const auto& r : reports_) {
    if (r.status != ReportStatus::Closed || !r.has_label("bug")) continue;
    auto lk = links_.find(r.id);
    if (lk == links_.end() || lk->second.empty()) continue;
    ExperimentalReport e;
    e.report = &r;
    for (const auto& sha : lk->second) e.fixing_commits.push_back(by_sha.at(sha));
    e.query = Query{r.id, preprocess(r.title + " " + r.description)};
    e.ground_truth = build_ground_truth(r, e.fixing_commits, identities_);
    experimental_.push_back(std::move(e));
  }
}

const BugReport* Corpus::find_report(const std::string& id) const {
  auto it = report_pos_.find(id);
  return it == report_pos_.end() ? nullptr : &reports_[it->second];
}

const CodeFile* Corpus::find_code_file(const std::string& path) const {
  auto it = code_pos_.find(path);
  return it == code_pos_.end() ? nullptr : &code_files_[it->second];
}

// ---------------------------------------------------------------------------
// JSON lines

BugReport report_from_json_line(const std::string& line) {
  const json j = parse_object(line);
  BugReport r;
  const auto& id = require(j, "id");
  if (id.is_string()) {
    r.id = id.get<std::string>();
  } else if (id.is_number_integer()) {
    r.id = std::to_string(id.get<long long>());
  } else {
    throw DataError("field 'id' must be a string");
  }
  if (r.id.empty()) throw DataError("empty report id");
  r.title = optional_string(j, "title");
  r.description = optional_string(j, "description");
  r.created_at = parse_rfc3339(require_string(j, "created_at"));
  const std::string closed = optional_string(j, "closed_at");
  if (!closed.empty()) r.closed_at = parse_rfc3339(closed);
  r.labels = string_array(j, "labels");
  r.tracker_assignees = string_array(j, "assignees");
  const std::string status = require_string(j, "status");
  if (status == "open") {
    r.status = ReportStatus::Open;
  } else if (status == "closed") {
    r.status = ReportStatus::Closed;
  } else {
    throw DataError("unknown status '" + status + "'");
  }
  return r;
}

Commit commit_from_json_line(const std::string& line) {
  const json j = parse_object(line);
  Commit c;
  c.sha = require_string(j, "sha");
  if (c.sha.size() < 7 || c.sha.size() > 40 || !is_hex(c.sha))
    throw DataError("sha '" + c.sha + "' is not 7-40 hex characters");
  c.author_id = require_string(j, "author");
  c.committer_id = optional_string(j, "committer");
  if (c.committer_id.empty()) c.committer_id = c.author_id;
  c.timestamp = parse_rfc3339(require_string(j, "timestamp"));
  c.message = optional_string(j, "message");
  c.changed_files = string_array(j, "files");
  return c;
}

std::string report_to_json_line(const BugReport& r) {
  json j = json::object();
  j["id"] = r.id;
  j["title"] = r.title;
  j["description"] = r.description;
  j["created_at"] = format_rfc3339(r.created_at);
  j["closed_at"] = r.closed_at ? json(format_rfc3339(*r.closed_at)) : json(nullptr);
  j["labels"] = r.labels;
  j["assignees"] = r.tracker_assignees;
  j["status"] = r.status == ReportStatus::Closed ? "closed" : "open";
  return j.dump();
}

std::string commit_to_json_line(const Commit& c) {
  json j = json::object();
  j["sha"] = c.sha;
  j["author"] = c.author_id;
  j["committer"] = c.committer_id;
  j["timestamp"] = format_rfc3339(c.timestamp);
  j["message"] = c.message;
  j["files"] = c.changed_files;
  return j.dump();
}

Corpus load_dataset(const DatasetPaths& paths) {
  std::vector<BugReport> reports;
  for_each_line(paths.reports, [&](const std::string& line) {
    reports.push_back(report_from_json_line(line));
  });
  std::set<std::string> ids;
  for (const auto& r : reports)
    if (!ids.insert(r.id).second)
      throw DataError(paths.reports.string() + ": duplicate report id '" + r.id + "'");

  std::vector<Commit> commits;
  for_each_line(paths.commits, [&](const std::string& line) {
    commits.push_back(commit_from_json_line(line));
  });

  std::vector<std::pair<std::string, std::string>> code;
  for_each_line(paths.code, [&](const std::string& line) {
    const json j = parse_object(line);
    code.emplace_back(require_string(j, "path"), optional_string(j, "content"));
  });

  IdentityMap identities;
  if (paths.identities) {
    std::ifstream in(*paths.identities);
    if (!in) throw DataError("cannot open '" + paths.identities->string() + "'");
    json j;
    try {
      j = json::parse(in);
    } catch (const json::parse_error& e) {
      throw DataError(paths.identities->string() + ": malformed JSON: " + e.what());
    }
    if (!j.is_object()) throw DataError(paths.identities->string() + ": expected an object");
    std::map<std::string, std::string> aliases;
    for (const auto& [k, v] : j.items()) {
      if (!v.is_string()) throw DataError(paths.identities->string() + ": alias '" + k + "' must map to a string");
      aliases[k] = v.get<std::string>();
    }
    identities = IdentityMap(aliases);
  }
  return Corpus(std::move(reports), std::move(commits), std::move(code), std::move(identities));
}

}  // namespace triage
