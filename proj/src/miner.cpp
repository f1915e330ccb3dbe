#include "triage/miner.hpp"

#include <cstdlib>
#include <fstream>
#include <regex>
#include <sstream>
#include <thread>

#include "triage/random.hpp"

namespace triage {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

std::string lower(std::string s) {
  for (auto& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw DataError("cannot read " + p.string());
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

/// Splits "path?a=1&page=3" into the target without the page parameter and
/// the page number.
std::pair<std::string, int> strip_page(const std::string& target) {
  const auto q = target.find('?');
  if (q == std::string::npos) return {target, 1};
  std::string kept = target.substr(0, q);
  int page = 1;
  char sep = '?';
  std::istringstream params(target.substr(q + 1));
  std::string kv;
  while (std::getline(params, kv, '&')) {
    if (kv.rfind("page=", 0) == 0) {
      page = std::atoi(kv.c_str() + 5);
      continue;
    }
    kept += sep;
    kept += kv;
    sep = '&';
  }
  return {kept, page};
}

std::string string_or(const json& j, const char* key, const std::string& fallback = {}) {
  auto it = j.find(key);
  return (it != j.end() && it->is_string()) ? it->get<std::string>() : fallback;
}

const json* object_at(const json& j, const char* key) {
  auto it = j.find(key);
  return (it != j.end() && it->is_object()) ? &*it : nullptr;
}

/// Account login, or "name <email>" from the git signature when the commit
/// is not tied to an account.
std::string person(const json& detail, const char* role) {
  if (const auto* account = object_at(detail, role)) {
    const auto login = string_or(*account, "login");
    if (!login.empty()) return login;
  }
  if (const auto* commit = object_at(detail, "commit"))
    if (const auto* sig = object_at(*commit, role))
      return string_or(*sig, "name") + " <" + string_or(*sig, "email") + ">";
  throw DataError(std::string("commit record lacks ") + role);
}

}  // namespace

std::string HttpResponse::header(const std::string& name) const {
  auto it = headers.find(lower(name));
  return it == headers.end() ? std::string{} : it->second;
}

std::string fixture_file_name(const std::string& target) {
  const auto [endpoint, page] = strip_page(target);
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a(endpoint)));
  return std::string(buf) + "-" + std::to_string(page) + ".json";
}

// ---------------------------------------------------------------------------
// Fixture transport

FixtureTransport::FixtureTransport(fs::path dir) : dir_(std::move(dir)) {
  const auto index_path = dir_ / "index.json";
  json index;
  try {
    index = json::parse(read_file(index_path));
  } catch (const json::exception& e) {
    throw DataError(index_path.string() + ": " + e.what());
  }
  for (const auto& entry : index.value("responses", json::array())) {
    HttpResponse r;
    r.status = entry.value("status", 200);
    const json headers = entry.value("headers", json::object());
    for (const auto& [k, v] : headers.items())
      r.headers[lower(k)] = v.is_string() ? v.get<std::string>() : v.dump();
    const auto target = entry.at("target").get<std::string>();
    if (entry.contains("file")) r.body = read_file(dir_ / entry["file"].get<std::string>());
    queue_[target].push_back(std::move(r));
  }
}

HttpResponse FixtureTransport::get(const std::string& target,
                                   const std::map<std::string, std::string>&) {
  ++calls_;
  requested_.push_back(target);
  auto it = queue_.find(target);
  if (it == queue_.end()) return HttpResponse{404, {}, "{\"message\":\"Not Found\"}"};
  auto& pos = served_[target];
  // The last recorded response keeps answering once the queue is drained.
  const auto& r = it->second[std::min(pos, it->second.size() - 1)];
  ++pos;
  return r;
}

// ---------------------------------------------------------------------------
// Configuration

void MinerConfig::validate() const {
  static const std::regex slug(R"([A-Za-z0-9_.-]+/[A-Za-z0-9_.-]+)");
  if (!std::regex_match(repository, slug))
    throw std::invalid_argument("repository must be owner/name, got '" + repository + "'");
  if (page_size < 1 || page_size > 100) throw std::invalid_argument("page size must lie in [1, 100]");
  if (mode == MinerMode::Fixture && fixture_path.empty())
    throw std::invalid_argument("fixture mode needs a fixture directory");
}

std::optional<std::string> token_from_env() {
  const char* v = std::getenv(kTokenEnvVar);
  if (!v || !*v) return std::nullopt;
  return std::string(v);
}

// ---------------------------------------------------------------------------
// Miner

Miner::Miner(MinerConfig config, Transport& transport, Sleeper sleeper, Clock clock,
             RetryPolicy retry)
    : config_(std::move(config)),
      transport_(transport),
      sleeper_(std::move(sleeper)),
      clock_(std::move(clock)),
      retry_(retry) {
  config_.validate();
  if (!sleeper_) sleeper_ = [](std::chrono::seconds s) { std::this_thread::sleep_for(s); };
  if (!clock_)
    clock_ = [] { return std::chrono::time_point_cast<std::chrono::seconds>(std::chrono::system_clock::now()); };
}

HttpResponse Miner::request(const std::string& target) {
  std::map<std::string, std::string> headers{{"Accept", "application/vnd.github+json"},
                                             {"User-Agent", "triage-lab"}};
  if (config_.token) headers["Authorization"] = "Bearer " + *config_.token;

  auto backoff = retry_.base;
  HttpResponse last;
  for (int attempt = 1; attempt <= retry_.max_tries; ++attempt) {
    ++requests_;
    last = transport_.get(target, headers);
    if (last.status >= 200 && last.status < 300) return last;
    if (last.status == 401) throw MinerError("authentication failed for " + target, 401);

    const bool rate_limited = (last.status == 403 || last.status == 429) &&
                              (last.header("x-ratelimit-remaining") == "0" ||
                               !last.header("retry-after").empty());
    const bool transient = last.status == 0 || last.status >= 500 || rate_limited;
    if (!transient)
      throw MinerError("request " + target + " failed with status " + std::to_string(last.status),
                       last.status);
    if (attempt == retry_.max_tries) break;

    std::chrono::seconds wait = backoff;
    if (rate_limited) {
      if (const auto ra = last.header("retry-after"); !ra.empty()) {
        wait = std::chrono::seconds(std::atoll(ra.c_str()));
      } else if (const auto reset = last.header("x-ratelimit-reset"); !reset.empty()) {
        const Timestamp at{std::chrono::seconds(std::atoll(reset.c_str()))};
        wait = std::max(std::chrono::seconds{0}, at - clock_());
      }
    } else {
      backoff *= retry_.factor;
    }
    sleeper_(wait);
    slept_ += wait;
  }
  throw MinerError("giving up on " + target + " after " + std::to_string(retry_.max_tries) +
                       " attempts, last status " + std::to_string(last.status),
                   last.status);
}

std::optional<std::string> next_link(const std::string& link_header) {
  static const std::regex part(R"re(<([^>]*)>\s*;\s*rel="?next"?)re");
  std::smatch m;
  if (!std::regex_search(link_header, m, part)) return std::nullopt;
  std::string url = m[1];
  if (const auto scheme = url.find("://"); scheme != std::string::npos) {
    const auto path = url.find('/', scheme + 3);
    url = path == std::string::npos ? "/" : url.substr(path);
  }
  return url;
}

std::vector<HttpResponse> Miner::paginate(const std::string& first_target) {
  std::vector<HttpResponse> pages;
  std::optional<std::string> target = first_target;
  while (target) {
    pages.push_back(request(*target));
    target = next_link(pages.back().header("link"));
  }
  return pages;
}

namespace {

json parse_page(const HttpResponse& r, const std::string& what) {
  try {
    auto j = json::parse(r.body);
    if (!j.is_array()) throw DataError(what + " page is not a JSON array");
    return j;
  } catch (const json::exception& e) {
    throw DataError(what + " page: " + e.what());
  }
}

}  // namespace

std::vector<BugReport> Miner::fetch_issues() {
  std::string target = "/repos/" + config_.repository +
                       "/issues?state=all&per_page=" + std::to_string(config_.page_size);
  if (config_.since) target += "&since=" + format_rfc3339(*config_.since);
  target += "&page=1";
  std::vector<BugReport> out;
  for (const auto& page : paginate(target))
    for (const auto& item : parse_page(page, "issues"))
      if (!item.contains("pull_request")) out.push_back(issue_from_api(item));
  return out;
}

std::vector<Commit> Miner::fetch_commits() {
  std::string target =
      "/repos/" + config_.repository + "/commits?per_page=" + std::to_string(config_.page_size);
  if (config_.since) target += "&since=" + format_rfc3339(*config_.since);
  target += "&page=1";
  std::vector<std::string> shas;
  for (const auto& page : paginate(target))
    for (const auto& item : parse_page(page, "commits")) shas.push_back(item.at("sha").get<std::string>());

  std::vector<Commit> out;
  out.reserve(shas.size());
  for (const auto& sha : shas) {
    const auto r = request("/repos/" + config_.repository + "/commits/" + sha);
    try {
      out.push_back(commit_from_api(json::parse(r.body)));
    } catch (const json::exception& e) {
      throw DataError("commit " + sha + ": " + e.what());
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Record mapping

BugReport issue_from_api(const json& issue) {
  try {
    BugReport r;
    r.id = std::to_string(issue.at("number").get<long long>());
    r.title = string_or(issue, "title");
    r.description = string_or(issue, "body");
    r.created_at = parse_rfc3339(issue.at("created_at").get<std::string>());
    if (const auto closed = string_or(issue, "closed_at"); !closed.empty())
      r.closed_at = parse_rfc3339(closed);
    for (const auto& l : issue.value("labels", json::array()))
      r.labels.push_back(l.is_string() ? l.get<std::string>() : string_or(l, "name"));
    for (const auto& a : issue.value("assignees", json::array()))
      if (const auto login = string_or(a, "login"); !login.empty()) r.tracker_assignees.push_back(login);
    if (r.tracker_assignees.empty())
      if (const auto* a = object_at(issue, "assignee"))
        if (const auto login = string_or(*a, "login"); !login.empty()) r.tracker_assignees.push_back(login);
    r.status = string_or(issue, "state") == "closed" ? ReportStatus::Closed : ReportStatus::Open;
    return r;
  } catch (const json::exception& e) {
    throw DataError(std::string("issue record: ") + e.what());
  }
}

Commit commit_from_api(const json& detail) {
  try {
    Commit c;
    c.sha = detail.at("sha").get<std::string>();
    c.author_id = person(detail, "author");
    c.committer_id = person(detail, "committer");
    const auto& commit = detail.at("commit");
    std::string date = string_or(commit.at("committer"), "date");
    if (date.empty()) date = commit.at("author").at("date").get<std::string>();
    c.timestamp = parse_rfc3339(date);
    c.message = string_or(commit, "message");
    for (const auto& f : detail.value("files", json::array()))
      c.changed_files.push_back(f.at("filename").get<std::string>());
    return c;
  } catch (const json::exception& e) {
    throw DataError(std::string("commit record: ") + e.what());
  }
}

ExportedPaths export_dataset(const std::vector<BugReport>& issues,
                             const std::vector<Commit>& commits, const fs::path& output_dir) {
  std::error_code ec;
  fs::create_directories(output_dir, ec);
  if (ec) throw DataError("cannot create " + output_dir.string() + ": " + ec.message());
  ExportedPaths out{output_dir / "reports.jsonl", output_dir / "commits.jsonl"};
  auto write = [](const fs::path& p, const auto& items, auto&& line) {
    std::ofstream os(p, std::ios::binary | std::ios::trunc);
    if (!os) throw DataError("cannot write " + p.string());
    for (const auto& item : items) os << line(item) << '\n';
    if (!os) throw DataError("write failed for " + p.string());
  };
  write(out.reports, issues, report_to_json_line);
  write(out.commits, commits, commit_to_json_line);
  return out;
}

}  // namespace triage
