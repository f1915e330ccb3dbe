#include <gtest/gtest.h>

#include <fstream>
#include <sstream>

#include "support.hpp"
#include "triage/miner.hpp"

using namespace triage;
using namespace triage::testing;

namespace {

MinerConfig fixture_config(const std::string& scenario) {
  MinerConfig c;
  c.repository = "acme/widget";
  c.fixture_path = fixture_dir(scenario);
  return c;
}

struct Recorder {
  std::vector<std::chrono::seconds> waits;
  Sleeper sleeper() {
    return [this](std::chrono::seconds s) { waits.push_back(s); };
  }
};

Clock fixed_clock(long long epoch_seconds) {
  return [epoch_seconds] { return Timestamp{std::chrono::seconds{epoch_seconds}}; };
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

/// Scripted transport for status sequences that need no bodies.
class Scripted : public Transport {
 public:
  explicit Scripted(std::vector<HttpResponse> rs) : rs_(std::move(rs)) {}
  HttpResponse get(const std::string&, const std::map<std::string, std::string>& headers) override {
    last_headers = headers;
    return rs_.at(std::min(n_++, rs_.size() - 1));
  }
  std::map<std::string, std::string> last_headers;

 private:
  std::vector<HttpResponse> rs_;
  std::size_t n_ = 0;
};

}  // namespace

TEST(Miner, EmptyRepository) {
  FixtureTransport t(fixture_dir("empty"));
  Miner m(fixture_config("empty"), t);
  EXPECT_TRUE(m.fetch_issues().empty());
  EXPECT_TRUE(m.fetch_commits().empty());
  EXPECT_EQ(t.calls(), 2u);
}

TEST(Miner, FollowsPaginationAndDropsPullRequests) {
  FixtureTransport t(fixture_dir("paged"));
  Miner m(fixture_config("paged"), t);
  const auto issues = m.fetch_issues();
  EXPECT_EQ(t.calls(), 3u);
  ASSERT_EQ(issues.size(), 201u);
  EXPECT_EQ(issues.front().id, "1");
  EXPECT_EQ(issues.back().id, "201");
  EXPECT_EQ(issues.front().tracker_assignees, std::vector<DeveloperId>{"alice"});
  EXPECT_TRUE(issues[1].tracker_assignees.empty());
  EXPECT_EQ(issues.front().labels, std::vector<std::string>{"bug"});
  EXPECT_EQ(issues.front().status, ReportStatus::Closed);
  EXPECT_EQ(t.requested()[2], "/repos/acme/widget/issues?state=all&per_page=100&page=3");
}

TEST(Miner, CommitDetailsAndAuthorFallback) {
  FixtureTransport t(fixture_dir("paged"));
  Miner m(fixture_config("paged"), t);
  const auto commits = m.fetch_commits();
  ASSERT_EQ(commits.size(), 2u);
  EXPECT_EQ(commits[0].author_id, "alice");
  EXPECT_EQ(commits[0].changed_files, (std::vector<std::string>{"src/save.cpp", "src/io.cpp"}));
  EXPECT_EQ(commits[0].message, "Fixes #1");
  EXPECT_EQ(format_rfc3339(commits[0].timestamp), "2023-02-02T11:00:00Z");
  EXPECT_EQ(commits[1].author_id, "Dana Roe <dana@example.org>");
  EXPECT_EQ(t.calls(), 3u);  // one listing page plus one detail request per commit
}

TEST(Miner, WaitsOutRateLimitThenRetriesServerErrors) {
  FixtureTransport t(fixture_dir("rate_limited"));
  Recorder rec;
  Miner m(fixture_config("rate_limited"), t, rec.sleeper(), fixed_clock(1700000000));
  const auto issues = m.fetch_issues();
  ASSERT_EQ(issues.size(), 1u);
  EXPECT_EQ(issues[0].tracker_assignees, std::vector<DeveloperId>{"bob"});
  EXPECT_TRUE(m.fetch_commits().empty());
  EXPECT_EQ(m.requests(), 4u);
  ASSERT_EQ(rec.waits.size(), 2u);
  EXPECT_EQ(rec.waits[0], std::chrono::seconds{60});  // until the reset time
  EXPECT_EQ(rec.waits[1], std::chrono::seconds{1});   // first backoff step
}

TEST(Miner, UnauthorizedIsTerminal) {
  FixtureTransport t(fixture_dir("unauthorized"));
  Recorder rec;
  Miner m(fixture_config("unauthorized"), t, rec.sleeper());
  try {
    m.fetch_issues();
    FAIL() << "expected MinerError";
  } catch (const MinerError& e) {
    EXPECT_EQ(e.status(), 401);
  }
  EXPECT_EQ(t.calls(), 1u);
  EXPECT_TRUE(rec.waits.empty());
}

TEST(Miner, GivesUpAfterExponentialBackoff) {
  FixtureTransport t(fixture_dir("server_down"));
  Recorder rec;
  Miner m(fixture_config("server_down"), t, rec.sleeper());
  EXPECT_THROW(m.fetch_issues(), MinerError);
  EXPECT_EQ(t.calls(), 5u);
  using std::chrono::seconds;
  EXPECT_EQ(rec.waits, (std::vector<seconds>{seconds{1}, seconds{2}, seconds{4}, seconds{8}}));
}

TEST(Miner, OtherClientErrorsAreTerminal) {
  Scripted t({{404, {}, "{}"}});
  MinerConfig c = fixture_config("empty");
  c.token = "secret";
  Miner m(c, t, [](std::chrono::seconds) {});
  EXPECT_THROW(m.fetch_issues(), MinerError);
  EXPECT_EQ(m.requests(), 1u);
  EXPECT_EQ(t.last_headers.at("Authorization"), "Bearer secret");
}

TEST(Miner, RetryAfterHeaderHonored) {
  Scripted t({{429, {{"retry-after", "7"}}, ""}, {200, {}, "[]"}});
  Recorder rec;
  Miner m(fixture_config("empty"), t, rec.sleeper());
  EXPECT_TRUE(m.fetch_issues().empty());
  EXPECT_EQ(rec.waits, std::vector<std::chrono::seconds>{std::chrono::seconds{7}});
}

TEST(Miner, ConfigValidation) {
  MinerConfig c = fixture_config("empty");
  c.repository = "no-slash";
  EXPECT_THROW(c.validate(), std::invalid_argument);
  c = fixture_config("empty");
  c.page_size = 0;
  EXPECT_THROW(c.validate(), std::invalid_argument);
  c = fixture_config("empty");
  c.fixture_path.clear();
  EXPECT_THROW(c.validate(), std::invalid_argument);
}

TEST(Miner, NextLinkParsing) {
  EXPECT_EQ(next_link(R"(<https://api.github.com/repos/a/b/issues?page=2>; rel="next", <https://api.github.com/x?page=9>; rel="last")"),
            "/repos/a/b/issues?page=2");
  EXPECT_EQ(next_link(R"(<https://api.github.com/x?page=1>; rel="prev")"), std::nullopt);
  EXPECT_EQ(next_link(""), std::nullopt);
}

TEST(Miner, FixtureNamesIgnorePage) {
  EXPECT_EQ(fixture_file_name("/r?a=1&page=3").substr(0, 16), fixture_file_name("/r?a=1").substr(0, 16));
  EXPECT_EQ(fixture_file_name("/r?a=1&page=3").substr(16), "-3.json");
}

TEST(Export, DeterministicAndRoundTrips) {
  FixtureTransport t(fixture_dir("paged"));
  Miner m(fixture_config("paged"), t);
  const auto issues = m.fetch_issues();
  const auto commits = m.fetch_commits();
  const auto base = std::filesystem::temp_directory_path() / "triage_export";
  std::filesystem::remove_all(base);
  const auto a = export_dataset(issues, commits, base / "a");
  const auto b = export_dataset(issues, commits, base / "b");
  EXPECT_EQ(slurp(a.reports), slurp(b.reports));
  EXPECT_EQ(slurp(a.commits), slurp(b.commits));

  std::ifstream in(a.reports);
  std::string line;
  std::size_t n = 0;
  while (std::getline(in, line)) {
    const auto r = report_from_json_line(line);
    EXPECT_EQ(r.id, issues[n].id);
    EXPECT_EQ(r.created_at, issues[n].created_at);
    ++n;
  }
  EXPECT_EQ(n, issues.size());
  std::ifstream cin(a.commits);
  std::getline(cin, line);
  EXPECT_EQ(commit_from_json_line(line).changed_files, commits[0].changed_files);
}
