#include "triage/config.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

namespace triage {

namespace fs = std::filesystem;

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_list(const std::string& v) {
  std::vector<std::string> out;
  std::istringstream is(v);
  std::string item;
  while (std::getline(is, item, ','))
    if (auto t = trim(item); !t.empty()) out.push_back(t);
  return out;
}

template <typename T>
T parse_number(const std::string& key, const std::string& v) {
  T out{};
  const auto* end = v.data() + v.size();
  const auto [ptr, ec] = std::from_chars(v.data(), end, out);
  if (ec != std::errc{} || ptr != end) throw DataError("setting " + key + ": bad number '" + v + "'");
  return out;
}

ClassifierKind parse_kind(const std::string& v) {
  for (auto k : kTrainableKinds)
    if (v == to_string(k)) return k;
  throw DataError("unknown classifier '" + v + "' (expected DT, NB, LR or RF)");
}

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

}  // namespace

std::map<std::string, std::string> read_key_values(const fs::path& file) {
  std::ifstream in(file);
  if (!in) throw DataError("cannot read config " + file.string());
  std::map<std::string, std::string> out;
  std::string line;
  for (std::size_t n = 1; std::getline(in, line); ++n) {
    if (const auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    const auto where = file.string() + ":" + std::to_string(n) + ": ";
    if (eq == std::string::npos) throw DataError(where + "expected key = value");
    const auto key = trim(line.substr(0, eq));
    if (key.empty()) throw DataError(where + "empty key");
    if (!out.emplace(key, trim(line.substr(eq + 1))).second)
      throw DataError(where + "duplicate key '" + key + "'");
  }
  return out;
}

DatasetPaths dataset_in(const fs::path& dir) {
  DatasetPaths p{dir / "reports.jsonl", dir / "commits.jsonl", dir / "code.jsonl", std::nullopt};
  if (fs::exists(dir / "identities.json")) p.identities = dir / "identities.json";
  return p;
}

void apply_settings(RunSettings& s, const std::map<std::string, std::string>& kv) {
  auto& e = s.experiment;
  // "dataset" first so explicit file keys override its defaults.
  if (auto it = kv.find("dataset"); it != kv.end()) s.dataset = dataset_in(it->second);
  for (const auto& [key, v] : kv) {
    if (key == "dataset") continue;
    if (key == "reports") s.dataset.reports = v;
    else if (key == "commits") s.dataset.commits = v;
    else if (key == "code") s.dataset.code = v;
    else if (key == "identities") s.dataset.identities = fs::path(v);
    else if (key == "fold_count") e.fold_count = parse_number<std::size_t>(key, v);
    else if (key == "train_fraction") e.train_fraction = parse_number<double>(key, v);
    else if (key == "seed") e.seed = parse_number<std::uint64_t>(key, v);
    else if (key == "k_max") e.k_max = parse_number<int>(key, v);
    else if (key == "negatives_per_query") e.negatives_per_query = parse_number<std::size_t>(key, v);
    else if (key == "localizer_depth") e.localizer_depth = parse_number<std::size_t>(key, v);
    else if (key == "jobs") e.jobs = parse_number<std::size_t>(key, v);
    else if (key == "bm25.k1") e.bm25.k1 = parse_number<double>(key, v);
    else if (key == "bm25.b") e.bm25.b = parse_number<double>(key, v);
    else if (key == "rank.learning_rate") e.rank.learning_rate = parse_number<double>(key, v);
    else if (key == "rank.epochs") e.rank.epochs = parse_number<int>(key, v);
    else if (key == "rank.lambda") e.rank.lambda = parse_number<double>(key, v);
    else if (key == "rank.seed") e.rank.seed = parse_number<std::uint64_t>(key, v);
    else if (key == "seeds") {
      e.seeds.clear();
      for (const auto& item : split_list(v)) e.seeds.push_back(parse_number<std::uint64_t>(key, item));
    } else if (key == "classifiers") {
      e.classifiers.clear();
      for (const auto& item : split_list(v)) e.classifiers.push_back(parse_kind(item));
    } else {
      throw DataError("unknown setting '" + key + "'");
    }
  }
}

std::string to_string(const std::vector<std::uint64_t>& seeds) {
  std::string out;
  for (std::size_t i = 0; i < seeds.size(); ++i) out += (i ? "," : "") + std::to_string(seeds[i]);
  return out;
}

std::string canonical_settings(const RunSettings& s) {
  const auto& e = s.experiment;
  std::map<std::string, std::string> kv;
  kv["fold_count"] = std::to_string(e.fold_count);
  kv["train_fraction"] = fmt(e.train_fraction);
  kv["seeds"] = to_string(e.seeds);
  kv["seed"] = std::to_string(e.seed);
  kv["k_max"] = std::to_string(e.k_max);
  std::string kinds;
  for (auto k : e.classifiers) kinds += (kinds.empty() ? "" : ",") + std::string(to_string(k));
  kv["classifiers"] = kinds;
  kv["negatives_per_query"] = std::to_string(e.negatives_per_query);
  kv["localizer_depth"] = std::to_string(e.localizer_depth);
  kv["bm25.k1"] = fmt(e.bm25.k1);
  kv["bm25.b"] = fmt(e.bm25.b);
  kv["rank.learning_rate"] = fmt(e.rank.learning_rate);
  kv["rank.epochs"] = std::to_string(e.rank.epochs);
  kv["rank.lambda"] = fmt(e.rank.lambda);
  kv["rank.seed"] = std::to_string(e.rank.seed);
  std::string out;
  for (const auto& [k, v] : kv) out += k + "=" + v + "\n";
  return out;
}

}  // namespace triage
