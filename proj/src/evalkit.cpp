#include "triage/evalkit.hpp"

#include <stdexcept>

#include "triage/classifiers.hpp"
#include "triage/random.hpp"

namespace triage {

Rank rank_of_first_hit(const std::vector<DeveloperId>& ranked, const std::set<DeveloperId>& gt) {
  if (gt.empty()) throw std::invalid_argument("ground truth must be non-empty");
  for (std::size_t i = 0; i < ranked.size(); ++i)
    if (gt.count(ranked[i])) return static_cast<int>(i + 1);
  return std::nullopt;
}

double average_precision(const std::vector<DeveloperId>& ranked, const std::set<DeveloperId>& gt) {
  if (gt.empty()) throw std::invalid_argument("ground truth must be non-empty");
  std::set<DeveloperId> seen;
  std::size_t hits = 0;
  double sum = 0.0;
  for (std::size_t i = 0; i < ranked.size(); ++i) {
    if (!gt.count(ranked[i]) || !seen.insert(ranked[i]).second) continue;
    ++hits;
    sum += static_cast<double>(hits) / static_cast<double>(i + 1);
  }
  return sum / static_cast<double>(gt.size());
}

QueryResult evaluate_query(const std::string& report_id, Approach approach,
                           const std::vector<DeveloperId>& ranked,
                           const std::set<DeveloperId>& gt) {
  QueryResult r;
  r.report_id = report_id;
  r.approach = approach;
  r.rank = rank_of_first_hit(ranked, gt);
  r.reciprocal_rank = r.rank ? 1.0 / *r.rank : 0.0;
  r.average_precision = average_precision(ranked, gt);
  return r;
}

Metrics aggregate(const std::vector<QueryResult>& results) {
  if (results.empty()) throw std::invalid_argument("cannot aggregate an empty result set");
  Metrics m;
  m.query_count = results.size();
  for (const auto& r : results) {
    m.mrr += r.reciprocal_rank;
    m.map += r.average_precision;
    if (!r.rank) continue;
    for (int k = *r.rank; k <= kMaxHitK; ++k) m.hit[static_cast<std::size_t>(k - 1)] += 1.0;
  }
  const double n = static_cast<double>(results.size());
  m.mrr /= n;
  m.map /= n;
  for (auto& h : m.hit) h /= n;
  return m;
}

unsigned best_approach_mask(const ApproachOutcomes& q) {
  std::optional<int> best;
  for (const auto& r : q.by_approach)
    if (r.rank && (!best || *r.rank < *best)) best = r.rank;
  if (!best) return 0;
  unsigned mask = 0;
  for (std::size_t i = 0; i < kBaseApproachCount; ++i)
    if (q.by_approach[i].rank == best) mask |= 1u << i;
  return mask;
}

std::size_t distribution_cell(unsigned mask) {
  switch (mask) {
    case 0b001: return 0;
    case 0b010: return 1;
    case 0b100: return 2;
    case 0b011: return 3;
    case 0b101: return 4;
    case 0b110: return 5;
    case 0b111: return 6;
    default: throw std::invalid_argument("no best approach for an all-MISS query");
  }
}

BestApproachLabeling best_approach_labels(const std::vector<ApproachOutcomes>& queries,
                                          std::uint64_t seed) {
  BestApproachLabeling out;
  for (const auto& q : queries) {
    const unsigned mask = best_approach_mask(q);
    if (mask == 0) {
      ++out.all_miss;
      continue;
    }
    ++out.distribution[distribution_cell(mask)];
    ++out.total;
    std::vector<Approach> tied;
    for (std::size_t i = 0; i < kBaseApproachCount; ++i)
      if (mask & (1u << i)) tied.push_back(kBaseApproaches[i]);
    Approach label = tied.front();
    if (tied.size() > 1) {
      Rng rng(mix_seed(fnv1a(q.report_id) ^ seed));
      label = tied[static_cast<std::size_t>(uniform_index(rng, tied.size()))];
    }
    out.labels[q.report_id] = label;
  }
  return out;
}

Approach oracle_choice(const ApproachOutcomes& q) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < kBaseApproachCount; ++i) {
    const auto& a = q.by_approach[i];
    const auto& b = q.by_approach[best];
    if (!a.rank) continue;
    if (!b.rank || *a.rank < *b.rank ||
        (*a.rank == *b.rank && a.average_precision > b.average_precision))
      best = i;
  }
  return kBaseApproaches[best];
}

Metrics approach_metrics(const std::vector<ApproachOutcomes>& queries, Approach approach) {
  std::vector<QueryResult> rs;
  rs.reserve(queries.size());
  for (const auto& q : queries) rs.push_back(q.by_approach[class_index(approach)]);
  return aggregate(rs);
}

Metrics oracle_metrics(const std::vector<ApproachOutcomes>& queries) {
  std::vector<Approach> choice;
  choice.reserve(queries.size());
  for (const auto& q : queries) choice.push_back(oracle_choice(q));
  return dispatched_metrics(queries, choice);
}

Metrics dispatched_metrics(const std::vector<ApproachOutcomes>& queries,
                           const std::vector<Approach>& choice) {
  if (choice.size() != queries.size())
    throw std::invalid_argument("one dispatch choice per query required");
  std::vector<QueryResult> rs;
  rs.reserve(queries.size());
  for (std::size_t i = 0; i < queries.size(); ++i)
    rs.push_back(queries[i].by_approach[class_index(choice[i])]);
  return aggregate(rs);
}

}  // namespace triage
