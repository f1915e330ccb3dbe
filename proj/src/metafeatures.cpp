#include "triage/metafeatures.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <vector>

#include "triage/random.hpp"
#include "triage/recommenders.hpp"

namespace triage {
namespace {

struct Summary {
  double avg = 0.0, max = 0.0, sum = 0.0, dev = 0.0;
};

Summary summarize(const std::vector<double>& xs) {
  Summary s;
  if (xs.empty()) return s;
  s.max = *std::max_element(xs.begin(), xs.end());
  for (double x : xs) s.sum += x;
  s.avg = s.sum / static_cast<double>(xs.size());
  double var = 0.0;
  for (double x : xs) var += (x - s.avg) * (x - s.avg);
  s.dev = std::sqrt(var / static_cast<double>(xs.size()));
  return s;
}

double scq(const InvertedIndex& index, const InvertedIndex::TermEntry& e) {
  const double idf = std::log(static_cast<double>(index.doc_count()) / e.df);
  return (1.0 + std::log(static_cast<double>(e.cf))) * idf;
}

double coherency(const std::vector<std::uint32_t>& docs, const InvertedIndex& index,
                 std::uint64_t seed) {
  const std::size_t m = docs.size();
  if (m < 2) return 0.0;
  const std::size_t total_pairs = m * (m - 1) / 2;
  double sum = 0.0;
  if (total_pairs <= kCoherencyPairCap) {
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = i + 1; j < m; ++j) sum += index.doc_cosine(docs[i], docs[j]);
    return sum / static_cast<double>(total_pairs);
  }
  Rng rng(seed);
  std::set<std::pair<std::size_t, std::size_t>> sampled;
  while (sampled.size() < kCoherencyPairCap) {
    const auto i = static_cast<std::size_t>(uniform_index(rng, m));
    const auto j = static_cast<std::size_t>(uniform_index(rng, m));
    if (i == j) continue;
    sampled.emplace(std::min(i, j), std::max(i, j));
  }
  for (const auto& [i, j] : sampled) sum += index.doc_cosine(docs[i], docs[j]);
  return sum / static_cast<double>(sampled.size());
}

}  // namespace

MetaFeatureVector compute_meta_features(const TokenList& query, const InvertedIndex& report_index,
                                        const InvertedIndex& code_index,
                                        const std::map<DeveloperId, std::size_t>& fix_counts,
                                        std::uint64_t coherency_seed) {
  using F = MetaFeature;
  MetaFeatureVector v;

  std::map<std::string, std::size_t> qtf;
  for (const auto& t : query) ++qtf[t];

  // Specificity and report-side similarity over distinct query terms present
  // in the past-report collection.
  std::vector<double> idfs, ictfs, vars, scq_reports, scq_code;
  std::set<std::uint32_t> matched_docs;
  double scs = 0.0;
  const double n_reports = static_cast<double>(report_index.doc_count());
  const double total_tokens = static_cast<double>(report_index.total_tokens());
  for (const auto& [t, count] : qtf) {
    if (const auto* e = report_index.term(t); e && e->df > 0) {
      idfs.push_back(std::log(n_reports / e->df));
      ictfs.push_back(std::log(total_tokens / static_cast<double>(e->cf)));
      const double p_q = static_cast<double>(count) / static_cast<double>(query.size());
      const double p_c = static_cast<double>(e->cf) / total_tokens;
      scs += p_q * std::log(p_q / p_c);

      std::vector<double> weights;
      weights.reserve(e->postings.size());
      for (const auto& p : e->postings) {
        weights.push_back(report_index.weight(*e, p.tf));
        matched_docs.insert(p.doc);
      }
      const Summary w = summarize(weights);
      vars.push_back(w.dev * w.dev);
      scq_reports.push_back(scq(report_index, *e));
    }
    if (const auto* e = code_index.term(t); e && e->df > 0) scq_code.push_back(scq(code_index, *e));
  }

  const Summary idf = summarize(idfs), ictf = summarize(ictfs), var = summarize(vars);
  const Summary scq_r = summarize(scq_reports), scq_c = summarize(scq_code);
  v[F::AvgIDF] = idf.avg;
  v[F::MaxIDF] = idf.max;
  v[F::DevIDF] = idf.dev;
  v[F::AvgICTF] = ictf.avg;
  v[F::MaxICTF] = ictf.max;
  v[F::DevICTF] = ictf.dev;
  v[F::SCS] = scs;
  v[F::QS] = n_reports > 0 ? static_cast<double>(matched_docs.size()) / n_reports : 0.0;
  v[F::AvgVAR] = var.avg;
  v[F::MaxVAR] = var.max;
  v[F::SumVAR] = var.sum;
  v[F::AvgSCQReports] = scq_r.avg;
  v[F::MaxSCQReports] = scq_r.max;
  v[F::SumSCQReports] = scq_r.sum;
  v[F::AvgSCQCode] = scq_c.avg;
  v[F::MaxSCQCode] = scq_c.max;
  v[F::SumSCQCode] = scq_c.sum;

  const std::vector<std::uint32_t> docs(matched_docs.begin(), matched_docs.end());
  v[F::CS] = coherency(docs, report_index, coherency_seed);

  std::vector<double> fixes;
  for (const auto& [dev, n] : fix_counts)
    if (n > 0) fixes.push_back(static_cast<double>(n));
  if (!fixes.empty()) {
    std::sort(fixes.begin(), fixes.end());
    const Summary f = summarize(fixes);
    const std::size_t k = fixes.size();
    v[F::ActiveDevs] = static_cast<double>(k);
    v[F::AvgFixes] = f.avg;
    v[F::MedianFixes] = k % 2 ? fixes[k / 2] : 0.5 * (fixes[k / 2 - 1] + fixes[k / 2]);
    v[F::MaxFixes] = f.max;
    double entropy = 0.0;
    for (double x : fixes) {
      const double p = x / f.sum;
      entropy -= p * std::log(p);
    }
    v[F::FixEntropy] = std::max(0.0, entropy);
  }
  return v;
}

MetaFeatureVector compute_meta_features(const Query& query, const History& history,
                                        const InvertedIndex& code_index,
                                        std::uint64_t coherency_seed) {
  return compute_meta_features(query.tokens, history.report_index(), code_index,
                               history.fix_counts(), coherency_seed);
}

}  // namespace triage
