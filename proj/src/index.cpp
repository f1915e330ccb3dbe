#include "triage/index.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

namespace triage {
namespace {

std::map<std::string, std::uint32_t> term_counts(const TokenList& tokens) {
  std::map<std::string, std::uint32_t> counts;
  for (const auto& t : tokens) ++counts[t];
  return counts;
}

std::vector<ScoredDoc> to_sorted(const InvertedIndex& index,
                                 const std::vector<std::pair<std::uint32_t, double>>& scores) {
  std::vector<ScoredDoc> out;
  out.reserve(scores.size());
  for (const auto& [doc, s] : scores) out.push_back({index.doc_id(doc), s});
  std::sort(out.begin(), out.end(), [](const ScoredDoc& a, const ScoredDoc& b) {
    if (a.score != b.score) return a.score > b.score;
    return a.doc_id < b.doc_id;
  });
  return out;
}

}  // namespace

InvertedIndex InvertedIndex::from_counts(
    std::vector<std::pair<std::string, std::unordered_map<std::string, std::uint32_t>>> docs) {
  std::sort(docs.begin(), docs.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  for (std::size_t i = 1; i < docs.size(); ++i)
    if (docs[i].first == docs[i - 1].first)
      throw std::invalid_argument("duplicate doc_id '" + docs[i].first + "'");

  InvertedIndex idx;
  std::vector<std::string> vocab;
  for (const auto& [id, counts] : docs)
    for (const auto& [t, c] : counts)
      if (c > 0) vocab.push_back(t);
  std::sort(vocab.begin(), vocab.end());
  vocab.erase(std::unique(vocab.begin(), vocab.end()), vocab.end());
  idx.terms_.resize(vocab.size());
  for (std::uint32_t i = 0; i < vocab.size(); ++i) {
    idx.terms_[i].text = vocab[i];
    idx.term_pos_.emplace(vocab[i], i);
  }

  const auto n = static_cast<std::uint32_t>(docs.size());
  idx.doc_ids_.reserve(n);
  idx.doc_len_.assign(n, 0);
  idx.forward_.resize(n);
  for (std::uint32_t d = 0; d < n; ++d) {
    auto& [id, counts] = docs[d];
    idx.doc_pos_.emplace(id, d);
    idx.doc_ids_.push_back(std::move(id));
    auto& fwd = idx.forward_[d];
    for (const auto& [t, c] : counts) {
      if (c == 0) continue;
      fwd.emplace_back(idx.term_pos_.at(t), c);
      idx.doc_len_[d] += c;
    }
    std::sort(fwd.begin(), fwd.end());
    for (const auto& [term, c] : fwd) {
      auto& e = idx.terms_[term];
      e.df += 1;
      e.cf += c;
      e.postings.push_back({d, c});
    }
    idx.total_tokens_ += idx.doc_len_[d];
  }

  idx.doc_norm_.assign(n, 0.0);
  for (std::uint32_t d = 0; d < n; ++d) {
    double sq = 0.0;
    for (const auto& [term, c] : idx.forward_[d]) {
      const double w = idx.weight(idx.terms_[term], c);
      sq += w * w;
    }
    idx.doc_norm_[d] = std::sqrt(sq);
  }
  return idx;
}

double InvertedIndex::avg_doc_len() const {
  return doc_ids_.empty() ? 0.0
                          : static_cast<double>(total_tokens_) / static_cast<double>(doc_ids_.size());
}

std::optional<std::size_t> InvertedIndex::doc_number(const std::string& id) const {
  auto it = doc_pos_.find(id);
  if (it == doc_pos_.end()) return std::nullopt;
  return it->second;
}

const InvertedIndex::TermEntry* InvertedIndex::term(const std::string& t) const {
  auto it = term_pos_.find(t);
  return it == term_pos_.end() ? nullptr : &terms_[it->second];
}

std::uint32_t InvertedIndex::df(const std::string& t) const {
  const auto* e = term(t);
  return e ? e->df : 0;
}

std::uint64_t InvertedIndex::cf(const std::string& t) const {
  const auto* e = term(t);
  return e ? e->cf : 0;
}

std::uint32_t InvertedIndex::tf(const std::string& t, std::size_t doc) const {
  const auto* e = term(t);
  if (!e) return 0;
  auto it = std::lower_bound(e->postings.begin(), e->postings.end(), doc,
                             [](const Posting& p, std::size_t d) { return p.doc < d; });
  return (it != e->postings.end() && it->doc == doc) ? it->tf : 0;
}

double InvertedIndex::idf(const std::string& t) const {
  const auto* e = term(t);
  if (!e || e->df == 0) return 0.0;
  return std::log(static_cast<double>(doc_count()) / e->df);
}

double InvertedIndex::weight(const TermEntry& e, std::uint32_t tf) const {
  if (tf == 0 || e.df == 0) return 0.0;
  return (1.0 + std::log(static_cast<double>(tf))) *
         std::log(static_cast<double>(doc_count()) / e.df);
}

double InvertedIndex::doc_cosine(std::size_t a, std::size_t b) const {
  if (doc_norm_[a] == 0.0 || doc_norm_[b] == 0.0) return 0.0;
  const auto& fa = forward_[a];
  const auto& fb = forward_[b];
  double dot = 0.0;
  std::size_t i = 0, j = 0;
  while (i < fa.size() && j < fb.size()) {
    if (fa[i].first < fb[j].first) {
      ++i;
    } else if (fb[j].first < fa[i].first) {
      ++j;
    } else {
      const auto& e = terms_[fa[i].first];
      dot += weight(e, fa[i].second) * weight(e, fb[j].second);
      ++i;
      ++j;
    }
  }
  return dot / (doc_norm_[a] * doc_norm_[b]);
}

InvertedIndex build_index(std::vector<std::pair<std::string, TokenList>> docs) {
  std::vector<std::pair<std::string, std::unordered_map<std::string, std::uint32_t>>> counted;
  counted.reserve(docs.size());
  for (auto& [id, tokens] : docs) {
    std::unordered_map<std::string, std::uint32_t> c;
    for (const auto& t : tokens) ++c[t];
    counted.emplace_back(std::move(id), std::move(c));
  }
  return InvertedIndex::from_counts(std::move(counted));
}

void IndexBuilder::add(const std::string& doc_id, const std::string& term, std::uint32_t count) {
  docs_[doc_id][term] += count;
}

void IndexBuilder::add_tokens(const std::string& doc_id, const TokenList& tokens) {
  auto& d = docs_[doc_id];
  for (const auto& t : tokens) ++d[t];
}

void IndexBuilder::touch(const std::string& doc_id) { docs_[doc_id]; }

InvertedIndex IndexBuilder::build() && {
  std::vector<std::pair<std::string, std::unordered_map<std::string, std::uint32_t>>> docs(
      std::make_move_iterator(docs_.begin()), std::make_move_iterator(docs_.end()));
  docs_.clear();
  return InvertedIndex::from_counts(std::move(docs));
}

std::vector<std::pair<std::uint32_t, double>> cosine_scores(const TokenList& query,
                                                            const InvertedIndex& index) {
  std::vector<std::pair<std::uint32_t, double>> out;
  if (index.doc_count() == 0) return out;
  double q_sq = 0.0;
  std::unordered_map<std::uint32_t, double> dot;
  for (const auto& [t, qtf] : term_counts(query)) {
    const auto* e = index.term(t);
    if (!e) continue;
    const double qw = index.weight(*e, qtf);
    if (qw == 0.0) continue;
    q_sq += qw * qw;
    for (const auto& p : e->postings) dot[p.doc] += qw * index.weight(*e, p.tf);
  }
  if (q_sq == 0.0) return out;
  const double q_norm = std::sqrt(q_sq);
  for (const auto& [doc, d] : dot) {
    const double denom = q_norm * index.doc_norm(doc);
    if (denom == 0.0) continue;
    const double s = d / denom;
    if (s > 0.0) out.emplace_back(doc, s);
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<std::pair<std::uint32_t, double>> bm25_scores(const TokenList& query,
                                                          const InvertedIndex& index,
                                                          Bm25Params params) {
  if (params.k1 < 0.0 || params.b < 0.0 || params.b > 1.0)
    throw std::invalid_argument("bm25 requires k1 >= 0 and 0 <= b <= 1");
  std::vector<std::pair<std::uint32_t, double>> out;
  const double avg = index.avg_doc_len();
  if (avg == 0.0) return out;
  const double n = static_cast<double>(index.doc_count());
  std::unordered_map<std::uint32_t, double> acc;
  for (const auto& [t, qtf] : term_counts(query)) {
    const auto* e = index.term(t);
    if (!e || e->df == 0) continue;
    const double idf = std::log(1.0 + (n - e->df + 0.5) / (e->df + 0.5));
    for (const auto& p : e->postings) {
      const double tf = p.tf;
      const double norm = params.k1 * (1.0 - params.b + params.b * index.doc_len(p.doc) / avg);
      acc[p.doc] += idf * tf * (params.k1 + 1.0) / (tf + norm);
    }
  }
  for (const auto& [doc, s] : acc)
    if (s > 0.0) out.emplace_back(doc, s);
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<ScoredDoc> cosine_tfidf(const TokenList& query, const InvertedIndex& index) {
  return to_sorted(index, cosine_scores(query, index));
}

std::vector<ScoredDoc> bm25(const TokenList& query, const InvertedIndex& index, Bm25Params params) {
  return to_sorted(index, bm25_scores(query, index, params));
}

std::vector<ScoredDoc> localize(const TokenList& query, const InvertedIndex& code_index,
                                std::size_t n) {
  if (n == 0) throw std::invalid_argument("localizer depth must be >= 1");
  auto ranked = cosine_tfidf(query, code_index);
  if (ranked.size() > n) ranked.resize(n);
  return ranked;
}

}  // namespace triage
