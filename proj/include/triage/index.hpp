#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "triage/text.hpp"

namespace triage {

struct ScoredDoc {
  std::string doc_id;
  double score = 0.0;
  bool operator==(const ScoredDoc&) const = default;
};

struct Bm25Params {
  double k1 = 1.2;
  double b = 0.75;
};

/// Inverted index with the corpus statistics needed by TF-IDF cosine, BM25
/// and the pre-retrieval query features. Documents are numbered in doc_id
/// order, so postings sorted by number are also sorted by id.
class InvertedIndex {
 public:
  struct Posting {
    std::uint32_t doc;
    std::uint32_t tf;
  };
  struct TermEntry {
    std::string text;
    std::uint32_t df = 0;
    std::uint64_t cf = 0;
    std::vector<Posting> postings;
  };

  InvertedIndex() = default;

  std::size_t doc_count() const { return doc_ids_.size(); }
  std::uint64_t total_tokens() const { return total_tokens_; }
  double avg_doc_len() const;
  const std::string& doc_id(std::size_t doc) const { return doc_ids_[doc]; }
  std::optional<std::size_t> doc_number(const std::string& id) const;
  std::uint32_t doc_len(std::size_t doc) const { return doc_len_[doc]; }

  const TermEntry* term(const std::string& t) const;
  std::uint32_t df(const std::string& t) const;
  std::uint64_t cf(const std::string& t) const;
  std::uint32_t tf(const std::string& t, std::size_t doc) const;

  /// ln(N/df); 0 when the term is unindexed.
  double idf(const std::string& t) const;
  /// TF-IDF weight (1 + ln tf) * ln(N/df) of a term in a document.
  double weight(const TermEntry& e, std::uint32_t tf) const;
  /// Euclidean norm of a document's TF-IDF vector.
  double doc_norm(std::size_t doc) const { return doc_norm_[doc]; }
  /// Cosine between two indexed documents.
  double doc_cosine(std::size_t a, std::size_t b) const;

  /// Terms in lexicographic order.
  const std::vector<TermEntry>& terms() const { return terms_; }

 private:
  friend InvertedIndex build_index(std::vector<std::pair<std::string, TokenList>> docs);
  friend class IndexBuilder;

  // Takes per-document term counts keyed by doc id; sorts ids and terms.
  static InvertedIndex from_counts(
      std::vector<std::pair<std::string, std::unordered_map<std::string, std::uint32_t>>> docs);

  std::vector<std::string> doc_ids_;
  std::vector<std::uint32_t> doc_len_;
  std::vector<double> doc_norm_;
  // Forward index: per doc, (term number, tf) sorted by term number.
  std::vector<std::vector<std::pair<std::uint32_t, std::uint32_t>>> forward_;
  std::vector<TermEntry> terms_;
  std::unordered_map<std::string, std::uint32_t> term_pos_;
  std::unordered_map<std::string, std::uint32_t> doc_pos_;
  std::uint64_t total_tokens_ = 0;
};

/// Builds from (doc_id, tokens) pairs in any order. Throws std::invalid_argument
/// on a duplicate doc_id.
InvertedIndex build_index(std::vector<std::pair<std::string, TokenList>> docs);

/// Accumulates documents as term counts without materializing token lists;
/// used for developer profiles, which concatenate many files.
class IndexBuilder {
 public:
  /// Adds `count` copies of `term` to document `doc_id` (created on first use).
  void add(const std::string& doc_id, const std::string& term, std::uint32_t count = 1);
  void add_tokens(const std::string& doc_id, const TokenList& tokens);
  /// Registers a document even if it never receives a term.
  void touch(const std::string& doc_id);
  InvertedIndex build() &&;

 private:
  std::unordered_map<std::string, std::unordered_map<std::string, std::uint32_t>> docs_;
};

/// Cosine similarity of TF-IDF vectors, weights (1 + ln tf) * ln(N/df).
/// Zero scores are omitted; order is score desc, doc_id asc.
std::vector<ScoredDoc> cosine_tfidf(const TokenList& query, const InvertedIndex& index);

/// Okapi BM25 with IDF ln(1 + (N - df + 0.5)/(df + 0.5)), summed over the
/// distinct query terms. Zero scores are omitted.
std::vector<ScoredDoc> bm25(const TokenList& query, const InvertedIndex& index,
                            Bm25Params params = {});

/// Same scores as above keyed by document number (unsorted, zeros omitted).
std::vector<std::pair<std::uint32_t, double>> cosine_scores(const TokenList& query,
                                                            const InvertedIndex& index);
std::vector<std::pair<std::uint32_t, double>> bm25_scores(const TokenList& query,
                                                          const InvertedIndex& index,
                                                          Bm25Params params = {});

inline constexpr std::size_t kDefaultLocalizerDepth = 10;

/// Text-similarity bug localizer: top-n code files by cosine_tfidf.
std::vector<ScoredDoc> localize(const TokenList& query, const InvertedIndex& code_index,
                                std::size_t n = kDefaultLocalizerDepth);

}  // namespace triage
