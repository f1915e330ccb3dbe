#include <gtest/gtest.h>

#include <cmath>

#include "triage/index.hpp"
#include "triage/random.hpp"

using namespace triage;

namespace {

InvertedIndex small_index() {
  return build_index({{"d1", {"a", "b"}}, {"d2", {"a", "c"}}, {"d3", {"b"}}});
}

}  // namespace

TEST(Index, Statistics) {
  const auto idx = small_index();
  EXPECT_EQ(idx.doc_count(), 3u);
  EXPECT_EQ(idx.df("a"), 2u);
  EXPECT_EQ(idx.cf("b"), 2u);
  EXPECT_EQ(idx.df("zzz"), 0u);
  EXPECT_DOUBLE_EQ(idx.idf("c"), std::log(3.0));
  EXPECT_DOUBLE_EQ(idx.avg_doc_len(), 5.0 / 3.0);
  EXPECT_EQ(idx.tf("a", *idx.doc_number("d2")), 1u);
  EXPECT_EQ(idx.tf("b", *idx.doc_number("d2")), 0u);
}

TEST(Index, DuplicateIdRejected) {
  EXPECT_THROW(build_index({{"x", {"a"}}, {"x", {"b"}}}), std::invalid_argument);
}

TEST(Index, BuilderMatchesTokenBuild) {
  IndexBuilder b;
  b.add_tokens("d2", {"a", "c"});
  b.add("d1", "a");
  b.add("d1", "b");
  b.add_tokens("d3", {"b"});
  const auto built = std::move(b).build();
  const auto ref = small_index();
  for (const char* t : {"a", "b", "c"}) {
    EXPECT_EQ(built.df(t), ref.df(t));
    EXPECT_EQ(built.cf(t), ref.cf(t));
  }
  EXPECT_EQ(cosine_tfidf({"b"}, built), cosine_tfidf({"b"}, ref));
}

TEST(Cosine, HandComputed) {
  // d3 holds only "b" (cosine 1); d1 holds "a" and "b" with equal idf (1/sqrt 2).
  const auto r = cosine_tfidf({"b"}, small_index());
  ASSERT_EQ(r.size(), 2u);
  EXPECT_EQ(r[0].doc_id, "d3");
  EXPECT_NEAR(r[0].score, 1.0, 1e-12);
  EXPECT_EQ(r[1].doc_id, "d1");
  EXPECT_NEAR(r[1].score, 1.0 / std::sqrt(2.0), 1e-12);
}

TEST(Cosine, UbiquitousTermsScoreZeroAndAreOmitted) {
  const auto idx = build_index({{"x", {"a", "b"}}, {"y", {"a"}}});
  EXPECT_TRUE(cosine_tfidf({"a"}, idx).empty());
  EXPECT_TRUE(cosine_tfidf({"unknown"}, idx).empty());
  EXPECT_TRUE(cosine_tfidf({}, idx).empty());
}

TEST(Cosine, TiesOrderedById) {
  const auto idx = build_index({{"b", {"t"}}, {"a", {"t"}}, {"c", {"u"}}});
  const auto r = cosine_tfidf({"t"}, idx);
  ASSERT_EQ(r.size(), 2u);
  EXPECT_EQ(r[0].doc_id, "a");
  EXPECT_EQ(r[1].doc_id, "b");
}

TEST(Bm25, SingleDocumentIdf) {
  // N = 1, df = 1: idf = ln(1 + 0.5/1.5) = ln(4/3); tf = 1 at average length
  // makes the saturation factor exactly 1.
  const auto idx = build_index({{"only", {"t"}}});
  const auto r = bm25({"t"}, idx);
  ASSERT_EQ(r.size(), 1u);
  EXPECT_NEAR(r[0].score, 0.28768, 1e-5);
}

TEST(Bm25, RepeatedQueryTermsCountOnce) {
  const auto idx = small_index();
  EXPECT_EQ(bm25({"b"}, idx), bm25({"b", "b", "b"}, idx));
}

TEST(Bm25, RejectsBadParameters) {
  const auto idx = small_index();
  EXPECT_THROW(bm25({"a"}, idx, {-1.0, 0.75}), std::invalid_argument);
  EXPECT_THROW(bm25({"a"}, idx, {1.2, 1.5}), std::invalid_argument);
}

TEST(Bm25, LongerDocumentsScoreLowerForEqualTf) {
  const auto idx = build_index({{"short", {"t", "x"}}, {"long", {"t", "y", "y", "y", "y", "y"}}, {"other", {"z"}}});
  const auto r = bm25({"t"}, idx);
  ASSERT_EQ(r.size(), 2u);
  EXPECT_EQ(r[0].doc_id, "short");
  EXPECT_GT(r[0].score, r[1].score);
}

TEST(Localize, DepthAndValidation) {
  std::vector<std::pair<std::string, TokenList>> docs;
  for (int i = 0; i < 15; ++i) docs.push_back({"f" + std::to_string(100 + i), {"shared", "u" + std::to_string(i)}});
  docs.push_back({"none", {"other"}});
  const auto idx = build_index(docs);
  EXPECT_EQ(localize({"shared"}, idx).size(), 10u);
  EXPECT_EQ(localize({"shared"}, idx, 3).size(), 3u);
  EXPECT_THROW(localize({"shared"}, idx, 0), std::invalid_argument);
}

TEST(IndexProperty, CosineInUnitIntervalAndSorted) {
  Rng rng(7);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<std::pair<std::string, TokenList>> docs;
    const auto n = 2 + uniform_index(rng, 10);
    for (std::uint64_t d = 0; d < n; ++d) {
      TokenList toks;
      const auto len = 1 + uniform_index(rng, 8);
      for (std::uint64_t k = 0; k < len; ++k) toks.push_back("t" + std::to_string(uniform_index(rng, 6)));
      docs.push_back({"d" + std::to_string(d), toks});
    }
    const auto idx = build_index(docs);
    TokenList q{"t" + std::to_string(uniform_index(rng, 6)), "t" + std::to_string(uniform_index(rng, 6))};
    const auto r = cosine_tfidf(q, idx);
    for (std::size_t i = 0; i < r.size(); ++i) {
      EXPECT_GT(r[i].score, 0.0);
      EXPECT_LE(r[i].score, 1.0 + 1e-12);
      if (i) EXPECT_TRUE(r[i - 1].score > r[i].score ||
                         (r[i - 1].score == r[i].score && r[i - 1].doc_id < r[i].doc_id));
    }
    for (std::size_t a = 0; a < idx.doc_count(); ++a)
      EXPECT_NEAR(idx.doc_cosine(a, a), idx.doc_norm(a) > 0 ? 1.0 : 0.0, 1e-12);
  }
}
