#include <gtest/gtest.h>

#include "triage/metafeatures.hpp"
#include "triage/random.hpp"

using namespace triage;
using F = MetaFeature;

namespace {

InvertedIndex reports() {
  return build_index({{"d1", {"a", "b"}}, {"d2", {"a", "c"}}, {"d3", {"b"}}});
}

InvertedIndex code() { return build_index({{"x.cpp", {"a", "a", "z"}}, {"y.cpp", {"z"}}}); }

}  // namespace

// Reference values computed independently from the formulas in closed form.
TEST(MetaFeatures, HandComputedTwoTermQuery) {
  const auto v = compute_meta_features({"a", "c"}, reports(), code(), {{"alice", 3}, {"bob", 1}});
  EXPECT_NEAR(v[F::AvgIDF], 0.7520386984, 1e-9);
  EXPECT_NEAR(v[F::MaxIDF], 1.0986122887, 1e-9);
  EXPECT_NEAR(v[F::DevIDF], 0.3465735903, 1e-9);
  EXPECT_NEAR(v[F::AvgICTF], (0.9162907319 + 1.6094379124) / 2, 1e-9);
  EXPECT_NEAR(v[F::MaxICTF], 1.6094379124, 1e-9);
  EXPECT_NEAR(v[F::SCS], 0.5697171416, 1e-9);
  EXPECT_NEAR(v[F::QS], 2.0 / 3.0, 1e-12);
  EXPECT_DOUBLE_EQ(v[F::SumVAR], 0.0);
  EXPECT_NEAR(v[F::SumSCQReports], 1.7851243933, 1e-9);
  EXPECT_NEAR(v[F::MaxSCQReports], 1.0986122887, 1e-9);
  // Only "a" occurs in the code collection: cf 2, df 1 of 2 files.
  EXPECT_NEAR(v[F::SumSCQCode], (1 + std::log(2.0)) * std::log(2.0), 1e-12);
  EXPECT_NEAR(v[F::CS], 0.2448297501, 1e-9);
  EXPECT_DOUBLE_EQ(v[F::ActiveDevs], 2.0);
  EXPECT_DOUBLE_EQ(v[F::AvgFixes], 2.0);
  EXPECT_DOUBLE_EQ(v[F::MedianFixes], 2.0);
  EXPECT_DOUBLE_EQ(v[F::MaxFixes], 3.0);
  EXPECT_NEAR(v[F::FixEntropy], 0.5623351446, 1e-9);
}

TEST(MetaFeatures, SingleTermHasZeroSpread) {
  const auto v = compute_meta_features({"c", "c"}, reports(), code(), {});
  EXPECT_DOUBLE_EQ(v[F::DevIDF], 0.0);
  EXPECT_DOUBLE_EQ(v[F::DevICTF], 0.0);
  EXPECT_DOUBLE_EQ(v[F::CS], 0.0);  // one matching document
  EXPECT_DOUBLE_EQ(v[F::ActiveDevs], 0.0);
  EXPECT_DOUBLE_EQ(v[F::FixEntropy], 0.0);
}

TEST(MetaFeatures, UnknownTermsContributeNothing) {
  const auto v = compute_meta_features({"nothing", "here"}, reports(), code(), {{"a", 1}});
  for (std::size_t i = 0; i < static_cast<std::size_t>(F::ActiveDevs); ++i)
    EXPECT_EQ(v.values[i], 0.0) << kMetaFeatureNames[i];
  EXPECT_DOUBLE_EQ(v[F::FixEntropy], 0.0);  // one developer
}

TEST(MetaFeatures, EmptyCollections) {
  const auto v = compute_meta_features({"a"}, build_index({}), build_index({}), {});
  for (double x : v.values) EXPECT_EQ(x, 0.0);
}

TEST(MetaFeaturesProperty, BoundedAndFinite) {
  Rng rng(11);
  for (int trial = 0; trial < 40; ++trial) {
    std::vector<std::pair<std::string, TokenList>> docs;
    const auto n = 1 + uniform_index(rng, 30);
    for (std::uint64_t d = 0; d < n; ++d) {
      TokenList toks;
      for (std::uint64_t k = 0, len = 1 + uniform_index(rng, 6); k < len; ++k)
        toks.push_back("t" + std::to_string(uniform_index(rng, 12)));
      docs.push_back({"d" + std::to_string(d), toks});
    }
    const auto idx = build_index(docs);
    TokenList q;
    for (int k = 0; k < 4; ++k) q.push_back("t" + std::to_string(uniform_index(rng, 14)));
    std::map<DeveloperId, std::size_t> fixes{{"a", 1 + uniform_index(rng, 5)}, {"b", 1 + uniform_index(rng, 5)}};
    const auto v = compute_meta_features(q, idx, idx, fixes, trial);
    for (double x : v.values) EXPECT_TRUE(std::isfinite(x));
    EXPECT_GE(v[F::QS], 0.0);
    EXPECT_LE(v[F::QS], 1.0);
    EXPECT_GE(v[F::CS], 0.0);
    EXPECT_LE(v[F::CS], 1.0 + 1e-12);
    EXPECT_LE(v[F::FixEntropy], std::log(2.0) + 1e-12);
    EXPECT_LE(v[F::AvgIDF], v[F::MaxIDF] + 1e-12);
    // Same seed, same vector.
    EXPECT_EQ(v, compute_meta_features(q, idx, idx, fixes, trial));
  }
}

TEST(MetaFeatures, CoherencySamplingIsCappedAndSeeded) {
  std::vector<std::pair<std::string, TokenList>> docs;
  for (int i = 0; i < 40; ++i) docs.push_back({"d" + std::to_string(i), {"common", "u" + std::to_string(i % 7)}});
  docs.push_back({"other", {"x"}});
  const auto idx = build_index(docs);
  const auto a = compute_meta_features({"common"}, idx, idx, {}, 5);
  const auto b = compute_meta_features({"common"}, idx, idx, {}, 5);
  EXPECT_EQ(a[F::CS], b[F::CS]);
  EXPECT_GT(a[F::CS], 0.0);
}
