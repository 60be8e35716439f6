#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "oracles.hpp"

using namespace rafilter;

namespace {

std::vector<FiniteAlgebra> fam(std::initializer_list<std::size_t> sizes) {
  std::vector<FiniteAlgebra> out;
  for (auto n : sizes) out.push_back(fx::z(n));
  return out;
}

Signature const& zsig() {
  static Signature s = fx::z(2).signature();
  return s;
}

}  // namespace

TEST(VerifiedUltrafilter, AcceptsOnlyUltrafilters) {
  VerifiedUltrafilter u(SubsetFamily::principal(3, 2));
  EXPECT_EQ(u.principal(), 2u);
  EXPECT_THROW(VerifiedUltrafilter(SubsetFamily(2, {3})), precondition_error);
  EXPECT_THROW(VerifiedUltrafilter(SubsetFamily(2, {1, 2, 3})), precondition_error);
  EXPECT_FALSE(VerifiedUltrafilter::try_verify(SubsetFamily(2, {3})));
  EXPECT_TRUE(VerifiedUltrafilter::try_verify(SubsetFamily(2, {1, 3})));
}

TEST(Theta, SpecExamples) {
  auto a = theta_congruence(zsig(), fam({2, 2}), VerifiedUltrafilter(SubsetFamily::principal(2, 1)));
  EXPECT_EQ(a.partition().to_string(), "{02|13}");

  auto b = theta_congruence(zsig(), fam({2}), VerifiedUltrafilter(SubsetFamily(1, {1})));
  EXPECT_TRUE(b.partition().is_finest());

  auto c = theta_congruence(zsig(), fam({2, 4}), VerifiedUltrafilter(SubsetFamily::principal(2, 0)));
  auto blocks = c.partition().blocks();
  ASSERT_EQ(blocks.size(), 2u);
  EXPECT_EQ(blocks[0].size(), 4u);
  EXPECT_EQ(blocks[1].size(), 4u);

  EXPECT_THROW(theta_congruence(zsig(), fam({2}), VerifiedUltrafilter(SubsetFamily::principal(2, 0))),
               input_error);
}

TEST(Theta, EqualsProjectionKernelAndIsCompatible) {
  Rng rng(41);
  for (int t = 0; t < 60; ++t) {
    std::size_t n = rng.between(1, 4);
    std::vector<FiniteAlgebra> family;
    for (std::size_t i = 0; i < n; ++i) family.push_back(fx::z(rng.between(1, 4)));
    std::size_t i0 = rng.below(n);
    auto theta = theta_congruence(zsig(), family, VerifiedUltrafilter(SubsetFamily::principal(n, i0)));
    auto proj = subproduct_projection(zsig(), family, IndexSubset::of(n, {i0}));
    EXPECT_EQ(theta.partition(), kernel(proj));
    EXPECT_TRUE(is_congruence(theta.algebra(), theta.partition()));
  }
}

TEST(Ultraproduct, SpecExamples) {
  auto a = ultraproduct(zsig(), fam({2, 4}), VerifiedUltrafilter(SubsetFamily::principal(2, 0)));
  EXPECT_EQ(a.algebra.size(), 2u);
  EXPECT_TRUE(a.isomorphism_verified);
  EXPECT_EQ(a.algebra, fx::z(2));

  auto b = ultraproduct(zsig(), fam({2}), VerifiedUltrafilter(SubsetFamily(1, {1})));
  EXPECT_EQ(b.algebra, fx::z(2));
  EXPECT_EQ(b.canonical.values(), (std::vector<element>{0, 1}));

  auto c = ultraproduct(zsig(), fam({2, 2}), VerifiedUltrafilter(SubsetFamily::principal(2, 1)));
  EXPECT_EQ(c.algebra.size(), 2u);
  EXPECT_EQ(c.canonical.values(), (std::vector<element>{0, 1, 0, 1}));
  EXPECT_EQ(c.factor_index, 1u);
  EXPECT_TRUE(c.isomorphism_verified);
}

TEST(Ultraproduct, CollapsesToTheGeneratingFactor) {
  Rng rng(42);
  for (int t = 0; t < 40; ++t) {
    std::size_t n = rng.between(1, 4);
    std::vector<FiniteAlgebra> family;
    auto proto = random_algebra(rng, {1, 3, 1});
    for (std::size_t i = 0; i < n; ++i) {
      auto lattice = all_congruences(proto);
      family.push_back(quotient(proto, lattice[rng.below(lattice.size())]).algebra);
    }
    std::size_t i0 = rng.below(n);
    auto r = ultraproduct(proto.signature(), family, VerifiedUltrafilter(SubsetFamily::principal(n, i0)));
    EXPECT_TRUE(r.isomorphism_verified);
    EXPECT_EQ(r.algebra.size(), family[i0].size());
    EXPECT_TRUE(is_homomorphism(r.canonical));
    EXPECT_TRUE(is_surjective(r.canonical));
  }
}

TEST(KappaComplete, SpecExamples) {
  auto u = VerifiedUltrafilter(SubsetFamily::principal(3, 0));
  std::vector<IndexSubset> p1{IndexSubset::of(3, {0}), IndexSubset::of(3, {1, 2})};
  auto r1 = kappa_complete_on(u, p1);
  EXPECT_TRUE(r1.complete);
  EXPECT_EQ(r1.witness, IndexSubset::of(3, {0}));

  std::vector<IndexSubset> p2{IndexSubset::of(3, {1}), IndexSubset::of(3, {0, 2})};
  auto r2 = kappa_complete_on(u, p2);
  EXPECT_TRUE(r2.complete);
  EXPECT_EQ(r2.witness, IndexSubset::of(3, {0, 2}));

  std::vector<IndexSubset> p3{IndexSubset::of(2, {0}), IndexSubset::of(2, {1})};
  EXPECT_FALSE(kappa_complete_on(SubsetFamily(2, {3}), p3).complete);
}

TEST(KappaComplete, RejectsNonPartitions) {
  SubsetFamily u = SubsetFamily::principal(3, 0);
  std::vector<IndexSubset> overlap{IndexSubset::of(3, {0, 1}), IndexSubset::of(3, {1, 2})};
  EXPECT_THROW(kappa_complete_on(u, overlap), input_error);
  std::vector<IndexSubset> gap{IndexSubset::of(3, {0})};
  EXPECT_THROW(kappa_complete_on(u, gap), input_error);
  std::vector<IndexSubset> empty{IndexSubset::of(3, {0, 1, 2}), IndexSubset::empty(3)};
  EXPECT_THROW(kappa_complete_on(u, empty), input_error);
}

TEST(SetPartitions, EnumerationMatchesBellNumbers) {
  std::vector<std::size_t> bell{1, 1, 2, 5, 15, 52, 203, 877, 4140};
  for (std::size_t n = 1; n <= 8; ++n) {
    std::size_t count = 0;
    for_each_set_partition(n, [&](std::span<const IndexSubset> blocks) {
      ++count;
      mask_type seen = 0;
      for (auto const& b : blocks) {
        EXPECT_FALSE(b.is_empty());
        EXPECT_EQ(seen & b.mask(), 0u);
        seen |= b.mask();
      }
      EXPECT_EQ(seen, IndexSubset::full_mask(n));
    });
    EXPECT_EQ(count, bell[n]);
  }
}

TEST(SetPartitions, RandomPartitionsAreValid) {
  Rng rng(43);
  for (int t = 0; t < 200; ++t) {
    std::size_t n = rng.between(1, 20);
    auto blocks = random_set_partition(n, rng);
    EXPECT_NO_THROW(kappa_complete_on(SubsetFamily::principal(n, 0), blocks));
  }
}

TEST(RestrictedTheta, SpecExamples) {
  auto f = fx::z2_times_point();
  EXPECT_TRUE(restricted_theta_is_diagonal(f, SubsetFamily::principal(2, 0)));
  ProductEmbedding g(fx::z(2), {identity_map(fx::z(2))});
  EXPECT_TRUE(restricted_theta_is_diagonal(g, SubsetFamily(1, {1})));
  EXPECT_FALSE(restricted_theta_is_diagonal(f, SubsetFamily(2, {2, 3})));
}

TEST(Pipeline, PassesOnZ2TimesPoint) {
  auto r = theorem_pipeline(fx::z2_times_point());
  ASSERT_TRUE(r.passed()) << report_json(r).dump();
  ASSERT_EQ(r.stages.size(), 7u);
  for (std::size_t i = 0; i < 7; ++i) EXPECT_EQ(r.stages[i].stage, stage_name(i + 1));
  EXPECT_EQ(r.stages[3].witnesses["principal"], 0);
  EXPECT_EQ(r.stages[5].witnesses["ultraproduct_size"], 2);
  EXPECT_EQ(r.stages[6].witnesses["map"], (std::vector<element>{0, 1}));
}

TEST(Pipeline, StopsAtClassificationForDiagonal) {
  auto r = theorem_pipeline(fx::diagonal_z2());
  EXPECT_FALSE(r.passed());
  EXPECT_EQ(r.failed_stage(), std::optional<std::string>("classification"));
  EXPECT_EQ(r.stages.size(), 2u);
  EXPECT_EQ(r.stages[1].witnesses["class"], "decomposable");
  EXPECT_EQ(r.stages[1].witnesses["witness"]["indices"], (std::vector<std::size_t>{0}));
}

TEST(Pipeline, StopsAtIrreducibilityForZ6) {
  auto r = theorem_pipeline(fx::z6_crt());
  EXPECT_EQ(r.failed_stage(), std::optional<std::string>("finitely_subdirectly_irreducible"));
  EXPECT_EQ(r.stages.size(), 1u);
}

TEST(Pipeline, TrivialDomainIsRejected) {
  auto p = fx::one_point();
  auto r = theorem_pipeline(ProductEmbedding(p, {identity_map(p)}));
  EXPECT_EQ(r.failed_stage(), std::optional<std::string>("finitely_subdirectly_irreducible"));
}

TEST(Pipeline, SampledPartitionsAboveTheLimit) {
  PipelineConfig cfg;
  cfg.exhaustive_partition_limit = 1;
  cfg.sampled_partitions = 50;
  auto r = theorem_pipeline(fx::z2_times_point(), cfg);
  ASSERT_TRUE(r.passed());
  EXPECT_EQ(r.stages[4].witnesses["exhaustive"], false);
  EXPECT_EQ(r.stages[4].witnesses["partitions_checked"], 50);
}

TEST(Pipeline, ReportJsonShape) {
  auto j = report_json(theorem_pipeline(fx::diagonal_z2()));
  EXPECT_EQ(j["passed"], false);
  EXPECT_EQ(j["failed_stage"], "classification");
  EXPECT_TRUE(j["stages"][0].contains("witnesses"));
  EXPECT_EQ(subset_json(IndexSubset::of(3, {0, 2})),
            (nlohmann::json{{"mask", 5}, {"indices", {0, 2}}}));
}

TEST(Pipeline, PassesOnRandomIndecomposableInstances) {
  Rng rng(44);
  int seen = 0;
  for (int t = 0; t < 300 && seen < 60; ++t) {
    auto f = random_embedding(rng);
    if (!is_finitely_subdirectly_irreducible(f.domain())) continue;
    if (classify(f).kind != EmbeddingClass::Kind::indecomposable) continue;
    ++seen;
    auto r = theorem_pipeline(f);
    EXPECT_TRUE(r.passed()) << report_json(r).dump();
  }
  EXPECT_GT(seen, 30);
}
