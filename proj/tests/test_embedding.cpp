#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "oracles.hpp"

using namespace rafilter;
using Kind = EmbeddingClass::Kind;

TEST(ProductEmbedding, ValidatesInvariants) {
  EXPECT_THROW(ProductEmbedding(fx::z(2), {}), input_error);
  EXPECT_THROW(ProductEmbedding(fx::z(4), {fx::mod_map(4, 2)}), input_error);
  EXPECT_THROW(ProductEmbedding(fx::z(2), {AlgebraMap(fx::z(2), fx::z(2), {1, 0})}), input_error);
  try {
    ProductEmbedding(fx::z(4), {fx::mod_map(4, 2)});
  } catch (input_error const& e) {
    EXPECT_NE(std::string(e.what()).find("identifies elements 0 and 2"), std::string::npos);
  }
  Caps caps;
  caps.max_index_set = 2;
  std::vector<AlgebraMap> three(3, identity_map(fx::z(2)));
  EXPECT_THROW(ProductEmbedding(fx::z(2), three, caps), input_error);
}

TEST(FactorsThrough, SpecExamples) {
  auto d = fx::diagonal_z2();
  auto f0 = factors_through(d, IndexSubset::of(2, {0}));
  ASSERT_TRUE(f0);
  EXPECT_EQ(f0->values(), (std::vector<element>{0, 1}));

  auto t = fx::z2_times_point();
  EXPECT_FALSE(factors_through(t, IndexSubset::of(2, {1})));

  auto full = factors_through(t, t.all_indices());
  ASSERT_TRUE(full);
  EXPECT_EQ(full->values(), t.joint_map().values());

  EXPECT_THROW(factors_through(t, IndexSubset::full(3)), input_error);
}

TEST(FactoringFamily, SpecExamples) {
  EXPECT_EQ(factoring_family(fx::diagonal_z2()), SubsetFamily(2, {1, 2, 3}));
  EXPECT_EQ(factoring_family(fx::z2_times_point()), SubsetFamily(2, {1, 3}));
  EXPECT_EQ(factoring_family(fx::z6_crt()), SubsetFamily(2, {3}));
}

TEST(FactoringFamily, TrivialDomainContainsEmptySet) {
  auto p = fx::one_point();
  ProductEmbedding f(p, {identity_map(p)});
  EXPECT_TRUE(factoring_family(f).contains(mask_type{0}));
}

TEST(FactoringFamily, MatchesDefinitionAndIsUpwardClosed) {
  Rng rng(31);
  for (int t = 0; t < 200; ++t) {
    auto f = random_embedding(rng);
    auto u = factoring_family(f);
    EXPECT_EQ(u.masks(), oracle::factoring_family(f));
    EXPECT_TRUE(is_upward_closed(u));
    EXPECT_TRUE(u.contains(f.all_indices()));
  }
}

TEST(FactoringFamily, Cap) {
  Caps caps;
  std::vector<AlgebraMap> many(17, identity_map(fx::z(2)));
  caps.max_index_set = 24;
  ProductEmbedding f(fx::z(2), many, caps);
  EXPECT_THROW(factoring_family(f), cap_exceeded);
  EXPECT_EQ(factoring_family(f, caps).size(), (std::size_t{1} << 17) - 1);
}

TEST(Classify, SpecExamples) {
  auto d = classify(fx::diagonal_z2());
  EXPECT_EQ(d.kind, Kind::decomposable);
  EXPECT_EQ(d.witness, IndexSubset::of(2, {0}));

  EXPECT_EQ(classify(fx::z2_times_point()).kind, Kind::indecomposable);
  EXPECT_FALSE(classify(fx::z2_times_point()).witness);

  auto z6 = classify(fx::z6_crt());
  EXPECT_EQ(z6.kind, Kind::neither);
  EXPECT_EQ(z6.witness, IndexSubset::of(2, {0}));
}

TEST(Classify, WitnessesAreConsistent) {
  Rng rng(32);
  for (int t = 0; t < 200; ++t) {
    auto f = random_embedding(rng);
    auto u = factoring_family(f);
    auto c = classify(u);
    switch (c.kind) {
      case Kind::decomposable:
        ASSERT_TRUE(c.witness);
        EXPECT_TRUE(is_decomposition_witness(u, *c.witness));
        for (mask_type m = 0; m < c.witness->mask(); ++m) {
          EXPECT_FALSE(is_decomposition_witness(u, u.subset(m)));
        }
        break;
      case Kind::neither:
        ASSERT_TRUE(c.witness);
        EXPECT_FALSE(u.contains(*c.witness));
        EXPECT_FALSE(u.contains(c.witness->complement()));
        break;
      case Kind::indecomposable:
        for (mask_type m = 0; m <= IndexSubset::full_mask(f.index_count()); ++m) {
          EXPECT_NE(u.contains(m), u.contains(u.subset(m).complement()));
        }
        break;
    }
  }
}

TEST(Classify, NeverNeitherForIrreducibleDomains) {
  Rng rng(33);
  int seen = 0;
  for (int t = 0; t < 300; ++t) {
    auto f = random_embedding(rng);
    if (!is_finitely_subdirectly_irreducible(f.domain())) continue;
    ++seen;
    EXPECT_NE(classify(f).kind, Kind::neither);
  }
  EXPECT_GT(seen, 50);
}

TEST(Doubling, SpecExamples) {
  auto d = doubled_embedding(fx::z2_times_point());
  EXPECT_EQ(d.index_count(), 4u);
  auto u = factoring_family(d);
  auto c = classify(u);
  EXPECT_EQ(c.kind, Kind::decomposable);
  EXPECT_TRUE(is_decomposition_witness(u, IndexSubset::of(4, {0, 1})));

  auto dd = doubled_embedding(fx::diagonal_z2());
  EXPECT_EQ(dd.index_count(), 4u);
  EXPECT_EQ(classify(dd).kind, Kind::decomposable);

  Rng rng(34);
  for (int t = 0; t < 50; ++t) {
    auto f = random_embedding(rng);
    auto h = doubled_embedding(f);
    auto hu = factoring_family(h);
    mask_type half = IndexSubset::full_mask(f.index_count());
    EXPECT_TRUE(hu.contains(half));
    EXPECT_TRUE(hu.contains(half << f.index_count()));
  }
}

TEST(DiagonalFactorization, SpecExamples) {
  auto d = fx::diagonal_z2();
  auto g = diagonal_factorization(d, IndexSubset::of(2, {0}));
  EXPECT_EQ(g.values(), (std::vector<element>{0, 1, 2, 3}));
  EXPECT_EQ(compose(diagonal_map(d.domain()), g).values(), d.joint_map().values());

  auto h = doubled_embedding(fx::z2_times_point());
  auto w = IndexSubset::of(4, {0, 1});
  auto gh = diagonal_factorization(h, w);
  EXPECT_EQ(compose(diagonal_map(h.domain()), gh).values(), h.joint_map().values());
  EXPECT_TRUE(is_injective(gh));
  EXPECT_TRUE(is_homomorphism(gh));

  EXPECT_THROW(diagonal_factorization(fx::z2_times_point(), IndexSubset::of(2, {0})),
               precondition_error);
}

TEST(DiagonalFactorization, RoundTripOnRandomDecomposables) {
  Rng rng(35);
  int seen = 0;
  for (int t = 0; t < 200; ++t) {
    auto f = random_embedding(rng, {2, 4, 3});
    auto c = classify(f);
    if (c.kind != Kind::decomposable) continue;
    ++seen;
    auto g = diagonal_factorization(f, *c.witness);
    EXPECT_EQ(compose(diagonal_map(f.domain()), g).values(), f.joint_map().values());
    EXPECT_TRUE(is_injective(g));
    EXPECT_TRUE(is_homomorphism(g));
  }
  EXPECT_GT(seen, 20);
}

TEST(Thinning, SpecExamples) {
  auto d = thin_to_indecomposable(fx::diagonal_z2());
  EXPECT_EQ(d.j0, IndexSubset::of(2, {0}));
  EXPECT_EQ(d.thinned.index_count(), 1u);
  EXPECT_EQ(d.thinned.joint_map().values(), (std::vector<element>{0, 1}));
  EXPECT_EQ(classify(d.thinned).kind, Kind::indecomposable);

  auto t = thin_to_indecomposable(fx::z2_times_point());
  EXPECT_EQ(t.j0, IndexSubset::full(2));
  EXPECT_EQ(t.thinned.index_count(), 2u);

  auto h = thin_to_indecomposable(doubled_embedding(fx::z2_times_point()));
  EXPECT_EQ(h.j0, IndexSubset::of(4, {0}));
  EXPECT_EQ(classify(h.thinned).kind, Kind::indecomposable);
}

TEST(Thinning, Preconditions) {
  EXPECT_THROW(thin_to_indecomposable(fx::z6_crt()), precondition_error);
  auto p = fx::one_point();
  EXPECT_THROW(thin_to_indecomposable(ProductEmbedding(p, {identity_map(p)})),
               precondition_error);
}

TEST(Thinning, RestrictToRejectsNonMembers) {
  EXPECT_THROW(fx::z2_times_point().restrict_to(IndexSubset::of(2, {1})), precondition_error);
}

TEST(FourSet, HoldsForIndecomposableIrreducible) {
  EXPECT_FALSE(find_four_set_violation(factoring_family(fx::z2_times_point())));
  EXPECT_TRUE(find_four_set_violation(factoring_family(fx::diagonal_z2())));
}

TEST(IntersectionEquation, HoldsOnMembers) {
  auto f = fx::z2_times_point();
  auto u = factoring_family(f);
  for (auto j : u.masks()) {
    for (auto k : u.masks()) {
      EXPECT_TRUE(check_intersection_factorization(f, u.subset(j), u.subset(k)));
    }
  }
}
