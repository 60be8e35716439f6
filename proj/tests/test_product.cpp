#include <gtest/gtest.h>

#include "fixtures.hpp"

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

TEST(DirectProduct, TwoFactors) {
  auto p = direct_product(fam({2, 2}));
  EXPECT_EQ(p.algebra.size(), 4u);
  ASSERT_EQ(p.projections.size(), 2u);
  EXPECT_EQ(kernel(p.projections[0]).to_string(), "{01|23}");
  EXPECT_EQ(kernel(p.projections[1]).to_string(), "{02|13}");
  for (auto const& proj : p.projections) EXPECT_TRUE(is_homomorphism(proj));
}

TEST(DirectProduct, SingleFactorIsIdentity) {
  auto p = direct_product(fam({3}));
  EXPECT_EQ(p.algebra, fx::z(3));
  EXPECT_EQ(p.projections[0].values(), identity_map(fx::z(3)).values());
}

TEST(DirectProduct, EmptyFamilyIsOnePoint) {
  auto p = direct_product(zsig(), {});
  EXPECT_EQ(p.algebra.size(), 1u);
  EXPECT_TRUE(p.projections.empty());
  EXPECT_THROW(direct_product(std::vector<FiniteAlgebra>{}), input_error);
}

TEST(DirectProduct, SignatureMismatchAndCap) {
  std::vector<FiniteAlgebra> mixed{fx::z(2), fx::semilattice(2)};
  EXPECT_THROW(direct_product(mixed), signature_mismatch);
  Caps caps;
  caps.max_product_size = 10;
  EXPECT_THROW(direct_product(fam({2, 3, 2}), caps), cap_exceeded);
}

TEST(SubproductProjection, SpecExamples) {
  auto f = fam({2, 2});
  auto full = subproduct_projection(zsig(), f, IndexSubset::full(2));
  EXPECT_EQ(full.values(), (std::vector<element>{0, 1, 2, 3}));
  auto none = subproduct_projection(zsig(), f, IndexSubset::empty(2));
  EXPECT_EQ(none.codomain().size(), 1u);
  EXPECT_TRUE(kernel(none).is_coarsest());
  auto first = subproduct_projection(zsig(), f, IndexSubset::of(2, {0}));
  EXPECT_EQ(first.values(), (std::vector<element>{0, 0, 1, 1}));
  EXPECT_EQ(kernel(first).to_string(), "{01|23}");
  EXPECT_THROW(subproduct_projection(zsig(), f, IndexSubset::full(3)), input_error);
}

TEST(SubproductProjection, CompositionLaw) {
  auto f = fam({2, 3, 2, 2, 3});
  std::size_t n = f.size();
  mask_type full = IndexSubset::full_mask(n);
  for (mask_type k = 0; k <= full; ++k) {
    IndexSubset kk(n, k);
    auto p_ik = subproduct_projection(zsig(), f, kk);
    EXPECT_TRUE(is_homomorphism(p_ik));
    auto sub = select_factors(f, kk);
    for (mask_type j = k;; j = (j - 1) & k) {
      IndexSubset jj(n, j);
      auto p_ij = subproduct_projection(zsig(), f, jj);
      auto p_kj = subproduct_projection(zsig(), sub, relative_subset(kk, jj));
      EXPECT_EQ(compose(p_ik, p_kj).values(), p_ij.values());
      if (j == 0) break;
    }
  }
}

TEST(DisjointUnion, SpecExamples) {
  auto a = disjoint_union_iso(zsig(), fam({2}), fam({2}));
  EXPECT_EQ(a.values(), (std::vector<element>{0, 1, 2, 3}));
  EXPECT_TRUE(is_homomorphism(a));

  auto b = disjoint_union_iso(zsig(), fam({2, 3}), {});
  EXPECT_EQ(b.domain().size(), 6u);
  EXPECT_EQ(b.codomain().size(), 6u);
  EXPECT_TRUE(is_injective(b) && is_surjective(b) && is_homomorphism(b));

  auto c = disjoint_union_iso(zsig(), fam({2, 4}), fam({2}));
  EXPECT_EQ(c.domain().size(), 16u);
  EXPECT_TRUE(is_injective(c) && is_surjective(c) && is_homomorphism(c));
}

TEST(DisjointUnion, BijectiveHomomorphismOnRandomFamilies) {
  Rng rng(21);
  for (int t = 0; t < 30; ++t) {
    std::vector<FiniteAlgebra> left, right;
    for (std::size_t i = rng.below(3); i > 0; --i) left.push_back(fx::z(rng.between(1, 3)));
    for (std::size_t i = rng.below(3); i > 0; --i) right.push_back(fx::z(rng.between(1, 3)));
    auto d = disjoint_union_iso(zsig(), left, right);
    EXPECT_TRUE(is_injective(d) && is_surjective(d) && is_homomorphism(d));
  }
}

TEST(CoordinatePermutation, ReordersCoordinates) {
  auto f = fam({2, 3});
  std::vector<std::size_t> order{1, 0};
  auto m = coordinate_permutation(zsig(), f, order);
  EXPECT_TRUE(is_injective(m) && is_surjective(m) && is_homomorphism(m));
  // source element (z3 = 2, z2 = 1) is 2*2+1 = 5, target (1, 2) is 1*3+2 = 5
  EXPECT_EQ(m(5), 5u);
  // source (1, 0) = 2 maps to target (0, 1) = 1
  EXPECT_EQ(m(2), 1u);
  std::vector<std::size_t> bad{0, 0};
  EXPECT_THROW(coordinate_permutation(zsig(), f, bad), input_error);
}

TEST(DiagonalMap, SpecExamples) {
  auto d2 = diagonal_map(fx::z(2));
  EXPECT_EQ(d2.values(), (std::vector<element>{0, 3}));
  auto d1 = diagonal_map(fx::one_point());
  EXPECT_EQ(d1.values(), (std::vector<element>{0}));
  auto d4 = diagonal_map(fx::z(4));
  EXPECT_TRUE(is_homomorphism(d4));
  EXPECT_TRUE(kernel(d4).is_finest());
}

TEST(PairingAndProductMap, Componentwise) {
  auto p = pairing(fx::mod_map(4, 2), identity_map(fx::z(4)));
  EXPECT_TRUE(is_homomorphism(p));
  EXPECT_EQ(p(3), 1u * 4 + 3);
  auto q = product_map(fx::mod_map(4, 2), identity_map(fx::z(3)));
  EXPECT_TRUE(is_homomorphism(q));
  EXPECT_EQ(q.domain().size(), 12u);
  EXPECT_EQ(q(3 * 3 + 2), 1u * 3 + 2);
}
