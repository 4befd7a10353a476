#include <orthocusp/isotropic.hpp>

#include <gtest/gtest.h>

#include <algorithm>
#include <memory>
#include <random>
#include <set>

using namespace orthocusp;

namespace {

std::shared_ptr<const GramLattice> lattice(const Int& two_y) { return std::make_shared<const GramLattice>(lattices::L(6, two_y)); }

IsotropicPlane seed(const std::shared_ptr<const GramLattice>& l, const Int& two_y, const std::string& label) {
  for (const auto& [name, rows] : seed_planes(two_y))
    if (name == label) return IsotropicPlane(l, rows);
  throw Error("no seed " + label);
}

bool is_block_form(const AdaptedBasis& ab) {
  const IntMatrix& q = ab.gram;
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t j = 0; j < 4; ++j)
      if (q(i, j) != 0) return false;
  return ab.a(0, 1) == 0 && ab.a(1, 0) == 0 && ab.a1 > 0 && ab.a1a2 % ab.a1 == 0 && is_unimodular(ab.basis);
}

}  // namespace

TEST(IsotropicPlane, Validation) {
  const auto l = lattice(2);
  EXPECT_NO_THROW(IsotropicPlane(l, IntMatrix{{1, 0, 0, 0, 0, 0}, {0, 0, 1, 0, 0, 0}}));
  EXPECT_THROW(IsotropicPlane(l, IntMatrix{{1, 1, 0, 0, 0, 0}, {0, 0, 1, 0, 0, 0}}), NotIsotropic);
  EXPECT_THROW(IsotropicPlane(l, IntMatrix{{2, 0, 0, 0, 0, 0}, {0, 0, 1, 0, 0, 0}}), NotPrimitive);
  EXPECT_THROW(IsotropicPlane(l, IntMatrix{{1, 0, 0, 0, 0, 0}, {2, 0, 0, 0, 0, 0}}), WrongRank);
  EXPECT_THROW(IsotropicPlane(l, IntMatrix{{1, 0, 0, 0, 0, 0}}), WrongRank);
}

TEST(AdaptedBasis, CuspTypesOfL650) {
  const Int p = 5, two_y = 2 * p * p;
  const auto l = lattice(two_y);
  struct Row {
    const char* label;
    Int a1a2, det_b;
  };
  for (const Row& r : {Row{"trivial", 1, 12 * p * p}, Row{"x1", p, 12}, Row{"x2", 2 * p, 3}, Row{"order2", 2, 3 * p * p}}) {
    const AdaptedBasis ab = adapted_basis(seed(l, two_y, r.label));
    EXPECT_TRUE(is_block_form(ab)) << r.label;
    EXPECT_EQ(ab.a1, 1) << r.label;
    EXPECT_EQ(ab.a1a2, r.a1a2) << r.label;
    EXPECT_EQ(determinant(ab.b), r.det_b) << r.label;
  }
  const AdaptedBasis trivial = adapted_basis(seed(l, two_y, "trivial"));
  EXPECT_TRUE(binary_isometry(trivial.b, IntMatrix{{-6, 0}, {0, -50}}).has_value());
}

TEST(AdaptedBasis, DivisorsMatchDiscriminantQuotient) {
  for (const Int two_y : {Int(2), Int(50), Int(98)}) {
    const auto l = lattice(two_y);
    const DiscriminantData dd = discriminant_data(*l);
    std::mt19937_64 rng(static_cast<std::uint64_t>(two_y) + 7);
    for (const auto& [label, rows] : seed_planes(two_y))
      for (int t = 0; t < 10; ++t) {
        const IsotropicPlane e = random_plane(l, rows, rng);
        const AdaptedBasis ab = adapted_basis(e);
        ASSERT_TRUE(is_block_form(ab)) << label;
        const FqfSubgroup h = e.he(dd);
        const auto expected = divisor_pair(quotient_elementary_divisors(dd.form, subgroup_perp(dd.form, h)));
        EXPECT_EQ(ab.a1, expected.first) << label;
        EXPECT_EQ(ab.a1a2, expected.second) << label;
        EXPECT_EQ(Int(h.order()), ab.a1 * ab.a1a2) << label;
      }
  }
}

TEST(AdaptedBasis, PerpQuotientMatchesHeQuotient) {
  for (const Int two_y : {Int(2), Int(50)}) {
    const auto l = lattice(two_y);
    const DiscriminantData dd = discriminant_data(*l);
    std::mt19937_64 rng(static_cast<std::uint64_t>(two_y) * 31);
    const auto seeds = seed_planes(two_y);
    for (int t = 0; t < 20; ++t) {
      const IsotropicPlane e = random_plane(l, seeds[t % seeds.size()].second, rng);
      const FiniteQuadraticForm lhs = discriminant_group(GramLattice(perp_quotient_gram(e)));
      const FiniteQuadraticForm rhs = quotient_form(dd.form, e.he(dd));
      EXPECT_TRUE(is_isomorphic(lhs, rhs)) << lhs.describe() << " vs " << rhs.describe();
    }
  }
}

TEST(RationalBlockBasis, AlreadyBlockFormIsIdentity) {
  IntMatrix q(6, 6);
  q.set_block(0, 4, IntMatrix::identity(2));
  q.set_block(4, 0, IntMatrix::identity(2));
  q.set_block(2, 2, IntMatrix{{-6, 0}, {0, -2}});
  const RationalBlockBasis r = rational_block_basis(detail::split_blocks(IntMatrix::identity(6), q));
  EXPECT_EQ(r.m, RatMatrix::identity(6));
}

TEST(RationalBlockBasis, ClearsCAndDExactly) {
  for (const Int two_y : {Int(2), Int(50)}) {
    const auto l = lattice(two_y);
    std::mt19937_64 rng(404 + static_cast<std::uint64_t>(two_y));
    for (const auto& [label, rows] : seed_planes(two_y))
      for (int t = 0; t < 10; ++t) {
        const AdaptedBasis ab = adapted_basis(random_plane(l, rows, rng));
        const RationalBlockBasis r = rational_block_basis(ab);
        const RatMatrix& g = r.gram;
        EXPECT_TRUE(g.block(2, 4, 2, 2).is_zero() && g.block(4, 4, 2, 2).is_zero()) << label;
        EXPECT_EQ(g.block(0, 4, 2, 2), to_rational(ab.a));
        EXPECT_EQ(r.lattice_rows * to_rational(l->gram()) * r.lattice_rows.transpose(), g);
        // Denominators come from B^{-1} and the halving in R'.
        EXPECT_EQ(Int(2) * ab.a1a2 * determinant(ab.b) % common_denominator(r.m), 0) << label;
      }
  }
}

TEST(BinaryIsometry, DistinguishesTheTwoDeterminantTwelveForms) {
  const IntMatrix diag{{-6, 0}, {0, -2}}, other{{-4, -2}, {-2, -4}};
  EXPECT_FALSE(binary_isometry(diag, other).has_value());
  const IntMatrix x{{3, 5}, {1, 2}};
  const IntMatrix conj = x * diag * x.transpose();
  const auto y = binary_isometry(conj, diag);
  ASSERT_TRUE(y.has_value());
  EXPECT_EQ(*y * conj * y->transpose(), diag);
}

TEST(NormalForms, Catalogue) {
  const auto all = enumerate_normal_forms();
  ASSERT_EQ(all.size(), 10u);
  for (std::size_t i = 0; i < all.size(); ++i) {
    const IntMatrix q = all[i].gram();
    EXPECT_EQ(determinant(q), 12) << all[i].describe();
    for (std::size_t r = 0; r < 6; ++r) EXPECT_EQ(q(r, r) % 2, 0);
    for (std::size_t j = 0; j < i; ++j) EXPECT_FALSE(all[i] == all[j]);
  }
  EXPECT_EQ(2 * all.size(), 20u);
}

TEST(NormalForms, Seeds) {
  const auto l = lattice(2);
  const NormalFormResult t = normal_form_L62(seed(l, 2, "trivial"));
  EXPECT_EQ(t.cls.he_tag, HeTag::Trivial);
  EXPECT_EQ(t.cls.p, (IntMatrix{{0, 1}, {1, 0}}));
  EXPECT_TRUE(t.cls.cm.is_zero() && t.cls.dm.is_zero());
  const NormalFormResult o = normal_form_L62(seed(l, 2, "order2"));
  EXPECT_EQ(o.cls.he_tag, HeTag::Order2);
  EXPECT_EQ(o.cls.b, (IntMatrix{{-2, -1}, {-1, -2}}));
  EXPECT_EQ(o.cls.p, (IntMatrix{{0, 1}, {2, 0}}));
  EXPECT_THROW(normal_form_L62(seed(lattice(50), 50, "trivial")), ParentMismatch);
}

TEST(NormalForms, Idempotent) {
  const auto l = lattice(2);
  for (const auto& [label, rows] : seed_planes(2)) {
    const NormalFormResult first = normal_form_L62(IsotropicPlane(l, rows));
    const NormalFormResult again = normal_form_L62(IsotropicPlane(l, first.base_change.block(0, 0, 2, 6)));
    EXPECT_EQ(again.cls, first.cls) << label;
  }
}

TEST(NormalForms, RandomPlanes) {
  const auto l = lattice(2);
  const auto catalogue = enumerate_normal_forms();
  std::mt19937_64 rng(2024);
  const auto seeds = seed_planes(2);
  std::set<std::pair<int, int>> seen;
  for (int t = 0; t < 200; ++t) {
    const auto& [label, rows] = seeds[t % 2];
    const IsotropicPlane e = random_plane(l, rows, rng, 8);
    const NormalFormResult r = normal_form_L62(e);
    ASSERT_TRUE(is_unimodular(r.base_change));
    ASSERT_EQ(r.base_change * l->gram() * r.base_change.transpose(), r.cls.gram());
    EXPECT_NE(std::find(catalogue.begin(), catalogue.end(), r.cls), catalogue.end());
    EXPECT_EQ(r.cls.he_tag, label == "trivial" ? HeTag::Trivial : HeTag::Order2);
    if (r.cls.he_tag == HeTag::Order2) seen.insert({r.cls.c, r.cls.d});
  }
  for (const auto& [c, d] : seen) {
    EXPECT_EQ(c, 0);
    EXPECT_LE(d, 1);
  }
}

TEST(BoundaryBound, Values) {
  EXPECT_EQ(boundary_bound(5), 504000);
  EXPECT_EQ(boundary_bound(7), 2696960);
  EXPECT_EQ(boundary_bound(11), Int(160) * (161051 + 121));
  EXPECT_EQ(boundary_bound(5, IndexConstant::Statement), 1008000);
  EXPECT_THROW(boundary_bound(3), BadPrime);
}

TEST(NormalForms, CatalogueEntriesWithTheDiscriminantOfL62) {
  // The catalogue is an upper bound: only five of its Gram matrices have
  // the discriminant form of L(6, 2) at all.
  const FiniteQuadraticForm ref = discriminant_group(lattices::L(6, 2));
  std::set<std::pair<int, int>> realised;
  for (const auto& k : enumerate_normal_forms()) {
    if (!is_isomorphic(discriminant_group(GramLattice(k.gram())), ref)) continue;
    if (k.he_tag == HeTag::Order2) realised.insert({k.c, k.d});
  }
  EXPECT_EQ(realised, (std::set<std::pair<int, int>>{{0, 1}, {1, 0}, {1, 2}, {2, 1}}));
}
