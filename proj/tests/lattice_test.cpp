#include <orthocusp/discriminant.hpp>
#include <orthocusp/lattice.hpp>

#include <gtest/gtest.h>

#include <memory>
#include <random>

using namespace orthocusp;

namespace {

std::shared_ptr<const GramLattice> share(GramLattice l) { return std::make_shared<const GramLattice>(std::move(l)); }

IntVector unit(std::size_t n, std::size_t i, const Int& k = 1) {
  IntVector v(n);
  v[i] = k;
  return v;
}

IntVector plus(IntVector a, const IntVector& b) {
  for (std::size_t i = 0; i < a.size(); ++i) a[i] += b[i];
  return a;
}

/// Random word in the transvections t(e, a), e in {e1, f1, e2, f2}, a in the
/// span of the other hyperbolic plane and the two rank one summands.
IntMatrix random_transvection_word(std::mt19937_64& rng, const IntMatrix& gram, int length) {
  std::uniform_int_distribution<int> pick(0, 3), coef(-2, 2);
  IntMatrix g = IntMatrix::identity(6);
  for (int s = 0; s < length; ++s) {
    const int which = pick(rng);
    const std::size_t plane = which / 2, other = 1 - plane;
    IntVector a(6);
    a[2 * other] = coef(rng);
    a[2 * other + 1] = coef(rng);
    a[4] = coef(rng);
    a[5] = coef(rng);
    g = eichler_transvection(gram, unit(6, which), a) * g;
  }
  return g;
}

}  // namespace

TEST(MakeLattice, HyperbolicPlane) {
  EXPECT_EQ(make_lattice("U").gram(), (IntMatrix{{0, 1}, {1, 0}}));
}

TEST(MakeLattice, L62HasDeterminantTwelve) {
  const GramLattice l = make_lattice("U+U+<-6>+<-2>");
  EXPECT_EQ(l.rank(), 6u);
  EXPECT_EQ(l.det(), 12);  // (-1)^2 * (-6) * (-2)
  EXPECT_EQ(l, lattices::L(6, 2));
  EXPECT_EQ(make_lattice("L(6,2)"), l);
  EXPECT_EQ(make_lattice("2U + <-6> + <-2>"), l);
}

TEST(MakeLattice, A2Negative) {
  const GramLattice a = make_lattice("A2(-1)");
  EXPECT_EQ(a.gram(), (IntMatrix{{-2, 1}, {1, -2}}));
  EXPECT_EQ(a.det(), 3);
}

TEST(MakeLattice, Errors) {
  EXPECT_THROW(make_lattice("<3>"), OddLattice);
  EXPECT_THROW(make_lattice("U+"), ParseError);
  EXPECT_THROW(make_lattice("V"), ParseError);
  EXPECT_THROW(make_lattice(""), ParseError);
  EXPECT_THROW(GramLattice(IntMatrix{{0, 0}, {0, 0}}, {2}, {"a", "b"}), Error);
}

TEST(InnerProduct, StandardBasisOfU) {
  const auto u = share(lattices::hyperbolic());
  const auto e = LatticeVector::basis(u, 0), f = LatticeVector::basis(u, 1);
  EXPECT_EQ(inner_product(e, f), 1);
  EXPECT_EQ(inner_product(e, e), 0);
  const Int d = 7;
  const LatticeVector h = e + d * f;
  EXPECT_EQ(inner_product(h, h), 2 * d);
  EXPECT_EQ(inner_product(LatticeVector(u, {0, 0}), h), 0);
  EXPECT_THROW(inner_product(e, LatticeVector::basis(share(lattices::L(6, 2)), 0)), ParentMismatch);
}

TEST(Divisor, Examples) {
  const auto l = share(lattices::L(6, 2));
  EXPECT_EQ(divisor(LatticeVector::basis(l, 0)), 1);
  EXPECT_EQ(divisor(LatticeVector::basis(l, 4)), 6);
  const auto k = share(lattices::kummer(3));
  const LatticeVector h = LatticeVector::basis(k, 4) + Int(25) * LatticeVector::basis(k, 5);
  EXPECT_EQ(divisor(h), 1);
  EXPECT_THROW(divisor(LatticeVector(l, IntVector(6))), ZeroVector);
}

TEST(Divisor, DividesNorm) {
  std::mt19937_64 rng(31);
  std::uniform_int_distribution<int> c(-9, 9);
  const auto l = share(lattices::L(6, 50));
  for (int t = 0; t < 300; ++t) {
    IntVector v(6);
    for (auto& x : v) x = c(rng);
    const LatticeVector lv(l, v);
    if (lv.is_zero()) continue;
    EXPECT_EQ(inner_product(lv, lv) % divisor(lv), 0);
  }
}

TEST(OrthogonalComplement, SplitPolarisation) {
  const auto k = share(lattices::kummer(3));
  const Int d = 5;
  IntMatrix h(1, 7);
  h(0, 4) = 1;
  h(0, 5) = d;
  const Sublattice perp = orthogonal_complement({k, h});
  ASSERT_EQ(perp.rank(), 6u);
  const GramLattice pl(perp.gram(), {6}, std::vector<std::string>(6, "x"));
  EXPECT_EQ(abs(pl.det()), abs(lattices::L(6, 2 * d).det()));
  EXPECT_TRUE(is_isomorphic(discriminant_group(pl), discriminant_group(lattices::L(2 * 3, 2 * d))));
}

TEST(OrthogonalComplement, FullLatticeAndIsotropicPlane) {
  const auto l = share(lattices::L(6, 50));
  EXPECT_EQ(orthogonal_complement({l, IntMatrix::identity(6)}).rank(), 0u);
  IntMatrix e(2, 6);
  e(0, 0) = 1;
  e(1, 2) = 1;
  const Sublattice ep = orthogonal_complement({l, e});
  EXPECT_EQ(ep.rank(), 4u);
  EXPECT_TRUE(contains(ep, {l, e}));
  EXPECT_TRUE(contains(orthogonal_complement(ep), {l, e}));
  EXPECT_TRUE(contains({l, e}, orthogonal_complement(ep)));
}

TEST(OrthogonalComplement, DoublePerpContainsSublattice) {
  std::mt19937_64 rng(41);
  std::uniform_int_distribution<int> c(-4, 4);
  const auto l = share(lattices::L(6, 2));
  for (int t = 0; t < 40; ++t) {
    IntMatrix s(2, 6);
    for (std::size_t i = 0; i < 2; ++i)
      for (std::size_t j = 0; j < 6; ++j) s(i, j) = c(rng);
    if (smith_normal_form(s).rank() < 2) continue;
    const Sublattice sub{l, s};
    const Sublattice pp = orthogonal_complement(orthogonal_complement(sub));
    EXPECT_TRUE(contains(pp, sub));
    EXPECT_TRUE(contains(pp, sub.saturation()));
    EXPECT_TRUE(contains(sub.saturation(), pp));
  }
}

TEST(PerpOfPolarisation, SplitCaseMatchesL) {
  const GramLattice p = perp_of_polarisation(3, 5, 1, 0);
  EXPECT_EQ(p.det(), lattices::L(6, 10).det());
  EXPECT_TRUE(is_isomorphic(discriminant_group(p), discriminant_group(lattices::L(6, 10))));
}

TEST(PerpOfPolarisation, NonSplitBlock) {
  const GramLattice p = perp_of_polarisation(3, 25, 1, 1);
  EXPECT_EQ(p.gram()(4, 4), -2 * 28);
  const IntMatrix b = p.gram().block(4, 4, 2, 2);
  EXPECT_EQ(b(0, 0) * b(1, 1) - b(0, 1) * b(1, 0), 12 * 25);
  EXPECT_THROW(perp_of_polarisation(3, 1, 2, 2), BadResidue);
  EXPECT_THROW(perp_of_polarisation(3, 1, 4, 1), BadResidue);
  EXPECT_THROW(perp_of_polarisation(3, 2, 2, 1), BadResidue);
}

TEST(PerpOfPolarisation, DiscriminantMatchesConcreteComplement) {
  // h = f (e1 + b f1) + c k has (h, h) = 2d and div(h) = f.
  struct Case { int n1, d, f, c; };
  for (const Case cs : {Case{3, 25, 1, 1}, Case{3, 1, 2, 1}, Case{3, 6, 3, 1}, Case{4, 4, 2, 1}, Case{6, 10, 4, 1}}) {
    const auto k = share(lattices::kummer(cs.n1));
    const Int b = (Int(cs.d) + Int(cs.c) * cs.c * cs.n1) / (cs.f * cs.f);
    IntMatrix h(1, 7);
    h(0, 4) = cs.f;
    h(0, 5) = cs.f * b;
    h(0, 6) = cs.c;
    const LatticeVector hv(k, h.row(0));
    ASSERT_EQ(inner_product(hv, hv), 2 * cs.d);
    ASSERT_EQ(divisor(hv), cs.f);
    const Sublattice perp = orthogonal_complement({k, h});
    const GramLattice pl(perp.gram(), {6}, std::vector<std::string>(6, "x"));
    const GramLattice expected = perp_of_polarisation(cs.n1, cs.d, cs.f, cs.c);
    EXPECT_EQ(pl.det(), expected.det());
    EXPECT_TRUE(is_isomorphic(discriminant_group(pl), discriminant_group(expected)))
        << "n+1=" << cs.n1 << " d=" << cs.d << " f=" << cs.f;
  }
}

TEST(StableOrthogonalGroup, Membership) {
  const Int d = 25;
  const IntMatrix gram = lattices::L(6, 2 * d).gram();
  EXPECT_TRUE(is_in_O_L_h(IntMatrix::identity(6), d));
  EXPECT_FALSE(is_in_O_L_h(-IntMatrix::identity(6), d));
  EXPECT_TRUE(is_in_O_L_h(eichler_transvection(gram, unit(6, 0), unit(6, 5)), d));
  EXPECT_TRUE(is_in_O_L_h(eichler_transvection(gram, unit(6, 0), unit(6, 4)), d));
  IntMatrix not_isometry = IntMatrix::identity(6);
  not_isometry(0, 1) = 1;
  EXPECT_THROW(is_in_O_L_h(not_isometry, d), NotAnIsometry);
}

TEST(Embedding, IndexAndImages) {
  const Int p = 5;
  EXPECT_EQ(smith_normal_form(l62_embedding(p)).divisors(), (std::vector<Int>{1, 1, 1, 1, 1, 5}));
  EXPECT_EQ(embed_in_L62(unit(6, 0), p), unit(6, 0));
  const IntVector k = embed_in_L62(unit(6, 5), p);
  EXPECT_EQ(k, unit(6, 5, p));
  EXPECT_EQ(bilinear(lattices::L(6, 2).gram(), k, k), -2 * p * p);
}

TEST(Embedding, TransvectionWordsExtend) {
  const Int p = 5;
  const IntMatrix gram = lattices::L(6, 2 * p * p).gram();
  const IntMatrix big = lattices::L(6, 2).gram();
  EXPECT_EQ(extend_to_L62(IntMatrix::identity(6), p), IntMatrix::identity(6));
  const IntMatrix t = eichler_transvection(gram, unit(6, 2), unit(6, 4));
  EXPECT_EQ(congruence(big, extend_to_L62(t, p)), big);
  std::mt19937_64 rng(55);
  for (int trial = 0; trial < 200; ++trial) {
    const IntMatrix g = random_transvection_word(rng, gram, 1 + trial % 6);
    ASSERT_TRUE(is_in_O_L_h(g, p * p));
    const IntMatrix ext = extend_to_L62(g, p);
    EXPECT_EQ(congruence(big, ext), big);
  }
}

TEST(Embedding, ReflectionOutsideStableGroupDoesNotExtend) {
  // -1 on the <-2p^2> summand is an isometry not fixing v* mod L.
  const Int p = 3;
  IntMatrix g = IntMatrix::identity(6);
  g(5, 5) = -1;
  EXPECT_FALSE(is_in_O_L_h(g, p * p));
  EXPECT_NO_THROW(extend_to_L62(g, p));
  IntMatrix mixed = IntMatrix::identity(6);
  const IntMatrix gram = lattices::L(6, 2 * p * p).gram();
  mixed = eichler_transvection(gram, unit(6, 0), plus(unit(6, 5), unit(6, 2)));
  EXPECT_TRUE(is_in_O_L_h(mixed, p * p));
  EXPECT_NO_THROW(extend_to_L62(mixed, p));
}
