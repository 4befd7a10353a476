#include <orthocusp/discriminant.hpp>

#include <gtest/gtest.h>

#include <random>

using namespace orthocusp;

namespace {

FqfSubgroup span(const FiniteQuadraticForm& d, std::vector<FqfElement> gens) { return generate_subgroup(d, gens); }

std::vector<FqfElement> elements_of(const FiniteQuadraticForm& d, const FqfSubgroup& h) {
  std::vector<FqfElement> out;
  for (auto idx : h.elements) out.push_back(d.element(idx));
  return out;
}

}  // namespace

TEST(DiscriminantGroup, L62) {
  const auto d = discriminant_group(lattices::L(6, 2));
  EXPECT_EQ(d.orders(), (std::vector<std::int64_t>{6, 2}));
  EXPECT_EQ(d.q_generator(0), Rat(11, 6));  // -1/6 mod 2
  EXPECT_EQ(d.q_generator(1), Rat(3, 2));   // -1/2 mod 2
  EXPECT_EQ(d.describe(), "((-1/6) + (-1/2), C6 + C2)");
}

TEST(DiscriminantGroup, UnimodularIsTrivial) {
  const auto d = discriminant_group(lattices::hyperbolic());
  EXPECT_EQ(d.size(), 1u);
  EXPECT_EQ(d.num_generators(), 0u);
  EXPECT_EQ(isotropic_elements(d).size(), 1u);
}

TEST(DiscriminantGroup, L6TwoP2) {
  const auto d = discriminant_group(lattices::L(6, 50));
  EXPECT_EQ(d.orders(), (std::vector<std::int64_t>{6, 50}));
  EXPECT_EQ(d.size(), 300u);
}

TEST(DiscriminantGroup, OrderIsAbsDeterminant) {
  for (const char* expr : {"U+<-6>+<-2>", "2U+A2(-1)", "U(3)+<4>", "U(2)+U(6)+<-10>", "A2(2)+<-4>"}) {
    const GramLattice l = make_lattice(expr);
    EXPECT_EQ(Int(discriminant_group(l).size()), abs(l.det())) << expr;
  }
}

TEST(DiscriminantGroup, CoordinatesRoundTrip) {
  const GramLattice l = lattices::L(6, 50);
  const DiscriminantData dd = discriminant_data(l);
  dd.form.for_each([&](const FqfElement& x) { EXPECT_EQ(dd.coordinates(dd.lift(x)), x); });
}

TEST(QuadraticForm, PolarisationAndScalingExhaustive) {
  for (const char* expr : {"L(6,2)", "L(6,18)", "U(2)+A2(-1)", "<-4>+<-12>+U(3)"}) {
    const auto d = discriminant_group(make_lattice(expr));
    const auto all = elements_of(d, whole_group(d));
    for (const auto& x : all) {
      for (std::int64_t n = -3; n <= 3; ++n) EXPECT_EQ(d.q(d.scale(x, n)), mod(Rat(n * n) * d.q(x), 2));
      for (const auto& y : all) {
        const Rat lhs = mod(Rat(d.q(d.add(x, y)) - d.q(x) - d.q(y)), 2);
        EXPECT_EQ(lhs, mod(Rat(2) * d.b(x, y), 2)) << expr;
        EXPECT_EQ(d.b(x, y), d.b(y, x));
      }
    }
  }
}

TEST(QuadraticForm, MatchesGramOnLifts) {
  const GramLattice l = make_lattice("U(2)+A2(-1)+<-6>");
  const DiscriminantData dd = discriminant_data(l);
  const RatMatrix g = to_rational(l.gram());
  std::mt19937_64 rng(3);
  const auto all = elements_of(dd.form, whole_group(dd.form));
  for (int t = 0; t < 200; ++t) {
    const auto& x = all[rng() % all.size()];
    const auto& y = all[rng() % all.size()];
    const auto lx = dd.lift(x), ly = dd.lift(y);
    EXPECT_EQ(dd.form.q(x), mod(bilinear(g, lx, lx), 2));
    EXPECT_EQ(dd.form.b(x, y), mod(bilinear(g, lx, ly), 1));
  }
}

TEST(IsotropicElements, L62) {
  const auto d = discriminant_group(lattices::L(6, 2));
  EXPECT_EQ(isotropic_elements(d), (std::vector<FqfElement>{{0, 0}, {3, 1}}));
}

TEST(IsotropicElements, L6TwoP2AtFive) {
  const auto d = discriminant_group(lattices::L(6, 50));
  const auto iso = isotropic_elements(d);
  std::vector<FqfElement> expected;
  for (int k = 0; k < 5; ++k) expected.push_back({0, 10 * k});
  for (int k = 0; k < 5; ++k) expected.push_back({3, 5 * (2 * k + 1)});
  std::sort(expected.begin(), expected.end());
  EXPECT_EQ(iso, expected);
}

TEST(IsotropicElements, CapIsEnforced) {
  const auto d = discriminant_group(lattices::L(6, 50));
  EXPECT_THROW(isotropic_elements(d, 100), GroupTooLarge);
}

TEST(Census, L62) {
  const auto d = discriminant_group(lattices::L(6, 2));
  const auto c = isotropic_subgroup_census(d);
  ASSERT_EQ(c.size(), 2u);
  EXPECT_EQ(c[0].subgroup.order(), 1u);
  EXPECT_EQ(c[1].subgroup, span(d, {{3, 1}}));
  EXPECT_FALSE(c[1].primitive);
}

TEST(Census, L6TwoP2) {
  for (std::int64_t p : {3, 5, 7}) {
    const auto d = discriminant_group(lattices::L(6, 2 * p * p));
    const auto c = isotropic_subgroup_census(d);
    const FqfSubgroup x1 = span(d, {{0, 2 * p}}), x2 = span(d, {{3, p}});
    const FqfSubgroup both = span(d, {{0, 2 * p}, {3, p}});
    // <x1, x2> is cyclic: 2 x2 = x1.
    EXPECT_EQ(both, x2);
    std::vector<FqfSubgroup> primitive, other;
    for (const auto& e : c) (e.primitive ? primitive : other).push_back(e.subgroup);
    EXPECT_EQ(primitive, (std::vector<FqfSubgroup>{x1, x2})) << "p=" << p;
    // The remaining subgroups: {0} and the order 2 subgroup <(3, p^2)>.
    EXPECT_EQ(other, (std::vector<FqfSubgroup>{span(d, {}), span(d, {{3, p * p}})})) << "p=" << p;
    for (const auto& e : c) EXPECT_LE(e.rank, 1u);
  }
}

TEST(SubgroupPerp, L6TwoP2AtFive) {
  const std::int64_t p = 5;
  const auto d = discriminant_group(lattices::L(6, 2 * p * p));
  EXPECT_EQ(subgroup_perp(d, span(d, {{0, 2 * p}})), span(d, {{1, 0}, {0, p}}));
  EXPECT_EQ(subgroup_perp(d, span(d, {{0, 2 * p}})).order(), 60u);
  EXPECT_EQ(subgroup_perp(d, span(d, {{3, p}})), span(d, {{1, p}}));
  EXPECT_EQ(subgroup_perp(d, span(d, {{3, p}})).order(), 30u);
  EXPECT_EQ(subgroup_perp(d, span(d, {})).order(), d.size());
}

TEST(SubgroupPerp, DoublePerpIsIdentity) {
  for (const char* expr : {"L(6,2)", "L(6,18)", "L(6,50)", "U(2)+A2(-1)"}) {
    const auto d = discriminant_group(make_lattice(expr));
    for (const auto& e : isotropic_subgroup_census(d))
      EXPECT_EQ(subgroup_perp(d, subgroup_perp(d, e.subgroup)), e.subgroup) << expr;
  }
}

TEST(QuotientDivisors, IsotropicCases) {
  const std::int64_t p = 5;
  const auto d = discriminant_group(lattices::L(6, 2 * p * p));
  auto pair_for = [&](const FqfSubgroup& h) {
    return divisor_pair(quotient_elementary_divisors(d, subgroup_perp(d, h)));
  };
  EXPECT_EQ(pair_for(span(d, {})), (std::pair<Int, Int>{1, 1}));
  EXPECT_EQ(pair_for(span(d, {{0, 2 * p}})), (std::pair<Int, Int>{1, p}));
  EXPECT_EQ(pair_for(span(d, {{3, p}})), (std::pair<Int, Int>{1, 2 * p}));
  EXPECT_EQ(pair_for(span(d, {{3, p * p}})), (std::pair<Int, Int>{1, 2}));
}

TEST(QuotientForm, L62) {
  const auto d = discriminant_group(lattices::L(6, 2));
  const auto q = quotient_form(d, span(d, {{3, 1}}));
  EXPECT_EQ(q.orders(), (std::vector<std::int64_t>{3}));
  // "(1/3)" on C3: b(g, g) = 1/3, so q(g) = 4/3 (the even-numerator lift).
  const FiniteQuadraticForm third({3}, RatMatrix{{Rat(4, 3)}});
  EXPECT_EQ(third.b_generator(0, 0), Rat(1, 3));
  EXPECT_TRUE(is_isomorphic(q, third));
  EXPECT_TRUE(is_isomorphic(q, discriminant_group(make_lattice("A2(-1)"))));
  EXPECT_TRUE(is_isomorphic(quotient_form(d, span(d, {})), d));
  EXPECT_THROW(quotient_form(d, span(d, {{1, 1}})), NotIsotropic);
}

TEST(Isomorphism, DistinguishesForms) {
  const FiniteQuadraticForm plus({3}, RatMatrix{{Rat(2, 3)}});
  const FiniteQuadraticForm minus({3}, RatMatrix{{Rat(-2, 3)}});
  EXPECT_FALSE(is_isomorphic(plus, minus));
  // (1/2) and (-1/2) on C2 differ as Q/2Z-valued forms.
  EXPECT_FALSE(is_isomorphic(FiniteQuadraticForm({2}, RatMatrix{{Rat(1, 2)}}),
                             FiniteQuadraticForm({2}, RatMatrix{{Rat(-1, 2)}})));
  EXPECT_TRUE(is_isomorphic(discriminant_group(make_lattice("<-6>+<-2>")),
                            discriminant_group(make_lattice("<-2>+<-6>"))));
}

TEST(Automorphisms, Orders) {
  // Independent enumeration over all pairs of generator images gives 4:
  // +-1 on the C3 and C25 parts, identity on the 2-part (1/2) + (3/2).
  EXPECT_EQ(fqf_automorphism_order(discriminant_group(lattices::L(6, 50))), 4u);
  EXPECT_EQ(fqf_automorphism_order(discriminant_group(lattices::hyperbolic())), 1u);
  const auto a62 = fqf_automorphism_order(discriminant_group(lattices::L(6, 2)));
  EXPECT_EQ(a62 % 2, 0u);
  EXPECT_EQ(a62, 2u);
  EXPECT_THROW(fqf_automorphism_order(discriminant_group(lattices::L(6, 50)), 10), GroupTooLarge);
}
