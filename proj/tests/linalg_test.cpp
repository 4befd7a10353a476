#include <orthocusp/linalg.hpp>

#include <gtest/gtest.h>

#include <random>

using namespace orthocusp;

namespace {

IntMatrix random_matrix(std::mt19937_64& rng, std::size_t r, std::size_t c, int lo, int hi) {
  std::uniform_int_distribution<int> dist(lo, hi);
  IntMatrix m(r, c);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < c; ++j) m(i, j) = dist(rng);
  return m;
}

void expect_valid_smith(const IntMatrix& a, const SmithForm& s) {
  EXPECT_EQ(s.u * a * s.v, s.d);
  EXPECT_EQ(abs(determinant(s.u)), 1);
  EXPECT_EQ(abs(determinant(s.v)), 1);
  for (std::size_t i = 0; i < s.d.rows(); ++i)
    for (std::size_t j = 0; j < s.d.cols(); ++j)
      if (i != j) EXPECT_EQ(s.d(i, j), 0);
  const auto divs = s.divisors();
  for (std::size_t i = 0; i + 1 < divs.size(); ++i) {
    EXPECT_GT(divs[i], 0);
    EXPECT_EQ(divs[i + 1] % divs[i], 0);
  }
}

}  // namespace

TEST(SmithNormalForm, IdentityIsFixed) {
  const IntMatrix id = IntMatrix::identity(2);
  const SmithForm s = smith_normal_form(id);
  EXPECT_EQ(s.d, id);
  EXPECT_EQ(s.u, id);
  EXPECT_EQ(s.v, id);
}

TEST(SmithNormalForm, AntiDiagonalOneThree) {
  const IntMatrix a{{0, 1}, {3, 0}};
  const SmithForm s = smith_normal_form(a);
  expect_valid_smith(a, s);
  EXPECT_EQ(s.divisors(), (std::vector<Int>{1, 3}));
}

TEST(SmithNormalForm, RandomSquareAndRectangular) {
  std::mt19937_64 rng(20261018);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t r = 1 + trial % 5, c = 1 + (trial / 5) % 5;
    const IntMatrix a = random_matrix(rng, r, c, -9, 9);
    expect_valid_smith(a, smith_normal_form(a));
  }
}

TEST(SmithNormalForm, ZeroMatrixHasRankZero) {
  const SmithForm s = smith_normal_form(IntMatrix(3, 2));
  EXPECT_EQ(s.rank(), 0u);
}

TEST(Determinant, BareissMatchesCofactorExpansion) {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 100; ++trial) {
    const IntMatrix a = random_matrix(rng, 3, 3, -20, 20);
    const Int cof = a(0, 0) * (a(1, 1) * a(2, 2) - a(1, 2) * a(2, 1)) -
                    a(0, 1) * (a(1, 0) * a(2, 2) - a(1, 2) * a(2, 0)) +
                    a(0, 2) * (a(1, 0) * a(2, 1) - a(1, 1) * a(2, 0));
    EXPECT_EQ(determinant(a), cof);
  }
}

TEST(Determinant, LargeEntriesDoNotOverflow) {
  const Int big = pow(Int(10), 30);
  const IntMatrix a{{big, 1}, {1, big}};
  EXPECT_EQ(determinant(a), big * big - 1);
}

TEST(RatInverse, Identity) {
  const RatMatrix id = RatMatrix::identity(3);
  EXPECT_EQ(rat_inverse(id), id);
}

TEST(RatInverse, Diagonal) {
  const RatMatrix d{{Rat(-6), Rat(0)}, {Rat(0), Rat(-2)}};
  const RatMatrix expected{{Rat(-1, 6), Rat(0)}, {Rat(0), Rat(-1, 2)}};
  EXPECT_EQ(rat_inverse(d), expected);
}

TEST(RatInverse, A2NegativeGram) {
  const IntMatrix b{{-2, 1}, {1, -2}};
  const RatMatrix inv = rat_inverse(b);
  const RatMatrix expected{{Rat(-2, 3), Rat(-1, 3)}, {Rat(-1, 3), Rat(-2, 3)}};
  EXPECT_EQ(inv, expected);
  EXPECT_EQ(to_rational(b) * inv, RatMatrix::identity(2));
  EXPECT_EQ(inv * to_rational(b), RatMatrix::identity(2));
}

TEST(RatInverse, SingularThrows) {
  const RatMatrix s{{Rat(1), Rat(2)}, {Rat(2), Rat(4)}};
  EXPECT_THROW(rat_inverse(s), SingularMatrix);
}

TEST(RatInverse, RandomTwoSidedExact) {
  std::mt19937_64 rng(11);
  int tested = 0;
  while (tested < 50) {
    const IntMatrix a = random_matrix(rng, 4, 4, -5, 5);
    if (determinant(a) == 0) continue;
    const RatMatrix inv = rat_inverse(a);
    EXPECT_EQ(to_rational(a) * inv, RatMatrix::identity(4));
    EXPECT_EQ(inv * to_rational(a), RatMatrix::identity(4));
    ++tested;
  }
}

TEST(IntegerKernel, BasisIsSaturatedAndAnnihilated) {
  const IntMatrix a{{2, 4, 6}, {0, 3, 3}};
  const IntMatrix k = integer_kernel(a);
  ASSERT_EQ(k.rows(), 1u);
  EXPECT_TRUE((a * k.transpose()).is_zero());
  EXPECT_TRUE(is_primitive(k));
}

TEST(SolveInteger, SolvableAndUnsolvable) {
  const IntMatrix a{{2, 0}, {0, 3}};
  const auto x = solve_integer(a, {4, 9});
  ASSERT_TRUE(x.has_value());
  EXPECT_EQ(a.apply(*x), (IntVector{4, 9}));
  EXPECT_FALSE(solve_integer(a, {1, 0}).has_value());
}

TEST(Saturation, CompleteToBasisKeepsRows) {
  const IntMatrix rows{{1, 2, 3, 4}, {0, 1, 1, 5}};
  const IntMatrix full = complete_to_basis(rows);
  EXPECT_TRUE(is_unimodular(full));
  EXPECT_EQ(full.block(0, 0, 2, 4), rows);
  const IntMatrix doubled{{2, 4, 6, 8}};
  EXPECT_FALSE(is_primitive(doubled));
  EXPECT_EQ(saturate(doubled).rows(), 1u);
  EXPECT_TRUE(is_primitive(saturate(doubled)));
}
