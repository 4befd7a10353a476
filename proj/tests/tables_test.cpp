#include <orthocusp/tables.hpp>

#include <gtest/gtest.h>

#include <set>

using namespace orthocusp;

namespace {

const Cyclotomic12 kI = Cyclotomic12::i(), kW = Cyclotomic12::omega();

std::size_t row(CharPoly c) { return static_cast<std::size_t>(c); }

}  // namespace

TEST(DetT, SpotValues) {
  const DetTable t = det_t_table();
  EXPECT_EQ(t[row(CharPoly::Phi1Sq)][0], Cyclotomic12(-2) * kI);
  EXPECT_EQ(t[row(CharPoly::Phi6)][1], Cyclotomic12(3));
  EXPECT_EQ(t[row(CharPoly::Phi3)][5], Cyclotomic12(0));
  EXPECT_EQ(t[row(CharPoly::Phi1Phi2)][4], Cyclotomic12(1) - kW * kW);
}

TEST(DetT, PrintedTableDiffersInOneCell) {
  const DetTable t = det_t_table(), printed = printed_det_t_table();
  std::vector<std::pair<std::size_t, std::size_t>> diff;
  for (std::size_t r = 0; r < 6; ++r)
    for (std::size_t c = 0; c < 8; ++c)
      if (t[r][c] != printed[r][c]) diff.emplace_back(r, c);
  // Phi3 at xi = -w^2: 1 + xi + xi^2 = 1 - w^2 + w = -2w^2, printed as -2w.
  ASSERT_EQ(diff.size(), 1u);
  EXPECT_EQ(diff[0], (std::pair<std::size_t, std::size_t>{row(CharPoly::Phi3), 7}));
  EXPECT_EQ(t[row(CharPoly::Phi3)][7], Cyclotomic12(-2) * kW * kW);
}

TEST(KFactor, Examples) {
  EXPECT_EQ(k_factor(CharPoly::Phi1Sq, kI), Int(2));
  EXPECT_EQ(k_factor(CharPoly::Phi3, -kW), Int(2));
  EXPECT_EQ(k_factor(CharPoly::Phi1Sq, kW), Int(3));
  EXPECT_EQ(k_factor(CharPoly::Phi3, kI), Int(1));
  EXPECT_FALSE(k_factor(CharPoly::Phi4, kI).has_value());
}

TEST(CongruenceIndex, MatchesEnumeration) {
  for (std::int64_t n = 1; n <= 12; ++n) EXPECT_EQ(congruence_index(n), Int(sl2_order_brute_force(n))) << n;
  EXPECT_EQ(congruence_index(60), Int(60) * 60 * 60 * 3 / 4 * 8 / 9 * 24 / 25);
}

TEST(BoundCell, Rendering) {
  EXPECT_EQ(BoundCell::monomial(256, 1, 4).str(), "2^8 K_N J^4");
  EXPECT_EQ(BoundCell::monomial(16 * 81, 1, 4).str(), "2^4.3^4 K_N J^4");
  EXPECT_EQ(BoundCell::monomial(32, 0, 1).str(), "2^5 J");
  EXPECT_EQ(BoundCell::one().str(), "1");
  EXPECT_EQ(BoundCell::trivial().str(), "-");
  EXPECT_EQ(BoundCell::monomial(16, 1, 2).evaluate(3, 5), Int(16 * 3 * 25));
  EXPECT_FALSE(BoundCell::trivial().evaluate(3, 5).has_value());
}

TEST(BoundTables, DerivedAgainstPrinted) {
  const BoundTable derived = derived_bound_table(), printed = printed_bound_table();
  std::set<std::pair<std::size_t, std::size_t>> diff;
  for (std::size_t r = 0; r < 6; ++r)
    for (std::size_t c = 0; c < 8; ++c)
      if (!(derived[r][c] == printed[r][c])) diff.emplace(r, c);
  // T = diag(1 + xi, 1 - xi) has a factor of norm 3 at every xi in {+-w, +-w^2},
  // so K = 3 there; the printed row has no 3^4.
  const std::size_t r = row(CharPoly::Phi1Phi2);
  EXPECT_EQ(diff, (std::set<std::pair<std::size_t, std::size_t>>{{r, 4}, {r, 5}, {r, 6}, {r, 7}}));
  for (std::size_t c = 4; c < 8; ++c) EXPECT_EQ(derived[r][c].str(), "2^4.3^4 K_N J^4");
  EXPECT_EQ(derived[row(CharPoly::Phi1Phi2)][3].str(), "2^5 J");
  EXPECT_EQ(derived[row(CharPoly::Phi4)][2].str(), "2^4 K_N J^2");
  EXPECT_EQ(derived[row(CharPoly::Phi1Sq)][1].str(), "1");
  EXPECT_EQ(derived[row(CharPoly::Phi2Sq)][1].str(), "-");
}
