#pragma once

#include <orthocusp/cyclotomic.hpp>
#include <orthocusp/matrix.hpp>

#include <array>
#include <optional>
#include <string>
#include <vector>

namespace orthocusp {

/// Characteristic polynomials of finite-order X in GL2(Z), in table order.
enum class CharPoly { Phi1Sq, Phi1Phi2, Phi2Sq, Phi3, Phi4, Phi6 };

inline constexpr std::array<CharPoly, 6> kCharPolys{CharPoly::Phi1Sq, CharPoly::Phi1Phi2, CharPoly::Phi2Sq,
                                                    CharPoly::Phi3,   CharPoly::Phi4,     CharPoly::Phi6};

inline std::string to_string(CharPoly c) {
  static const std::array<const char*, 6> names{"Phi1^2", "Phi1Phi2", "Phi2^2", "Phi3", "Phi4", "Phi6"};
  return names[static_cast<std::size_t>(c)];
}

inline IntMatrix representative(CharPoly c) {
  switch (c) {
    case CharPoly::Phi1Sq: return IntMatrix{{1, 0}, {0, 1}};
    case CharPoly::Phi1Phi2: return IntMatrix{{-1, 0}, {0, 1}};
    case CharPoly::Phi2Sq: return IntMatrix{{-1, 0}, {0, -1}};
    case CharPoly::Phi3: return IntMatrix{{0, 1}, {-1, -1}};
    case CharPoly::Phi4: return IntMatrix{{0, -1}, {1, 0}};
    case CharPoly::Phi6: return IntMatrix{{0, -1}, {1, 1}};
  }
  throw Error("unknown characteristic polynomial");
}

/// The eight values of xi, as powers of zeta12: i, -1, -i, 1, -w, w, w^2, -w^2.
inline constexpr std::array<int, 8> kXiPowers{3, 6, 9, 0, 10, 4, 8, 2};
inline const std::array<const char*, 8> kXiNames{"i", "-1", "-i", "1", "-w", "w", "w^2", "-w^2"};

inline Cyclotomic12 xi_value(std::size_t column) { return Cyclotomic12::zeta_power(kXiPowers.at(column)); }

/// T = I - xi X over Z[zeta12].
inline Cyclo2x2 t_matrix(CharPoly c, const Cyclotomic12& xi) {
  const IntMatrix x = representative(c);
  Cyclo2x2 t;
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t j = 0; j < 2; ++j) t[i][j] = Cyclotomic12(i == j ? 1 : 0) - xi * Cyclotomic12(x(i, j));
  return t;
}

using DetTable = std::array<std::array<Cyclotomic12, 8>, 6>;

inline DetTable det_t_table() {
  DetTable out;
  for (std::size_t r = 0; r < 6; ++r)
    for (std::size_t c = 0; c < 8; ++c) out[r][c] = cyclo_det(t_matrix(kCharPolys[r], xi_value(c)));
  return out;
}

/// The det T table exactly as printed in the source (w = omega).
inline DetTable printed_det_t_table() {
  static const std::array<std::array<const char*, 8>, 6> cells{{
      {"-2i", "4", "2i", "0", "w", "-3w", "-3w^2", "w^2"},
      {"2", "0", "2", "0", "1 - w^2", "1 - w^2", "1 - w", "1 - w"},
      {"2i", "0", "-2i", "4", "-3w", "w", "w^2", "-3w^2"},
      {"i", "1", "-i", "3", "-2w", "0", "0", "-2w"},
      {"0", "2", "0", "2", "-w", "-w", "-w^2", "-w^2"},
      {"-i", "3", "i", "1", "0", "-2w", "-2w^2", "0"},
  }};
  DetTable out;
  for (std::size_t r = 0; r < 6; ++r)
    for (std::size_t c = 0; c < 8; ++c) out[r][c] = Cyclotomic12::parse(cells[r][c]);
  return out;
}

/// Least K > 0 with K T^{-1} integral over Z[tau]; nullopt when det T = 0.
inline std::optional<Int> k_factor(CharPoly c, const Cyclotomic12& xi) {
  const Cyclo2x2 t = t_matrix(c, xi);
  const Cyclotomic12 det = cyclo_det(t);
  if (det.is_zero()) return std::nullopt;
  const Cyclo2x2 adj{{{t[1][1], -t[0][1]}, {-t[1][0], t[0][0]}}};
  Int k = 1;
  for (const auto& row : adj)
    for (const auto& e : row) k = lcm(k, divide(e, det).denominator_bound());
  return k;
}

/// K_N = N^3 prod_{l | N} (1 - 1/l^2), the index of Gamma(N) in SL2(Z).
inline Int congruence_index(const Int& n) {
  if (n <= 0) throw Error("level must be positive");
  Int out = n * n * n, m = n;
  for (Int l = 2; l * l <= m; ++l) {
    if (m % l != 0) continue;
    out = out / (l * l) * (l * l - 1);
    while (m % l == 0) m /= l;
  }
  if (m > 1) out = out / (m * m) * (m * m - 1);
  return out;
}

/// |SL2(Z/N)| by enumeration.
inline std::uint64_t sl2_order_brute_force(std::int64_t n) {
  if (n <= 0) throw Error("level must be positive");
  if (n == 1) return 1;
  std::uint64_t count = 0;
  for (std::int64_t a = 0; a < n; ++a)
    for (std::int64_t b = 0; b < n; ++b)
      for (std::int64_t c = 0; c < n; ++c)
        for (std::int64_t d = 0; d < n; ++d)
          if (((a * d - b * c) % n + n) % n == 1) ++count;
  return count;
}

/// One cell of the singularity tables: coefficient * K_N^kn * J^j, or the
/// markers "1" (a single component) and "-" (g acts trivially).
struct BoundCell {
  enum class Kind { Monomial, One, Trivial };
  Kind kind = Kind::Trivial;
  Int coefficient = 0;
  int kn_power = 0, j_power = 0;

  static BoundCell monomial(const Int& coef, int kn, int j) { return {Kind::Monomial, coef, kn, j}; }
  static BoundCell one() { return {Kind::One, 1, 0, 0}; }
  static BoundCell trivial() { return {}; }

  std::optional<Int> evaluate(const Int& kn, const Int& j) const {
    if (kind == Kind::Trivial) return std::nullopt;
    if (kind == Kind::One) return Int(1);
    return coefficient * pow(kn, static_cast<unsigned>(kn_power)) * pow(j, static_cast<unsigned>(j_power));
  }

  std::string str() const {
    if (kind == Kind::Trivial) return "-";
    if (kind == Kind::One) return "1";
    Int c = coefficient;
    int two = 0, three = 0;
    while (c % 2 == 0) { c /= 2; ++two; }
    while (c % 3 == 0) { c /= 3; ++three; }
    std::string out;
    if (two) out += "2^" + std::to_string(two);
    if (three) out += (out.empty() ? "" : ".") + std::string("3^") + std::to_string(three);
    if (c != 1) out += (out.empty() ? "" : ".") + c.str();
    if (kn_power) out += " K_N";
    if (j_power) out += " J" + (j_power > 1 ? "^" + std::to_string(j_power) : std::string());
    return out;
  }

  friend bool operator==(const BoundCell& a, const BoundCell& b) {
    if (a.kind != b.kind) return false;
    return a.kind != Kind::Monomial || (a.coefficient == b.coefficient && a.kn_power == b.kn_power && a.j_power == b.j_power);
  }
};

using BoundTable = std::array<std::array<BoundCell, 8>, 6>;

/// Both singularity tables as printed, side by side (columns as kXiNames).
inline BoundTable printed_bound_table() {
  const auto m = [](int two, int three, int j) { return BoundCell::monomial(pow(Int(2), two) * pow(Int(3), three), 1, j); };
  const BoundCell one = BoundCell::one(), dash = BoundCell::trivial(), j5 = BoundCell::monomial(32, 0, 1);
  return {{
      {m(8, 0, 4), one, m(8, 0, 4), dash, m(4, 0, 4), m(4, 4, 4), m(4, 4, 4), m(4, 0, 4)},
      {m(8, 0, 4), j5, m(8, 0, 4), j5, m(4, 0, 4), m(4, 0, 4), m(4, 0, 4), m(4, 0, 4)},
      {m(8, 0, 4), dash, m(8, 0, 4), one, m(4, 4, 4), m(4, 0, 4), m(4, 0, 4), m(4, 4, 4)},
      {m(4, 0, 4), one, m(4, 0, 4), one, m(8, 0, 4), m(4, 0, 2), m(4, 0, 2), m(8, 0, 4)},
      {m(4, 0, 2), one, m(4, 0, 2), one, m(4, 0, 4), m(4, 0, 4), m(4, 0, 4), m(4, 0, 4)},
      {m(4, 0, 4), one, m(4, 0, 4), one, m(4, 0, 2), m(8, 0, 4), m(8, 0, 4), m(4, 0, 2)},
  }};
}

/// A cell rebuilt from the case analysis: 2^4 K^4 K_N J^4 when det T != 0 and
/// o(Z) in {3, 4, 6}; 2^4 K_N J^2 from the (N det B)^2 lines when det T = 0;
/// for xi = +-1 (tau free) a single point, 2^5 J from 2 N det B lines, or trivial.
inline BoundCell derived_cell(CharPoly c, std::size_t column) {
  const Cyclotomic12 xi = xi_value(column);
  const auto k = k_factor(c, xi);
  const bool real = xi == Cyclotomic12(1) || xi == Cyclotomic12(-1);
  if (!real) return k ? BoundCell::monomial(16 * pow(*k, 4), 1, 4) : BoundCell::monomial(16, 1, 2);
  if (k) return BoundCell::one();
  if (c == CharPoly::Phi1Phi2) return BoundCell::monomial(32, 0, 1);
  return BoundCell::trivial();
}

inline BoundTable derived_bound_table() {
  BoundTable out;
  for (std::size_t r = 0; r < 6; ++r)
    for (std::size_t col = 0; col < 8; ++col) out[r][col] = derived_cell(kCharPolys[r], col);
  return out;
}

}  // namespace orthocusp
