#pragma once

#include <orthocusp/isotropic.hpp>
#include <orthocusp/tables.hpp>

#include <cmath>
#include <complex>
#include <numbers>
#include <optional>

namespace orthocusp {

class NotInGammaN : public Error {
 public:
  using Error::Error;
};
class NotDivisible : public Error {
 public:
  using Error::Error;
};
class PoleAtPoint : public Error {
 public:
  using Error::Error;
};
class NotAFixedPoint : public Error {
 public:
  using Error::Error;
};
class InfiniteOrder : public Error {
 public:
  using Error::Error;
};

/// The (N, det B, K_N) columns of the invariants table for a cusp type a2.
struct InvariantsRow {
  Int n, det_b, k_n;
};

inline std::optional<InvariantsRow> printed_invariants_row(const Int& a1, const Int& a2, const Int& p) {
  if (a1 != 1) return std::nullopt;
  if (a2 == 1) return InvariantsRow{1, 12 * p * p, 12 * p * p};
  if (a2 == p) return InvariantsRow{p, 12, 12 * p};
  if (a2 == 2 * p) return InvariantsRow{2 * p, 3, 6 * p};
  return std::nullopt;
}

/// Everything attached to a boundary curve E of L(6, 2p^2).
///
/// `n_level` is a1 a2 det B and `k_n` the congruence index K_N of that level;
/// `printed` holds the invariants table row (if the cusp type appears there),
/// whose N and K_N columns read differently.
struct ParabolicFrame {
  Int p;
  AdaptedBasis adapted;
  RationalBlockBasis block;
  Int a1, a2, det_b, n_level, j_value, k_n;
  std::optional<InvariantsRow> printed;

  const RatMatrix& m() const { return block.m; }
  RatMatrix a() const { return to_rational(adapted.a); }
  RatMatrix b() const { return to_rational(adapted.b); }
};

inline ParabolicFrame parabolic_frame(const IsotropicPlane& e, const Int& p) {
  ParabolicFrame f;
  f.p = p;
  f.adapted = adapted_basis(e);
  f.block = rational_block_basis(f.adapted);
  f.a1 = f.adapted.a1;
  f.a2 = f.adapted.a2();
  f.det_b = determinant(f.adapted.b);
  f.n_level = f.a1 * f.a2 * f.det_b;
  f.j_value = f.n_level * f.det_b;
  f.k_n = congruence_index(f.n_level);
  f.printed = printed_invariants_row(f.a1, f.a2, p);
  return f;
}

/// A 6x6 matrix on the block basis, [[U, V, W], [0, X, Y], [0, 0, Z]].
struct BlockIsometry {
  RatMatrix u, v, w, x, y, z;

  static BlockIsometry identity() {
    const RatMatrix i = RatMatrix::identity(2), o(2, 2);
    return {i, o, o, i, o, i};
  }
  static std::optional<BlockIsometry> from_matrix(const RatMatrix& g) {
    if (!g.block(2, 0, 4, 2).is_zero() || !g.block(4, 2, 2, 2).is_zero()) return std::nullopt;
    return BlockIsometry{g.block(0, 0, 2, 2), g.block(0, 2, 2, 2), g.block(0, 4, 2, 2),
                         g.block(2, 2, 2, 2), g.block(2, 4, 2, 2), g.block(4, 4, 2, 2)};
  }
  RatMatrix matrix() const {
    RatMatrix g(6, 6);
    g.set_block(0, 0, u);
    g.set_block(0, 2, v);
    g.set_block(0, 4, w);
    g.set_block(2, 2, x);
    g.set_block(2, 4, y);
    g.set_block(4, 4, z);
    return g;
  }
  friend BlockIsometry operator*(const BlockIsometry& g, const BlockIsometry& h) {
    return *from_matrix(g.matrix() * h.matrix());
  }
};

enum class ParabolicClass { NotParabolic, InNF, InWF, InUF };

inline std::string to_string(ParabolicClass c) {
  switch (c) {
    case ParabolicClass::NotParabolic: return "not_parabolic";
    case ParabolicClass::InNF: return "in_NF";
    case ParabolicClass::InWF: return "in_WF";
    case ParabolicClass::InUF: return "in_UF";
  }
  return "?";
}

/// Membership in N(F) is checked as preservation of the block Gram
/// [[0, 0, A], [0, B, 0], [A, 0, 0]] with det U > 0, which is equivalent to
/// U^t A Z = A, X^t B X = B, X^t B Y + V^t A Z = 0, Y^t B Y + Z^t A W + W^t A Z = 0.
inline ParabolicClass classify_parabolic(const RatMatrix& g, const ParabolicFrame& f) {
  const auto b = BlockIsometry::from_matrix(g);
  if (!b) return ParabolicClass::NotParabolic;
  if (!(congruence(f.block.gram, g) == f.block.gram) || determinant(b->u) <= 0) return ParabolicClass::NotParabolic;
  const RatMatrix i = RatMatrix::identity(2);
  if (!(b->u == i && b->x == i && b->z == i)) return ParabolicClass::InNF;
  const RatMatrix& w = b->w;
  const bool shape = w(0, 0) == 0 && w(1, 1) == 0 && w(0, 1) == Rat(f.a1 * f.a2) * -w(1, 0);
  if (b->v.is_zero() && b->y.is_zero() && shape) return ParabolicClass::InUF;
  return ParabolicClass::InWF;
}

/// M g M^{-1}: the adapted-basis matrix of g. With the new basis equal to the
/// adapted basis times M, this is the conjugate whose integrality decides
/// membership in O(L).
inline RatMatrix to_adapted(const RatMatrix& g, const ParabolicFrame& f) { return f.m() * g * rat_inverse(f.m()); }

inline bool is_lattice_integral(const RatMatrix& g, const ParabolicFrame& f) {
  const RatMatrix h = to_adapted(g, f);
  return is_integral(h) && is_unimodular(to_integer(h));
}

/// g as an integral matrix on the original lattice coordinates (columns = images).
inline IntMatrix to_lattice(const RatMatrix& g, const ParabolicFrame& f) {
  const IntMatrix h = to_integer(to_adapted(g, f));
  const IntMatrix vt = f.adapted.basis.transpose();
  return vt * h * unimodular_inverse(vt);
}

/// g_Z = diag(Z', I, Z), Z' = [[d, -c a2], [-b / a2, a]], for Z in Gamma(N).
inline BlockIsometry embed_gamma_n(const IntMatrix& zm, const ParabolicFrame& f) {
  if (zm.rows() != 2 || zm.cols() != 2) throw DimensionMismatch("expected a 2x2 matrix");
  const Int &a = zm(0, 0), &b = zm(0, 1), &c = zm(1, 0), &d = zm(1, 1);
  if (a * d - b * c != 1) throw NotInGammaN("matrix is not in SL2(Z)");
  const Int& n = f.n_level;
  if (mod(Int(a - 1), n) != 0 || mod(b, n) != 0 || mod(c, n) != 0 || mod(Int(d - 1), n) != 0)
    throw NotInGammaN("matrix is not congruent to I mod N");
  const IntMatrix zp{{d, -c * f.a2}, {-b / f.a2, a}};
  BlockIsometry g = BlockIsometry::identity();
  g.u = to_rational(zp);
  g.z = to_rational(zm);
  return g;
}

/// g_Y in W(F): V = -A^{-1} Y^t B solves B Y + V^t A = 0, and W (with w21 = 0)
/// solves Y^t B Y + A W + W^t A = 0.
inline BlockIsometry lift_y(const IntMatrix& ym, const ParabolicFrame& f) {
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t j = 0; j < 2; ++j)
      if (mod(ym(i, j), f.n_level) != 0) throw NotDivisible("Y must be divisible by N");
  const RatMatrix y = to_rational(ym), a = f.a(), b = f.b();
  const RatMatrix s = -(y.transpose() * b * y);
  RatMatrix w(2, 2);
  w(0, 0) = s(0, 0) / (2 * a(0, 0));
  w(0, 1) = s(0, 1) / a(0, 0);
  w(1, 1) = s(1, 1) / (2 * a(1, 1));
  BlockIsometry g = BlockIsometry::identity();
  g.v = -(rat_inverse(a) * y.transpose() * b);
  g.w = w;
  g.y = y;
  return g;
}

/// The U(F) element with W = [[0, a1 a2 x], [-x, 0]].
inline BlockIsometry unipotent(const Rat& x, const ParabolicFrame& f) {
  BlockIsometry g = BlockIsometry::identity();
  g.w(0, 1) = Rat(f.a1 * f.a2) * x;
  g.w(1, 0) = -x;
  return g;
}

using Complex = std::complex<double>;

struct SiegelPoint {
  Complex z;
  std::array<Complex, 2> w;
  Complex tau;
};

inline double to_double(const Rat& r) { return r.convert_to<double>(); }

/// The displayed action of g in N(F) on (z, w, tau).
inline SiegelPoint siegel_action(const BlockIsometry& g, const SiegelPoint& pt, const ParabolicFrame& f) {
  if (pt.tau.imag() <= 0) throw Error("tau must lie in the upper half plane");
  const double a = to_double(g.z(0, 0)), b = to_double(g.z(0, 1)), c = to_double(g.z(1, 0)), d = to_double(g.z(1, 1));
  const double det_z = a * d - b * c;
  const Complex j = c * pt.tau + d;
  if (std::abs(j) < 1e-300) throw PoleAtPoint("c tau + d vanishes");
  const auto mat = [](const RatMatrix& m, std::size_t i, std::size_t k) { return to_double(m(i, k)); };
  const RatMatrix bm = f.b();
  Complex wbw = 0;
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t k = 0; k < 2; ++k) wbw += pt.w[i] * mat(bm, i, k) * pt.w[k];
  const Complex v1w = mat(g.v, 0, 0) * pt.w[0] + mat(g.v, 0, 1) * pt.w[1];
  SiegelPoint out;
  out.z = pt.z / det_z + (c / (2.0 * to_double(Rat(f.a1)) * det_z) * wbw + v1w + mat(g.w, 0, 0) * pt.tau + mat(g.w, 0, 1)) / j;
  for (std::size_t i = 0; i < 2; ++i)
    out.w[i] = (mat(g.x, i, 0) * pt.w[0] + mat(g.x, i, 1) * pt.w[1] + mat(g.y, i, 0) * pt.tau + mat(g.y, i, 1)) / j;
  out.tau = (a * pt.tau + b) / j;
  return out;
}

/// The same action computed projectively: lift to t = (z, t2, w1, w2, tau, 1)
/// on the isotropic cone, apply g, and renormalise t6 = 1.
inline SiegelPoint siegel_action_projective(const BlockIsometry& g, const SiegelPoint& pt, const ParabolicFrame& f) {
  const RatMatrix b = f.b();
  Complex wbw = 0;
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t k = 0; k < 2; ++k) wbw += pt.w[i] * to_double(b(i, k)) * pt.w[k];
  const double a1 = to_double(Rat(f.a1)), a1a2 = to_double(Rat(f.a1 * f.a2));
  const std::array<Complex, 6> t{pt.z, (-2.0 * a1 * pt.z * pt.tau - wbw) / (2.0 * a1a2), pt.w[0], pt.w[1], pt.tau, 1.0};
  const RatMatrix m = g.matrix();
  std::array<Complex, 6> s{};
  for (std::size_t i = 0; i < 6; ++i)
    for (std::size_t k = 0; k < 6; ++k) s[i] += to_double(m(i, k)) * t[k];
  if (std::abs(s[5]) < 1e-300) throw PoleAtPoint("c tau + d vanishes");
  return {s[0] / s[5], {s[2] / s[5], s[3] / s[5]}, s[4] / s[5]};
}

/// Exponents k (as zeta12^k) of the local action diag(w0, xi w1, xi w2, xi^2)
/// at a fixed point (u = 0, w, tau).
struct LocalSignature {
  int omega0 = 0, omega1 = 0, omega2 = 0, xi = 0;

  std::string str() const {
    return "(z^" + std::to_string(omega0) + ", z^" + std::to_string(omega1) + ", z^" + std::to_string(omega2) + ", z^" +
           std::to_string(xi) + ")";
  }
};

namespace detail {

inline std::optional<int> twelfth_root_exponent(Complex v, double tol = 1e-9) {
  for (int k = 0; k < 12; ++k)
    if (std::abs(v - std::polar(1.0, 2 * std::numbers::pi * k / 12)) < tol) return k;
  return std::nullopt;
}

inline int root_exponent_or_throw(Complex v, const char* what) {
  const auto k = twelfth_root_exponent(v);
  if (!k) throw Error(std::string(what) + " is not a 12th root of unity");
  return *k;
}

}  // namespace detail

inline LocalSignature local_action_signature(const BlockIsometry& g, const SiegelPoint& pt, const ParabolicFrame& f) {
  const RatMatrix m = g.matrix();
  RatMatrix power = m;
  bool finite = false;
  for (int k = 1; k <= 12 && !finite; ++k, power = power * m) finite = power == RatMatrix::identity(6);
  if (!finite) throw InfiniteOrder("g has infinite order");
  if (determinant(g.z) != 1) throw Error("Z must lie in SL2");

  const SiegelPoint base{0.0, pt.w, pt.tau};
  const SiegelPoint image = siegel_action(g, base, f);
  if (std::abs(image.tau - pt.tau) > 1e-9 || std::abs(image.w[0] - pt.w[0]) > 1e-9 || std::abs(image.w[1] - pt.w[1]) > 1e-9)
    throw NotAFixedPoint("g does not fix (w, tau)");

  LocalSignature s;
  const Complex j = to_double(g.z(1, 0)) * pt.tau + to_double(g.z(1, 1));
  s.xi = detail::root_exponent_or_throw(1.0 / j, "xi");
  const double tr = to_double(g.x(0, 0) + g.x(1, 1)), det = to_double(determinant(g.x));
  const Complex disc = std::sqrt(Complex(tr * tr - 4 * det));
  int e1 = detail::root_exponent_or_throw((tr + disc) / 2.0, "eigenvalue of X");
  int e2 = detail::root_exponent_or_throw((tr - disc) / 2.0, "eigenvalue of X");
  if (e1 > e2) std::swap(e1, e2);
  s.omega1 = e1;
  s.omega2 = e2;
  const Complex shift = 2.0 * std::numbers::pi * Complex(0, 1) * image.z / to_double(Rat(f.a1));
  s.omega0 = detail::root_exponent_or_throw(std::exp(shift), "omega0");
  return s;
}

}  // namespace orthocusp
