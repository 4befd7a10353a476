#pragma once

#include <orthocusp/discriminant.hpp>
#include <orthocusp/finite_field.hpp>
#include <orthocusp/lattice.hpp>

#include <memory>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

namespace orthocusp {

class NotPrimitive : public Error {
 public:
  using Error::Error;
};
class WrongRank : public Error {
 public:
  using Error::Error;
};
class NoSolution : public Error {
 public:
  using Error::Error;
};

/// A primitive totally isotropic sublattice E of rank 2, given by basis rows.
class IsotropicPlane {
 public:
  IsotropicPlane(std::shared_ptr<const GramLattice> parent, IntMatrix basis)
      : parent_(std::move(parent)), basis_(std::move(basis)) {
    if (basis_.cols() != parent_->rank()) throw DimensionMismatch("basis rows do not match the lattice rank");
    if (basis_.rows() != 2) throw WrongRank("an isotropic plane needs exactly two basis rows");
    if (smith_normal_form(basis_).rank() != 2) throw WrongRank("basis rows are dependent");
    if (!(basis_ * parent_->gram() * basis_.transpose()).is_zero())
      throw NotIsotropic("basis does not span a totally isotropic sublattice");
    if (!is_primitive(basis_)) throw NotPrimitive("sublattice is not primitive");
  }

  const GramLattice& parent() const { return *parent_; }
  std::shared_ptr<const GramLattice> parent_ptr() const { return parent_; }
  const IntMatrix& basis() const { return basis_; }

  /// Basis rows of E^perp.
  IntMatrix perp() const { return integer_kernel(basis_ * parent_->gram()); }

  /// Generators of H_E = (E (x) Q  ∩  L^dual) / E inside D(L), as rational
  /// lattice vectors. With u (E G) v = diag(s1, s2), they are the rows of
  /// diag(1/s_i) u E.
  std::vector<std::vector<Rat>> he_lifts() const {
    const SmithForm s = smith_normal_form(basis_ * parent_->gram());
    const IntMatrix ue = s.u * basis_;
    std::vector<std::vector<Rat>> out;
    for (std::size_t i = 0; i < 2; ++i) {
      if (s.d(i, i) == 1) continue;
      std::vector<Rat> v(basis_.cols());
      for (std::size_t j = 0; j < v.size(); ++j) v[j] = Rat(ue(i, j)) / Rat(s.d(i, i));
      out.push_back(std::move(v));
    }
    return out;
  }

  FqfSubgroup he(const DiscriminantData& dd) const {
    std::vector<FqfElement> gens;
    for (const auto& v : he_lifts()) gens.push_back(dd.coordinates(v));
    return generate_subgroup(dd.form, gens);
  }

  /// Image of E under an isometry g (columns are images of basis vectors).
  IsotropicPlane transformed(const IntMatrix& g) const {
    IntMatrix rows(2, basis_.cols());
    for (std::size_t r = 0; r < 2; ++r) {
      const IntVector v = g.apply(basis_.row(r));
      for (std::size_t j = 0; j < v.size(); ++j) rows(r, j) = v[j];
    }
    return IsotropicPlane(parent_, rows);
  }

 private:
  std::shared_ptr<const GramLattice> parent_;
  IntMatrix basis_;
};

/// Basis v1..v6 (rows) with E = <v1, v2>, E^perp = <v1..v4>, and Gram
///   [[0, 0, A], [0, B, C], [A^t, C^t, D]],   A = diag(a1, a1a2).
struct AdaptedBasis {
  IntMatrix basis;
  IntMatrix gram;
  IntMatrix a, b, c, d;
  Int a1, a1a2;

  Int a2() const { return a1a2 / a1; }
};

namespace detail {

inline IntMatrix stack_rows(const std::vector<IntMatrix>& parts) {
  std::size_t rows = 0;
  for (const auto& p : parts) rows += p.rows();
  IntMatrix out(rows, parts.front().cols());
  std::size_t r = 0;
  for (const auto& p : parts) {
    out.set_block(r, 0, p);
    r += p.rows();
  }
  return out;
}

inline AdaptedBasis split_blocks(IntMatrix basis, const IntMatrix& gram) {
  const std::size_t n = basis.rows(), m = n - 4;
  AdaptedBasis out;
  out.gram = basis * gram * basis.transpose();
  out.a = out.gram.block(0, n - 2, 2, 2);
  out.b = out.gram.block(2, 2, m, m);
  out.c = out.gram.block(2, n - 2, m, 2);
  out.d = out.gram.block(n - 2, n - 2, 2, 2);
  out.a1 = out.a(0, 0);
  out.a1a2 = out.a(1, 1);
  out.basis = std::move(basis);
  return out;
}

}  // namespace detail

inline AdaptedBasis adapted_basis(const IsotropicPlane& e) {
  const IntMatrix& g = e.parent().gram();
  const std::size_t n = g.rows();
  const IntMatrix perp = e.perp();

  // Extend E to a basis of E^perp, working in perp coordinates.
  IntMatrix e_in_perp(2, perp.rows());
  for (std::size_t r = 0; r < 2; ++r) {
    const auto x = rational_coordinates(perp, e.basis().row(r));
    if (!x) throw Error("E is not contained in its orthogonal complement");
    for (std::size_t j = 0; j < x->size(); ++j) e_in_perp(r, j) = numerator((*x)[j]);
  }
  const IntMatrix perp_basis = complete_to_basis(e_in_perp) * perp;
  const IntMatrix full = complete_to_basis(perp_basis);
  IntMatrix ev = full.block(0, 0, 2, n), mid = full.block(2, 0, n - 4, n), w = full.block(n - 2, 0, 2, n);

  // Smith form of the pairing E x (L / E^perp).
  const SmithForm s = smith_normal_form(ev * g * w.transpose());
  ev = s.u * ev;
  w = s.v.transpose() * w;
  return detail::split_blocks(detail::stack_rows({ev, mid, w}), g);
}

/// Gram matrix of E^perp / E on the basis v3, v4 of an adapted basis.
inline IntMatrix perp_quotient_gram(const IsotropicPlane& e) { return adapted_basis(e).b; }

/// Base change M (columns, relative to an adapted basis) making the Gram
/// block anti-diagonal over Q: M = [[I, 0, R'], [0, I, R], [0, 0, I]].
struct RationalBlockBasis {
  RatMatrix m;
  RatMatrix gram;          // M^t Q M = [[0, 0, A], [0, B, 0], [A, 0, 0]]
  RatMatrix lattice_rows;  // the new basis vectors, rows in lattice coordinates
};

inline RationalBlockBasis rational_block_basis(const AdaptedBasis& ab) {
  const std::size_t n = ab.basis.rows();
  const RatMatrix b = to_rational(ab.b), c = to_rational(ab.c), d = to_rational(ab.d);
  const RatMatrix r = -(rat_inverse(b) * c);
  const RatMatrix s = d + c.transpose() * r;  // D - C^t B^{-1} C
  const Rat a1(ab.a1), a1a2(ab.a1a2);
  RatMatrix rp(2, 2);
  rp(0, 0) = -s(0, 0) / (2 * a1);
  rp(0, 1) = -s(0, 1) / a1;
  rp(1, 1) = -s(1, 1) / (2 * a1a2);

  RatMatrix mm = RatMatrix::identity(n);
  mm.set_block(0, n - 2, rp);
  mm.set_block(2, n - 2, r);
  const RatMatrix gram = congruence(to_rational(ab.gram), mm);
  RatMatrix expected(n, n);
  expected.set_block(0, n - 2, to_rational(ab.a));
  expected.set_block(n - 2, 0, to_rational(ab.a));
  expected.set_block(2, 2, b);
  if (!(gram == expected)) throw NoSolution("block base change failed to clear C and D");
  return {mm, gram, mm.transpose() * to_rational(ab.basis)};
}

inline RationalBlockBasis rational_block_basis(const IsotropicPlane& e) { return rational_block_basis(adapted_basis(e)); }

namespace detail {

/// Unimodular rows r with r g r^t Lagrange-reduced, for positive definite binary g.
inline IntMatrix lagrange_reduce(const IntMatrix& g) {
  IntMatrix r = IntMatrix::identity(2);
  IntMatrix h = g;
  while (true) {
    if (h(0, 0) > h(1, 1)) {
      r.swap_rows(0, 1);
    } else {
      const Int k = floor_div(2 * h(0, 1) + h(0, 0), 2 * h(0, 0));
      if (k == 0) break;
      r.add_row(1, 0, -k);
    }
    h = r * g * r.transpose();
  }
  return r;
}

/// Vectors x with x^t g x == norm, for positive definite binary g.
inline std::vector<IntVector> binary_vectors_of_norm(const IntMatrix& g, const Int& norm) {
  const Int det = g(0, 0) * g(1, 1) - g(0, 1) * g(0, 1);
  auto bound = [&](const Int& other_diag) {
    Int b = 0;
    while ((b + 1) * (b + 1) * det <= norm * other_diag) ++b;
    return b;
  };
  const Int b0 = bound(g(1, 1)), b1 = bound(g(0, 0));
  std::vector<IntVector> out;
  for (Int x = -b0; x <= b0; ++x)
    for (Int y = -b1; y <= b1; ++y) {
      const IntVector v{x, y};
      if (bilinear(g, v, v) == norm) out.push_back(v);
    }
  return out;
}

}  // namespace detail

/// X in GL2(Z) (rows) with X from X^t == to, for definite binary forms.
inline std::optional<IntMatrix> binary_isometry(const IntMatrix& from, const IntMatrix& to) {
  const bool negative = from(0, 0) < 0;
  const IntMatrix g = negative ? IntMatrix(-from) : from, h = negative ? IntMatrix(-to) : to;
  const IntMatrix r = detail::lagrange_reduce(g);
  const IntMatrix gr = r * g * r.transpose();
  const auto xs = detail::binary_vectors_of_norm(gr, h(0, 0));
  const auto ys = detail::binary_vectors_of_norm(gr, h(1, 1));
  for (const auto& x : xs)
    for (const auto& y : ys) {
      const Int det = x[0] * y[1] - x[1] * y[0];
      if ((det == 1 || det == -1) && bilinear(gr, x, y) == h(0, 1)) return IntMatrix{{x[0], x[1]}, {y[0], y[1]}} * r;
    }
  return std::nullopt;
}

enum class HeTag { Trivial, Order2 };

inline std::string to_string(HeTag t) { return t == HeTag::Trivial ? "trivial" : "<(3,1)>"; }

/// A normal form of a plane in L(6, 2): Gram [[0, 0, P], [0, B, C], [P^t, C^t, D]].
struct NormalFormClass {
  HeTag he_tag = HeTag::Trivial;
  int c = 0, d = 0;
  IntMatrix p, b, cm, dm;

  IntMatrix gram() const {
    IntMatrix q(6, 6);
    q.set_block(0, 4, p);
    q.set_block(4, 0, p.transpose());
    q.set_block(2, 2, b);
    q.set_block(2, 4, cm);
    q.set_block(4, 2, cm.transpose());
    q.set_block(4, 4, dm);
    return q;
  }
  std::string describe() const {
    return "H_E " + to_string(he_tag) + ", c = " + std::to_string(c) + ", d = " + std::to_string(d);
  }
  friend bool operator==(const NormalFormClass& x, const NormalFormClass& y) {
    return x.he_tag == y.he_tag && x.c == y.c && x.d == y.d;
  }
};

/// P for H_E = <(3,1)> has determinant 2 (so that det(P)^2 det(A2(-1)) = 12).
inline NormalFormClass normal_form_class(HeTag tag, int c = 0, int d = 0) {
  NormalFormClass k;
  k.he_tag = tag;
  if (tag == HeTag::Trivial) {
    if (c != 0 || d != 0) throw Error("the trivial class has C = D = 0");
    k.p = IntMatrix{{0, 1}, {1, 0}};
    k.b = IntMatrix{{-6, 0}, {0, -2}};
    k.cm = IntMatrix(2, 2);
    k.dm = IntMatrix(2, 2);
    return k;
  }
  if (c < 0 || c > 2 || d < 0 || d > 2) throw Error("c and d must lie in {0, 1, 2}");
  k.c = c;
  k.d = d;
  k.p = IntMatrix{{0, 1}, {2, 0}};
  k.b = IntMatrix{{-2, -1}, {-1, -2}};
  k.cm = IntMatrix{{0, 0}, {c, 0}};
  k.dm = IntMatrix{{2 * d, 0}, {0, 0}};
  return k;
}

inline std::vector<NormalFormClass> enumerate_normal_forms() {
  std::vector<NormalFormClass> out{normal_form_class(HeTag::Trivial)};
  for (int c = 0; c < 3; ++c)
    for (int d = 0; d < 3; ++d) out.push_back(normal_form_class(HeTag::Order2, c, d));
  return out;
}

struct NormalFormResult {
  NormalFormClass cls;
  IntMatrix base_change;  // rows: the normal-form basis in lattice coordinates
};

inline NormalFormResult normal_form_L62(const IsotropicPlane& e) {
  const IntMatrix& g = e.parent().gram();
  if (!(g == lattices::L(6, 2).gram())) throw ParentMismatch("normal forms are defined for planes in L(6, 2)");
  const AdaptedBasis ab = adapted_basis(e);
  HeTag tag;
  if (ab.a1a2 == 1)
    tag = HeTag::Trivial;
  else if (ab.a1a2 == 2 && ab.a1 == 1)
    tag = HeTag::Order2;
  else
    throw Error("unexpected elementary divisors for a plane in L(6, 2)");
  const NormalFormClass target = normal_form_class(tag);
  const Int alpha = ab.a1a2;

  IntMatrix ev = ab.basis.block(0, 0, 2, 6), mid = ab.basis.block(2, 0, 2, 6), w = ab.basis.block(4, 0, 2, 6);
  w.swap_rows(0, 1);  // A = diag(1, alpha) becomes [[0, 1], [alpha, 0]]

  const auto x = binary_isometry(ab.b, target.b);
  if (!x) throw NoSolution("E^perp / E is not isometric to the expected binary form");
  mid = *x * mid;

  // Clear C: mid += S E changes C by S A, w += T^t mid changes it by B T^t.
  const IntMatrix a = ev * g * w.transpose(), b = mid * g * mid.transpose(), c = mid * g * w.transpose();
  IntMatrix sys(4, 8);
  IntVector rhs(4);
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t j = 0; j < 2; ++j) {
      const std::size_t row = 2 * i + j;
      rhs[row] = -c(i, j);
      for (std::size_t k = 0; k < 2; ++k) {
        sys(row, 2 * i + k) = a(k, j);
        sys(row, 4 + 2 * k + j) = b(i, k);
      }
    }
  const auto sol = solve_integer(sys, rhs);
  if (!sol) throw NoSolution("no integral (S, T) clears C");
  const IntMatrix smat{{(*sol)[0], (*sol)[1]}, {(*sol)[2], (*sol)[3]}};
  const IntMatrix ut{{(*sol)[4], (*sol)[5]}, {(*sol)[6], (*sol)[7]}};
  w = w + ut.transpose() * mid;
  mid = mid + smat * ev;

  // Reduce D with w += R E, which adds R A + A^t R^t.
  const IntMatrix dm = w * g * w.transpose();
  const Int d11 = mod(dm(0, 0), 2 * alpha);
  const IntMatrix r{{-dm(0, 1), -floor_div(dm(0, 0), 2 * alpha)}, {-dm(1, 1) / 2, 0}};
  w = w + r * ev;

  const NormalFormClass cls = normal_form_class(tag, 0, to_i64(d11 / 2));
  const IntMatrix base = detail::stack_rows({ev, mid, w});
  if (!is_unimodular(base) || !(base * g * base.transpose() == cls.gram()))
    throw NoSolution("normal-form base change does not reproduce the class Gram matrix");
  return {cls, base};
}

/// 20 normal forms up to O+ times the stabiliser index bound.
inline Int boundary_bound(std::int64_t p, IndexConstant c = IndexConstant::Proof) {
  return 20 * stab_index_bound(p, c);
}

/// Seed planes in L(6, two_y), two_y = 2 or 2p^2, labelled by their H_E type.
inline std::vector<std::pair<std::string, IntMatrix>> seed_planes(const Int& two_y) {
  // Each seed is saturate<v, e2> for an isotropic v orthogonal to e2.
  auto plane = [](const IntVector& v) { return saturate(IntMatrix{{v[0], v[1], v[2], v[3], v[4], v[5]}, {0, 0, 1, 0, 0, 0}}); };
  std::vector<std::pair<std::string, IntMatrix>> out{{"trivial", plane({1, 0, 0, 0, 0, 0})}};
  if (two_y == 2) {
    out.emplace_back("order2", plane({2, 2, 0, 0, 1, 1}));
    return out;
  }
  Int p = 1;
  while (2 * p * p < two_y) ++p;
  if (2 * p * p != two_y || p % 2 == 0) throw BadPrime("expected two_y = 2 p^2 with p odd");
  out.emplace_back("x1", plane({p, p, 0, 0, 0, 1}));
  out.emplace_back("x2", plane({2 * p, 2 * p, 0, 0, p, 1}));
  out.emplace_back("order2", plane({2, 2 * ((p * p + 3) / 4), 0, 0, 1, 1}));
  return out;
}

/// A product of `length` random Eichler transvections t(e, a) with e a basis
/// vector of U + U and small random a; the Gram must start with U + U.
inline IntMatrix random_isometry(const IntMatrix& gram, std::mt19937_64& rng, int length, int range = 3) {
  const std::size_t n = gram.rows();
  std::uniform_int_distribution<int> coeff(-range, range);
  std::uniform_int_distribution<std::size_t> pick(0, 3);
  IntMatrix g = IntMatrix::identity(n);
  for (int t = 0; t < length; ++t) {
    const std::size_t e = pick(rng), other = e < 2 ? 2 : 0;
    IntVector ev(n), a(n);
    ev[e] = 1;
    a[other] = coeff(rng);
    a[other + 1] = coeff(rng);
    for (std::size_t i = 4; i < n; ++i) a[i] = coeff(rng);
    g = eichler_transvection(gram, ev, a) * g;
  }
  return g;
}

inline IsotropicPlane random_plane(std::shared_ptr<const GramLattice> parent, const IntMatrix& seed, std::mt19937_64& rng,
                                   int length = 6) {
  const IntMatrix g = random_isometry(parent->gram(), rng, length);
  return IsotropicPlane(parent, seed).transformed(g);
}

}  // namespace orthocusp
