#pragma once

#include <orthocusp/matrix.hpp>

#include <algorithm>
#include <optional>

namespace orthocusp {

/// Determinant by fraction-free (Bareiss) elimination.
inline Int determinant(const IntMatrix& a) {
  if (!a.square()) throw DimensionMismatch("determinant of non-square matrix");
  const std::size_t n = a.rows();
  if (n == 0) return 1;
  IntMatrix m = a;
  Int sign = 1;
  Int prev = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (m(k, k) == 0) {
      std::size_t piv = k + 1;
      while (piv < n && m(piv, k) == 0) ++piv;
      if (piv == n) return 0;
      m.swap_rows(k, piv);
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      for (std::size_t j = k + 1; j < n; ++j) {
        m(i, j) = (m(i, j) * m(k, k) - m(i, k) * m(k, j)) / prev;
      }
      m(i, k) = 0;
    }
    prev = m(k, k);
  }
  return sign * m(n - 1, n - 1);
}

inline Rat determinant(const RatMatrix& a) {
  const Int den = common_denominator(a);
  IntMatrix scaled = to_integer(Rat(den) * a);
  return Rat(determinant(scaled)) / Rat(pow(den, static_cast<unsigned>(a.rows())));
}

inline bool is_unimodular(const IntMatrix& a) {
  if (!a.square()) return false;
  return abs(determinant(a)) == 1;
}

/// Exact inverse by Gauss-Jordan elimination over Q.
inline RatMatrix rat_inverse(const RatMatrix& a) {
  if (!a.square()) throw DimensionMismatch("inverse of non-square matrix");
  const std::size_t n = a.rows();
  RatMatrix m = a;
  RatMatrix inv = RatMatrix::identity(n);
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t piv = c;
    while (piv < n && m(piv, c) == 0) ++piv;
    if (piv == n) throw SingularMatrix("matrix is singular");
    m.swap_rows(c, piv);
    inv.swap_rows(c, piv);
    const Rat k = m(c, c);
    for (std::size_t j = 0; j < n; ++j) {
      m(c, j) /= k;
      inv(c, j) /= k;
    }
    for (std::size_t r = 0; r < n; ++r) {
      if (r == c || m(r, c) == 0) continue;
      const Rat f = -m(r, c);
      m.add_row(r, c, f);
      inv.add_row(r, c, f);
    }
  }
  return inv;
}

inline RatMatrix rat_inverse(const IntMatrix& a) { return rat_inverse(to_rational(a)); }

/// Inverse of a unimodular integer matrix.
inline IntMatrix unimodular_inverse(const IntMatrix& a) { return to_integer(rat_inverse(a)); }

struct SmithForm {
  IntMatrix u;  // rows x rows, unimodular
  IntMatrix d;  // rows x cols, diagonal
  IntMatrix v;  // cols x cols, unimodular

  std::size_t rank() const {
    std::size_t r = 0;
    while (r < std::min(d.rows(), d.cols()) && d(r, r) != 0) ++r;
    return r;
  }
  /// The nonzero diagonal entries d_1 | d_2 | ...
  std::vector<Int> divisors() const {
    std::vector<Int> out;
    for (std::size_t i = 0; i < rank(); ++i) out.push_back(d(i, i));
    return out;
  }
};

/// Smith normal form with transforms: u * a * v == d.
inline SmithForm smith_normal_form(const IntMatrix& a) {
  const std::size_t m = a.rows(), n = a.cols();
  SmithForm s{IntMatrix::identity(m), a, IntMatrix::identity(n)};
  IntMatrix& d = s.d;

  auto min_pivot = [&](std::size_t t, std::size_t& pr, std::size_t& pc) {
    bool found = false;
    Int best;
    for (std::size_t i = t; i < m; ++i)
      for (std::size_t j = t; j < n; ++j) {
        if (d(i, j) == 0) continue;
        const Int av = abs(d(i, j));
        if (!found || av < best) {
          best = av;
          pr = i;
          pc = j;
          found = true;
        }
      }
    return found;
  };

  for (std::size_t t = 0; t < std::min(m, n); ++t) {
    std::size_t pr = t, pc = t;
    if (!min_pivot(t, pr, pc)) break;
    while (true) {
      d.swap_rows(t, pr);
      s.u.swap_rows(t, pr);
      d.swap_cols(t, pc);
      s.v.swap_cols(t, pc);

      bool dirty = false;
      for (std::size_t i = t + 1; i < m; ++i) {
        if (d(i, t) == 0) continue;
        const Int q = d(i, t) / d(t, t);
        d.add_row(i, t, -q);
        s.u.add_row(i, t, -q);
        if (d(i, t) != 0) dirty = true;
      }
      for (std::size_t j = t + 1; j < n; ++j) {
        if (d(t, j) == 0) continue;
        const Int q = d(t, j) / d(t, t);
        d.add_col(j, t, -q);
        s.v.add_col(j, t, -q);
        if (d(t, j) != 0) dirty = true;
      }
      if (dirty) {
        min_pivot(t, pr, pc);
        continue;
      }
      // Enforce d_t | every remaining entry.
      bool fixed = false;
      for (std::size_t i = t + 1; i < m && !fixed; ++i)
        for (std::size_t j = t + 1; j < n && !fixed; ++j)
          if (d(i, j) % d(t, t) != 0) {
            d.add_row(t, i, Int(1));
            s.u.add_row(t, i, Int(1));
            fixed = true;
          }
      if (!fixed) break;
      pr = t;
      pc = t;
      min_pivot(t, pr, pc);
    }
    if (d(t, t) < 0) {
      d.negate_row(t);
      s.u.negate_row(t);
    }
  }
  return s;
}

/// Integer basis (as rows) of the kernel {x in Z^n : a x = 0}; saturated.
inline IntMatrix integer_kernel(const IntMatrix& a) {
  const SmithForm s = smith_normal_form(a);
  const std::size_t r = s.rank();
  const std::size_t n = a.cols();
  IntMatrix k(n - r, n);
  for (std::size_t i = r; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) k(i - r, j) = s.v(j, i);
  return k;
}

/// Some integer solution of a x = b, if one exists.
inline std::optional<IntVector> solve_integer(const IntMatrix& a, const IntVector& b) {
  const SmithForm s = smith_normal_form(a);
  const IntVector ub = s.u.apply(b);
  const std::size_t r = s.rank();
  IntVector y(a.cols());
  for (std::size_t i = 0; i < ub.size(); ++i) {
    if (i < r) {
      if (ub[i] % s.d(i, i) != 0) return std::nullopt;
      y[i] = ub[i] / s.d(i, i);
    } else if (ub[i] != 0) {
      return std::nullopt;
    }
  }
  return s.v.apply(y);
}

/// Z-basis (rows) of the row span of `rows`.
inline IntMatrix row_basis(const IntMatrix& rows) {
  const SmithForm s = smith_normal_form(rows);
  const IntMatrix vinv = unimodular_inverse(s.v);
  const std::size_t r = s.rank();
  IntMatrix out(r, rows.cols());
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < rows.cols(); ++j) out(i, j) = s.d(i, i) * vinv(i, j);
  return out;
}

/// Primitive closure (span over Q intersected with Z^n), as rows.
inline IntMatrix saturate(const IntMatrix& rows) {
  const SmithForm s = smith_normal_form(rows);
  const IntMatrix vinv = unimodular_inverse(s.v);
  return vinv.block(0, 0, s.rank(), rows.cols());
}

/// True when the rows are independent and span a primitive sublattice.
inline bool is_primitive(const IntMatrix& rows) {
  const SmithForm s = smith_normal_form(rows);
  if (s.rank() != rows.rows()) return false;
  for (const Int& d : s.divisors())
    if (d != 1) return false;
  return true;
}

/// Unimodular n x n matrix whose first k rows are the given primitive rows.
inline IntMatrix complete_to_basis(const IntMatrix& rows) {
  const std::size_t k = rows.rows(), n = rows.cols();
  if (!is_primitive(rows)) throw Error("rows do not span a primitive sublattice");
  const SmithForm s = smith_normal_form(rows);
  IntMatrix left = IntMatrix::identity(n);
  left.set_block(0, 0, unimodular_inverse(s.u));
  IntMatrix out = left * unimodular_inverse(s.v);
  // First k rows equal u^{-1} [I 0] v^{-1} = rows.
  (void)k;
  return out;
}

/// Coordinates x with x * basis == v (basis given as rows), over Q.
inline std::optional<std::vector<Rat>> rational_coordinates(const IntMatrix& basis, const IntVector& v) {
  // Solve basis^T x = v by elimination on the augmented system.
  const std::size_t k = basis.rows(), n = basis.cols();
  RatMatrix m(n, k + 1);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < k; ++j) m(i, j) = Rat(basis(j, i));
    m(i, k) = Rat(v[i]);
  }
  std::size_t row = 0;
  std::vector<std::size_t> pivots;
  for (std::size_t c = 0; c < k && row < n; ++c) {
    std::size_t p = row;
    while (p < n && m(p, c) == 0) ++p;
    if (p == n) continue;
    m.swap_rows(row, p);
    const Rat f = m(row, c);
    for (std::size_t j = 0; j <= k; ++j) m(row, j) /= f;
    for (std::size_t r = 0; r < n; ++r)
      if (r != row && m(r, c) != 0) m.add_row(r, row, Rat(-m(r, c)));
    pivots.push_back(c);
    ++row;
  }
  for (std::size_t r = row; r < n; ++r)
    if (m(r, k) != 0) return std::nullopt;
  std::vector<Rat> x(k);
  for (std::size_t i = 0; i < pivots.size(); ++i) x[pivots[i]] = m(i, k);
  return x;
}

}  // namespace orthocusp
