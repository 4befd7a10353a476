#pragma once

#include <orthocusp/linalg.hpp>

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace orthocusp {

class BadPrime : public Error {
 public:
  using Error::Error;
};
class DegenerateForm : public Error {
 public:
  using Error::Error;
};

namespace modp {

inline std::int64_t reduce(std::int64_t a, std::int64_t p) {
  a %= p;
  return a < 0 ? a + p : a;
}
inline std::int64_t reduce(const Int& a, std::int64_t p) { return to_i64(mod(a, Int(p))); }
inline std::int64_t mul(std::int64_t a, std::int64_t b, std::int64_t p) {
  return static_cast<std::int64_t>(static_cast<__int128>(a) * b % p);
}
inline std::int64_t power(std::int64_t a, std::int64_t e, std::int64_t p) {
  std::int64_t r = 1;
  a = reduce(a, p);
  while (e > 0) {
    if (e & 1) r = mul(r, a, p);
    a = mul(a, a, p);
    e >>= 1;
  }
  return r;
}
inline std::int64_t inverse(std::int64_t a, std::int64_t p) {
  a = reduce(a, p);
  if (a == 0) throw Error("zero has no inverse mod " + std::to_string(p));
  return power(a, p - 2, p);
}
/// Legendre symbol (a/p) for an odd prime p: 0, 1 or -1.
inline int legendre(std::int64_t a, std::int64_t p) {
  a = reduce(a, p);
  if (a == 0) return 0;
  return power(a, (p - 1) / 2, p) == 1 ? 1 : -1;
}
/// Least generator of F_p^*.
inline std::int64_t primitive_root(std::int64_t p) {
  std::vector<std::int64_t> factors;
  std::int64_t n = p - 1;
  for (std::int64_t l = 2; l * l <= n; ++l)
    if (n % l == 0) {
      factors.push_back(l);
      while (n % l == 0) n /= l;
    }
  if (n > 1) factors.push_back(n);
  for (std::int64_t g = 2; g < p; ++g) {
    bool ok = true;
    for (auto l : factors) ok = ok && power(g, (p - 1) / l, p) != 1;
    if (ok) return g;
  }
  return 1;
}

/// Square n x n matrix over F_p, row-major.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t n, std::int64_t p) : n_(n), p_(p), a_(n * n, 0) {}
  Matrix(const IntMatrix& m, std::int64_t p) : Matrix(m.rows(), p) {
    if (!m.square()) throw DimensionMismatch("expected a square matrix");
    for (std::size_t i = 0; i < n_; ++i)
      for (std::size_t j = 0; j < n_; ++j) a_[i * n_ + j] = reduce(m(i, j), p);
  }
  static Matrix identity(std::size_t n, std::int64_t p) {
    Matrix m(n, p);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
    return m;
  }

  std::size_t size() const { return n_; }
  std::int64_t prime() const { return p_; }
  std::int64_t& operator()(std::size_t i, std::size_t j) { return a_[i * n_ + j]; }
  std::int64_t operator()(std::size_t i, std::size_t j) const { return a_[i * n_ + j]; }

  friend Matrix operator*(const Matrix& x, const Matrix& y) {
    Matrix r(x.n_, x.p_);
    for (std::size_t i = 0; i < x.n_; ++i)
      for (std::size_t k = 0; k < x.n_; ++k) {
        const std::int64_t v = x(i, k);
        if (v == 0) continue;
        for (std::size_t j = 0; j < x.n_; ++j) r(i, j) = (r(i, j) + v * y(k, j)) % x.p_;
      }
    return r;
  }
  friend bool operator==(const Matrix& x, const Matrix& y) { return x.p_ == y.p_ && x.a_ == y.a_; }

  std::vector<std::int64_t> apply(const std::vector<std::int64_t>& v) const {
    std::vector<std::int64_t> out(n_, 0);
    for (std::size_t i = 0; i < n_; ++i) {
      std::int64_t s = 0;
      for (std::size_t j = 0; j < n_; ++j) s = (s + a_[i * n_ + j] * v[j]) % p_;
      out[i] = s;
    }
    return out;
  }

  Matrix transpose() const {
    Matrix t(n_, p_);
    for (std::size_t i = 0; i < n_; ++i)
      for (std::size_t j = 0; j < n_; ++j) t(j, i) = (*this)(i, j);
    return t;
  }

  std::int64_t det() const {
    std::vector<std::int64_t> a = a_;
    std::int64_t d = 1;
    for (std::size_t c = 0; c < n_; ++c) {
      std::size_t piv = c;
      while (piv < n_ && a[piv * n_ + c] == 0) ++piv;
      if (piv == n_) return 0;
      if (piv != c) {
        for (std::size_t j = 0; j < n_; ++j) std::swap(a[c * n_ + j], a[piv * n_ + j]);
        d = reduce(-d, p_);
      }
      d = mul(d, a[c * n_ + c], p_);
      const std::int64_t inv = inverse(a[c * n_ + c], p_);
      for (std::size_t r = c + 1; r < n_; ++r) {
        const std::int64_t f = mul(a[r * n_ + c], inv, p_);
        if (f == 0) continue;
        for (std::size_t j = c; j < n_; ++j) a[r * n_ + j] = reduce(a[r * n_ + j] - f * a[c * n_ + j], p_);
      }
    }
    return d;
  }

 private:
  std::size_t n_ = 0;
  std::int64_t p_ = 2;
  std::vector<std::int64_t> a_;
};

inline std::int64_t form(const Matrix& gram, const std::vector<std::int64_t>& x, const std::vector<std::int64_t>& y) {
  const std::size_t n = gram.size();
  const std::int64_t p = gram.prime();
  std::int64_t s = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (x[i] == 0) continue;
    std::int64_t row = 0;
    for (std::size_t j = 0; j < n; ++j) row = (row + gram(i, j) * y[j]) % p;
    s = (s + x[i] * row) % p;
  }
  return s;
}

}  // namespace modp

inline void require_odd_prime(std::int64_t p) {
  if (p < 3 || !is_prime(p)) throw BadPrime(std::to_string(p) + " is not an odd prime");
}

/// A nondegenerate quadratic space over F_p given by its symmetric Gram matrix.
class FqSpace {
 public:
  FqSpace(const IntMatrix& gram, std::int64_t p) : gram_(gram, p) {
    require_odd_prime(p);
    if (!gram.is_symmetric()) throw Error("Gram matrix must be symmetric");
    if (gram_.det() == 0) throw DegenerateForm("form is degenerate mod " + std::to_string(p));
  }

  std::int64_t prime() const { return gram_.prime(); }
  std::size_t dim() const { return gram_.size(); }
  const modp::Matrix& gram() const { return gram_; }
  /// Legendre symbol of the discriminant.
  int disc_class() const { return modp::legendre(gram_.det(), prime()); }

 private:
  modp::Matrix gram_;
};

/// dim = 2m (epsilon = +-1) or dim = 2m + 1 (epsilon = 0).
struct SpaceClass {
  std::size_t m = 0;
  int epsilon = 0;
  bool odd() const { return epsilon == 0; }
  /// "H1 + ... + Hm", "V_theta + H1 + ... + H(m-1)" or "V^(2m+1)".
  std::string describe() const {
    if (odd()) return "V^" + std::to_string(2 * m + 1);
    std::string s = epsilon > 0 ? "" : "V_theta";
    const std::size_t h = epsilon > 0 ? m : m - 1;
    for (std::size_t i = 1; i <= h; ++i) s += (s.empty() ? "H" : " + H") + std::to_string(i);
    return s.empty() ? "0" : s;
  }
};

/// For even dimension, epsilon = ((-1)^m disc / p).
inline SpaceClass classify_space(const FqSpace& s) {
  SpaceClass c;
  c.m = s.dim() / 2;
  if (s.dim() % 2 == 1) return c;
  const std::int64_t sign = (c.m % 2 == 0) ? 1 : -1;
  c.epsilon = modp::legendre(sign * s.gram().det(), s.prime());
  return c;
}

/// Order of O+(V) = SO(V) from the product formulas
///   |O+(V^{2m+1})| = (q^{2m} - 1) q^{2m-1} ... (q^2 - 1) q,
///   |O+(V_eps^{2m})| = (q^{2m-1} - eps q^{m-1}) (q^{2m-2} - 1) q^{2m-3} ... (q^2 - 1) q.
inline Int oplus_order(const SpaceClass& c, std::int64_t q) {
  const Int Q(q);
  Int r = 1;
  if (c.odd()) {
    for (std::size_t i = 1; i <= c.m; ++i) r *= (pow(Q, 2 * i) - 1) * pow(Q, 2 * i - 1);
    return r;
  }
  if (c.m == 0) return 1;
  r = pow(Q, 2 * c.m - 1) - Int(c.epsilon) * pow(Q, c.m - 1);
  for (std::size_t i = 1; i + 1 <= c.m; ++i) r *= (pow(Q, 2 * i) - 1) * pow(Q, 2 * i - 1);
  return r;
}

inline Int oplus_order(const FqSpace& s) { return oplus_order(classify_space(s), s.prime()); }

/// Counts isometries of s (all, and those of determinant 1) by building the
/// images of the basis vectors one at a time. `cap` bounds the number of
/// candidate vectors examined.
struct IsometryCount {
  Int all;
  Int det_one;
};

inline IsometryCount brute_force_isometry_count(const FqSpace& s, std::uint64_t cap = 1'000'000) {
  const std::size_t n = s.dim();
  const std::int64_t p = s.prime();
  const auto& g = s.gram();
  std::uint64_t vectors = 1;
  for (std::size_t i = 0; i < n; ++i) vectors *= static_cast<std::uint64_t>(p);
  std::vector<std::vector<std::int64_t>> all_vectors;
  for (std::uint64_t idx = 0; idx < vectors; ++idx) {
    std::vector<std::int64_t> v(n);
    std::uint64_t t = idx;
    for (std::size_t i = 0; i < n; ++i) {
      v[i] = static_cast<std::int64_t>(t % static_cast<std::uint64_t>(p));
      t /= static_cast<std::uint64_t>(p);
    }
    all_vectors.push_back(std::move(v));
  }
  std::uint64_t examined = 0;
  IsometryCount out{0, 0};
  std::vector<std::vector<std::int64_t>> images(n);
  std::function<void(std::size_t)> rec = [&](std::size_t j) {
    if (j == n) {
      modp::Matrix m(n, p);
      for (std::size_t c = 0; c < n; ++c)
        for (std::size_t r = 0; r < n; ++r) m(r, c) = images[c][r];
      out.all += 1;
      if (m.det() == 1) out.det_one += 1;
      return;
    }
    for (const auto& v : all_vectors) {
      if (++examined > cap) throw CapExceeded("isometry enumeration exceeded cap");
      bool ok = modp::form(g, v, v) == g(j, j);
      for (std::size_t i = 0; i < j && ok; ++i) ok = modp::form(g, images[i], v) == g(i, j);
      if (!ok) continue;
      images[j] = v;
      rec(j + 1);
    }
  };
  rec(0);
  return out;
}

/// The factor bounding |O(L_{6,2p^2}) : O~(L_{6,2p^2})| in the index bound.
/// The proof's displayed chain uses 8; the theorem statement carries 16.
enum class IndexConstant { Proof = 8, Statement = 16 };

/// |O+(V_eps^6)| / |O+(V^5)| over F_p, which telescopes to p^5 - eps p^2.
inline Int stab_index_quotient(std::int64_t p, int epsilon) {
  const Int six = oplus_order(SpaceClass{3, epsilon}, p);
  const Int five = oplus_order(SpaceClass{2, 0}, p);
  if (six % five != 0) throw Error("order quotient is not integral");
  return six / five;
}

/// c * (p^5 + p^2) for primes p > 3, the worst case eps = -1 of the quotient.
inline Int stab_index_bound(std::int64_t p, IndexConstant c = IndexConstant::Proof) {
  require_odd_prime(p);
  if (p <= 3) throw BadPrime("index bound needs p > 3");
  return Int(static_cast<int>(c)) * stab_index_quotient(p, -1);
}

/// Reduction of L_{6,2} = U + U + <-6> + <-2> modulo p.
inline FqSpace l62_mod_p(std::int64_t p) {
  IntMatrix g(6, 6);
  g(0, 1) = g(1, 0) = g(2, 3) = g(3, 2) = 1;
  g(4, 4) = -6;
  g(5, 5) = -2;
  return FqSpace(g, p);
}

}  // namespace orthocusp
