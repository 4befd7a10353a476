#pragma once

#include <orthocusp/bigint.hpp>

#include <array>
#include <cctype>
#include <complex>
#include <numbers>
#include <ostream>
#include <string>

namespace orthocusp {

/// Element c0 + c1 z + c2 z^2 + c3 z^3 of Z[z], z a primitive 12th root of
/// unity with z^4 = z^2 - 1.  Houses i = z^3 and w = z^4 = z^2 - 1.
class Cyclotomic12 {
 public:
  using Coeffs = std::array<Int, 4>;

  Cyclotomic12() = default;
  Cyclotomic12(const Int& c) : c_{c, 0, 0, 0} {}  // NOLINT: implicit from integers is intended
  Cyclotomic12(int c) : c_{c, 0, 0, 0} {}         // NOLINT
  explicit Cyclotomic12(Coeffs c) : c_(std::move(c)) {}

  static Cyclotomic12 zeta_power(long k) {
    k %= 12;
    if (k < 0) k += 12;
    const bool neg = k >= 6;
    if (neg) k -= 6;
    // z^4 = z^2 - 1, z^5 = z^3 - z.
    Coeffs c{};
    switch (k) {
      case 0: c = {1, 0, 0, 0}; break;
      case 1: c = {0, 1, 0, 0}; break;
      case 2: c = {0, 0, 1, 0}; break;
      case 3: c = {0, 0, 0, 1}; break;
      case 4: c = {-1, 0, 1, 0}; break;
      default: c = {0, -1, 0, 1}; break;
    }
    Cyclotomic12 out(c);
    return neg ? -out : out;
  }
  static Cyclotomic12 zeta() { return zeta_power(1); }
  static Cyclotomic12 i() { return zeta_power(3); }
  static Cyclotomic12 omega() { return zeta_power(4); }

  /// Parses sums of terms like "-2i", "1 - w^2", "-3w" (w stands for omega).
  static Cyclotomic12 parse(const std::string& text);

  const Coeffs& coeffs() const { return c_; }
  const Int& operator[](std::size_t k) const { return c_[k]; }

  bool is_zero() const { return c_[0] == 0 && c_[1] == 0 && c_[2] == 0 && c_[3] == 0; }

  friend bool operator==(const Cyclotomic12& a, const Cyclotomic12& b) { return a.c_ == b.c_; }
  friend bool operator!=(const Cyclotomic12& a, const Cyclotomic12& b) { return !(a == b); }

  friend Cyclotomic12 operator+(const Cyclotomic12& a, const Cyclotomic12& b) {
    Coeffs c;
    for (int k = 0; k < 4; ++k) c[k] = a.c_[k] + b.c_[k];
    return Cyclotomic12(c);
  }
  friend Cyclotomic12 operator-(const Cyclotomic12& a, const Cyclotomic12& b) {
    Coeffs c;
    for (int k = 0; k < 4; ++k) c[k] = a.c_[k] - b.c_[k];
    return Cyclotomic12(c);
  }
  friend Cyclotomic12 operator-(const Cyclotomic12& a) { return Cyclotomic12(0) - a; }
  friend Cyclotomic12 operator*(const Cyclotomic12& a, const Cyclotomic12& b) {
    std::array<Int, 7> p{};
    for (int x = 0; x < 4; ++x)
      for (int y = 0; y < 4; ++y) p[x + y] += a.c_[x] * b.c_[y];
    // z^6 = -1, z^5 = z^3 - z, z^4 = z^2 - 1.
    p[0] -= p[6];
    p[3] += p[5];
    p[1] -= p[5];
    p[2] += p[4];
    p[0] -= p[4];
    return Cyclotomic12(Coeffs{p[0], p[1], p[2], p[3]});
  }
  Cyclotomic12& operator+=(const Cyclotomic12& o) { return *this = *this + o; }
  Cyclotomic12& operator-=(const Cyclotomic12& o) { return *this = *this - o; }
  Cyclotomic12& operator*=(const Cyclotomic12& o) { return *this = *this * o; }

  Cyclotomic12 pow(unsigned e) const {
    Cyclotomic12 r(1), b = *this;
    while (e) {
      if (e & 1u) r *= b;
      b *= b;
      e >>= 1;
    }
    return r;
  }

  /// Image under the automorphism z -> z^k, k coprime to 12.
  Cyclotomic12 galois(int k) const {
    Cyclotomic12 out;
    for (int j = 0; j < 4; ++j)
      if (c_[j] != 0) out += Cyclotomic12(c_[j]) * zeta_power(static_cast<long>(j) * k);
    return out;
  }

  /// Complex conjugate (z -> z^11).
  Cyclotomic12 conj() const { return galois(11); }

  /// Absolute norm down to Z.
  Int norm() const {
    const Cyclotomic12 n = (*this) * galois(5) * galois(7) * galois(11);
    return n.c_[0];
  }

  std::complex<double> to_complex() const {
    std::complex<double> s = 0;
    for (int j = 0; j < 4; ++j)
      s += c_[j].convert_to<double>() * std::polar(1.0, j * std::numbers::pi / 6.0);
    return s;
  }

  /// True when the element lies in Z[i] (c1 = c2 = 0).
  bool in_gaussian() const { return c_[1] == 0 && c_[2] == 0; }
  /// True when the element lies in Z[w] (c1 = c3 = 0).
  bool in_eisenstein() const { return c_[1] == 0 && c_[3] == 0; }

  /// Renders in the notation 1, i or 1, w, w^2 where possible.
  std::string str() const;

  friend std::ostream& operator<<(std::ostream& os, const Cyclotomic12& v) { return os << v.str(); }

 private:
  Coeffs c_{0, 0, 0, 0};
};

/// a / b written as num / den with num in Z[z] and den a positive integer.
struct CycloFraction {
  Cyclotomic12 num;
  Int den;

  /// Least positive K with K * (num / den) integral.
  Int denominator_bound() const {
    Int g = den;
    for (const Int& c : num.coeffs()) g = gcd(g, c);
    return den / g;
  }
};

inline CycloFraction divide(const Cyclotomic12& a, const Cyclotomic12& b) {
  if (b.is_zero()) throw Error("division by zero in Z[zeta12]");
  const Cyclotomic12 co = b.galois(5) * b.galois(7) * b.galois(11);
  Int n = b.norm();
  Cyclotomic12 num = a * co;
  if (n < 0) {
    n = -n;
    num = -num;
  }
  Int g = n;
  for (const Int& c : num.coeffs()) g = gcd(g, c);
  Cyclotomic12::Coeffs c = num.coeffs();
  for (auto& x : c) x /= g;
  return {Cyclotomic12(c), n / g};
}

namespace detail {

inline std::string render_terms(const std::array<Int, 3>& coef, const std::array<const char*, 3>& sym) {
  std::string out;
  for (int k = 0; k < 3; ++k) {
    const Int& v = coef[k];
    if (v == 0) continue;
    const bool neg = v < 0;
    const Int a = neg ? Int(-v) : v;
    if (out.empty()) {
      if (neg) out += "-";
    } else {
      out += neg ? " - " : " + ";
    }
    if (k == 0 || a != 1) out += a.str();
    out += sym[k];
  }
  return out.empty() ? "0" : out;
}

}  // namespace detail

inline std::string Cyclotomic12::str() const {
  if (in_gaussian()) return detail::render_terms({c_[0], c_[3], 0}, {"", "i", ""});
  if (in_eisenstein()) {
    // a + b w with a = c0 + c2, b = c2; alternatively (a - b) - b w^2.
    const Int a = c_[0] + c_[2], b = c_[2];
    auto cost = [](const Int& x, const Int& y) {
      return std::pair<int, Int>{(x != 0) + (y != 0), abs(x) + abs(y)};
    };
    if (cost(a - b, -b) < cost(a, b)) return detail::render_terms({a - b, 0, -b}, {"", "w", "w^2"});
    return detail::render_terms({a, b, 0}, {"", "w", ""});
  }
  std::string out;
  for (int j = 0; j < 4; ++j) {
    if (c_[j] == 0) continue;
    if (!out.empty()) out += c_[j] < 0 ? " - " : " + ";
    else if (c_[j] < 0) out += "-";
    const Int a = abs(c_[j]);
    if (j == 0 || a != 1) out += a.str();
    if (j == 1) out += "z";
    if (j > 1) out += "z^" + std::to_string(j);
  }
  return out;
}

inline Cyclotomic12 Cyclotomic12::parse(const std::string& text) {
  Cyclotomic12 total;
  std::size_t pos = 0;
  auto skip = [&] {
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
  };
  skip();
  if (pos == text.size()) throw Error("empty cyclotomic expression");
  while (pos < text.size()) {
    int sign = 1;
    while (pos < text.size() && (text[pos] == '+' || text[pos] == '-')) {
      if (text[pos] == '-') sign = -sign;
      ++pos;
      skip();
    }
    std::string digits;
    while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) digits += text[pos++];
    Int coef = digits.empty() ? Int(1) : Int(digits);
    Cyclotomic12 unit(1);
    if (pos < text.size() && text[pos] == 'i') {
      unit = i();
      ++pos;
    } else if (pos < text.size() && text[pos] == 'w') {
      unit = omega();
      ++pos;
      if (pos + 1 < text.size() && text[pos] == '^') {
        const int e = text[pos + 1] - '0';
        if (e < 0 || e > 9) throw Error("bad exponent in '" + text + "'");
        unit = omega().pow(static_cast<unsigned>(e));
        pos += 2;
      }
    } else if (digits.empty()) {
      throw Error("cannot parse cyclotomic expression '" + text + "'");
    }
    total += Cyclotomic12(sign * coef) * unit;
    skip();
  }
  return total;
}

/// 2x2 matrix over Z[zeta12].
using Cyclo2x2 = std::array<std::array<Cyclotomic12, 2>, 2>;

inline Cyclotomic12 cyclo_det(const Cyclo2x2& t) { return t[0][0] * t[1][1] - t[0][1] * t[1][0]; }

}  // namespace orthocusp
