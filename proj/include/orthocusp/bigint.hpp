#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <stdexcept>
#include <string>

namespace orthocusp {

using Int = boost::multiprecision::cpp_int;
using Rat = boost::multiprecision::cpp_rational;

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raised when an enumeration would exceed its configured cap.
class CapExceeded : public Error {
 public:
  using Error::Error;
};

inline std::string to_string(const Int& v) { return v.str(); }

inline std::string to_string(const Rat& v) {
  const Int num = boost::multiprecision::numerator(v);
  const Int den = boost::multiprecision::denominator(v);
  if (den == 1) return num.str();
  return num.str() + "/" + den.str();
}

inline Int parse_int(const std::string& s) { return Int(s); }

inline Int abs(const Int& v) { return v < 0 ? Int(-v) : v; }

inline Int gcd(const Int& a, const Int& b) {
  return boost::multiprecision::gcd(abs(a), abs(b));
}

inline Int lcm(const Int& a, const Int& b) {
  if (a == 0 || b == 0) return 0;
  return abs(a / gcd(a, b) * b);
}

/// Least nonnegative residue of a modulo m (m > 0).
inline Int mod(const Int& a, const Int& m) {
  Int r = a % m;
  if (r < 0) r += m;
  return r;
}

/// Floor division for m > 0.
inline Int floor_div(const Int& a, const Int& m) {
  return (a - mod(a, m)) / m;
}

inline std::int64_t to_i64(const Int& v) {
  if (v > std::numeric_limits<std::int64_t>::max() ||
      v < std::numeric_limits<std::int64_t>::min()) {
    throw Error("integer does not fit in 64 bits: " + v.str());
  }
  return v.convert_to<std::int64_t>();
}

inline Int numerator(const Rat& r) { return boost::multiprecision::numerator(r); }
inline Int denominator(const Rat& r) { return boost::multiprecision::denominator(r); }

inline bool is_integral(const Rat& r) { return denominator(r) == 1; }

/// Representative of r modulo m in [0, m).
inline Rat mod(const Rat& r, const Int& m) {
  const Int den = denominator(r);
  const Int num = mod(numerator(r), m * den);
  return Rat(num, den);
}

inline Int pow(const Int& base, unsigned exp) {
  return boost::multiprecision::pow(base, exp);
}

/// Extended gcd: returns g = gcd(a, b) >= 0 and sets x, y with a*x + b*y = g.
inline Int ext_gcd(const Int& a, const Int& b, Int& x, Int& y) {
  Int old_r = a, r = b, old_s = 1, s = 0, old_t = 0, t = 1;
  while (r != 0) {
    const Int q = old_r / r;
    Int tmp = old_r - q * r;
    old_r = r;
    r = tmp;
    tmp = old_s - q * s;
    old_s = s;
    s = tmp;
    tmp = old_t - q * t;
    old_t = t;
    t = tmp;
  }
  if (old_r < 0) {
    old_r = -old_r;
    old_s = -old_s;
    old_t = -old_t;
  }
  x = old_s;
  y = old_t;
  return old_r;
}

inline bool is_prime(std::int64_t n) {
  if (n < 2) return false;
  for (std::int64_t d = 2; d * d <= n; ++d) {
    if (n % d == 0) return false;
  }
  return true;
}

}  // namespace orthocusp
