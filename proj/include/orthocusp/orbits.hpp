#pragma once

#include <orthocusp/discriminant.hpp>
#include <orthocusp/finite_field.hpp>
#include <orthocusp/lattice.hpp>

#include <array>
#include <cstdint>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace orthocusp {

class NotOrthogonal : public Error {
 public:
  using Error::Error;
};
class NotSL2 : public Error {
 public:
  using Error::Error;
};
class InconsistentInput : public Error {
 public:
  using Error::Error;
};

/// Eichler transvection of the parent lattice of e and a.
inline IntMatrix transvection(const LatticeVector& e, const LatticeVector& a) {
  if (!(*e.parent == *a.parent)) throw ParentMismatch("transvection vectors belong to different lattices");
  if (inner_product(e, e) != 0) throw NotIsotropic("transvection vector e is not isotropic");
  if (inner_product(e, a) != 0) throw NotOrthogonal("transvection vector a is not orthogonal to e");
  return eichler_transvection(e.parent->gram(), e.coords, a.coords);
}

using SL2 = std::array<std::array<Int, 2>, 2>;

namespace detail {

/// (w, x, y, z) on U + U corresponds to m = [[w, -y], [z, x]]; det m = wx + yz.
template <class T, class F>
Matrix<T> conjugation_action(const std::array<std::array<T, 2>, 2>& a, const std::array<std::array<T, 2>, 2>& binv,
                             F&& reduce) {
  Matrix<T> out(4, 4);
  for (std::size_t c = 0; c < 4; ++c) {
    std::array<T, 4> v{};
    v[c] = 1;
    const std::array<std::array<T, 2>, 2> m{{{v[0], -v[2]}, {v[3], v[1]}}};
    std::array<std::array<T, 2>, 2> am{}, r{};
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) am[i][j] = a[i][0] * m[0][j] + a[i][1] * m[1][j];
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) r[i][j] = am[i][0] * binv[0][j] + am[i][1] * binv[1][j];
    out(0, c) = reduce(r[0][0]);
    out(1, c) = reduce(r[1][1]);
    out(2, c) = reduce(-r[0][1]);
    out(3, c) = reduce(r[1][0]);
  }
  return out;
}

}  // namespace detail

/// The isometry of U + U (basis e1, f1, e2, f2) induced by m -> A m B^-1.
inline IntMatrix sl2_pair_action(const SL2& a, const SL2& b) {
  for (const auto* m : {&a, &b})
    if ((*m)[0][0] * (*m)[1][1] - (*m)[0][1] * (*m)[1][0] != 1) throw NotSL2("matrix does not have determinant 1");
  const SL2 binv{{{b[1][1], -b[0][1]}, {-b[1][0], b[0][0]}}};
  return detail::conjugation_action<Int>(a, binv, [](const Int& x) { return x; });
}

/// Pads a 4x4 action on U + U by the identity on the remaining coordinates.
inline IntMatrix extend_identity(const IntMatrix& g, std::size_t n) {
  IntMatrix out = IntMatrix::identity(n);
  out.set_block(0, 0, g);
  return out;
}

/// One step of a reduction witness over F_p.
struct GeneratorStep {
  enum class Kind { Transvection, SL2Pair, Permutation, Scalar };
  Kind kind;
  std::string label;
  modp::Matrix matrix;
};

/// A word in the generators, applied left to right to a column vector.
struct GeneratorWord {
  std::vector<GeneratorStep> steps;

  modp::Matrix evaluate(std::size_t n, std::int64_t p) const {
    modp::Matrix g = modp::Matrix::identity(n, p);
    for (const auto& s : steps) g = s.matrix * g;
    return g;
  }
  std::vector<std::string> labels() const {
    std::vector<std::string> out;
    for (const auto& s : steps) out.push_back(s.label);
    return out;
  }
};

using ModPVector = std::vector<std::int64_t>;

namespace detail {

inline IntVector basis_vector(std::size_t i, const Int& k = 1) {
  IntVector v(6);
  v[i] = k;
  return v;
}

inline const IntMatrix& l62_gram() {
  static const IntMatrix g = lattices::L(6, 2).gram();
  return g;
}

/// t(e, a v1 + b v2) for e = e_index (0..3) on L_{6,2}, reduced mod p.
inline GeneratorStep transvection_step(std::size_t e_index, std::int64_t alpha, std::int64_t beta, std::int64_t p) {
  static const char* names[] = {"e1", "f1", "e2", "f2"};
  IntVector a(6);
  a[4] = alpha;
  a[5] = beta;
  const IntMatrix t = eichler_transvection(l62_gram(), basis_vector(e_index), a);
  return {GeneratorStep::Kind::Transvection,
          "t(" + std::string(names[e_index]) + ", " + std::to_string(alpha) + "v1 + " + std::to_string(beta) + "v2)",
          modp::Matrix(t, p)};
}

inline GeneratorStep permutation_step(const std::array<std::size_t, 6>& perm, const std::string& label, std::int64_t p) {
  modp::Matrix m(6, p);
  for (std::size_t c = 0; c < 6; ++c) m(perm[c], c) = 1;
  return {GeneratorStep::Kind::Permutation, label, m};
}

inline GeneratorStep swap_planes(std::int64_t p) { return permutation_step({2, 3, 0, 1, 4, 5}, "swap(U1, U2)", p); }
inline GeneratorStep swap_e2_f2(std::int64_t p) { return permutation_step({0, 1, 3, 2, 4, 5}, "swap(e2, f2)", p); }

using ModSL2 = std::array<std::array<std::int64_t, 2>, 2>;

inline GeneratorStep sl2_step(const ModSL2& a, const ModSL2& binv, std::int64_t p) {
  const auto g4 = conjugation_action<std::int64_t>(a, binv, [p](std::int64_t x) { return modp::reduce(x, p); });
  modp::Matrix m = modp::Matrix::identity(6, p);
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 4; ++j) m(i, j) = g4(i, j);
  auto show = [](const ModSL2& x) {
    return "[[" + std::to_string(x[0][0]) + "," + std::to_string(x[0][1]) + "],[" + std::to_string(x[1][0]) + "," +
           std::to_string(x[1][1]) + "]]";
  };
  const ModSL2 b{{{binv[1][1], modp::reduce(-binv[0][1], p)}, {modp::reduce(-binv[1][0], p), binv[0][0]}}};
  return {GeneratorStep::Kind::SL2Pair, "(A, B) = (" + show(a) + ", " + show(b) + ")", m};
}

inline ModSL2 mul2(const ModSL2& x, const ModSL2& y, std::int64_t p) {
  ModSL2 r{};
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) r[i][j] = (x[i][0] * y[0][j] + x[i][1] * y[1][j]) % p;
  return r;
}

}  // namespace detail

/// (x, x) for x in L_{6,2} / p L_{6,2}.
inline std::int64_t l62_norm_mod_p(const ModPVector& x, std::int64_t p) {
  const std::int64_t s = 2 * x[0] * x[1] + 2 * x[2] * x[3] - 6 * x[4] * x[4] - 2 * x[5] * x[5];
  return modp::reduce(s, p);
}

struct ReductionResult {
  ModPVector canonical;  // (1, a, 0, 0, 0, 0), or 0 for x = 0
  GeneratorWord witness;
};

/// Carries x to (1, q(x)/2, 0, 0, 0, 0) by isometries of L_{6,2} mod p (p > 3):
/// make the f2-coordinate nonzero, clear the <-6> + <-2> part with t(e2, .),
/// then diagonalise the U + U part with SL2 x SL2 and rescale by diag(r^-1, r).
inline ReductionResult reduce_vector_mod_p(const ModPVector& input, std::int64_t p) {
  require_odd_prime(p);
  if (p <= 3) throw BadPrime("reduction needs p > 3");
  if (input.size() != 6) throw DimensionMismatch("expected a vector of length 6");
  ModPVector x(6);
  for (std::size_t i = 0; i < 6; ++i) x[i] = modp::reduce(input[i], p);
  ReductionResult out;
  const std::int64_t half_norm = modp::mul(l62_norm_mod_p(x, p), modp::inverse(2, p), p);
  const ModPVector target{1, half_norm, 0, 0, 0, 0};
  if (x == ModPVector(6, 0)) return {x, {}};
  if (x == target) return {x, {}};
  auto push = [&](GeneratorStep s) {
    x = s.matrix.apply(x);
    out.witness.steps.push_back(std::move(s));
  };

  if (x[0] == 0 && x[1] == 0 && x[2] == 0 && x[3] == 0) {
    // (e2, x) = 0, so t(e2, a) only adds -(a, x) to the e2-coordinate.
    push(x[4] != 0 ? detail::transvection_step(2, 1, 0, p) : detail::transvection_step(2, 0, 1, p));
  }
  if (x[3] == 0) {
    if (x[2] != 0) {
      push(detail::swap_e2_f2(p));
    } else if (x[1] != 0) {
      push(detail::swap_planes(p));
    } else {
      push(detail::swap_planes(p));
      push(detail::swap_e2_f2(p));
    }
  }
  if (x[4] != 0 || x[5] != 0) {
    const std::int64_t inv = modp::inverse(x[3], p);
    push(detail::transvection_step(2, modp::reduce(-x[4] * inv, p), modp::reduce(-x[5] * inv, p), p));
  }

  // m = [[w, -y], [z, x]] with z != 0; reduce to diag(r, s) by A m B^-1.
  using detail::ModSL2;
  ModSL2 m{{{x[0], modp::reduce(-x[2], p)}, {x[3], x[1]}}};
  ModSL2 a{{{1, 0}, {0, 1}}}, binv{{{1, 0}, {0, 1}}};
  auto left = [&](const ModSL2& e) {
    m = detail::mul2(e, m, p);
    a = detail::mul2(e, a, p);
  };
  auto right = [&](const ModSL2& e) {
    m = detail::mul2(m, e, p);
    binv = detail::mul2(binv, e, p);
  };
  if (m[0][0] != 0) left({{{1, modp::reduce(-modp::mul(m[0][0], modp::inverse(m[1][0], p), p), p)}, {0, 1}}});
  if (m[0][1] != 0 || m[1][1] != 0) {
    left({{{1, 1}, {0, 1}}});                                             // row0 += row1
    left({{{1, 0}, {p - 1, 1}}});                                         // row1 -= row0
    right({{{1, modp::reduce(-modp::mul(m[0][1], modp::inverse(m[0][0], p), p), p)}, {0, 1}}});  // clear (0,1)
  } else {
    left({{{0, p - 1}, {1, 0}}});  // move the pivot to (0, 0)
  }
  const std::int64_t r = m[0][0];
  left({{{modp::inverse(r, p), 0}, {0, r}}});
  push(detail::sl2_step(a, binv, p));
  out.canonical = x;
  if (x != target) throw Error("internal: reduction did not reach the canonical form");
  return out;
}

/// Orbit partition of the nonzero vectors of L_{6,2}/pL_{6,2}.
struct OrbitInfo {
  ModPVector label;  // least element in base-p order
  std::uint64_t size = 0;
  std::string square_class;  // "zero", "square" or "nonsquare" for (x, x)
};

struct OrbitCensus {
  std::int64_t p = 0;
  std::uint64_t states = 0;  // nonzero vectors
  std::vector<OrbitInfo> orbits;
};

/// Generators used by the orbit oracle: t(e2, v1), t(e2, v2), t(f2, v1),
/// t(f2, v2), the SL2 generators S and T on either side, the swaps U1 <-> U2
/// and e2 <-> f2, and (optionally) scaling by a primitive root.
inline std::vector<GeneratorStep> orbit_generators(std::int64_t p, bool with_scalars) {
  std::vector<GeneratorStep> gens{detail::transvection_step(2, 1, 0, p), detail::transvection_step(2, 0, 1, p),
                                  detail::transvection_step(3, 1, 0, p), detail::transvection_step(3, 0, 1, p),
                                  detail::swap_planes(p), detail::swap_e2_f2(p)};
  const detail::ModSL2 id{{{1, 0}, {0, 1}}}, s{{{0, p - 1}, {1, 0}}}, t{{{1, 1}, {0, 1}}};
  for (const auto& g : {s, t}) {
    gens.push_back(detail::sl2_step(g, id, p));
    gens.push_back(detail::sl2_step(id, g, p));
  }
  if (with_scalars) {
    const std::int64_t g = modp::primitive_root(p);
    modp::Matrix m(6, p);
    for (std::size_t i = 0; i < 6; ++i) m(i, i) = g;
    gens.push_back({GeneratorStep::Kind::Scalar, "scalar " + std::to_string(g), m});
  }
  return gens;
}

inline OrbitCensus orbit_oracle(std::int64_t p, bool with_scalars = true, std::int64_t max_prime = 7) {
  require_odd_prime(p);
  if (p > max_prime) throw CapExceeded("orbit oracle limited to p <= " + std::to_string(max_prime));
  std::uint64_t total = 1;
  for (int i = 0; i < 6; ++i) total *= static_cast<std::uint64_t>(p);
  auto decode = [&](std::uint64_t idx) {
    ModPVector v(6);
    for (std::size_t i = 6; i-- > 0;) {
      v[i] = static_cast<std::int64_t>(idx % static_cast<std::uint64_t>(p));
      idx /= static_cast<std::uint64_t>(p);
    }
    return v;
  };
  auto encode = [&](const ModPVector& v) {
    std::uint64_t idx = 0;
    for (auto c : v) idx = idx * static_cast<std::uint64_t>(p) + static_cast<std::uint64_t>(c);
    return idx;
  };
  std::vector<std::uint64_t> parent(total);
  std::iota(parent.begin(), parent.end(), 0);
  std::function<std::uint64_t(std::uint64_t)> find = [&](std::uint64_t a) {
    while (parent[a] != a) a = parent[a] = parent[parent[a]];
    return a;
  };
  const auto gens = orbit_generators(p, with_scalars);
  for (std::uint64_t idx = 1; idx < total; ++idx) {
    const ModPVector v = decode(idx);
    for (const auto& g : gens) {
      const std::uint64_t a = find(idx), b = find(encode(g.matrix.apply(v)));
      if (a != b) parent[std::max(a, b)] = std::min(a, b);
    }
  }
  std::map<std::uint64_t, OrbitInfo> by_root;
  for (std::uint64_t idx = 1; idx < total; ++idx) {
    const std::uint64_t root = find(idx);
    auto& info = by_root[root];
    if (info.size == 0) {
      info.label = decode(root);
      const int c = modp::legendre(l62_norm_mod_p(info.label, p), p);
      info.square_class = c == 0 ? "zero" : (c > 0 ? "square" : "nonsquare");
    }
    ++info.size;
  }
  OrbitCensus census{p, total - 1, {}};
  for (auto& [root, info] : by_root) census.orbits.push_back(info);
  return census;
}

/// Decomposition used by the polarisation orbit count.
struct PolarisationData {
  Int g, w, g1, f1, n1, d1;
};

inline PolarisationData polarisation_data(const Int& n_plus_1, const Int& d, const Int& f) {
  if (n_plus_1 <= 0 || d <= 0 || f <= 0) throw InconsistentInput("inputs must be positive");
  if ((2 * n_plus_1) % f != 0 || (2 * d) % f != 0) throw InconsistentInput("f must divide 2(n+1) and 2d");
  PolarisationData r;
  r.g = gcd(2 * n_plus_1 / f, 2 * d / f);
  r.w = gcd(r.g, f);
  r.g1 = r.g / r.w;
  r.f1 = f / r.w;
  r.n1 = 2 * n_plus_1 / (f * r.g);
  r.d1 = 2 * d / (f * r.g);
  return r;
}

namespace detail {

inline std::vector<Int> prime_factors(Int n) {
  std::vector<Int> out;
  n = abs(n);
  for (Int l = 2; l * l <= n; ++l)
    if (n % l == 0) {
      out.push_back(l);
      while (n % l == 0) n /= l;
    }
  if (n > 1) out.push_back(n);
  return out;
}

inline Int euler_phi(const Int& n) {
  Int r = n;
  for (const auto& l : prime_factors(n)) r = r / l * (l - 1);
  return r;
}

/// Whether a (a unit mod m) is a square mod m.
inline bool is_square_mod(const Int& a, const Int& m) {
  if (m == 1) return true;
  const Int r = mod(a, m);
  for (Int x = 0; x < m; ++x)
    if (mod(Int(x * x), m) == r) return true;
  return false;
}

/// a / b mod m, if b is a unit mod m.
inline std::optional<Int> divide_mod(const Int& a, const Int& b, const Int& m) {
  if (m == 1) return Int(0);
  Int x, y;
  if (ext_gcd(mod(b, m), m, x, y) != 1) return std::nullopt;
  return mod(Int(a * x), m);
}

}  // namespace detail

struct PolarisationCount {
  bool exists = false;
  Int count = 0;
  int case_number = 0;  // 1, 2 or 3
};

/// Which residue case (1) tests. The printed statement asks for d1/n1 to be a
/// square mod f1; the Eichler criterion on U^3 + <-2(n+1)> gives -d1/n1, the
/// same sign as cases (2) and (3).
enum class Case1Residue { MinusD1, AsPrinted };

/// Case split for the number of O~(L)-orbits of primitive h with h^2 = 2d and
/// div(h) = f in U^3 + <-2(n+1)>. The symbol t1 of cases (2) and (3) is read as n1.
inline PolarisationCount count_polarisation_orbits(const Int& n_plus_1, const Int& d, const Int& f,
                                                   Case1Residue residue = Case1Residue::MinusD1) {
  const PolarisationData s = polarisation_data(n_plus_1, d, f);
  Int w_plus = 1;
  for (const auto& l : detail::prime_factors(s.w))
    if (s.f1 % l == 0)
      for (Int t = s.w; t % l == 0; t /= l) w_plus *= l;
  const Int w_minus = s.w / w_plus;
  auto rho = [](const Int& n) { return static_cast<unsigned>(detail::prime_factors(n).size()); };
  const Int base = w_plus * detail::euler_phi(w_minus);
  PolarisationCount out;
  if (s.g1 % 2 == 0) {
    out.case_number = 1;
    const auto r = detail::divide_mod(residue == Case1Residue::AsPrinted ? s.d1 : Int(-s.d1), s.n1, s.f1);
    out.exists = gcd(s.d1, s.f1) == 1 && gcd(s.f1, s.n1) == 1 && r && detail::is_square_mod(*r, s.f1);
    out.count = base * pow(Int(2), rho(s.f1));
  } else if (s.f1 % 2 == 0 || s.d1 % 2 == 1) {
    out.case_number = 2;
    const auto r = detail::divide_mod(-s.d1, s.n1, 2 * s.f1);
    out.exists = gcd(s.d1, s.f1) == 1 && gcd(s.n1, 2 * s.f1) == 1 && r && detail::is_square_mod(*r, 2 * s.f1);
    out.count = base * pow(Int(2), s.f1 % 2 == 0 ? rho(s.f1 / 2) : rho(s.f1));
  } else {
    out.case_number = 3;
    const auto r = detail::divide_mod(-s.d1, 4 * s.n1, s.f1);
    out.exists = gcd(s.d1, s.f1) == 1 && gcd(s.n1, 2 * s.f1) == 1 && r && detail::is_square_mod(*r, s.f1) &&
                 s.w % 2 == 1;
    out.count = base * pow(Int(2), rho(s.f1));
  }
  if (!out.exists) out.count = 0;
  return out;
}

/// Eichler criterion oracle: O~(L)-orbits of primitive h with h^2 = 2d and
/// div(h) = f correspond to x = h/f in D(L) = C_{2(n+1)} of order f with
/// q(x) = 2d/f^2 mod 2. Also reports the number of O(D(L))-orbits of such x.
struct EichlerCount {
  std::uint64_t elements = 0;
  std::uint64_t automorphism_orbits = 0;
};

inline EichlerCount eichler_orbit_oracle(const Int& n_plus_1, const Int& d, const Int& f) {
  const FiniteQuadraticForm disc = discriminant_group(lattices::kummer(n_plus_1));
  const Rat target = mod(Rat(2 * d, f * f), 2);
  const std::int64_t order = to_i64(f);
  std::vector<FqfElement> hits;
  disc.for_each([&](const FqfElement& x) {
    if (disc.order_of(x) == order && disc.q(x) == target) hits.push_back(x);
  });
  // Automorphisms of a cyclic group are multiplications by units.
  const std::int64_t n = disc.num_generators() ? disc.orders()[0] : 1;
  std::vector<std::int64_t> units;
  FqfElement g = disc.zero();
  if (!g.empty()) g[0] = 1;
  for (std::int64_t u = 1; u <= n; ++u)
    if (std::gcd(u, n) == 1 && (g.empty() || disc.q(disc.scale(g, u)) == disc.q(g))) units.push_back(u);
  std::set<FqfElement> seen;
  EichlerCount out;
  out.elements = hits.size();
  for (const auto& x : hits) {
    if (seen.count(x)) continue;
    ++out.automorphism_orbits;
    for (auto u : units) seen.insert(disc.scale(x, u));
  }
  return out;
}

}  // namespace orthocusp
