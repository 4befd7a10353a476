#pragma once

#include <orthocusp/lattice.hpp>

#include <algorithm>
#include <cstdint>
#include <functional>
#include <limits>
#include <numeric>
#include <set>
#include <string>
#include <vector>

namespace orthocusp {

class GroupTooLarge : public CapExceeded {
 public:
  using CapExceeded::CapExceeded;
};
class NotIsotropic : public Error {
 public:
  using Error::Error;
};

inline constexpr std::uint64_t kDefaultEnumerationCap = 1'000'000;

/// Element of a finite abelian group, coordinates w.r.t. its cyclic generators.
using FqfElement = std::vector<std::int64_t>;

/// A finite abelian group C_{n_1} + ... + C_{n_k} (independent generators
/// g_j of order n_j) with a Q/2Z-valued quadratic form q and its Q/Z-valued
/// bilinear form b. q values live in [0, 2), b values in [0, 1).
class FiniteQuadraticForm {
 public:
  FiniteQuadraticForm() = default;

  /// `gram` holds exact rational values (g_i, g_j); only q mod 2 on the
  /// diagonal and b mod 1 off the diagonal are retained.
  FiniteQuadraticForm(std::vector<Int> orders, const RatMatrix& gram) {
    if (gram.rows() != orders.size() || !gram.square()) throw DimensionMismatch("generator Gram size");
    for (std::size_t i = 0; i < orders.size(); ++i) {
      if (orders[i] <= 1) throw Error("generator orders must exceed 1");
      orders_.push_back(to_i64(orders[i]));
    }
    const std::size_t k = orders_.size();
    values_ = RatMatrix(k, k);
    for (std::size_t i = 0; i < k; ++i)
      for (std::size_t j = 0; j < k; ++j) values_(i, j) = (i == j) ? mod(gram(i, j), 2) : mod(gram(i, j), 1);
    Int den = 1;
    for (std::size_t i = 0; i < k; ++i) den = lcm(den, Int(orders_[i]));
    den = lcm(den, common_denominator(values_));
    den_ = to_i64(den);
    qnum_.resize(k);
    bnum_.assign(k * k, 0);
    for (std::size_t i = 0; i < k; ++i)
      for (std::size_t j = 0; j < k; ++j) {
        const Int v = numerator(values_(i, j) * Rat(den_));
        if (i == j) qnum_[i] = to_i64(v);
        else bnum_[i * k + j] = to_i64(v);
      }
    size_ = 1;
    for (auto n : orders_) {
      if (size_ > std::numeric_limits<std::uint64_t>::max() / static_cast<std::uint64_t>(n))
        throw GroupTooLarge("group order overflows 64 bits");
      size_ *= static_cast<std::uint64_t>(n);
    }
  }

  std::size_t num_generators() const { return orders_.size(); }
  const std::vector<std::int64_t>& orders() const { return orders_; }
  std::uint64_t size() const { return size_; }

  Rat q_generator(std::size_t i) const { return values_(i, i); }
  Rat b_generator(std::size_t i, std::size_t j) const {
    return i == j ? mod(values_(i, i), 1) : values_(i, j);
  }

  FqfElement zero() const { return FqfElement(orders_.size(), 0); }

  FqfElement normalize(FqfElement x) const {
    for (std::size_t i = 0; i < x.size(); ++i) {
      x[i] %= orders_[i];
      if (x[i] < 0) x[i] += orders_[i];
    }
    return x;
  }
  FqfElement add(const FqfElement& x, const FqfElement& y) const {
    FqfElement s(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) s[i] = (x[i] + y[i]) % orders_[i];
    return s;
  }
  FqfElement scale(const FqfElement& x, std::int64_t n) const {
    FqfElement s(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
      const __int128 v = static_cast<__int128>(x[i]) * n % orders_[i];
      s[i] = static_cast<std::int64_t>(v < 0 ? v + orders_[i] : v);
    }
    return s;
  }

  /// q(x) * den, reduced into [0, 2 den).
  std::int64_t q_scaled(const FqfElement& x) const {
    const std::size_t k = x.size();
    const __int128 m = 2 * static_cast<__int128>(den_);
    __int128 s = 0;
    for (std::size_t i = 0; i < k; ++i) {
      if (x[i] == 0) continue;
      s = (s + static_cast<__int128>(x[i]) * x[i] % m * qnum_[i]) % m;
      for (std::size_t j = i + 1; j < k; ++j)
        if (x[j] != 0) s = (s + 2 * (static_cast<__int128>(x[i]) * x[j] % m) * bnum_[i * k + j]) % m;
    }
    return static_cast<std::int64_t>(s);
  }
  /// b(x, y) * den, reduced into [0, den).
  std::int64_t b_scaled(const FqfElement& x, const FqfElement& y) const {
    const std::size_t k = x.size();
    const __int128 m = den_;
    __int128 s = 0;
    for (std::size_t i = 0; i < k; ++i) {
      if (x[i] == 0) continue;
      for (std::size_t j = 0; j < k; ++j) {
        if (y[j] == 0) continue;
        const __int128 coef = (i == j) ? qnum_[i] % den_ : bnum_[i * k + j];
        s = (s + static_cast<__int128>(x[i]) * y[j] % m * coef) % m;
      }
    }
    return static_cast<std::int64_t>(s);
  }

  Rat q(const FqfElement& x) const { return Rat(q_scaled(x), den_); }
  Rat b(const FqfElement& x, const FqfElement& y) const { return Rat(b_scaled(x, y), den_); }
  bool is_isotropic(const FqfElement& x) const { return q_scaled(x) == 0; }

  std::int64_t order_of(const FqfElement& x) const {
    Int o = 1;
    for (std::size_t i = 0; i < x.size(); ++i)
      if (x[i] != 0) o = lcm(o, Int(orders_[i] / std::gcd(orders_[i], x[i])));
    return to_i64(o);
  }

  std::uint64_t index(const FqfElement& x) const {
    std::uint64_t idx = 0;
    for (std::size_t i = 0; i < x.size(); ++i) idx = idx * static_cast<std::uint64_t>(orders_[i]) + static_cast<std::uint64_t>(x[i]);
    return idx;
  }
  FqfElement element(std::uint64_t idx) const {
    FqfElement x(orders_.size());
    for (std::size_t i = orders_.size(); i-- > 0;) {
      x[i] = static_cast<std::int64_t>(idx % static_cast<std::uint64_t>(orders_[i]));
      idx /= static_cast<std::uint64_t>(orders_[i]);
    }
    return x;
  }

  void check_cap(std::uint64_t cap) const {
    if (size_ > cap)
      throw GroupTooLarge("group of order " + std::to_string(size_) + " exceeds enumeration cap " + std::to_string(cap));
  }

  /// Calls f on every element in index order.
  void for_each(const std::function<void(const FqfElement&)>& f, std::uint64_t cap = kDefaultEnumerationCap) const {
    check_cap(cap);
    FqfElement x = zero();
    for (std::uint64_t n = 0; n < size_; ++n) {
      f(x);
      for (std::size_t i = x.size(); i-- > 0;) {
        if (++x[i] < orders_[i]) break;
        x[i] = 0;
      }
    }
  }

  /// Human-readable form such as "((-1/6) + (-1/2), C6 + C2)", using the
  /// representative of q in (-1, 1].
  std::string describe() const {
    if (orders_.empty()) return "(0, trivial)";
    std::string forms, groups;
    for (std::size_t i = 0; i < orders_.size(); ++i) {
      Rat v = values_(i, i);
      if (v > 1) v -= 2;
      forms += (i ? " + (" : "(") + to_string(v) + ")";
      groups += (i ? " + C" : "C") + std::to_string(orders_[i]);
    }
    bool diagonal = true;
    for (std::size_t i = 0; i < orders_.size(); ++i)
      for (std::size_t j = 0; j < orders_.size(); ++j)
        if (i != j && values_(i, j) != 0) diagonal = false;
    return "(" + forms + ", " + groups + ")" + (diagonal ? "" : " [non-diagonal]");
  }

 private:
  std::vector<std::int64_t> orders_;
  RatMatrix values_;
  std::int64_t den_ = 1;
  std::vector<std::int64_t> qnum_;
  std::vector<std::int64_t> bnum_;
  std::uint64_t size_ = 1;
};

/// A subgroup, stored by generators and the sorted indices of its elements.
struct FqfSubgroup {
  std::vector<FqfElement> generators;
  std::vector<std::uint64_t> elements;

  std::size_t order() const { return elements.size(); }
  bool contains(const FiniteQuadraticForm& d, const FqfElement& x) const {
    return std::binary_search(elements.begin(), elements.end(), d.index(x));
  }
  friend bool operator==(const FqfSubgroup& a, const FqfSubgroup& b) { return a.elements == b.elements; }
  friend bool operator<(const FqfSubgroup& a, const FqfSubgroup& b) {
    if (a.elements.size() != b.elements.size()) return a.elements.size() < b.elements.size();
    return a.elements < b.elements;
  }
};

/// The subgroup generated by `gens`.
inline FqfSubgroup generate_subgroup(const FiniteQuadraticForm& d, const std::vector<FqfElement>& gens) {
  std::set<std::uint64_t> seen{d.index(d.zero())};
  std::vector<FqfElement> frontier{d.zero()};
  while (!frontier.empty()) {
    std::vector<FqfElement> next;
    for (const auto& x : frontier)
      for (const auto& g : gens) {
        FqfElement y = d.add(x, d.normalize(g));
        if (seen.insert(d.index(y)).second) next.push_back(std::move(y));
      }
    frontier = std::move(next);
  }
  FqfSubgroup h;
  for (const auto& g : gens) h.generators.push_back(d.normalize(g));
  h.elements.assign(seen.begin(), seen.end());
  return h;
}

/// Replaces the generators of h by a greedy generating set drawn from its elements.
inline FqfSubgroup with_greedy_generators(const FiniteQuadraticForm& d, const FqfSubgroup& h) {
  std::vector<FqfElement> gens;
  FqfSubgroup span = generate_subgroup(d, {});
  // Prefer elements of large order so cyclic groups get a single generator.
  std::vector<FqfElement> pool;
  for (auto idx : h.elements) pool.push_back(d.element(idx));
  std::stable_sort(pool.begin(), pool.end(),
                   [&](const FqfElement& a, const FqfElement& b) { return d.order_of(a) > d.order_of(b); });
  for (const auto& x : pool) {
    if (span.order() == h.order()) break;
    if (span.contains(d, x)) continue;
    gens.push_back(x);
    span = generate_subgroup(d, gens);
  }
  span.generators = gens;
  return span;
}

/// Minimal number of generators: the largest l-rank over primes l.
inline std::size_t subgroup_rank(const FiniteQuadraticForm& d, const FqfSubgroup& h) {
  std::size_t best = 0;
  std::uint64_t n = h.order();
  std::vector<std::int64_t> primes;
  for (std::int64_t l = 2; static_cast<std::uint64_t>(l) <= n; ++l) {
    if (n % static_cast<std::uint64_t>(l) == 0) {
      primes.push_back(l);
      while (n % static_cast<std::uint64_t>(l) == 0) n /= static_cast<std::uint64_t>(l);
    }
  }
  for (auto l : primes) {
    std::uint64_t torsion = 0;
    for (auto idx : h.elements) {
      const FqfElement x = d.element(idx);
      if (d.scale(x, l) == d.zero()) ++torsion;
    }
    std::size_t r = 0;
    for (std::uint64_t t = torsion; t > 1; t /= static_cast<std::uint64_t>(l)) ++r;
    best = std::max(best, r);
  }
  return best;
}

/// Discriminant group together with the map from the dual lattice to it.
struct DiscriminantData {
  FiniteQuadraticForm form;
  RatMatrix generators;  // rows: dual vectors g_j in lattice coordinates
  IntMatrix coord_map;   // rows: functionals giving the g_j-coordinate of x, mod n_j

  /// Coordinates of a dual-lattice vector x (rational lattice coordinates).
  FqfElement coordinates(const std::vector<Rat>& x) const {
    FqfElement out(form.num_generators());
    for (std::size_t j = 0; j < out.size(); ++j) {
      Rat s = 0;
      for (std::size_t i = 0; i < x.size(); ++i) s += Rat(coord_map(j, i)) * x[i];
      if (!is_integral(s)) throw Error("vector is not in the dual lattice");
      out[j] = to_i64(mod(numerator(s), Int(form.orders()[j])));
    }
    return out;
  }

  /// A dual-lattice representative of an element.
  std::vector<Rat> lift(const FqfElement& x) const {
    std::vector<Rat> v(generators.cols());
    for (std::size_t j = 0; j < x.size(); ++j)
      for (std::size_t i = 0; i < v.size(); ++i) v[i] += Rat(x[j]) * generators(j, i);
    return v;
  }
};

/// D(M) = M^dual / M, built summand by summand from the Smith form of each
/// Gram block, so U + U + <-6> + <-2p^2> gets the coordinates (a, b) in C6 + C(2p^2).
inline DiscriminantData discriminant_data(const GramLattice& l) {
  const std::size_t n = l.rank();
  std::vector<std::vector<Rat>> gens;
  std::vector<IntVector> maps;
  std::vector<Int> orders;
  std::size_t offset = 0;
  for (std::size_t bs : l.blocks()) {
    const IntMatrix g = l.gram().block(offset, offset, bs, bs);
    const SmithForm s = smith_normal_form(g);
    const IntMatrix ug = s.u * g;
    for (std::size_t i = 0; i < bs; ++i) {
      if (s.d(i, i) == 1) continue;
      std::vector<Rat> gen(n);
      IntVector map(n);
      for (std::size_t r = 0; r < bs; ++r) {
        gen[offset + r] = Rat(s.v(r, i)) / Rat(s.d(i, i));
        map[offset + r] = ug(i, r);
      }
      gens.push_back(gen);
      maps.push_back(map);
      orders.push_back(s.d(i, i));
    }
    offset += bs;
  }
  const std::size_t k = gens.size();
  RatMatrix gm(k, n);
  IntMatrix cm(k, n);
  for (std::size_t j = 0; j < k; ++j)
    for (std::size_t i = 0; i < n; ++i) {
      gm(j, i) = gens[j][i];
      cm(j, i) = maps[j][i];
    }
  const RatMatrix values = gm * to_rational(l.gram()) * gm.transpose();
  return {FiniteQuadraticForm(orders, values), gm, cm};
}

inline FiniteQuadraticForm discriminant_group(const GramLattice& l) { return discriminant_data(l).form; }

inline std::vector<FqfElement> isotropic_elements(const FiniteQuadraticForm& d, std::uint64_t cap = kDefaultEnumerationCap) {
  std::vector<FqfElement> out;
  d.for_each([&](const FqfElement& x) {
    if (d.is_isotropic(x)) out.push_back(x);
  }, cap);
  return out;
}

struct CensusEntry {
  FqfSubgroup subgroup;  // generators are a minimal generating set
  std::size_t rank = 0;
  /// The subgroup meets the l-primary part of D for an odd prime l with
  /// l^2 dividing |D| (for D(L(6, 2p^2)) these are the subgroups seen at p).
  bool primitive = false;
};

namespace detail {

inline std::vector<std::int64_t> odd_square_primes(std::uint64_t n) {
  std::vector<std::int64_t> out;
  for (std::uint64_t l = 2; l * l <= n || l <= n; ++l) {
    if (n % l != 0) continue;
    std::uint64_t e = 0;
    while (n % l == 0) {
      n /= l;
      ++e;
    }
    if (l % 2 == 1 && e >= 2) out.push_back(static_cast<std::int64_t>(l));
    if (n == 1) break;
  }
  return out;
}

}  // namespace detail

/// All totally isotropic subgroups generated by at most two elements, sorted by
/// (order, elements).
inline std::vector<CensusEntry> isotropic_subgroup_census(const FiniteQuadraticForm& d,
                                                          std::uint64_t cap = kDefaultEnumerationCap) {
  const auto iso = isotropic_elements(d, cap);
  std::set<FqfSubgroup> found;
  for (const auto& x : iso) found.insert(generate_subgroup(d, {x}));
  for (std::size_t i = 0; i < iso.size(); ++i)
    for (std::size_t j = i + 1; j < iso.size(); ++j)
      if (d.b_scaled(iso[i], iso[j]) == 0) found.insert(generate_subgroup(d, {iso[i], iso[j]}));

  const auto odd_primes = detail::odd_square_primes(d.size());
  std::vector<CensusEntry> out;
  for (const auto& h : found) {
    CensusEntry e;
    e.subgroup = with_greedy_generators(d, h);
    e.rank = subgroup_rank(d, h);
    for (auto idx : h.elements) {
      const auto o = d.order_of(d.element(idx));
      for (auto l : odd_primes)
        if (o % l == 0) e.primitive = true;
    }
    out.push_back(std::move(e));
  }
  return out;
}

/// {y : b(y, h) = 0 mod Z for all h in H}.
inline FqfSubgroup subgroup_perp(const FiniteQuadraticForm& d, const FqfSubgroup& h,
                                 std::uint64_t cap = kDefaultEnumerationCap) {
  FqfSubgroup out;
  d.for_each([&](const FqfElement& y) {
    for (const auto& g : h.generators)
      if (d.b_scaled(y, g) != 0) return;
    out.elements.push_back(d.index(y));
  }, cap);
  std::sort(out.elements.begin(), out.elements.end());
  return with_greedy_generators(d, out);
}

/// The subgroup with the standard generators of d.
inline FqfSubgroup whole_group(const FiniteQuadraticForm& d) {
  std::vector<FqfElement> gens;
  for (std::size_t i = 0; i < d.num_generators(); ++i) {
    FqfElement e = d.zero();
    e[i] = 1;
    gens.push_back(e);
  }
  return generate_subgroup(d, gens);
}

/// Invariant factors and generators of K / H for subgroups H <= K of d.
struct QuotientStructure {
  std::vector<Int> divisors;           // d_1 | d_2 | ..., all > 1
  std::vector<FqfElement> generators;  // representatives in K of the cyclic generators
};

inline QuotientStructure quotient_structure(const FiniteQuadraticForm& d, const std::vector<FqfElement>& k_gens,
                                            const std::vector<FqfElement>& h_gens) {
  const std::size_t m = k_gens.size(), hn = h_gens.size(), r = d.num_generators();
  if (m == 0) return {};
  // Kernel of (c, s, t) -> sum c_i k_i - sum s_j h_j + t * diag(orders) in Z^r.
  IntMatrix map(r, m + hn + r);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t a = 0; a < r; ++a) map(a, i) = k_gens[i][a];
  for (std::size_t j = 0; j < hn; ++j)
    for (std::size_t a = 0; a < r; ++a) map(a, m + j) = -h_gens[j][a];
  for (std::size_t a = 0; a < r; ++a) map(a, m + hn + a) = d.orders()[a];
  const IntMatrix ker = integer_kernel(map);
  IntMatrix rel(ker.rows(), m);
  for (std::size_t i = 0; i < ker.rows(); ++i)
    for (std::size_t c = 0; c < m; ++c) rel(i, c) = ker(i, c);
  const SmithForm s = smith_normal_form(rel);
  if (s.rank() != m) throw Error("quotient is not finite");
  const IntMatrix vinv = unimodular_inverse(s.v);
  QuotientStructure out;
  for (std::size_t i = 0; i < m; ++i) {
    if (s.d(i, i) == 1) continue;
    FqfElement g = d.zero();
    for (std::size_t c = 0; c < m; ++c) {
      const std::int64_t coef = to_i64(mod(vinv(i, c), Int(d.size())));
      g = d.add(g, d.scale(k_gens[c], coef));
    }
    out.divisors.push_back(s.d(i, i));
    out.generators.push_back(g);
  }
  return out;
}

/// Elementary divisors of d / s.
inline std::vector<Int> quotient_elementary_divisors(const FiniteQuadraticForm& d, const FqfSubgroup& s) {
  return quotient_structure(d, whole_group(d).generators, s.generators).divisors;
}

/// (a1, a1 a2) from at most two elementary divisors, padded with 1.
inline std::pair<Int, Int> divisor_pair(const std::vector<Int>& divs) {
  if (divs.size() > 2) throw Error("more than two elementary divisors");
  if (divs.empty()) return {1, 1};
  if (divs.size() == 1) return {1, divs[0]};
  return {divs[0], divs[1]};
}

/// The form induced on H^perp / H; H must be totally isotropic.
inline FiniteQuadraticForm quotient_form(const FiniteQuadraticForm& d, const FqfSubgroup& h,
                                         std::uint64_t cap = kDefaultEnumerationCap) {
  for (auto idx : h.elements)
    if (!d.is_isotropic(d.element(idx))) throw NotIsotropic("subgroup is not totally isotropic");
  const FqfSubgroup perp = subgroup_perp(d, h, cap);
  const QuotientStructure qs = quotient_structure(d, perp.generators, h.generators);
  const std::size_t k = qs.generators.size();
  RatMatrix values(k, k);
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < k; ++j)
      values(i, j) = i == j ? d.q(qs.generators[i]) : d.b(qs.generators[i], qs.generators[j]);
  return FiniteQuadraticForm(qs.divisors, values);
}

namespace detail {

/// Enumerates isometric embeddings of the generators of `a` into `b` that are
/// bijective; calls `on_found` for each and stops when it returns false.
inline void search_isometries(const FiniteQuadraticForm& a, const FiniteQuadraticForm& b, std::uint64_t cap,
                              const std::function<bool(const std::vector<FqfElement>&)>& on_found) {
  if (a.size() != b.size()) return;
  const std::size_t k = a.num_generators();
  std::vector<std::vector<FqfElement>> candidates(k);
  std::vector<FqfElement> gens;
  for (std::size_t j = 0; j < k; ++j) {
    FqfElement e = a.zero();
    e[j] = 1;
    gens.push_back(e);
  }
  b.for_each([&](const FqfElement& y) {
    for (std::size_t j = 0; j < k; ++j)
      if (b.order_of(y) == a.orders()[j] && b.q(y) == a.q(gens[j])) candidates[j].push_back(y);
  }, cap);
  std::vector<FqfElement> image(k);
  bool stop = false;
  std::function<void(std::size_t)> rec = [&](std::size_t j) {
    if (stop) return;
    if (j == k) {
      if (generate_subgroup(b, image).order() == b.size()) stop = !on_found(image);
      return;
    }
    for (const auto& y : candidates[j]) {
      bool ok = true;
      for (std::size_t i = 0; i < j && ok; ++i) ok = b.b(image[i], y) == a.b(gens[i], gens[j]);
      if (!ok) continue;
      image[j] = y;
      rec(j + 1);
      if (stop) return;
    }
  };
  rec(0);
}

}  // namespace detail

/// Brute-force isomorphism test of finite quadratic forms.
inline bool is_isomorphic(const FiniteQuadraticForm& a, const FiniteQuadraticForm& b,
                          std::uint64_t cap = kDefaultEnumerationCap) {
  if (a.size() != b.size()) return false;
  if (a.size() == 1) return true;
  bool found = false;
  detail::search_isometries(a, b, cap, [&](const std::vector<FqfElement>&) {
    found = true;
    return false;
  });
  return found;
}

/// |O(d)| by brute force over images of the generators.
inline std::uint64_t fqf_automorphism_order(const FiniteQuadraticForm& d, std::uint64_t cap = kDefaultEnumerationCap) {
  d.check_cap(cap);
  if (d.size() == 1) return 1;
  std::uint64_t count = 0;
  detail::search_isometries(d, d, cap, [&](const std::vector<FqfElement>&) {
    ++count;
    return true;
  });
  return count;
}

}  // namespace orthocusp
