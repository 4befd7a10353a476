#pragma once

#include <orthocusp/orbits.hpp>
#include <orthocusp/toroidal.hpp>

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <memory>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

/// Checks behind the acceptance criteria. Each returns a verdict and a one-line
/// summary; randomised checks take a seed so runs are reproducible.
namespace orthocusp::verify {

inline constexpr double kTolerance = 1e-10;

struct Outcome {
  bool pass = false;
  std::string detail;
};

inline std::shared_ptr<const GramLattice> lattice(const Int& two_y) { return std::make_shared<const GramLattice>(lattices::L(6, two_y)); }

inline Outcome det_t() {
  const DetTable t = det_t_table(), printed = printed_det_t_table();
  int agree = 0;
  std::string diff;
  for (std::size_t r = 0; r < 6; ++r)
    for (std::size_t c = 0; c < 8; ++c) {
      if (t[r][c] == printed[r][c]) {
        ++agree;
        continue;
      }
      diff += " (" + to_string(kCharPolys[r]) + ", " + kXiNames[c] + "): computed " + t[r][c].str() + ", printed " +
              printed[r][c].str() + ";";
    }
  return {agree == 48, std::to_string(agree) + "/48 cells agree" + (diff.empty() ? "" : "; differs at" + diff)};
}

inline Outcome census() {
  std::ostringstream out;
  bool pass = true;
  for (std::int64_t p : {5, 7}) {
    const FiniteQuadraticForm d = discriminant_group(lattices::L(6, 2 * p * p));
    std::vector<FqfElement> expected;
    for (std::int64_t k = 0; k < p; ++k) {
      expected.push_back({0, 2 * k * p});
      expected.push_back({3, (2 * k + 1) * p});
    }
    std::sort(expected.begin(), expected.end());
    const bool elements_ok = isotropic_elements(d) == expected;

    const FqfSubgroup x1 = generate_subgroup(d, {{0, 2 * p}}), x2 = generate_subgroup(d, {{3, p}});
    const FqfSubgroup both = generate_subgroup(d, {{0, 2 * p}, {3, p}});
    std::set<std::vector<std::uint64_t>> primitive, wanted{x1.elements, x2.elements, both.elements};
    for (const auto& e : isotropic_subgroup_census(d))
      if (e.primitive) primitive.insert(e.subgroup.elements);
    const bool census_ok = primitive == wanted;
    pass = pass && elements_ok && census_ok;
    out << "p=" << p << ": " << expected.size() << " isotropic elements " << (elements_ok ? "match" : "MISMATCH")
        << ", primitive census " << (census_ok ? "match" : "MISMATCH") << " (<x1,x2> = <x2>); ";
  }
  return {pass, out.str()};
}

inline Outcome orbit_check(std::uint64_t seed = 1000) {
  const OrbitCensus c = orbit_oracle(5);
  std::map<std::string, int> per_class;
  std::uint64_t total = 0;
  for (const auto& o : c.orbits) {
    ++per_class[o.square_class];
    total += o.size;
  }
  const bool bfs_ok = c.states == 15624 && total == 15624 && per_class["square"] == 1 && per_class["nonsquare"] == 1;

  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::int64_t> digit(0, 4);
  const modp::Matrix gram(lattices::L(6, 2).gram(), 5);
  int verified = 0;
  for (int t = 0; t < 1000; ++t) {
    ModPVector x(6);
    for (auto& v : x) v = digit(rng);
    const auto r = reduce_vector_mod_p(x, 5);
    const modp::Matrix g = r.witness.evaluate(6, 5);
    if (g.apply(x) == r.canonical && g.transpose() * gram * g == gram) ++verified;
  }
  std::ostringstream out;
  out << c.states << " states, " << c.orbits.size() << " orbits (square " << per_class["square"] << ", nonsquare "
      << per_class["nonsquare"] << ", zero-norm " << per_class["zero"] << "); " << verified << "/1000 witnesses verified";
  return {bfs_ok && verified == 1000, out.str()};
}

inline FqSpace diagonal(std::vector<int> entries, std::int64_t p) {
  IntMatrix g(entries.size(), entries.size());
  for (std::size_t i = 0; i < entries.size(); ++i) g(i, i) = entries[i];
  return FqSpace(g, p);
}

inline Outcome order_formulas() {
  const std::vector<std::pair<std::string, FqSpace>> spaces{
      {"H", FqSpace(IntMatrix{{0, 1}, {1, 0}}, 3)}, {"<1>+<1>", diagonal({1, 1}, 3)}, {"<1>+<1>+<1>", diagonal({1, 1, 1}, 3)}};
  const std::vector<Int> expected{2, 4, 24};
  std::ostringstream out;
  bool pass = true;
  for (std::size_t i = 0; i < spaces.size(); ++i) {
    const Int brute = brute_force_isometry_count(spaces[i].second).det_one, formula = oplus_order(spaces[i].second);
    pass = pass && brute == formula && brute == expected[i];
    out << spaces[i].first << " over F3: brute " << brute << ", formula " << formula << "; ";
  }
  return {pass, out.str()};
}

inline Outcome bounds() {
  const Int s5 = stab_index_bound(5), b5 = boundary_bound(5), b7 = boundary_bound(7);
  const Int s5_statement = stab_index_bound(5, IndexConstant::Statement), b5_statement = boundary_bound(5, IndexConstant::Statement);
  std::ostringstream out;
  out << "stab_index_bound(5) = " << s5 << ", boundary_bound(5) = " << b5 << ", boundary_bound(7) = " << b7
      << "; with constant 16: " << s5_statement << ", " << b5_statement;
  return {s5 == 25200 && b5 == 504000 && b7 == 2696960, out.str()};
}

inline Outcome normal_forms(std::uint64_t seed = 2024) {
  const auto l = lattice(2);
  const auto catalogue = enumerate_normal_forms();
  const auto seeds = seed_planes(2);
  std::mt19937_64 rng(seed);
  std::map<std::string, int> hits;
  int verified = 0;
  for (int t = 0; t < 200; ++t) {
    const IsotropicPlane e = random_plane(l, seeds[t % 2].second, rng, 8);
    const NormalFormResult r = normal_form_L62(e);
    const bool in_catalogue = std::find(catalogue.begin(), catalogue.end(), r.cls) != catalogue.end();
    if (in_catalogue && is_unimodular(r.base_change) && congruence(l->gram(), r.base_change.transpose()) == r.cls.gram())
      ++verified;
    ++hits[r.cls.describe()];
  }
  std::ostringstream out;
  out << catalogue.size() << " catalogue classes; " << verified << "/200 planes reduced with verified base change; classes hit:";
  for (const auto& [name, count] : hits) out << " " << name << " x" << count << ";";
  return {catalogue.size() == 10 && verified == 200, out.str()};
}

inline IntMatrix random_gamma_n(std::mt19937_64& rng, const Int& n, int factors) {
  std::uniform_int_distribution<int> e(-2, 2);
  IntMatrix z = IntMatrix::identity(2);
  for (int t = 0; t < factors; ++t) {
    const Int k = n * e(rng);
    z = z * (t % 2 ? IntMatrix{{1, k}, {0, 1}} : IntMatrix{{1, 0}, {k, 1}});
  }
  return z;
}

inline IntMatrix random_y(std::mt19937_64& rng, const Int& n) {
  std::uniform_int_distribution<int> e(-2, 2);
  return IntMatrix{{n * e(rng), n * e(rng)}, {n * e(rng), n * e(rng)}};
}

inline double distance(const SiegelPoint& a, const SiegelPoint& b) {
  return std::abs(a.z - b.z) + std::abs(a.w[0] - b.w[0]) + std::abs(a.w[1] - b.w[1]) + std::abs(a.tau - b.tau);
}

inline std::vector<std::pair<std::string, ParabolicFrame>> frames_at_five() {
  const Int p = 5, two_y = 2 * p * p;
  const auto l = lattice(two_y);
  std::vector<std::pair<std::string, ParabolicFrame>> out;
  for (const auto& [label, rows] : seed_planes(two_y))
    if (label != "order2") out.emplace_back(label, parabolic_frame(IsotropicPlane(l, rows), p));
  return out;
}

inline Outcome parabolic(std::uint64_t seed = 99) {
  const IntMatrix gram = lattices::L(6, 50).gram();
  std::ostringstream out;
  bool pass = true;
  double worst = 0;
  for (const auto& [label, f] : frames_at_five()) {
    std::mt19937_64 rng(seed);
    int z_ok = 0, y_ok = 0;
    for (int t = 0; t < 100; ++t) {
      const IntMatrix z = random_gamma_n(rng, f.n_level, 4);
      const RatMatrix gz = embed_gamma_n(z, f).matrix();
      const ParabolicClass cz = classify_parabolic(gz, f);
      if (cz != ParabolicClass::NotParabolic && is_lattice_integral(gz, f) && congruence(gram, to_lattice(gz, f)) == gram) ++z_ok;
      const RatMatrix gy = lift_y(random_y(rng, f.n_level), f).matrix();
      const ParabolicClass cy = classify_parabolic(gy, f);
      if ((cy == ParabolicClass::InWF || cy == ParabolicClass::InUF) && is_lattice_integral(gy, f) &&
          congruence(gram, to_lattice(gy, f)) == gram)
        ++y_ok;
    }
    const SiegelPoint pt{{0.3, -0.2}, {Complex(0.1, 0.4), Complex(-0.7, 0.2)}, {0.25, 1.3}};
    std::uniform_int_distribution<int> kind(0, 2);
    auto element = [&] {
      switch (kind(rng)) {
        case 0: return embed_gamma_n(random_gamma_n(rng, f.n_level, 2), f);
        case 1: return lift_y(random_y(rng, f.n_level), f);
        default: return unipotent(Rat(kind(rng) - 1, 7), f);
      }
    };
    for (int t = 0; t < 200; ++t) {
      const BlockIsometry g = element(), h = element();
      const SiegelPoint lhs = siegel_action(g * h, pt, f), rhs = siegel_action(g, siegel_action(h, pt, f), f);
      const double scale = 1 + std::abs(lhs.z) + std::abs(lhs.w[0]) + std::abs(lhs.w[1]) + std::abs(lhs.tau);
      worst = std::max(worst, distance(lhs, rhs) / scale);
    }
    pass = pass && z_ok == 100 && y_ok == 100;
    out << label << " (a1,a2)=(" << f.a1 << "," << f.a2 << "): g_Z " << z_ok << "/100, g_Y " << y_ok << "/100; ";
  }
  out << "worst composition error " << worst << " (tolerance " << kTolerance << ")";
  return {pass && worst < kTolerance, out.str()};
}

inline Outcome singularity_tables() {
  const BoundTable derived = derived_bound_table(), printed = printed_bound_table();
  int agree = 0;
  std::string diff;
  for (std::size_t r = 0; r < 6; ++r)
    for (std::size_t c = 0; c < 8; ++c) {
      if (derived[r][c] == printed[r][c]) {
        ++agree;
        continue;
      }
      diff += " (" + to_string(kCharPolys[r]) + ", " + kXiNames[c] + "): derived " + derived[r][c].str() + ", printed " +
              printed[r][c].str() + ";";
    }
  std::ostringstream out;
  out << agree << "/48 cells agree" << (diff.empty() ? "" : "; differs at" + diff) << " invariants table:";
  bool table3 = true;
  for (const auto& [label, f] : frames_at_five()) {
    if (!f.printed) {
      table3 = false;
      continue;
    }
    const bool readings = f.printed->n == f.a1 * f.a2 && f.printed->det_b == f.det_b && f.printed->k_n == f.n_level;
    table3 = table3 && readings;
    out << " (" << f.a1 << "," << f.a2 << ") printed N=" << f.printed->n << " K_N=" << f.printed->k_n << " vs N=a1a2detB="
        << f.n_level << " K_N(N)=" << f.k_n << (readings ? "" : " MISMATCH") << ";";
  }
  out << " printed N = a1a2 and printed K_N = a1a2 det B (flagged)";
  return {agree == 48 && table3, out.str()};
}

inline Outcome congruence_indices() {
  int agree = 0;
  for (std::int64_t n = 1; n <= 12; ++n)
    if (congruence_index(n) == Int(sl2_order_brute_force(n))) ++agree;
  return {agree == 12, std::to_string(agree) + "/12 levels match |SL2(Z/N)|"};
}

inline Outcome perp_discriminants(std::uint64_t seed = 31) {
  std::ostringstream out;
  int agree = 0;
  for (const Int& two_y : {Int(2), Int(50)}) {
    const auto l = lattice(two_y);
    const DiscriminantData dd = discriminant_data(*l);
    std::mt19937_64 rng(static_cast<std::uint64_t>(two_y) * seed);
    const auto seeds = seed_planes(two_y);
    for (int t = 0; t < 20; ++t) {
      const IsotropicPlane e = random_plane(l, seeds[t % seeds.size()].second, rng);
      const FiniteQuadraticForm lhs = discriminant_group(GramLattice(perp_quotient_gram(e)));
      if (is_isomorphic(lhs, quotient_form(dd.form, e.he(dd)))) ++agree;
    }
  }
  return {agree == 40, std::to_string(agree) + "/40 planes (20 over L(6,2), 20 over L(6,50))"};
}

struct Suite {
  int criterion;
  std::string name;
  double budget_seconds;
  std::function<Outcome(std::optional<std::uint64_t>)> run;
};

inline const std::vector<Suite>& suites() {
  const auto fixed = [](Outcome (*f)()) { return [f](std::optional<std::uint64_t>) { return f(); }; };
  const auto seeded = [](Outcome (*f)(std::uint64_t), std::uint64_t def) {
    return [f, def](std::optional<std::uint64_t> s) { return f(s.value_or(def)); };
  };
  static const std::vector<Suite> all{
      {1, "det-t", 1, fixed(det_t)},
      {2, "census", 5, fixed(census)},
      {3, "orbits", 60, seeded(orbit_check, 1000)},
      {4, "orders", 30, fixed(order_formulas)},
      {5, "bounds", 1, fixed(bounds)},
      {6, "normal-form", 60, seeded(normal_forms, 2024)},
      {7, "parabolic", 60, seeded(parabolic, 99)},
      {8, "sing-table", 5, fixed(singularity_tables)},
      {9, "congruence", 5, fixed(congruence_indices)},
      {10, "perp", 60, seeded(perp_discriminants, 31)},
  };
  return all;
}

}  // namespace orthocusp::verify
