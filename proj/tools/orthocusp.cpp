#include <orthocusp/verify.hpp>

#include <CLI11.hpp>
#include <json.hpp>

#include <iostream>
#include <iterator>
#include <sstream>

using namespace orthocusp;
using json = nlohmann::ordered_json;

namespace {

enum class Format { Json, Csv, Md };

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;

  void add(std::vector<std::string> row) { rows.push_back(std::move(row)); }
};

Table key_values(std::vector<std::pair<std::string, std::string>> fields) {
  Table t{{"field", "value"}, {}};
  for (auto& [k, v] : fields) t.add({k, v});
  return t;
}

std::string csv_cell(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) out += c == '"' ? std::string("\"\"") : std::string(1, c);
  return out + "\"";
}

void emit(const Table& t, Format f, std::ostream& os) {
  if (f == Format::Json) {
    json arr = json::array();
    for (const auto& r : t.rows) {
      json obj = json::object();
      for (std::size_t i = 0; i < t.columns.size(); ++i) obj[t.columns[i]] = r[i];
      arr.push_back(obj);
    }
    os << arr.dump(2) << "\n";
    return;
  }
  // A single value prints bare so that it can be used in shell pipelines.
  if (f == Format::Md && t.columns.size() == 1 && t.rows.size() == 1) {
    os << t.rows[0][0] << "\n";
    return;
  }
  if (f == Format::Csv) {
    for (std::size_t i = 0; i < t.columns.size(); ++i) os << (i ? "," : "") << csv_cell(t.columns[i]);
    os << "\n";
    for (const auto& r : t.rows) {
      for (std::size_t i = 0; i < r.size(); ++i) os << (i ? "," : "") << csv_cell(r[i]);
      os << "\n";
    }
    return;
  }
  const auto line = [&os](const std::vector<std::string>& cells) {
    os << "|";
    for (const auto& c : cells) {
      os << " ";
      for (char ch : c) os << (ch == '|' ? "\\|" : std::string(1, ch));
      os << " |";
    }
    os << "\n";
  };
  line(t.columns);
  os << "|";
  for (std::size_t i = 0; i < t.columns.size(); ++i) os << " --- |";
  os << "\n";
  for (const auto& r : t.rows) line(r);
}

std::string matrix_str(const IntMatrix& m) {
  std::string out = "[";
  for (std::size_t i = 0; i < m.rows(); ++i) {
    out += i ? ", [" : "[";
    for (std::size_t j = 0; j < m.cols(); ++j) out += (j ? ", " : "") + m(i, j).str();
    out += "]";
  }
  return out + "]";
}

std::string element_str(const FqfElement& x) {
  std::string out = "(";
  for (std::size_t i = 0; i < x.size(); ++i) out += (i ? ", " : "") + std::to_string(x[i]);
  return out + ")";
}

/// A matrix given either as JSON (nested arrays of integers or decimal
/// strings) or as a whitespace grid with one row per line or ';'.
IntMatrix parse_matrix(const std::string& text) {
  std::vector<std::vector<Int>> rows;
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && text[first] == '[') {
    const json j = json::parse(text);
    if (!j.is_array()) throw Error("matrix JSON must be an array of rows");
    for (const auto& r : j) {
      if (!r.is_array()) throw Error("matrix JSON must be an array of rows");
      std::vector<Int> row;
      for (const auto& e : r) {
        if (e.is_number_integer()) row.emplace_back(e.get<std::int64_t>());
        else if (e.is_string()) row.emplace_back(e.get<std::string>());
        else throw Error("matrix entries must be integers");
      }
      rows.push_back(std::move(row));
    }
  } else {
    std::string normalised = text;
    std::replace(normalised.begin(), normalised.end(), ';', '\n');
    std::istringstream lines(normalised);
    for (std::string line; std::getline(lines, line);) {
      std::istringstream cells(line);
      std::vector<Int> row;
      for (std::string c; cells >> c;) {
        if (c.find_first_not_of("+-0123456789") != std::string::npos) throw Error("not an integer: '" + c + "'");
        row.emplace_back(c);
      }
      if (!row.empty()) rows.push_back(std::move(row));
    }
  }
  if (rows.empty()) throw Error("empty matrix");
  IntMatrix m(rows.size(), rows[0].size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != m.cols()) throw Error("matrix rows have different lengths");
    for (std::size_t j = 0; j < m.cols(); ++j) m(i, j) = rows[i][j];
  }
  return m;
}

void require_odd_prime_arg(std::int64_t p) {
  bool prime = p > 2 && p % 2 == 1;
  for (std::int64_t d = 3; prime && d * d <= p; d += 2) prime = p % d != 0;
  if (!prime) throw Error("--p must be an odd prime, got " + std::to_string(p));
}

}  // namespace

namespace commands {

Table lattice_info(const std::string& expr) {
  const GramLattice l = make_lattice(expr);
  std::string blocks;
  for (auto b : l.blocks()) blocks += (blocks.empty() ? "" : "+") + std::to_string(b);
  return key_values({{"expression", expr},
                     {"rank", std::to_string(l.rank())},
                     {"determinant", l.det().str()},
                     {"blocks", blocks},
                     {"gram", matrix_str(l.gram())}});
}

Table disc_group(const std::string& expr, std::uint64_t cap) {
  const FiniteQuadraticForm d = discriminant_group(make_lattice(expr));
  d.check_cap(cap);
  Table t{{"generator", "order", "q"}, {}};
  for (std::size_t i = 0; i < d.num_generators(); ++i)
    t.add({"g" + std::to_string(i + 1), std::to_string(d.orders()[i]), to_string(d.q_generator(i))});
  std::cerr << "D = " << d.describe() << ", |D| = " << d.size() << "\n";
  return t;
}

Table isotropic(const std::string& expr, bool subgroups, std::uint64_t cap) {
  const FiniteQuadraticForm d = discriminant_group(make_lattice(expr));
  if (!subgroups) {
    Table t{{"element", "order"}, {}};
    for (const auto& x : isotropic_elements(d, cap)) t.add({element_str(x), std::to_string(d.order_of(x))});
    return t;
  }
  Table t{{"order", "rank", "primitive", "generators"}, {}};
  for (const auto& e : isotropic_subgroup_census(d, cap)) {
    std::string gens;
    for (const auto& g : e.subgroup.generators) gens += (gens.empty() ? "" : " ") + element_str(g);
    t.add({std::to_string(e.subgroup.order()), std::to_string(e.rank), e.primitive ? "yes" : "no", gens});
  }
  return t;
}

Table orbits(std::int64_t p, bool scalars) {
  const OrbitCensus c = orbit_oracle(p, scalars);
  std::cerr << c.states << " nonzero vectors of L(6,2)/" << p << "L(6,2)\n";
  Table t{{"representative", "size", "square_class"}, {}};
  for (const auto& o : c.orbits) t.add({element_str(o.label), std::to_string(o.size), o.square_class});
  return t;
}

Table normal_form(const IntMatrix& rows) {
  const auto l = std::make_shared<const GramLattice>(lattices::L(6, 2));
  const NormalFormResult r = normal_form_L62(IsotropicPlane(l, rows));
  return key_values({{"class", r.cls.describe()},
                     {"he", to_string(r.cls.he_tag)},
                     {"c", std::to_string(r.cls.c)},
                     {"d", std::to_string(r.cls.d)},
                     {"gram", matrix_str(r.cls.gram())},
                     {"base_change", matrix_str(r.base_change)}});
}

Table det_t() {
  const DetTable t = det_t_table(), printed = printed_det_t_table();
  Table out{{"chi", "xi", "det_T", "printed", "agree"}, {}};
  for (std::size_t r = 0; r < 6; ++r)
    for (std::size_t c = 0; c < 8; ++c)
      out.add({to_string(kCharPolys[r]), kXiNames[c], t[r][c].str(), printed[r][c].str(), t[r][c] == printed[r][c] ? "yes" : "no"});
  return out;
}

std::string seed_label(const std::string& cusp) {
  if (cusp == "1,1") return "trivial";
  if (cusp == "1,p") return "x1";
  if (cusp == "1,2p") return "x2";
  if (cusp == "1,2") return "order2";
  throw Error("--cusp must be one of 1,1 1,p 1,2p 1,2; got '" + cusp + "'");
}

Table sing_table(std::int64_t p, const std::string& cusp) {
  require_odd_prime_arg(p);
  if (p == 3) throw BadPrime("the singularity tables need p > 3");
  const Int two_y = 2 * Int(p) * p;
  const auto l = std::make_shared<const GramLattice>(lattices::L(6, two_y));
  const std::string label = seed_label(cusp);
  std::optional<ParabolicFrame> frame;
  for (const auto& [name, rows] : seed_planes(two_y))
    if (name == label) frame = parabolic_frame(IsotropicPlane(l, rows), p);
  const ParabolicFrame& f = *frame;
  const Int printed_kn = f.printed ? f.printed->k_n : f.k_n;
  std::cerr << "(a1, a2) = (" << f.a1 << ", " << f.a2 << "), det B = " << f.det_b << ", N = " << f.n_level
            << ", J = " << f.j_value << ", K_N = " << f.k_n;
  if (f.printed) std::cerr << "; invariants table: N = " << f.printed->n << ", K_N = " << f.printed->k_n;
  std::cerr << "\n";

  const BoundTable derived = derived_bound_table(), printed = printed_bound_table();
  const auto value = [](const std::optional<Int>& v) { return v ? v->str() : std::string("-"); };
  Table t{{"table", "chi", "xi", "printed", "derived", "agree", "printed_value", "derived_value"}, {}};
  for (std::size_t r = 0; r < 6; ++r)
    for (std::size_t c = 0; c < 8; ++c)
      t.add({c < 4 ? "1" : "2", to_string(kCharPolys[r]), kXiNames[c], printed[r][c].str(), derived[r][c].str(),
             derived[r][c] == printed[r][c] ? "yes" : "no", value(printed[r][c].evaluate(printed_kn, f.j_value)),
             value(derived[r][c].evaluate(f.k_n, f.j_value))});
  return t;
}

Table orbit_count(const Int& n, const Int& d, const Int& f, bool oracle) {
  const PolarisationCount c = count_polarisation_orbits(n + 1, d, f);
  std::vector<std::pair<std::string, std::string>> fields{
      {"case", std::to_string(c.case_number)}, {"exists", c.exists ? "yes" : "no"}, {"count", c.count.str()}};
  if (oracle) fields.emplace_back("oracle_elements", std::to_string(eichler_orbit_oracle(n + 1, d, f).elements));
  return key_values(std::move(fields));
}

Table verify_suites(const std::string& name, std::optional<std::uint64_t> seed, bool& all_passed) {
  Table t{{"criterion", "suite", "result", "detail"}, {}};
  bool found = false;
  for (const auto& s : verify::suites()) {
    if (name != "all" && name != s.name) continue;
    found = true;
    const verify::Outcome o = s.run(seed);
    all_passed = all_passed && o.pass;
    t.add({std::to_string(s.criterion), s.name, o.pass ? "PASS" : "FAIL", o.detail});
  }
  if (!found) throw Error("unknown suite '" + name + "'");
  return t;
}

}  // namespace commands

int main(int argc, char** argv) {
  CLI::App app{"Exact computations with even lattices, discriminant forms and boundary components."};
  app.require_subcommand(1);
  app.fallthrough();
  std::string format = "md";
  app.add_option("--format", format, "Output format")->check(CLI::IsMember({"json", "csv", "md"}));
  std::uint64_t cap = kDefaultEnumerationCap;
  app.add_option("--cap", cap, "Limit for finite-group enumerations");

  std::string expr;
  auto* lattice_info = app.add_subcommand("lattice-info", "Gram matrix and determinant of a lattice expression");
  lattice_info->add_option("expr", expr, "e.g. 'U+U+<-6>+<-2>'")->required();
  auto* disc_group = app.add_subcommand("disc-group", "Discriminant form of a lattice expression");
  disc_group->add_option("expr", expr)->required();
  bool subgroups = false;
  auto* isotropic = app.add_subcommand("isotropic", "Isotropic elements (or subgroups) of the discriminant form");
  isotropic->add_option("expr", expr)->required();
  isotropic->add_flag("--subgroups", subgroups, "List isotropic subgroups instead of elements");

  std::int64_t p = 0;
  bool no_scalars = false;
  auto* orbits = app.add_subcommand("orbits", "Orbits on nonzero vectors of L(6,2)/pL(6,2)");
  orbits->add_option("--p", p)->required();
  orbits->add_flag("--no-scalars", no_scalars, "Use isometries only, without scaling");
  std::string constant = "proof";
  auto* index_bound = app.add_subcommand("index-bound", "Bound for the index of the stable orthogonal group");
  index_bound->add_option("--p", p)->required();
  index_bound->add_option("--constant", constant)->check(CLI::IsMember({"proof", "statement"}));
  auto* boundary_count = app.add_subcommand("boundary-count", "Bound for the number of boundary curves");
  boundary_count->add_option("--p", p)->required();
  boundary_count->add_option("--constant", constant)->check(CLI::IsMember({"proof", "statement"}));

  std::string matrix;
  auto* normal_form = app.add_subcommand("normal-form", "Normal form of an isotropic plane in L(6,2); reads stdin without --matrix");
  normal_form->add_option("--matrix", matrix, "2x6 basis as JSON or a whitespace grid");
  auto* det_t = app.add_subcommand("det-t", "det(I - xi X) for every characteristic polynomial and xi");
  std::string cusp;
  auto* sing_table = app.add_subcommand("sing-table", "Singularity bound tables at a cusp of L(6,2p^2)");
  sing_table->add_option("--p", p)->required();
  sing_table->add_option("--cusp", cusp, "(a1,a2) as 1,1 1,p 1,2p or 1,2")->required();

  std::string n_arg, d_arg, f_arg;
  bool oracle = false;
  auto* orbit_count = app.add_subcommand("orbit-count", "Orbits of polarisations h^2 = 2d, div(h) = f in U^3 + <-2(n+1)>");
  orbit_count->add_option("--n", n_arg)->required();
  orbit_count->add_option("--d", d_arg)->required();
  orbit_count->add_option("--f", f_arg)->required();
  orbit_count->add_flag("--oracle", oracle, "Cross-check by enumerating the discriminant form");

  std::string suite = "all";
  std::optional<std::uint64_t> seed;
  auto* verify = app.add_subcommand("verify", "Run verification suites");
  verify->add_option("--suite", suite, "Suite name or 'all'");
  verify->add_option("--seed", seed, "Seed for the randomised suites");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  const Format fmt = format == "json" ? Format::Json : format == "csv" ? Format::Csv : Format::Md;
  const IndexConstant c = constant == "statement" ? IndexConstant::Statement : IndexConstant::Proof;
  const auto big = [](const std::string& s) {
    if (s.empty() || s.find_first_not_of("+-0123456789") != std::string::npos) throw Error("not an integer: '" + s + "'");
    return Int(s);
  };
  try {
    Table out;
    bool passed = true;
    if (*lattice_info) out = commands::lattice_info(expr);
    else if (*disc_group) out = commands::disc_group(expr, cap);
    else if (*isotropic) out = commands::isotropic(expr, subgroups, cap);
    else if (*orbits) out = commands::orbits(p, !no_scalars);
    else if (*index_bound) out = Table{{"index_bound"}, {{stab_index_bound(p, c).str()}}};
    else if (*boundary_count) out = Table{{"boundary_bound"}, {{boundary_bound(p, c).str()}}};
    else if (*normal_form) {
      if (matrix.empty()) matrix.assign(std::istreambuf_iterator<char>(std::cin), {});
      out = commands::normal_form(parse_matrix(matrix));
    } else if (*det_t) out = commands::det_t();
    else if (*sing_table) out = commands::sing_table(p, cusp);
    else if (*orbit_count) out = commands::orbit_count(big(n_arg), big(d_arg), big(f_arg), oracle);
    else if (*verify) out = commands::verify_suites(suite, seed, passed);
    emit(out, fmt, std::cout);
    return passed ? 0 : 1;
  } catch (const CapExceeded& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
