#pragma once

#include <orthocusp/linalg.hpp>

#include <cctype>
#include <memory>
#include <string>
#include <vector>

namespace orthocusp {

class OddLattice : public Error {
 public:
  using Error::Error;
};
class ParentMismatch : public Error {
 public:
  using Error::Error;
};
class ZeroVector : public Error {
 public:
  using Error::Error;
};
class BadResidue : public Error {
 public:
  using Error::Error;
};
class NotAnIsometry : public Error {
 public:
  using Error::Error;
};
class ExtensionNotIntegral : public Error {
 public:
  using Error::Error;
};
class ParseError : public Error {
 public:
  using Error::Error;
};

/// An even nondegenerate lattice given by its Gram matrix.
///
/// `blocks` records the sizes of the orthogonal summands the lattice was
/// built from (in order); the discriminant group uses them to pick natural
/// generators such as k / 2x for a summand <-2x>.
class GramLattice {
 public:
  GramLattice(IntMatrix gram, std::vector<std::size_t> blocks = {}, std::vector<std::string> labels = {})
      : gram_(std::move(gram)), blocks_(std::move(blocks)), labels_(std::move(labels)) {
    if (!gram_.is_symmetric()) throw Error("Gram matrix is not symmetric");
    for (std::size_t i = 0; i < gram_.rows(); ++i)
      if (gram_(i, i) % 2 != 0) throw OddLattice("Gram matrix has an odd diagonal entry");
    if (determinant(gram_) == 0) throw SingularMatrix("Gram matrix is degenerate");
    if (blocks_.empty() && rank() > 0) blocks_.push_back(rank());
    std::size_t total = 0;
    for (auto b : blocks_) total += b;
    if (total != rank()) throw DimensionMismatch("block sizes do not add up to the rank");
    if (labels_.empty())
      for (std::size_t i = 0; i < rank(); ++i) labels_.push_back("b" + std::to_string(i + 1));
  }

  const IntMatrix& gram() const { return gram_; }
  std::size_t rank() const { return gram_.rows(); }
  const std::vector<std::size_t>& blocks() const { return blocks_; }
  const std::vector<std::string>& labels() const { return labels_; }
  Int det() const { return determinant(gram_); }

  friend bool operator==(const GramLattice& a, const GramLattice& b) { return a.gram_ == b.gram_; }

  friend GramLattice direct_sum(const GramLattice& a, const GramLattice& b) {
    std::vector<std::size_t> blocks = a.blocks_;
    blocks.insert(blocks.end(), b.blocks_.begin(), b.blocks_.end());
    std::vector<std::string> labels = a.labels_;
    labels.insert(labels.end(), b.labels_.begin(), b.labels_.end());
    return GramLattice(orthocusp::direct_sum(a.gram_, b.gram_), blocks, labels);
  }

 private:
  IntMatrix gram_;
  std::vector<std::size_t> blocks_;
  std::vector<std::string> labels_;
};

namespace lattices {

/// Hyperbolic plane U with standard basis e, f.
inline GramLattice hyperbolic(const Int& scale = 1, const std::string& suffix = "") {
  return GramLattice(IntMatrix{{0, scale}, {scale, 0}}, {2}, {"e" + suffix, "f" + suffix});
}

/// Rank one lattice <k>; k must be even.
inline GramLattice rank_one(const Int& k, const std::string& label = "k") {
  if (k % 2 != 0) throw OddLattice("<" + k.str() + "> is not even");
  return GramLattice(IntMatrix{{k}}, {1}, {label});
}

/// A2 scaled by `scale`; A2(-1) has Gram [[-2, 1], [1, -2]].
inline GramLattice a2(const Int& scale = -1, const std::string& suffix = "") {
  return GramLattice(IntMatrix{{2 * scale, -scale}, {-scale, 2 * scale}}, {2}, {"a" + suffix, "b" + suffix});
}

/// U + U + <-2x> + <-2y>, basis (e1, f1, e2, f2, k1, k2).
inline GramLattice L(const Int& two_x, const Int& two_y) {
  return direct_sum(direct_sum(direct_sum(hyperbolic(1, "1"), hyperbolic(1, "2")), rank_one(-two_x, "k1")),
                    rank_one(-two_y, "k2"));
}

/// U^3 + <-2(n+1)>, the lattice of a generalised Kummer variety.
inline GramLattice kummer(const Int& n_plus_1) {
  GramLattice l = direct_sum(direct_sum(hyperbolic(1, "1"), hyperbolic(1, "2")), hyperbolic(1, "3"));
  return direct_sum(l, rank_one(-2 * n_plus_1, "k"));
}

}  // namespace lattices

/// Builds a lattice from an expression such as `U+U+<-6>+<-2>`, `2U+A2(-1)`,
/// `U(3)` or the shorthand `L(6,2)`.
inline GramLattice make_lattice(const std::string& expr) {
  std::string s;
  for (char ch : expr)
    if (!std::isspace(static_cast<unsigned char>(ch))) s += ch;
  if (s.empty()) throw ParseError("empty lattice expression");

  std::size_t pos = 0;
  auto parse_int = [&](const std::string& what) {
    std::size_t start = pos;
    if (pos < s.size() && (s[pos] == '-' || s[pos] == '+')) ++pos;
    while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) ++pos;
    if (start == pos || (pos == start + 1 && !std::isdigit(static_cast<unsigned char>(s[start]))))
      throw ParseError("expected integer for " + what + " in '" + expr + "'");
    return Int(s.substr(start, pos - start));
  };
  auto expect = [&](char c) {
    if (pos >= s.size() || s[pos] != c) throw ParseError(std::string("expected '") + c + "' in '" + expr + "'");
    ++pos;
  };
  auto optional_scale = [&](const Int& dflt) {
    if (pos < s.size() && s[pos] == '(') {
      ++pos;
      Int k = parse_int("scale");
      expect(')');
      return k;
    }
    return dflt;
  };

  std::vector<GramLattice> parts;
  int u_count = 0, k_count = 0, a_count = 0;
  while (true) {
    std::size_t mult = 1;
    if (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) {
      mult = static_cast<std::size_t>(to_i64(parse_int("multiplicity")));
      if (mult == 0) throw ParseError("zero multiplicity in '" + expr + "'");
    }
    if (pos >= s.size()) throw ParseError("unexpected end of '" + expr + "'");
    if (s[pos] == 'U') {
      ++pos;
      const Int k = optional_scale(1);
      for (std::size_t m = 0; m < mult; ++m) parts.push_back(lattices::hyperbolic(k, std::to_string(++u_count)));
    } else if (s[pos] == '<') {
      ++pos;
      const Int k = parse_int("rank one entry");
      expect('>');
      for (std::size_t m = 0; m < mult; ++m) parts.push_back(lattices::rank_one(k, "k" + std::to_string(++k_count)));
    } else if (s.compare(pos, 2, "A2") == 0) {
      pos += 2;
      const Int k = optional_scale(1);
      for (std::size_t m = 0; m < mult; ++m) parts.push_back(lattices::a2(k, std::to_string(++a_count)));
    } else if (s.compare(pos, 2, "L(") == 0) {
      pos += 2;
      const Int x = parse_int("L first index");
      expect(',');
      const Int y = parse_int("L second index");
      expect(')');
      for (std::size_t m = 0; m < mult; ++m) parts.push_back(lattices::L(x, y));
    } else {
      throw ParseError("unknown lattice term at '" + s.substr(pos) + "'");
    }
    if (pos == s.size()) break;
    expect('+');
  }
  GramLattice out = parts.front();
  for (std::size_t i = 1; i < parts.size(); ++i) out = direct_sum(out, parts[i]);
  return out;
}

/// A vector of a lattice, in coordinates of its basis.
struct LatticeVector {
  std::shared_ptr<const GramLattice> parent;
  IntVector coords;

  LatticeVector(std::shared_ptr<const GramLattice> p, IntVector c) : parent(std::move(p)), coords(std::move(c)) {
    if (coords.size() != parent->rank()) throw DimensionMismatch("vector length does not match lattice rank");
  }

  static LatticeVector basis(std::shared_ptr<const GramLattice> p, std::size_t i) {
    IntVector c(p->rank());
    c.at(i) = 1;
    return LatticeVector(std::move(p), std::move(c));
  }

  bool is_zero() const {
    for (const auto& c : coords)
      if (c != 0) return false;
    return true;
  }

  friend LatticeVector operator+(const LatticeVector& a, const LatticeVector& b) {
    if (!(*a.parent == *b.parent)) throw ParentMismatch("vectors belong to different lattices");
    IntVector c(a.coords.size());
    for (std::size_t i = 0; i < c.size(); ++i) c[i] = a.coords[i] + b.coords[i];
    return LatticeVector(a.parent, c);
  }
  friend LatticeVector operator*(const Int& k, const LatticeVector& a) {
    IntVector c = a.coords;
    for (auto& x : c) x *= k;
    return LatticeVector(a.parent, c);
  }
};

inline Int inner_product(const LatticeVector& v, const LatticeVector& w) {
  if (!(*v.parent == *w.parent)) throw ParentMismatch("vectors belong to different lattices");
  return bilinear(v.parent->gram(), v.coords, w.coords);
}

/// div(v): the positive generator of the ideal (v, L).
inline Int divisor(const LatticeVector& v) {
  if (v.is_zero()) throw ZeroVector("divisor of the zero vector");
  const IntVector gv = v.parent->gram().apply(v.coords);
  Int g = 0;
  for (const auto& x : gv) g = gcd(g, x);
  return g;
}

/// A sublattice given by generator rows in parent coordinates.
struct Sublattice {
  std::shared_ptr<const GramLattice> parent;
  IntMatrix basis;  // rows

  std::size_t rank() const { return basis.rows(); }
  IntMatrix gram() const { return basis * parent->gram() * basis.transpose(); }
  bool is_primitive() const { return rank() == 0 || orthocusp::is_primitive(basis); }
  Sublattice saturation() const { return {parent, rank() ? saturate(basis) : basis}; }
};

/// The full complement {x : (x, s) = 0}; always primitive.
inline Sublattice orthogonal_complement(const Sublattice& s) {
  const std::size_t n = s.parent->rank();
  if (s.rank() == 0) return {s.parent, IntMatrix::identity(n)};
  return {s.parent, integer_kernel(s.basis * s.parent->gram())};
}

/// True when every vector of `inner` lies in the Z-span of `outer`.
inline bool contains(const Sublattice& outer, const Sublattice& inner) {
  for (std::size_t r = 0; r < inner.rank(); ++r) {
    const auto x = rational_coordinates(outer.basis, inner.basis.row(r));
    if (!x) return false;
    for (const auto& c : *x)
      if (!is_integral(c)) return false;
  }
  return true;
}

/// Eichler transvection t(e, a): v -> v - (a,v) e + (e,v) a - (a,a)/2 (e,v) e,
/// for isotropic e and a orthogonal to e. Columns are images of basis vectors.
inline IntMatrix eichler_transvection(const IntMatrix& gram, const IntVector& e, const IntVector& a) {
  const std::size_t n = gram.rows();
  if (e.size() != n || a.size() != n) throw DimensionMismatch("transvection vectors");
  if (bilinear(gram, e, e) != 0) throw Error("transvection vector e is not isotropic");
  if (bilinear(gram, e, a) != 0) throw Error("transvection vector a is not orthogonal to e");
  const IntVector ga = gram.apply(a), ge = gram.apply(e);
  const Int half_aa = bilinear(gram, a, a) / 2;
  IntMatrix t = IntMatrix::identity(n);
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t i = 0; i < n; ++i) t(i, j) += -ga[j] * e[i] + ge[j] * a[i] - half_aa * ge[j] * e[i];
  return t;
}

/// 2U + B for a primitive h of degree 2d and divisor f in U^3 + <-2(n+1)>,
/// where B = [[-2b, 2c(n+1)/f], [2c(n+1)/f, -2(n+1)]], b = (d + c^2(n+1))/f^2.
inline GramLattice perp_of_polarisation(const Int& n_plus_1, const Int& d, const Int& f, const Int& c) {
  if (n_plus_1 <= 0 || d <= 0 || f <= 0) throw BadResidue("level, half-degree and divisor must be positive");
  if (gcd(c, f) != 1) throw BadResidue("residue c must be coprime to the divisor f");
  if ((2 * n_plus_1) % f != 0) throw BadResidue("divisor must divide 2(n+1)");
  const Int num = d + c * c * n_plus_1;
  if (num % (f * f) != 0) throw BadResidue("f^2 does not divide d + c^2(n+1)");
  const Int b = num / (f * f);
  const Int off = c * 2 * n_plus_1 / f;
  const GramLattice block(IntMatrix{{-2 * b, off}, {off, -2 * n_plus_1}}, {2}, {"x", "y"});
  return direct_sum(direct_sum(lattices::hyperbolic(1, "1"), lattices::hyperbolic(1, "2")), block);
}

/// True iff g (acting on column coordinates of L(6, 2d)) fixes v* = v/(2d)
/// modulo the lattice, where v generates the <-2d> summand.
inline bool is_in_O_L_h(const IntMatrix& g, const Int& d) {
  const GramLattice l = lattices::L(6, 2 * d);
  if (g.rows() != 6 || g.cols() != 6) throw DimensionMismatch("expected a 6x6 matrix");
  if (congruence(l.gram(), g) != l.gram()) throw NotAnIsometry("matrix does not preserve the Gram matrix");
  for (std::size_t r = 0; r < 6; ++r) {
    const Int shift = g(r, 5) - (r == 5 ? 1 : 0);
    if (shift % (2 * d) != 0) return false;
  }
  return true;
}

/// Embedding matrix of L(6, 2p^2) into L(6, 2): identity on U + U + <-6>, k1 -> p k.
inline IntMatrix l62_embedding(const Int& p) {
  IntMatrix e = IntMatrix::identity(6);
  e(5, 5) = p;
  return e;
}

inline IntVector embed_in_L62(const IntVector& v, const Int& p) { return l62_embedding(p).apply(v); }

/// The isometry of L(6, 2) extending g on the sublattice L(6, 2p^2).
inline IntMatrix extend_to_L62(const IntMatrix& g, const Int& p) {
  const GramLattice small = lattices::L(6, 2 * p * p);
  if (congruence(small.gram(), g) != small.gram()) throw NotAnIsometry("matrix is not an isometry of L(6, 2p^2)");
  const IntMatrix e = l62_embedding(p);
  const RatMatrix ext = to_rational(e) * to_rational(g) * rat_inverse(e);
  if (!is_integral(ext)) throw ExtensionNotIntegral("extension to L(6, 2) is not integral");
  IntMatrix out = to_integer(ext);
  const GramLattice big = lattices::L(6, 2);
  if (congruence(big.gram(), out) != big.gram()) throw ExtensionNotIntegral("extension is not an isometry of L(6, 2)");
  return out;
}

}  // namespace orthocusp
