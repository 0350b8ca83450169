#pragma once

// Affine hyperplane arrangements, the Orlik-Solomon algebra and its
// realization by logarithmic forms.

#include <algorithm>
#include <fstream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <gmpxx.h>
#include <json.hpp>

#include "drwkz/errors.hpp"
#include "drwkz/linalg.hpp"
#include "drwkz/padic.hpp"
#include "drwkz/rational/forms.hpp"
#include "drwkz/witt/form.hpp"

namespace drwkz::arrangement {

/// f(x) = coeffs . x + constant
struct Hyperplane {
  std::vector<mpq_class> coeffs;
  mpq_class constant;
};

/// Base field: the rationals when p == 0, otherwise F_p.
struct Field {
  u64 p = 0;
  bool is_rational() const { return p == 0; }
  std::string to_string() const { return p == 0 ? "Q" : "F" + std::to_string(p); }
};

using Tuple = std::vector<int>;

class Arrangement {
 public:
  Arrangement(int dim, std::vector<Hyperplane> hyperplanes, Field field = {})
      : dim_(dim), field_(field), hyperplanes_(std::move(hyperplanes)) {
    if (dim_ < 0) throw PreconditionError("Arrangement: negative dimension");
    if (!field_.is_rational() && !is_prime(field_.p)) throw PreconditionError("Arrangement: field characteristic is not prime");
    for (auto& h : hyperplanes_) {
      if (static_cast<int>(h.coeffs.size()) != dim_) throw PreconditionError("Arrangement: coefficient vector has wrong length");
      if (!field_.is_rational()) {
        for (auto& c : h.coeffs) c = to_field(c);
        h.constant = to_field(h.constant);
      }
      if (std::all_of(h.coeffs.begin(), h.coeffs.end(), [](const mpq_class& c) { return sgn(c) == 0; }))
        throw PreconditionError("Arrangement: hyperplane with zero linear part");
    }
    for (std::size_t i = 0; i < hyperplanes_.size(); ++i)
      for (std::size_t j = i + 1; j < hyperplanes_.size(); ++j)
        if (augmented_rank({static_cast<int>(i), static_cast<int>(j)}) < 2)
          throw PreconditionError("Arrangement: hyperplanes " + std::to_string(i) + " and " + std::to_string(j) + " coincide");
  }

  int dim() const { return dim_; }
  const Field& field() const { return field_; }
  std::size_t size() const { return hyperplanes_.size(); }
  const std::vector<Hyperplane>& hyperplanes() const { return hyperplanes_; }
  const Hyperplane& operator[](std::size_t i) const { return hyperplanes_[i]; }

  /// Rank of the linear parts of the subset.
  std::size_t linear_rank(const Tuple& subset) const { return rank_of(subset, false); }
  /// Rank of the augmented system (linear part | constant).
  std::size_t augmented_rank(const Tuple& subset) const { return rank_of(subset, true); }

  bool meets(const Tuple& subset) const { return linear_rank(subset) == augmented_rank(subset); }
  bool independent(const Tuple& subset) const { return linear_rank(subset) == subset.size(); }

 private:
  mpq_class to_field(const mpq_class& c) const {
    PadicScalar s = PadicScalar::from_rational(field_.p, 1, c);
    return mpq_class(static_cast<unsigned long>(s.value()));
  }

  std::size_t rank_of(const Tuple& subset, bool augmented) const {
    if (field_.is_rational()) {
      linalg::Matrix rows;
      for (int i : subset) {
        auto r = hyperplanes_.at(static_cast<std::size_t>(i)).coeffs;
        if (augmented) r.push_back(hyperplanes_[static_cast<std::size_t>(i)].constant);
        rows.push_back(std::move(r));
      }
      return linalg::rank(rows);
    }
    std::vector<std::vector<long long>> rows;
    for (int i : subset) {
      std::vector<long long> r;
      const auto& h = hyperplanes_.at(static_cast<std::size_t>(i));
      for (const auto& c : h.coeffs) r.push_back(mpz_class(c.get_num()).get_si());
      if (augmented) r.push_back(mpz_class(h.constant.get_num()).get_si());
      rows.push_back(std::move(r));
    }
    return linalg::rank_mod_p(rows, field_.p);
  }

  int dim_;
  Field field_;
  std::vector<Hyperplane> hyperplanes_;
};

/// Independent linear parts and a nonempty common intersection.
inline bool general_position(const Arrangement& arr, const Tuple& subset) {
  for (std::size_t i = 0; i < subset.size(); ++i) {
    if (subset[i] < 0 || static_cast<std::size_t>(subset[i]) >= arr.size())
      throw PreconditionError("general_position: index out of range");
    for (std::size_t j = i + 1; j < subset.size(); ++j)
      if (subset[i] == subset[j]) throw PreconditionError("general_position: repeated index");
  }
  return arr.linear_rank(subset) == subset.size() && arr.augmented_rank(subset) == subset.size();
}

namespace detail {

inline mpq_class parse_scalar(const nlohmann::json& j) {
  if (j.is_number_integer()) return mpq_class(j.get<long>());
  if (j.is_string()) {
    mpq_class q;
    if (q.set_str(j.get<std::string>(), 10) != 0) throw ParseError("bad rational '" + j.get<std::string>() + "'");
    q.canonicalize();
    return q;
  }
  throw ParseError("expected an integer or a rational string");
}

}  // namespace detail

/// {"field": "Q" | {"Fp": p}, "dim": n, "hyperplanes": [{"coeffs": [..], "const": c}]}
inline Arrangement arrangement_from_json(const nlohmann::json& j) {
  try {
    Field field;
    const auto& f = j.at("field");
    if (f.is_string()) {
      if (f.get<std::string>() != "Q") throw ParseError("unknown field '" + f.get<std::string>() + "'");
    } else {
      field.p = f.at("Fp").get<u64>();
    }
    const int dim = j.at("dim").get<int>();
    std::vector<Hyperplane> hs;
    for (const auto& h : j.at("hyperplanes")) {
      Hyperplane x;
      for (const auto& c : h.at("coeffs")) x.coeffs.push_back(detail::parse_scalar(c));
      x.constant = h.contains("const") ? detail::parse_scalar(h.at("const")) : mpq_class(0);
      hs.push_back(std::move(x));
    }
    return Arrangement(dim, std::move(hs), field);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("arrangement JSON: ") + e.what());
  }
}

inline Arrangement load_arrangement(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(path + ": " + e.what());
  }
  return arrangement_from_json(j);
}

inline nlohmann::json to_json(const Arrangement& arr) {
  nlohmann::json j;
  j["field"] = arr.field().is_rational() ? nlohmann::json("Q") : nlohmann::json{{"Fp", arr.field().p}};
  j["dim"] = arr.dim();
  j["hyperplanes"] = nlohmann::json::array();
  for (const auto& h : arr.hyperplanes()) {
    nlohmann::json c = nlohmann::json::array();
    for (const auto& x : h.coeffs) c.push_back(x.get_str());
    j["hyperplanes"].push_back({{"coeffs", c}, {"const", h.constant.get_str()}});
  }
  return j;
}

/// Element of one graded piece of the exterior algebra on the hyperplanes,
/// keyed by increasing tuples.
struct OSElement {
  int degree = 0;
  std::map<Tuple, mpq_class> terms;

  static OSElement generator(int i) { return {1, {{{i}, 1}}}; }
  static OSElement unit() { return {0, {{{}, 1}}}; }

  bool is_zero() const { return terms.empty(); }

  /// Adds c * e_{t_1} ∧ ... ∧ e_{t_k} for an arbitrary index sequence.
  void add(Tuple t, const mpq_class& c) {
    int sign = 1;
    for (std::size_t i = 0; i < t.size(); ++i)
      for (std::size_t j = i + 1; j < t.size(); ++j) {
        if (t[i] == t[j]) return;
        if (t[i] > t[j]) sign = -sign;
      }
    std::sort(t.begin(), t.end());
    auto [it, fresh] = terms.try_emplace(std::move(t), 0);
    it->second += sign * c;
    if (sgn(it->second) == 0) terms.erase(it);
  }

  OSElement& operator+=(const OSElement& o) { return add_scaled(o, 1); }
  OSElement& add_scaled(const OSElement& o, const mpq_class& s) {
    if (!o.is_zero() && !is_zero() && o.degree != degree) throw PreconditionError("OSElement: adding different degrees");
    if (is_zero()) degree = o.degree;
    for (const auto& [t, c] : o.terms) add(t, c * s);
    return *this;
  }

  friend OSElement operator*(const OSElement& a, const OSElement& b) {
    OSElement r{a.degree + b.degree, {}};
    for (const auto& [ta, ca] : a.terms)
      for (const auto& [tb, cb] : b.terms) {
        Tuple t = ta;
        t.insert(t.end(), tb.begin(), tb.end());
        r.add(std::move(t), ca * cb);
      }
    return r;
  }

  friend bool operator==(const OSElement& a, const OSElement& b) {
    return a.terms == b.terms && (a.terms.empty() || a.degree == b.degree);
  }

  std::string to_string() const {
    if (terms.empty()) return "0";
    std::string s;
    for (const auto& [t, c] : terms) {
      if (!s.empty()) s += " + ";
      s += c.get_str() + "*(";
      for (std::size_t i = 0; i < t.size(); ++i) s += (i ? "," : "") + std::to_string(t[i]);
      s += ")";
    }
    return s;
  }
};

/// Boundary of e_T: sum_i (-1)^i e_{T without t_i}.
inline OSElement boundary(const Tuple& t) {
  OSElement r{static_cast<int>(t.size()) - 1, {}};
  for (std::size_t i = 0; i < t.size(); ++i) {
    Tuple rest = t;
    rest.erase(rest.begin() + static_cast<long>(i));
    r.add(std::move(rest), i % 2 ? -1 : 1);
  }
  return r;
}

namespace detail {

inline void subsets(int n, int k, int start, Tuple& cur, std::vector<Tuple>& out) {
  if (static_cast<int>(cur.size()) == k) {
    out.push_back(cur);
    return;
  }
  for (int i = start; i < n; ++i) {
    cur.push_back(i);
    subsets(n, k, i + 1, cur, out);
    cur.pop_back();
  }
}

inline std::vector<Tuple> subsets(int n, int k) {
  std::vector<Tuple> out;
  Tuple cur;
  if (k >= 0 && k <= n) subsets(n, k, 0, cur, out);
  return out;
}

}  // namespace detail

/// Graded algebra E(I) / (relations): tuples with empty intersection vanish,
/// dependent tuples with a common point satisfy the boundary relation.
class OSAlgebra {
 public:
  static constexpr std::size_t kDefaultBound = 12;

  explicit OSAlgebra(const Arrangement& arr, std::size_t bound = kDefaultBound) : size_(static_cast<int>(arr.size())) {
    if (arr.size() > bound)
      throw ResourceError("OSAlgebra: " + std::to_string(arr.size()) + " hyperplanes exceed the bound " + std::to_string(bound));
    const int top = std::min(size_, arr.dim());
    // generators of the ideal, by degree
    // pieces above the rank of the arrangement vanish: every tuple there is
    // dependent, and e_T = e_i ∧ boundary(e_T) or e_T has empty intersection
    std::vector<std::vector<OSElement>> gens(static_cast<std::size_t>(size_) + 2);
    for (int k = 1; k <= std::min(size_, top + 1); ++k)
      for (const auto& t : detail::subsets(size_, k)) {
        if (!arr.meets(t)) gens[static_cast<std::size_t>(k)].push_back({k, {{t, 1}}});
        else if (!arr.independent(t)) gens[static_cast<std::size_t>(k) - 1].push_back(boundary(t));
      }
    for (int k = 0; k <= top; ++k) {
      Piece piece;
      piece.tuples = detail::subsets(size_, k);
      for (std::size_t i = 0; i < piece.tuples.size(); ++i) piece.column[piece.tuples[i]] = i;
      const std::size_t full = piece.tuples.size();
      // ideal in degree k: e_U ∧ g over generators g of degree j <= k
      for (int j = 0; j <= k && piece.relations.rank() < full; ++j)
        for (const auto& g : gens[static_cast<std::size_t>(j)]) {
          for (const auto& u : detail::subsets(size_, k - j)) {
            OSElement x = OSElement{k - j, {{u, 1}}} * g;
            if (!x.is_zero()) piece.relations.insert(piece.vector(x));
            if (piece.relations.rank() == full) break;
          }
          if (piece.relations.rank() == full) break;
        }
      for (std::size_t i = 0; i < full; ++i)
        if (!piece.relations.is_pivot(i)) {
          piece.basis_index[i] = piece.basis.size();
          piece.basis.push_back(piece.tuples[i]);
        }
      pieces_.push_back(std::move(piece));
    }
    while (pieces_.size() > 1 && pieces_.back().basis.empty()) pieces_.pop_back();
  }

  std::size_t num_hyperplanes() const { return static_cast<std::size_t>(size_); }
  int top_degree() const { return static_cast<int>(pieces_.size()) - 1; }

  std::size_t dim(int k) const { return k < 0 || k > top_degree() ? 0 : pieces_[static_cast<std::size_t>(k)].basis.size(); }
  std::vector<std::size_t> dims() const {
    std::vector<std::size_t> d;
    for (int k = 0; k <= top_degree(); ++k) d.push_back(dim(k));
    return d;
  }
  const std::vector<Tuple>& basis(int k) const {
    static const std::vector<Tuple> none;
    return k < 0 || k > top_degree() ? none : pieces_[static_cast<std::size_t>(k)].basis;
  }

  /// Coordinates of the class of x in the basis of its degree.
  std::vector<mpq_class> coordinates(const OSElement& x) const {
    std::vector<mpq_class> r(dim(x.degree));
    if (x.is_zero() || x.degree > top_degree()) return r;
    const Piece& piece = pieces_[static_cast<std::size_t>(x.degree)];
    for (const auto& [col, c] : piece.relations.reduce(piece.vector(x))) r[piece.basis_index.at(col)] = c;
    return r;
  }

  /// Normal form: the class of x written on basis tuples.
  OSElement reduce(const OSElement& x) const {
    OSElement r{x.degree, {}};
    auto c = coordinates(x);
    for (std::size_t i = 0; i < c.size(); ++i)
      if (sgn(c[i]) != 0) r.terms.emplace(basis(x.degree)[i], c[i]);
    return r;
  }

  OSElement from_coordinates(int k, const std::vector<mpq_class>& c) const {
    OSElement r{k, {}};
    for (std::size_t i = 0; i < c.size(); ++i)
      if (sgn(c[i]) != 0) r.terms.emplace(basis(k).at(i), c[i]);
    return r;
  }

  OSElement multiply(const OSElement& a, const OSElement& b) const { return reduce(a * b); }

 private:
  struct Piece {
    std::vector<Tuple> tuples;
    std::map<Tuple, std::size_t> column;
    linalg::Echelon relations;
    std::vector<Tuple> basis;
    std::map<std::size_t, std::size_t> basis_index;

    linalg::SparseVec vector(const OSElement& x) const {
      linalg::SparseVec v;
      for (const auto& [t, c] : x.terms) v[column.at(t)] += c;
      return v;
    }
  };

  int size_;
  std::vector<Piece> pieces_;
};

/// Realization as logarithmic forms over Q. The context must have at least
/// dim form variables, taken as the coordinates.
inline rational::LogForm psi_rational(const Arrangement& arr, const OSElement& x, const rational::ContextPtr& ctx) {
  if (!arr.field().is_rational()) throw DomainError("psi: rational target needs an arrangement over Q");
  if (static_cast<int>(ctx->form_vars()) < arr.dim()) throw PreconditionError("psi: context has too few form variables");
  rational::LogForm r(ctx, x.degree);
  std::vector<int> atoms;
  for (const auto& h : arr.hyperplanes()) {
    std::vector<mpq_class> coeffs(ctx->size());
    std::copy(h.coeffs.begin(), h.coeffs.end(), coeffs.begin());
    atoms.push_back(ctx->intern(coeffs, h.constant).first);
  }
  for (const auto& [t, c] : x.terms) {
    rational::LogForm::Block b;
    for (int i : t) b.push_back(atoms.at(static_cast<std::size_t>(i)));
    r.add(std::move(b), rational::RationalCoeff(c));
  }
  return r;
}

/// Coordinate context x1..xn for an arrangement.
inline rational::ContextPtr coordinate_context(const Arrangement& arr) {
  std::vector<std::string> names;
  for (int i = 1; i <= arr.dim(); ++i) names.push_back("x" + std::to_string(i));
  return rational::Context::make(names);
}

/// The atom of a hyperplane in the fractional-exponent ring, when the
/// hyperplane is a coordinate hyperplane t_i or a difference t_i - t_j.
inline std::optional<witt::Atom> drw_atom(const Hyperplane& h) {
  if (sgn(h.constant) != 0) return std::nullopt;
  std::vector<int> support;
  for (std::size_t i = 0; i < h.coeffs.size(); ++i)
    if (sgn(h.coeffs[i]) != 0) support.push_back(static_cast<int>(i));
  if (support.size() == 1) return witt::Atom::t(support[0] + 1);
  if (support.size() == 2 && h.coeffs[static_cast<std::size_t>(support[0])] == -h.coeffs[static_cast<std::size_t>(support[1])])
    return witt::Atom::t_minus_t(support[0] + 1, support[1] + 1);
  return std::nullopt;
}

/// Ring with one invertible atom per hyperplane.
inline witt::RingPtr drw_ring(const Arrangement& arr, u64 p, int precision) {
  std::vector<witt::AtomSpec> atoms;
  for (std::size_t i = 0; i < arr.size(); ++i) {
    auto a = drw_atom(arr[i]);
    if (!a) throw DomainError("psi: hyperplane " + std::to_string(i) + " is not representable by a ring atom");
    atoms.push_back({*a, true});
  }
  return witt::make_ring(p, precision, std::move(atoms));
}

/// Realization in the de Rham-Witt target: e_i -> dlog of the atom of H_i.
inline witt::DRWForm psi_drw(const Arrangement& arr, const OSElement& x, const witt::RingPtr& ring) {
  witt::DRWForm r(ring, x.degree);
  for (const auto& [t, c] : x.terms) {
    std::vector<witt::Atom> block;
    for (int i : t) {
      auto a = drw_atom(arr[static_cast<std::size_t>(i)]);
      if (!a) throw DomainError("psi: hyperplane " + std::to_string(i) + " is not representable by a ring atom");
      block.push_back(*a);
    }
    r += witt::DRWForm::monomial(ring, c, std::vector<witt::FracExponent>(ring->size()), block);
  }
  return r;
}

struct PsiDegree {
  int degree;
  std::size_t os_dim;
  std::size_t psi_rank;
  bool ok() const { return os_dim == psi_rank; }
};

/// Per degree: rank of the span of the realized basis elements against the
/// OS dimension.
inline std::vector<PsiDegree> verify_psi_iso(const Arrangement& arr, int max_degree, const OSAlgebra& os) {
  auto ctx = coordinate_context(arr);
  std::vector<PsiDegree> out;
  for (int k = 0; k <= max_degree; ++k) {
    std::vector<rational::CoordForm> images;
    for (const auto& t : os.basis(k))
      images.push_back(rational::expand_coordinates(psi_rational(arr, OSElement{k, {{t, 1}}}, ctx)));
    out.push_back({k, os.dim(k), rational::coordinate_rank(images)});
  }
  return out;
}

inline std::vector<PsiDegree> verify_psi_iso(const Arrangement& arr, int max_degree) {
  return verify_psi_iso(arr, max_degree, OSAlgebra(arr));
}

}  // namespace drwkz::arrangement
