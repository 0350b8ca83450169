#pragma once

// Milnor K-symbols over a field of rational functions whose entries factor
// into linear forms, rule-checked derivations, the map to the Orlik-Solomon
// algebra and the dlog realization.

#include <cctype>
#include <fstream>
#include <map>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include <gmpxx.h>
#include <json.hpp>

#include "drwkz/arrangement.hpp"
#include "drwkz/errors.hpp"
#include "drwkz/linalg.hpp"
#include "drwkz/rational/forms.hpp"

namespace drwkz::milnor {

using rational::Context;
using rational::ContextPtr;
using rational::Poly;

/// unit * prod atom^e, atoms interned in a Context.
struct Factored {
  mpq_class unit = 1;
  std::map<int, int> powers;

  static Factored constant(const mpq_class& c) {
    if (sgn(c) == 0) throw DomainError("symbol entries must be nonzero");
    return {c, {}};
  }
  static Factored atom(int id, const mpq_class& scale = 1) { return {scale, {{id, 1}}}; }

  bool is_constant() const { return powers.empty(); }

  friend Factored operator*(const Factored& a, const Factored& b) {
    Factored r{a.unit * b.unit, a.powers};
    for (const auto& [k, e] : b.powers) r.bump(k, e);
    return r;
  }
  Factored inverse() const {
    Factored r{1 / unit, {}};
    for (const auto& [k, e] : powers) r.powers[k] = -e;
    return r;
  }
  friend Factored operator/(const Factored& a, const Factored& b) { return a * b.inverse(); }
  Factored pow(int k) const {
    Factored r = constant(1);
    Factored b = k < 0 ? inverse() : *this;
    for (int i = 0; i < (k < 0 ? -k : k); ++i) r = r * b;
    return r;
  }
  Factored negated() const { return {-unit, powers}; }

  /// numerator / denominator as polynomials.
  std::pair<Poly, Poly> fraction(const Context& ctx) const {
    Poly num(unit), den(1);
    for (const auto& [k, e] : powers) {
      if (e > 0) num *= ctx.atom_poly(k).pow(static_cast<unsigned>(e));
      else den *= ctx.atom_poly(k).pow(static_cast<unsigned>(-e));
    }
    return {num, den};
  }

  friend bool operator==(const Factored& a, const Factored& b) { return a.unit == b.unit && a.powers == b.powers; }
  friend bool operator<(const Factored& a, const Factored& b) {
    if (a.unit != b.unit) return a.unit < b.unit;
    return a.powers < b.powers;
  }

  std::string to_string(const Context& ctx) const {
    std::string s;
    if (unit != 1 || powers.empty()) s = unit == -1 && !powers.empty() ? "-" : unit.get_str();
    bool first = s.empty() || s == "-";
    for (const auto& [k, e] : powers) {
      if (!first) s += "*";
      first = false;
      s += "(" + ctx.atom_string(k) + ")";
      if (e != 1) s += "^" + std::to_string(e);
    }
    return s;
  }

 private:
  void bump(int k, int e) {
    int& x = powers[k];
    x += e;
    if (x == 0) powers.erase(k);
  }
};

namespace detail {

inline int total_degree(const Poly& p) {
  int d = -1;
  for (const auto& [m, c] : p.terms()) {
    int s = 0;
    for (std::size_t v = 0; v < rational::kMaxVars; ++v) s += static_cast<int>(rational::exponent(m, v));
    d = std::max(d, s);
  }
  return d;
}

/// Splits a nonzero polynomial into known atoms plus at most one new
/// linear factor.
inline Factored factor(const Context& ctx, Poly p) {
  if (p.is_zero()) throw DomainError("symbol entries must be nonzero");
  Factored r = Factored::constant(1);
  for (int id = 0; id < static_cast<int>(ctx.atom_count()); ++id) {
    for (;;) {
      if (total_degree(p) < 1) break;
      auto q = p.divide_by_linear(ctx.atom_poly(id), ctx.pivot(id));
      if (!q) break;
      p = std::move(*q);
      r = r * Factored::atom(id);
    }
  }
  const int deg = total_degree(p);
  if (deg == 0) return r * Factored::constant(p.constant_term());
  if (deg > 1) throw DomainError("entry does not factor into linear forms: " + p.to_string(ctx.names()));
  std::vector<mpq_class> coeffs(ctx.size());
  for (const auto& [m, c] : p.terms())
    for (std::size_t v = 0; v < ctx.size(); ++v)
      if (m == rational::unit_monomial(v)) coeffs[v] = c;
  auto [id, s] = ctx.intern(coeffs, p.constant_term());
  return r * Factored::atom(id, s);
}

}  // namespace detail

/// a + b, refactored.
inline Factored add(const Context& ctx, const Factored& a, const Factored& b) {
  auto [na, da] = a.fraction(ctx);
  auto [nb, db] = b.fraction(ctx);
  Factored den = Factored::constant(1);
  for (const auto& [k, e] : a.powers)
    if (e < 0) den = den * Factored{1, {{k, -e}}};
  for (const auto& [k, e] : b.powers)
    if (e < 0) den = den * Factored{1, {{k, -e}}};
  return detail::factor(ctx, na * db + nb * da) / den;
}

/// True when a + b = c as rational functions.
inline bool sums_to(const Context& ctx, const Factored& a, const Factored& b, const Factored& c) {
  auto [na, da] = a.fraction(ctx);
  auto [nb, db] = b.fraction(ctx);
  auto [nc, dc] = c.fraction(ctx);
  return ((na * db + nb * da) * dc - nc * da * db).is_zero();
}

/// Parses + - * / ^ (integer exponents), parentheses, integers and the
/// context's variables into a factored entry.
inline Factored parse_entry(const Context& ctx, const std::string& text) {
  struct Parser {
    const Context& ctx;
    const std::string& s;
    std::size_t i = 0;

    void skip() {
      while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
    }
    bool eat(char c) {
      skip();
      if (i < s.size() && s[i] == c) {
        ++i;
        return true;
      }
      return false;
    }
    [[noreturn]] void fail(const std::string& what) const { throw ParseError("entry '" + s + "': " + what); }

    Factored expr() {
      Factored r = term();
      for (;;) {
        if (eat('+')) r = add(ctx, r, term());
        else if (eat('-')) r = add(ctx, r, term().negated());
        else return r;
      }
    }
    Factored term() {
      Factored r = unary();
      for (;;) {
        if (eat('*')) r = r * unary();
        else if (eat('/')) r = r / unary();
        else return r;
      }
    }
    Factored unary() {
      if (eat('-')) return unary().negated();
      if (eat('+')) return unary();
      Factored b = power();
      return b;
    }
    Factored power() {
      Factored b = atom();
      if (eat('^')) {
        bool neg = eat('-');
        skip();
        std::size_t start = i;
        while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i;
        if (start == i) fail("expected an integer exponent");
        int k = std::stoi(s.substr(start, i - start));
        b = b.pow(neg ? -k : k);
      }
      return b;
    }
    Factored atom() {
      skip();
      if (eat('(')) {
        Factored r = expr();
        if (!eat(')')) fail("missing ')'");
        return r;
      }
      if (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) {
        std::size_t start = i;
        while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i;
        mpz_class v(s.substr(start, i - start));
        if (v == 0) fail("zero is not a valid entry factor");
        return Factored::constant(mpq_class(v));
      }
      std::size_t start = i;
      while (i < s.size() && (std::isalnum(static_cast<unsigned char>(s[i])) || s[i] == '_')) ++i;
      if (start == i) fail("unexpected character at position " + std::to_string(i));
      std::string name = s.substr(start, i - start);
      if (!ctx.has(name)) fail("unknown variable '" + name + "'");
      std::vector<mpq_class> c(ctx.size());
      c[ctx.index(name)] = 1;
      auto [id, sc] = ctx.intern(c, 0);
      return Factored::atom(id, sc);
    }
  };
  Parser p{ctx, text};
  Factored r;
  try {
    r = p.expr();
  } catch (const DomainError& e) {
    throw ParseError("entry '" + text + "': " + e.what());
  }
  p.skip();
  if (p.i != text.size()) p.fail("trailing input");
  return r;
}

using Tuple = std::vector<Factored>;

/// Formal Q-combination of tuples of entries, all of one degree.
struct KSymbol {
  int degree = 0;
  std::map<Tuple, mpq_class> terms;

  bool is_zero() const { return terms.empty(); }

  void add(const Tuple& t, const mpq_class& c) {
    if (static_cast<int>(t.size()) != degree) throw PreconditionError("KSymbol: tuple length differs from degree");
    if (sgn(c) == 0) return;
    auto [it, fresh] = terms.try_emplace(t, 0);
    it->second += c;
    if (sgn(it->second) == 0) terms.erase(it);
  }
  KSymbol& add_scaled(const KSymbol& o, const mpq_class& s) {
    if (terms.empty()) degree = o.degree;
    for (const auto& [t, c] : o.terms) add(t, c * s);
    return *this;
  }

  /// Product: concatenation of tuples.
  friend KSymbol operator*(const KSymbol& a, const KSymbol& b) {
    KSymbol r{a.degree + b.degree, {}};
    for (const auto& [ta, ca] : a.terms)
      for (const auto& [tb, cb] : b.terms) {
        Tuple t = ta;
        t.insert(t.end(), tb.begin(), tb.end());
        r.add(t, ca * cb);
      }
    return r;
  }

  friend bool operator==(const KSymbol& a, const KSymbol& b) { return a.terms == b.terms; }

  std::string to_string(const Context& ctx) const {
    if (terms.empty()) return "0";
    std::string s;
    for (const auto& [t, c] : terms) {
      if (!s.empty()) s += " + ";
      s += c.get_str() + "*{";
      for (std::size_t i = 0; i < t.size(); ++i) s += (i ? ", " : "") + t[i].to_string(ctx);
      s += "}";
    }
    return s;
  }
};

enum class Rule { bilinearity, steinberg, inverse_antisymmetry, torsion_half };

inline Rule parse_rule(const std::string& s) {
  if (s == "bilinearity") return Rule::bilinearity;
  if (s == "steinberg") return Rule::steinberg;
  if (s == "inverse-antisymmetry") return Rule::inverse_antisymmetry;
  if (s == "torsion-half") return Rule::torsion_half;
  throw ParseError("unknown rule '" + s + "'");
}

inline std::string rule_name(Rule r) {
  switch (r) {
    case Rule::bilinearity: return "bilinearity";
    case Rule::steinberg: return "steinberg";
    case Rule::inverse_antisymmetry: return "inverse-antisymmetry";
    case Rule::torsion_half: return "torsion-half";
  }
  return {};
}

/// state += coeff * R, where R is the relation instance:
///   bilinearity   {..fg..} - {..f..} - {..g..}, with tuple[position] = fg
///   steinberg     {..x, 1-x..}, x at position
///   inverse-antisymmetry {..x, -x..}
///   torsion-half  {..y, y..}, only with 1/2 adjoined
struct DerivationStep {
  Rule rule;
  std::size_t position = 0;
  Tuple tuple;
  std::optional<Factored> f, g;
  mpq_class coeff = 1;
};

struct Derivation {
  ContextPtr ctx;
  bool z_half = false;
  KSymbol start, end;
  std::vector<DerivationStep> steps;
};

struct DerivationResult {
  bool ok = false;
  std::optional<std::size_t> failed_step;
  std::string reason;
  KSymbol final_state;

  explicit operator bool() const { return ok; }
};

/// The relation element of a step, or nullopt with a reason when the step
/// does not match its rule's schema.
inline std::optional<KSymbol> relation(const Context& ctx, const DerivationStep& s, bool z_half, std::string& reason) {
  const auto& t = s.tuple;
  KSymbol r{static_cast<int>(t.size()), {}};
  switch (s.rule) {
    case Rule::bilinearity: {
      if (!(*s.f * *s.g == t[s.position])) {
        reason = "bilinearity: f*g differs from the entry at the position";
        return std::nullopt;
      }
      Tuple tf = t, tg = t;
      tf[s.position] = *s.f;
      tg[s.position] = *s.g;
      r.add(t, 1);
      r.add(tf, -1);
      r.add(tg, -1);
      return r;
    }
    case Rule::steinberg:
      if (t[s.position].unit == 1 && t[s.position].is_constant()) {
        reason = "steinberg: x = 1 is excluded";
        return std::nullopt;
      }
      if (!sums_to(ctx, t[s.position], t[s.position + 1], Factored::constant(1))) {
        reason = "steinberg: entries are not of the form x, 1 - x";
        return std::nullopt;
      }
      r.add(t, 1);
      return r;
    case Rule::inverse_antisymmetry:
      if (!(t[s.position + 1] == t[s.position].negated())) {
        reason = "inverse-antisymmetry: entries are not of the form x, -x";
        return std::nullopt;
      }
      r.add(t, 1);
      return r;
    case Rule::torsion_half:
      if (!z_half) {
        reason = "torsion-half: needs 1/2 adjoined to the coefficients";
        return std::nullopt;
      }
      if (!(t[s.position] == t[s.position + 1])) {
        reason = "torsion-half: entries are not of the form y, y";
        return std::nullopt;
      }
      r.add(t, 1);
      return r;
  }
  return std::nullopt;
}

inline void validate_step(const DerivationStep& s, std::size_t index) {
  if (s.tuple.empty()) throw ValidationError(index, "empty tuple");
  const bool pair_rule = s.rule != Rule::bilinearity;
  if (s.position >= s.tuple.size() || (pair_rule && s.position + 1 >= s.tuple.size()))
    throw ValidationError(index, "position " + std::to_string(s.position) + " out of range for " + rule_name(s.rule));
  if (s.rule == Rule::bilinearity && (!s.f || !s.g)) throw ValidationError(index, "bilinearity needs f and g");
  if (sgn(s.coeff) == 0) throw ValidationError(index, "zero coefficient");
}

/// Coefficients live in Z, or in Z[1/2] when 1/2 is adjoined.
inline bool admissible_coeff(const mpq_class& c, bool z_half) {
  mpz_class d = c.get_den();
  if (z_half)
    while (d % 2 == 0) d /= 2;
  return d == 1;
}

inline DerivationResult verify_derivation(const Derivation& d) {
  DerivationResult res;
  KSymbol state = d.start;
  for (std::size_t i = 0; i < d.steps.size(); ++i) {
    const auto& s = d.steps[i];
    validate_step(s, i);
    if (!admissible_coeff(s.coeff, d.z_half)) {
      res.failed_step = i;
      res.reason = "coefficient outside the coefficient ring";
      res.final_state = state;
      return res;
    }
    std::string reason;
    auto r = relation(*d.ctx, s, d.z_half, reason);
    if (!r) {
      res.failed_step = i;
      res.reason = reason;
      res.final_state = state;
      return res;
    }
    if (!state.is_zero() && r->degree != state.degree) throw ValidationError(i, "tuple degree differs from the symbol's");
    state.add_scaled(*r, s.coeff);
  }
  res.final_state = state;
  res.ok = state == d.end;
  if (!res.ok) res.reason = "final state " + state.to_string(*d.ctx) + " differs from the claimed end";
  return res;
}

namespace detail {

inline mpq_class parse_coeff(const nlohmann::json& j) { return arrangement::detail::parse_scalar(j); }

inline KSymbol parse_symbol(const Context& ctx, const nlohmann::json& j) {
  KSymbol s;
  bool first = true;
  for (const auto& term : j) {
    Tuple t;
    for (const auto& e : term.at("tuple")) t.push_back(parse_entry(ctx, e.get<std::string>()));
    if (first) s.degree = static_cast<int>(t.size());
    first = false;
    if (static_cast<int>(t.size()) != s.degree) throw ParseError("symbol mixes tuple lengths");
    s.add(t, term.contains("coeff") ? parse_coeff(term.at("coeff")) : mpq_class(1));
  }
  return s;
}

}  // namespace detail

/// {"vars": [..], "z_half": bool, "start": [{"coeff", "tuple"}], "end": [..],
///  "steps": [{"rule", "position", "data": {"tuple", "f", "g", "coeff"}}]}
/// Structural problems in a step raise ValidationError with its index.
inline Derivation derivation_from_json(const nlohmann::json& j) {
  Derivation d;
  try {
    d.ctx = Context::make(j.at("vars").get<std::vector<std::string>>());
    d.z_half = j.value("z_half", false);
    d.start = detail::parse_symbol(*d.ctx, j.at("start"));
    d.end = detail::parse_symbol(*d.ctx, j.at("end"));
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("derivation JSON: ") + e.what());
  }
  const auto& steps = j.contains("steps") ? j.at("steps") : nlohmann::json::array();
  for (std::size_t i = 0; i < steps.size(); ++i) {
    try {
      const auto& js = steps[i];
      DerivationStep s;
      s.rule = parse_rule(js.at("rule").get<std::string>());
      long pos = js.at("position").get<long>();
      if (pos < 0) throw ValidationError(i, "negative position");
      s.position = static_cast<std::size_t>(pos);
      const auto& data = js.at("data");
      for (const auto& e : data.at("tuple")) s.tuple.push_back(parse_entry(*d.ctx, e.get<std::string>()));
      if (data.contains("f")) s.f = parse_entry(*d.ctx, data.at("f").get<std::string>());
      if (data.contains("g")) s.g = parse_entry(*d.ctx, data.at("g").get<std::string>());
      if (data.contains("coeff")) s.coeff = detail::parse_coeff(data.at("coeff"));
      validate_step(s, i);
      d.steps.push_back(std::move(s));
    } catch (const nlohmann::json::exception& e) {
      throw ValidationError(i, e.what());
    } catch (const ParseError& e) {
      throw ValidationError(i, e.what());
    }
  }
  return d;
}

inline Derivation load_derivation(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(path + ": " + e.what());
  }
  return derivation_from_json(j);
}

/// Atom id of each hyperplane in the symbol's context.
inline std::vector<int> hyperplane_atoms(const arrangement::Arrangement& arr, const Context& ctx) {
  if (static_cast<int>(ctx.form_vars()) != arr.dim()) throw PreconditionError("chi: context and arrangement dimensions differ");
  std::vector<int> ids;
  for (const auto& h : arr.hyperplanes()) {
    std::vector<mpq_class> c(ctx.size());
    std::copy(h.coeffs.begin(), h.coeffs.end(), c.begin());
    ids.push_back(ctx.intern(c, h.constant).first);
  }
  return ids;
}

/// {f_i1, ..., f_im} -> H_i1 ∧ ... ∧ H_im, multilinear; constants go to 0.
inline arrangement::OSElement chi(const KSymbol& sym, const arrangement::Arrangement& arr, const Context& ctx,
                                  const arrangement::OSAlgebra& os) {
  if (!arr.field().is_rational()) throw DomainError("chi: arrangement over Q expected");
  auto ids = hyperplane_atoms(arr, ctx);
  std::map<int, int> which;
  for (std::size_t i = 0; i < ids.size(); ++i) which[ids[i]] = static_cast<int>(i);
  arrangement::OSElement total{sym.degree, {}};
  for (const auto& [t, c] : sym.terms) {
    arrangement::OSElement prod = arrangement::OSElement::unit();
    prod.terms.begin()->second = c;
    for (const auto& entry : t) {
      arrangement::OSElement lin{1, {}};
      for (const auto& [atom, e] : entry.powers) {
        auto it = which.find(atom);
        if (it == which.end()) throw DomainError("chi: factor " + ctx.atom_string(atom) + " is not an arrangement hyperplane");
        lin.add({it->second}, e);
      }
      prod = prod * lin;
    }
    total += prod;
  }
  return os.reduce(total);
}

/// {g_1, ..., g_m} -> dlog g_1 ∧ ... ∧ dlog g_m; units have dlog 0.
inline rational::LogForm dlog_realize(const KSymbol& sym, const ContextPtr& ctx) {
  rational::LogForm total(ctx, sym.degree);
  for (const auto& [t, c] : sym.terms) {
    rational::LogForm prod = rational::LogForm::scalar(ctx, rational::RationalCoeff(c));
    for (const auto& entry : t) {
      rational::LogForm lin(ctx, 1);
      for (const auto& [atom, e] : entry.powers) lin.add({atom}, rational::RationalCoeff(e));
      prod = wedge(prod, lin);
    }
    total += prod;
  }
  return total;
}

struct ProbeReport {
  std::size_t symbols = 0;
  std::size_t chi_rank = 0;
  std::optional<std::size_t> dlog_rank;
  std::size_t os_dim = 0;
};

/// Ranks of the chi- and dlog-images of the first `budget` symbols
/// {g, h} with g, h products of f_i^{±1} (at most two factors each).
inline ProbeReport chi_rank_probe(const arrangement::Arrangement& arr, int degree, std::size_t budget) {
  if (degree != 2) throw PreconditionError("chi_rank_probe: only degree 2 is supported");
  arrangement::OSAlgebra os(arr);
  ProbeReport rep;
  rep.os_dim = os.dim(2);
  // contexts need at least one variable; a 0-dimensional arrangement is empty
  auto ctx = arrangement::coordinate_context(arr);
  auto ids = hyperplane_atoms(arr, *ctx);
  std::vector<Factored> entries;
  for (int id : ids) entries.push_back(Factored::atom(id));
  for (std::size_t i = 0; i < ids.size(); ++i)
    for (std::size_t j = i + 1; j < ids.size(); ++j) {
      entries.push_back(Factored::atom(ids[i]) * Factored::atom(ids[j]));
      entries.push_back(Factored::atom(ids[i]) / Factored::atom(ids[j]));
    }
  std::vector<linalg::SparseVec> chi_rows;
  std::vector<rational::CoordForm> dlog_forms;
  for (std::size_t a = 0; a < entries.size() && rep.symbols < budget; ++a)
    for (std::size_t b = 0; b < entries.size() && rep.symbols < budget; ++b) {
      if (a == b) continue;
      KSymbol s{2, {}};
      s.add({entries[a], entries[b]}, 1);
      ++rep.symbols;
      auto coords = os.coordinates(chi(s, arr, *ctx, os));
      linalg::SparseVec v;
      for (std::size_t k = 0; k < coords.size(); ++k)
        if (sgn(coords[k]) != 0) v[k] = coords[k];
      chi_rows.push_back(std::move(v));
      dlog_forms.push_back(rational::expand_coordinates(dlog_realize(s, ctx)));
    }
  rep.chi_rank = linalg::rank(chi_rows);
  rep.dlog_rank = rational::coordinate_rank(dlog_forms);
  return rep;
}

}  // namespace drwkz::milnor
