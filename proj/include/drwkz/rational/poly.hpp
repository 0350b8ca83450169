#pragma once

// Sparse multivariate polynomials with rational coefficients in at most
// 16 variables. A monomial is a packed key with one byte per variable;
// terms are kept sorted by key.

#include <algorithm>
#include <cstdint>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <gmpxx.h>

#include "drwkz/errors.hpp"

namespace drwkz::rational {

constexpr std::size_t kMaxVars = 16;

using Monomial = unsigned __int128;

inline unsigned exponent(Monomial m, std::size_t var) { return static_cast<unsigned>((m >> (8 * var)) & 0xff); }
inline Monomial unit_monomial(std::size_t var) { return Monomial{1} << (8 * var); }

class Poly {
 public:
  using Term = std::pair<Monomial, mpq_class>;
  using Terms = std::vector<Term>;

  Poly() = default;
  Poly(const mpq_class& c) {  // NOLINT: constants convert implicitly
    if (sgn(c) != 0) terms_.emplace_back(Monomial{0}, c);
  }
  Poly(long c) : Poly(mpq_class(c)) {}  // NOLINT

  static Poly variable(std::size_t i) {
    if (i >= kMaxVars) throw ResourceError("Poly: more than 16 variables");
    Poly p;
    p.terms_.emplace_back(unit_monomial(i), 1);
    return p;
  }

  /// sum_i coeffs[i] x_i + constant
  static Poly linear(const std::vector<mpq_class>& coeffs, const mpq_class& constant = 0) {
    Poly p(constant);
    for (std::size_t i = 0; i < coeffs.size(); ++i)
      if (sgn(coeffs[i]) != 0) p += variable(i).scaled(coeffs[i]);
    return p;
  }

  const Terms& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  std::size_t size() const { return terms_.size(); }

  bool is_constant() const { return terms_.empty() || (terms_.size() == 1 && terms_[0].first == 0); }
  mpq_class constant_term() const {
    return !terms_.empty() && terms_[0].first == 0 ? terms_[0].second : mpq_class(0);
  }

  int degree_in(std::size_t var) const {
    int d = -1;
    for (const auto& [m, c] : terms_) d = std::max(d, static_cast<int>(exponent(m, var)));
    return d;
  }

  /// Largest exponent of each variable packed into a monomial.
  Monomial max_exponents() const {
    Monomial r = 0;
    for (std::size_t v = 0; v < kMaxVars; ++v) {
      int d = degree_in(v);
      if (d > 0) r |= Monomial(static_cast<unsigned>(d)) << (8 * v);
    }
    return r;
  }

  Poly& operator+=(const Poly& o) { return *this = combine(*this, o, 1); }
  Poly& operator-=(const Poly& o) { return *this = combine(*this, o, -1); }
  friend Poly operator+(const Poly& a, const Poly& b) { return combine(a, b, 1); }
  friend Poly operator-(const Poly& a, const Poly& b) { return combine(a, b, -1); }
  friend Poly operator-(const Poly& a) { return a.scaled(-1); }

  friend Poly operator*(const Poly& a, const Poly& b) {
    if (a.is_zero() || b.is_zero()) return {};
    check_overflow(a.max_exponents(), b.max_exponents());
    const Poly& outer = a.size() <= b.size() ? a : b;
    const Poly& inner = a.size() <= b.size() ? b : a;
    // each row outer_i * inner is sorted because keys add without carries
    std::vector<Poly> rows;
    rows.reserve(outer.size());
    for (const auto& [mo, co] : outer.terms_) {
      Poly row;
      row.terms_.reserve(inner.size());
      for (const auto& [mi, ci] : inner.terms_) row.terms_.emplace_back(mo + mi, co * ci);
      rows.push_back(std::move(row));
    }
    while (rows.size() > 1) {
      std::vector<Poly> next;
      next.reserve((rows.size() + 1) / 2);
      for (std::size_t i = 0; i + 1 < rows.size(); i += 2) next.push_back(combine(rows[i], rows[i + 1], 1));
      if (rows.size() % 2) next.push_back(std::move(rows.back()));
      rows = std::move(next);
    }
    return std::move(rows[0]);
  }
  Poly& operator*=(const Poly& o) { return *this = *this * o; }

  Poly scaled(const mpq_class& s) const {
    Poly r;
    if (sgn(s) == 0) return r;
    r.terms_.reserve(terms_.size());
    for (const auto& [m, c] : terms_) r.terms_.emplace_back(m, c * s);
    return r;
  }

  /// Product with a single monomial.
  Poly shifted(Monomial m) const {
    Poly r;
    r.terms_.reserve(terms_.size());
    for (const auto& [k, c] : terms_) r.terms_.emplace_back(k + m, c);
    return r;
  }

  Poly pow(unsigned k) const {
    Poly r(1), b = *this;
    while (k) {
      if (k & 1) r *= b;
      k >>= 1;
      if (k) b *= b;
    }
    return r;
  }

  Poly derivative(std::size_t var) const {
    Poly r;
    for (const auto& [m, c] : terms_) {
      unsigned e = exponent(m, var);
      if (e == 0) continue;
      r.terms_.emplace_back(m - unit_monomial(var), c * e);
    }
    r.sort_merge();
    return r;
  }

  /// Substitutes x_var := value.
  Poly substitute(std::size_t var, const mpq_class& value) const {
    Poly r;
    for (const auto& [m, c] : terms_) {
      unsigned e = exponent(m, var);
      mpq_class v = c;
      for (unsigned k = 0; k < e; ++k) v *= value;
      r.terms_.emplace_back(m - Monomial(e) * unit_monomial(var), v);
    }
    r.sort_merge();
    return r;
  }

  /// Renames variables: x_i -> x_{perm[i]}.
  Poly permuted(const std::vector<std::size_t>& perm) const {
    Poly r;
    for (const auto& [m, c] : terms_) {
      Monomial n = 0;
      for (std::size_t i = 0; i < kMaxVars; ++i) {
        std::size_t target = i < perm.size() ? perm[i] : i;
        n |= Monomial(exponent(m, i)) << (8 * target);
      }
      r.terms_.emplace_back(n, c);
    }
    r.sort_merge();
    return r;
  }

  mpq_class evaluate(const std::vector<mpq_class>& point) const {
    mpq_class total = 0;
    for (const auto& [m, c] : terms_) {
      mpq_class v = c;
      for (std::size_t i = 0; i < kMaxVars; ++i)
        for (unsigned k = exponent(m, i); k > 0; --k) v *= point.at(i);
      total += v;
    }
    return total;
  }

  /// Splits off the variables in `mask` (bit v set for variable v): returns
  /// the map monomial-in-mask -> coefficient polynomial in the others.
  std::vector<std::pair<Monomial, Poly>> split(Monomial mask) const {
    std::vector<std::pair<Monomial, Poly>> parts;
    for (const auto& [m, c] : terms_) {
      Monomial key = m & mask;
      auto it = std::find_if(parts.begin(), parts.end(), [&](const auto& p) { return p.first == key; });
      if (it == parts.end()) {
        parts.emplace_back(key, Poly());
        it = parts.end() - 1;
      }
      it->second.terms_.emplace_back(m & ~mask, c);
    }
    for (auto& [k, p] : parts) p.sort_merge();
    std::sort(parts.begin(), parts.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    return parts;
  }

  /// Byte mask covering the given variables.
  static Monomial variable_mask(std::size_t from, std::size_t to) {
    Monomial m = 0;
    for (std::size_t v = from; v < to; ++v) m |= Monomial{0xff} << (8 * v);
    return m;
  }

  /// Exact quotient by a polynomial of degree one in `var`, if it divides.
  std::optional<Poly> divide_by_linear(const Poly& lin, std::size_t var) const {
    // lin = a * x_var + rest, with rest free of x_var
    mpq_class a;
    Poly rest;
    for (const auto& [m, c] : lin.terms_) {
      if (exponent(m, var) == 1) {
        if (m != unit_monomial(var)) throw PreconditionError("divide_by_linear: leading coefficient must be constant");
        a = c;
      } else {
        rest.terms_.emplace_back(m, c);
      }
    }
    if (sgn(a) == 0) throw PreconditionError("divide_by_linear: variable absent from divisor");
    // quotient coefficients of x_var^{d-1}, ..., x_var^0 from the top
    int top = degree_in(var);
    if (top <= 0) return is_zero() ? std::optional<Poly>(Poly()) : std::nullopt;
    std::vector<Poly> slices(static_cast<std::size_t>(top) + 1);
    for (const auto& [m, c] : terms_) {
      unsigned e = exponent(m, var);
      slices[e].terms_.emplace_back(m - Monomial(e) * unit_monomial(var), c);
    }
    const mpq_class inv = 1 / a;
    Poly quot, carry;
    for (int e = top; e >= 1; --e) {
      // q_{e-1} = (slice_e - rest * q_e) / a, with carry = rest * q_e
      Poly q = (slices[static_cast<std::size_t>(e)] - carry).scaled(inv);
      carry = rest * q;
      quot += q.shifted(Monomial(static_cast<unsigned>(e - 1)) * unit_monomial(var));
    }
    if (!(slices[0] - carry).is_zero()) return std::nullopt;
    return quot;
  }

  friend bool operator==(const Poly& a, const Poly& b) { return a.terms_ == b.terms_; }

  std::string to_string(const std::vector<std::string>& names) const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
      const auto& [m, c] = *it;
      mpq_class shown = c;
      if (!first) {
        os << (sgn(c) < 0 ? " - " : " + ");
        shown = abs(c);
      }
      first = false;
      if (m == 0) {
        os << shown.get_str();
        continue;
      }
      if (shown == -1) os << "-";
      else if (shown != 1) os << shown.get_str() << "*";
      bool first_var = true;
      for (std::size_t i = 0; i < kMaxVars; ++i) {
        unsigned e = exponent(m, i);
        if (e == 0) continue;
        if (!first_var) os << "*";
        first_var = false;
        os << (i < names.size() ? names[i] : "x" + std::to_string(i));
        if (e > 1) os << "^" << e;
      }
    }
    return os.str();
  }

 private:
  static void check_overflow(Monomial a, Monomial b) {
    for (std::size_t v = 0; v < kMaxVars; ++v)
      if (exponent(a, v) + exponent(b, v) > 255) throw ResourceError("Poly: exponent overflow");
  }

  static Poly combine(const Poly& a, const Poly& b, int sign) {
    Poly r;
    r.terms_.reserve(a.size() + b.size());
    auto i = a.terms_.begin(), j = b.terms_.begin();
    while (i != a.terms_.end() || j != b.terms_.end()) {
      if (j == b.terms_.end() || (i != a.terms_.end() && i->first < j->first)) {
        r.terms_.push_back(*i++);
      } else if (i == a.terms_.end() || j->first < i->first) {
        r.terms_.emplace_back(j->first, sign > 0 ? j->second : mpq_class(-j->second));
        ++j;
      } else {
        mpq_class c = sign > 0 ? mpq_class(i->second + j->second) : mpq_class(i->second - j->second);
        if (sgn(c) != 0) r.terms_.emplace_back(i->first, std::move(c));
        ++i;
        ++j;
      }
    }
    return r;
  }

  void sort_merge() {
    std::sort(terms_.begin(), terms_.end(), [](const Term& a, const Term& b) { return a.first < b.first; });
    Terms out;
    out.reserve(terms_.size());
    for (auto& t : terms_) {
      if (!out.empty() && out.back().first == t.first) out.back().second += t.second;
      else out.push_back(std::move(t));
    }
    out.erase(std::remove_if(out.begin(), out.end(), [](const Term& t) { return sgn(t.second) == 0; }), out.end());
    terms_ = std::move(out);
  }

  Terms terms_;
};

}  // namespace drwkz::rational
