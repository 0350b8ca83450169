#pragma once

// Exact characteristic-zero differential forms whose coefficients are
// rational functions with denominators products of linear forms.
//
// A Context fixes the variables: the first `form_vars` carry differentials
// (t's and z's), the rest are formal parameters (m's, kappa). Linear forms
// are interned as atoms, normalized to primitive integer coefficients with
// a positive first nonzero coefficient.

#include <algorithm>
#include <map>
#include <memory>
#include <numeric>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <gmpxx.h>

#include "drwkz/errors.hpp"
#include "drwkz/linalg.hpp"
#include "drwkz/rational/poly.hpp"

namespace drwkz::rational {

/// sum coeffs[i] x_i + constant with integer data.
struct LinearForm {
  std::vector<mpz_class> coeffs;
  mpz_class constant;

  bool operator<(const LinearForm& o) const {
    if (coeffs.size() != o.coeffs.size()) return coeffs.size() < o.coeffs.size();
    for (std::size_t i = 0; i < coeffs.size(); ++i)
      if (coeffs[i] != o.coeffs[i]) return coeffs[i] < o.coeffs[i];
    return constant < o.constant;
  }
  bool operator==(const LinearForm& o) const { return coeffs == o.coeffs && constant == o.constant; }
};

class Context {
 public:
  Context(std::vector<std::string> form_vars, std::vector<std::string> params) : form_vars_(form_vars.size()) {
    names_ = std::move(form_vars);
    names_.insert(names_.end(), params.begin(), params.end());
    if (names_.size() > kMaxVars) throw ResourceError("Context: more than 16 variables");
    for (std::size_t i = 0; i < names_.size(); ++i)
      for (std::size_t j = 0; j < i; ++j)
        if (names_[i] == names_[j]) throw PreconditionError("Context: duplicate variable " + names_[i]);
  }

  static std::shared_ptr<Context> make(std::vector<std::string> form_vars, std::vector<std::string> params = {}) {
    return std::make_shared<Context>(std::move(form_vars), std::move(params));
  }

  std::size_t size() const { return names_.size(); }
  std::size_t form_vars() const { return form_vars_; }
  const std::vector<std::string>& names() const { return names_; }

  std::size_t index(const std::string& name) const {
    for (std::size_t i = 0; i < names_.size(); ++i)
      if (names_[i] == name) return i;
    throw PreconditionError("Context: unknown variable " + name);
  }
  bool has(const std::string& name) const { return std::find(names_.begin(), names_.end(), name) != names_.end(); }

  /// Interns the linear form sum c_i x_i + c0; returns (atom id, s) with
  /// form = s * atom. A nonconstant form is required.
  std::pair<int, mpq_class> intern(const std::vector<mpq_class>& coeffs, const mpq_class& constant) const {
    if (coeffs.size() > names_.size()) throw PreconditionError("Context: linear form has too many coefficients");
    mpz_class l = constant.get_den();
    for (const auto& c : coeffs) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), c.get_den_mpz_t());
    LinearForm f;
    f.coeffs.resize(names_.size());
    mpz_class g = 0;
    for (std::size_t i = 0; i < coeffs.size(); ++i) {
      mpq_class v = coeffs[i] * l;
      f.coeffs[i] = v.get_num();
      mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), f.coeffs[i].get_mpz_t());
    }
    if (g == 0) throw DomainError("Context: constant linear form has no atom");
    f.constant = mpq_class(constant * l).get_num();
    mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), f.constant.get_mpz_t());
    auto lead = std::find_if(f.coeffs.begin(), f.coeffs.end(), [](const mpz_class& c) { return c != 0; });
    if (*lead < 0) g = -g;
    for (auto& c : f.coeffs) c /= g;
    f.constant /= g;
    mpq_class s(g, l);
    s.canonicalize();
    auto it = index_.find(f);
    if (it != index_.end()) return {it->second, s};
    int id = static_cast<int>(atoms_.size());
    atoms_.push_back(f);
    polys_.push_back(to_poly(f));
    index_.emplace(f, id);
    return {id, s};
  }

  /// Atom of the difference x_a - x_b (or x_a when b is empty).
  std::pair<int, mpq_class> difference(const std::string& a, const std::string& b = "") const {
    std::vector<mpq_class> c(names_.size());
    c[index(a)] += 1;
    if (!b.empty()) c[index(b)] -= 1;
    return intern(c, 0);
  }

  const LinearForm& atom(int id) const { return atoms_.at(static_cast<std::size_t>(id)); }
  const Poly& atom_poly(int id) const { return polys_.at(static_cast<std::size_t>(id)); }
  std::size_t atom_count() const { return atoms_.size(); }

  /// First variable with nonzero coefficient (the division pivot).
  std::size_t pivot(int id) const {
    const auto& f = atom(id);
    for (std::size_t i = 0; i < f.coeffs.size(); ++i)
      if (f.coeffs[i] != 0) return i;
    return 0;
  }

  std::string atom_string(int id) const { return atom_poly(id).to_string(names_); }

 private:
  static Poly to_poly(const LinearForm& f) {
    std::vector<mpq_class> c;
    for (const auto& x : f.coeffs) c.emplace_back(x);
    return Poly::linear(c, mpq_class(f.constant));
  }

  std::vector<std::string> names_;
  std::size_t form_vars_;
  // the atom table only grows; ids stay valid for the context's lifetime
  mutable std::vector<LinearForm> atoms_;
  mutable std::vector<Poly> polys_;
  mutable std::map<LinearForm, int> index_;
};

using ContextPtr = std::shared_ptr<const Context>;

/// Rational function num / prod atom^e. Fractions are not cancelled on
/// arithmetic; zero is exactly an empty numerator. reduced() cancels.
class RationalCoeff {
 public:
  using Denominator = std::map<int, int>;

  RationalCoeff() = default;
  RationalCoeff(Poly num) : num_(std::move(num)) {}  // NOLINT
  RationalCoeff(const mpq_class& c) : num_(c) {}     // NOLINT
  RationalCoeff(long c) : num_(c) {}                 // NOLINT

  static RationalCoeff variable(const Context& ctx, const std::string& name) { return Poly::variable(ctx.index(name)); }

  /// atom^e for any integer e.
  static RationalCoeff atom_power(const Context& ctx, int atom, int e) {
    RationalCoeff r(1);
    if (e > 0) r.num_ = ctx.atom_poly(atom).pow(static_cast<unsigned>(e));
    else if (e < 0) r.den_[atom] = -e;
    return r;
  }

  /// 1 / (sum c_i x_i + c0)
  static RationalCoeff inverse_linear(const Context& ctx, const std::vector<mpq_class>& coeffs, const mpq_class& c0) {
    auto [id, s] = ctx.intern(coeffs, c0);
    RationalCoeff r = atom_power(ctx, id, -1);
    r.num_ = r.num_.scaled(1 / s);
    return r;
  }

  const Poly& numerator() const { return num_; }
  const Denominator& denominator() const { return den_; }
  bool is_zero() const { return num_.is_zero(); }

  Poly denominator_poly(const Context& ctx) const {
    Poly d(1);
    for (const auto& [a, e] : den_) d *= ctx.atom_poly(a).pow(static_cast<unsigned>(e));
    return d;
  }

  static RationalCoeff add(const Context& ctx, const RationalCoeff& a, const RationalCoeff& b, const mpq_class& sb = 1) {
    if (b.is_zero() || sgn(sb) == 0) return a;
    if (a.is_zero()) return b.scaled(sb);
    if (a.den_ == b.den_) {
      RationalCoeff r;
      r.num_ = a.num_ + b.num_.scaled(sb);
      r.den_ = a.den_;
      r.drop_if_zero();
      return r;
    }
    Denominator l = a.den_;
    for (const auto& [k, e] : b.den_) l[k] = std::max(l[k], e);
    RationalCoeff r;
    r.num_ = a.num_ * lift(ctx, a.den_, l) + b.num_.scaled(sb) * lift(ctx, b.den_, l);
    r.den_ = std::move(l);
    r.drop_if_zero();
    return r;
  }

  static RationalCoeff mul(const Context& ctx, const RationalCoeff& a, const RationalCoeff& b) {
    if (a.is_zero() || b.is_zero()) return {};
    RationalCoeff r;
    r.num_ = a.num_ * b.num_;
    r.den_ = a.den_;
    for (const auto& [k, e] : b.den_) r.den_[k] += e;
    return r;
  }

  RationalCoeff scaled(const mpq_class& s) const {
    if (sgn(s) == 0) return {};
    RationalCoeff r = *this;
    r.num_ = num_.scaled(s);
    return r;
  }

  RationalCoeff derivative(const Context& ctx, std::size_t var) const {
    RationalCoeff r(num_.derivative(var));
    r.den_ = den_;
    r.drop_if_zero();
    // P * d(prod L^-e) = -P sum e a_var / L
    for (const auto& [k, e] : den_) {
      const mpz_class& a = ctx.atom(k).coeffs[var];
      if (a == 0) continue;
      RationalCoeff t(num_);
      t.den_ = den_;
      t.den_[k] += 1;
      r = add(ctx, r, t, mpq_class(-e * a));
    }
    return r;
  }

  /// Substitutes x_var := value everywhere (atoms included).
  RationalCoeff substitute(const Context& ctx, std::size_t var, const mpq_class& value) const {
    RationalCoeff r(num_.substitute(var, value));
    for (const auto& [k, e] : den_) {
      const auto& f = ctx.atom(k);
      std::vector<mpq_class> c;
      for (const auto& x : f.coeffs) c.emplace_back(x);
      mpq_class c0 = mpq_class(f.constant) + c[var] * value;
      c[var] = 0;
      bool constant = std::all_of(c.begin(), c.end(), [](const mpq_class& x) { return sgn(x) == 0; });
      if (constant) {
        if (sgn(c0) == 0) throw DomainError("substitute: denominator vanishes at the point");
        mpq_class inv = 1 / c0;
        for (int i = 0; i < e; ++i) r.num_ = r.num_.scaled(inv);
        continue;
      }
      auto [id, s] = ctx.intern(c, c0);
      r.den_[id] += e;
      mpq_class inv = 1 / s;
      for (int i = 0; i < e; ++i) r.num_ = r.num_.scaled(inv);
    }
    r.reduce(ctx);
    return r;
  }

  /// Renames variables x_i -> x_{perm[i]}.
  RationalCoeff permuted(const Context& ctx, const std::vector<std::size_t>& perm) const {
    RationalCoeff r(num_.permuted(perm));
    for (const auto& [k, e] : den_) {
      const auto& f = ctx.atom(k);
      std::vector<mpq_class> c(ctx.size());
      for (std::size_t i = 0; i < f.coeffs.size(); ++i) c[i < perm.size() ? perm[i] : i] = f.coeffs[i];
      auto [id, s] = ctx.intern(c, mpq_class(f.constant));
      r.den_[id] += e;
      mpq_class inv = 1 / s;
      for (int i = 0; i < e; ++i) r.num_ = r.num_.scaled(inv);
    }
    return r;
  }

  mpq_class evaluate(const Context& ctx, const std::vector<mpq_class>& point) const {
    mpq_class v = num_.evaluate(point);
    for (const auto& [k, e] : den_) {
      mpq_class d = ctx.atom_poly(k).evaluate(point);
      if (sgn(d) == 0) throw DomainError("evaluate: denominator vanishes at the point");
      for (int i = 0; i < e; ++i) v /= d;
    }
    return v;
  }

  /// Needs a context to bring both sides over a common denominator.
  static bool equal(const Context& ctx, const RationalCoeff& a, const RationalCoeff& b) {
    return add(ctx, a, b, -1).is_zero();
  }

  /// Numerator after bringing the fraction over `common`, which must be a
  /// multiple of the denominator.
  Poly numerator_over(const Context& ctx, const Denominator& common) const {
    for (const auto& [k, e] : den_) {
      auto it = common.find(k);
      if (it == common.end() || it->second < e) throw PreconditionError("numerator_over: not a common denominator");
    }
    return num_ * lift(ctx, den_, common);
  }

  RationalCoeff reduced(const Context& ctx) const {
    RationalCoeff r = *this;
    r.reduce(ctx);
    return r;
  }

  std::string to_string(const Context& ctx) const {
    std::string s = num_.to_string(ctx.names());
    if (den_.empty()) return s;
    std::ostringstream os;
    os << "(" << s << ")/(";
    bool first = true;
    for (const auto& [k, e] : den_) {
      if (!first) os << "*";
      first = false;
      os << "(" << ctx.atom_string(k) << ")";
      if (e > 1) os << "^" << e;
    }
    os << ")";
    return os.str();
  }

 private:
  static Poly lift(const Context& ctx, const Denominator& from, const Denominator& to) {
    Poly f(1);
    for (const auto& [k, e] : to) {
      auto it = from.find(k);
      int have = it == from.end() ? 0 : it->second;
      if (e > have) f *= ctx.atom_poly(k).pow(static_cast<unsigned>(e - have));
    }
    return f;
  }

  void drop_if_zero() {
    if (num_.is_zero()) den_.clear();
  }

  void reduce(const Context& ctx) {
    if (num_.is_zero()) {
      den_.clear();
      return;
    }
    for (auto it = den_.begin(); it != den_.end();) {
      std::size_t var = ctx.pivot(it->first);
      while (it->second > 0 && num_.degree_in(var) > 0) {
        auto q = num_.divide_by_linear(ctx.atom_poly(it->first), var);
        if (!q) break;
        num_ = std::move(*q);
        --it->second;
      }
      it = it->second == 0 ? den_.erase(it) : std::next(it);
    }
  }

  Poly num_;
  Denominator den_;
};

/// Coordinate form: differential mask over the form variables -> coefficient.
class CoordForm {
 public:
  using Mask = std::uint32_t;
  using Terms = std::map<Mask, RationalCoeff>;

  CoordForm(ContextPtr ctx, int degree) : ctx_(std::move(ctx)), degree_(degree) {}

  static CoordForm scalar(ContextPtr ctx, RationalCoeff c) {
    CoordForm f(std::move(ctx), 0);
    f.add(0, c);
    return f;
  }

  /// d(var)
  static CoordForm differential_of(ContextPtr ctx, std::size_t var) {
    if (var >= ctx->form_vars()) throw PreconditionError("CoordForm: parameters have no differential");
    CoordForm f(std::move(ctx), 1);
    f.add(Mask{1} << var, RationalCoeff(1));
    return f;
  }

  const Context& context() const { return *ctx_; }
  const ContextPtr& context_ptr() const { return ctx_; }
  int degree() const { return degree_; }
  const Terms& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  void add(Mask mask, const RationalCoeff& c, const mpq_class& s = 1) {
    if (c.is_zero() || sgn(s) == 0) return;
    auto it = terms_.find(mask);
    if (it == terms_.end()) {
      terms_.emplace(mask, c.scaled(s));
      return;
    }
    it->second = RationalCoeff::add(*ctx_, it->second, c, s);
    if (it->second.is_zero()) terms_.erase(it);
  }

  CoordForm& operator+=(const CoordForm& o) { return add_scaled(o, 1); }
  CoordForm& add_scaled(const CoordForm& o, const mpq_class& s) {
    check(o);
    if (o.degree_ != degree_ && !o.is_zero()) throw PreconditionError("CoordForm: adding forms of different degree");
    for (const auto& [m, c] : o.terms_) add(m, c, s);
    return *this;
  }
  friend CoordForm operator+(CoordForm a, const CoordForm& b) { return a += b; }
  friend CoordForm operator-(CoordForm a, const CoordForm& b) { return a.add_scaled(b, -1); }

  CoordForm times(const RationalCoeff& c) const {
    CoordForm r(ctx_, degree_);
    if (c.is_zero()) return r;
    for (const auto& [m, x] : terms_) r.add(m, RationalCoeff::mul(*ctx_, x, c));
    return r;
  }
  CoordForm scaled(const mpq_class& s) const {
    CoordForm r(ctx_, degree_);
    for (const auto& [m, x] : terms_) r.add(m, x, s);
    return r;
  }

  /// Sign of dx_A ∧ dx_B relative to dx_{A∪B}; 0 on overlap.
  static int merge_sign(Mask a, Mask b) {
    if (a & b) return 0;
    int inv = 0;
    for (Mask rest = b; rest; rest &= rest - 1) {
      int j = __builtin_ctz(rest);
      inv += __builtin_popcount(a & ~((Mask{2} << j) - 1));
    }
    return inv % 2 ? -1 : 1;
  }

  friend CoordForm wedge(const CoordForm& a, const CoordForm& b) {
    a.check(b);
    CoordForm r(a.ctx_, a.degree_ + b.degree_);
    for (const auto& [ma, ca] : a.terms_)
      for (const auto& [mb, cb] : b.terms_) {
        int s = merge_sign(ma, mb);
        if (s) r.add(ma | mb, RationalCoeff::mul(*a.ctx_, ca, cb), s);
      }
    return r;
  }

  friend CoordForm d(const CoordForm& x) {
    CoordForm r(x.ctx_, x.degree_ + 1);
    for (const auto& [m, c] : x.terms_)
      for (std::size_t v = 0; v < x.ctx_->form_vars(); ++v) {
        Mask bit = Mask{1} << v;
        if (m & bit) continue;
        auto dc = c.derivative(*x.ctx_, v);
        if (!dc.is_zero()) r.add(m | bit, dc, merge_sign(bit, m));
      }
    return r;
  }

  CoordForm substitute(std::size_t var, const mpq_class& value) const {
    if (var < ctx_->form_vars()) throw PreconditionError("CoordForm: only parameters can be specialized");
    CoordForm r(ctx_, degree_);
    for (const auto& [m, c] : terms_) r.add(m, c.substitute(*ctx_, var, value));
    return r;
  }

  /// Renames variables by perm (form variables must map to form variables).
  CoordForm permuted(const std::vector<std::size_t>& perm) const {
    CoordForm r(ctx_, degree_);
    for (const auto& [m, c] : terms_) {
      // dx_{perm(i1)} ∧ ... in the permuted order, then sorted
      std::vector<std::size_t> idx;
      for (std::size_t v = 0; v < ctx_->form_vars(); ++v)
        if (m & (Mask{1} << v)) idx.push_back(v < perm.size() ? perm[v] : v);
      int s = 1;
      for (std::size_t i = 0; i < idx.size(); ++i)
        for (std::size_t j = i + 1; j < idx.size(); ++j)
          if (idx[i] > idx[j]) s = -s;
      Mask nm = 0;
      for (auto v : idx) nm |= Mask{1} << v;
      r.add(nm, c.permuted(*ctx_, perm), s);
    }
    return r;
  }

  friend bool operator==(const CoordForm& a, const CoordForm& b) {
    return a.ctx_ == b.ctx_ && (a - b).is_zero();
  }

  std::string to_string() const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [m, c] : terms_) {
      if (!first) os << " + ";
      first = false;
      os << "[" << c.to_string(*ctx_) << "]";
      for (std::size_t v = 0; v < ctx_->form_vars(); ++v)
        if (m & (Mask{1} << v)) os << " d" << ctx_->names()[v];
    }
    return os.str();
  }

 private:
  void check(const CoordForm& o) const {
    if (ctx_ != o.ctx_) throw PreconditionError("CoordForm: forms over different contexts");
  }

  ContextPtr ctx_;
  int degree_;
  Terms terms_;
};

/// Forms c * dlog(L_1) ∧ ... ∧ dlog(L_m) with atoms of linear forms in the
/// form variables. Blocks are stored sorted by atom id.
class LogForm {
 public:
  using Block = std::vector<int>;
  using Terms = std::map<Block, RationalCoeff>;

  LogForm(ContextPtr ctx, int degree) : ctx_(std::move(ctx)), degree_(degree) {}

  static LogForm scalar(ContextPtr ctx, RationalCoeff c) {
    LogForm f(std::move(ctx), 0);
    f.add({}, c);
    return f;
  }

  /// dlog of the linear form; parameters may not appear.
  static LogForm dlog(ContextPtr ctx, const std::vector<mpq_class>& coeffs, const mpq_class& c0 = 0) {
    for (std::size_t i = ctx->form_vars(); i < coeffs.size(); ++i)
      if (sgn(coeffs[i]) != 0) throw DomainError("dlog: linear form involves a parameter");
    auto [id, s] = ctx->intern(coeffs, c0);
    LogForm f(std::move(ctx), 1);
    f.add({id}, RationalCoeff(1));
    return f;
  }

  /// dlog(a - b) for variable names, or dlog(a) when b is empty.
  static LogForm dlog(ContextPtr ctx, const std::string& a, const std::string& b = "") {
    auto [id, s] = ctx->difference(a, b);
    if (ctx->pivot(id) >= ctx->form_vars()) throw DomainError("dlog: linear form involves a parameter");
    LogForm f(std::move(ctx), 1);
    f.add({id}, RationalCoeff(1));
    return f;
  }

  const Context& context() const { return *ctx_; }
  const ContextPtr& context_ptr() const { return ctx_; }
  int degree() const { return degree_; }
  const Terms& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  /// Adds s * c * dlog(block in the given order).
  void add(Block block, const RationalCoeff& c, const mpq_class& s = 1) {
    if (static_cast<int>(block.size()) != degree_) throw PreconditionError("LogForm: block size differs from degree");
    int sign = 1;
    for (std::size_t i = 0; i < block.size(); ++i)
      for (std::size_t j = i + 1; j < block.size(); ++j) {
        if (block[i] == block[j]) return;
        if (block[i] > block[j]) sign = -sign;
      }
    std::sort(block.begin(), block.end());
    if (c.is_zero() || sgn(s) == 0) return;
    auto it = terms_.find(block);
    if (it == terms_.end()) {
      terms_.emplace(std::move(block), c.scaled(s * sign));
      return;
    }
    it->second = RationalCoeff::add(*ctx_, it->second, c, s * sign);
    if (it->second.is_zero()) terms_.erase(it);
  }

  LogForm& add_scaled(const LogForm& o, const mpq_class& s) {
    check(o);
    if (o.degree_ != degree_ && !o.is_zero()) throw PreconditionError("LogForm: adding forms of different degree");
    for (const auto& [b, c] : o.terms_) add(b, c, s);
    return *this;
  }
  LogForm& operator+=(const LogForm& o) { return add_scaled(o, 1); }
  friend LogForm operator+(LogForm a, const LogForm& b) { return a += b; }
  friend LogForm operator-(LogForm a, const LogForm& b) { return a.add_scaled(b, -1); }

  LogForm times(const RationalCoeff& c) const {
    LogForm r(ctx_, degree_);
    for (const auto& [b, x] : terms_) r.add(b, RationalCoeff::mul(*ctx_, x, c));
    return r;
  }
  LogForm scaled(const mpq_class& s) const {
    LogForm r(ctx_, degree_);
    for (const auto& [b, x] : terms_) r.add(b, x, s);
    return r;
  }

  friend LogForm wedge(const LogForm& a, const LogForm& b) {
    a.check(b);
    LogForm r(a.ctx_, a.degree_ + b.degree_);
    for (const auto& [ba, ca] : a.terms_)
      for (const auto& [bb, cb] : b.terms_) {
        Block joined = ba;
        joined.insert(joined.end(), bb.begin(), bb.end());
        r.add(std::move(joined), RationalCoeff::mul(*a.ctx_, ca, cb));
      }
    return r;
  }

  /// Renames variables by perm, re-interning the atoms.
  LogForm permuted(const std::vector<std::size_t>& perm) const {
    LogForm r(ctx_, degree_);
    for (const auto& [b, c] : terms_) {
      Block nb;
      for (int id : b) {
        const auto& f = ctx_->atom(id);
        std::vector<mpq_class> coeffs(ctx_->size());
        for (std::size_t i = 0; i < f.coeffs.size(); ++i) coeffs[i < perm.size() ? perm[i] : i] = f.coeffs[i];
        nb.push_back(ctx_->intern(coeffs, mpq_class(f.constant)).first);
      }
      r.add(std::move(nb), c.permuted(*ctx_, perm));
    }
    return r;
  }

  std::string to_string() const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [b, c] : terms_) {
      if (!first) os << " + ";
      first = false;
      os << "[" << c.to_string(*ctx_) << "]";
      for (int id : b) os << " dlog(" << ctx_->atom_string(id) << ")";
    }
    return os.str();
  }

 private:
  void check(const LogForm& o) const {
    if (ctx_ != o.ctx_) throw PreconditionError("LogForm: forms over different contexts");
  }

  ContextPtr ctx_;
  int degree_;
  Terms terms_;
};

/// dlog(L) = dL / L, expanded over the form variables.
inline CoordForm expand_atom(const ContextPtr& ctx, int id) {
  CoordForm r(ctx, 1);
  const auto& f = ctx->atom(id);
  auto inv = RationalCoeff::atom_power(*ctx, id, -1);
  for (std::size_t v = 0; v < ctx->form_vars(); ++v)
    if (f.coeffs[v] != 0) r.add(CoordForm::Mask{1} << v, inv, mpq_class(f.coeffs[v]));
  return r;
}

inline CoordForm expand_coordinates(const LogForm& x) {
  const auto& ctx = x.context_ptr();
  CoordForm r(ctx, x.degree());
  for (const auto& [b, c] : x.terms()) {
    CoordForm term = CoordForm::scalar(ctx, c);
    for (int id : b) term = wedge(term, expand_atom(ctx, id));
    r += term;
  }
  return r;
}

/// Equality of log forms through their coordinate expansions.
inline bool equivalent(const LogForm& a, const LogForm& b) { return expand_coordinates(a - b).is_zero(); }

/// Dimension over Q of the span of the forms, as functions. All forms are
/// brought over one denominator and compared coefficientwise.
inline std::size_t coordinate_rank(const std::vector<CoordForm>& forms) {
  if (forms.empty()) return 0;
  const Context& ctx = forms.front().context();
  RationalCoeff::Denominator common;
  for (const auto& f : forms)
    for (const auto& [m, c] : f.terms())
      for (const auto& [k, e] : c.denominator()) common[k] = std::max(common[k], e);
  std::map<std::pair<CoordForm::Mask, Monomial>, std::size_t> columns;
  std::vector<linalg::SparseVec> rows;
  for (const auto& f : forms) {
    linalg::SparseVec v;
    for (const auto& [m, c] : f.terms()) {
      const Poly num = c.numerator_over(ctx, common);
      for (const auto& [mono, q] : num.terms()) {
        auto [it, fresh] = columns.try_emplace({m, mono}, columns.size());
        v[it->second] += q;
      }
    }
    rows.push_back(std::move(v));
  }
  return linalg::rank(rows);
}

/// Variable permutation realizing sigma on t_1..t_N (names "t1".."tN").
inline std::vector<std::size_t> t_permutation(const Context& ctx, const std::vector<int>& sigma) {
  std::vector<std::size_t> perm(ctx.size());
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  for (std::size_t i = 0; i < sigma.size(); ++i)
    perm[ctx.index("t" + std::to_string(i + 1))] = ctx.index("t" + std::to_string(sigma[i] + 1));
  return perm;
}

inline int permutation_sign(const std::vector<int>& sigma) {
  int s = 1;
  for (std::size_t i = 0; i < sigma.size(); ++i)
    for (std::size_t j = i + 1; j < sigma.size(); ++j)
      if (sigma[i] > sigma[j]) s = -s;
  return s;
}

/// Alternating sum over all permutations of t_1..t_N.
template <class Form>
Form alt_symmetrize(const Form& x, int N) {
  Form r(x.context_ptr(), x.degree());
  std::vector<int> sigma(static_cast<std::size_t>(N));
  std::iota(sigma.begin(), sigma.end(), 0);
  do {
    r.add_scaled(x.permuted(t_permutation(x.context(), sigma)), permutation_sign(sigma));
  } while (std::next_permutation(sigma.begin(), sigma.end()));
  return r;
}

}  // namespace drwkz::rational
