#pragma once

// Hypergeometric forms for sl2 Verma tensor products: the Chevalley complex
// M_N -> f (x) M_{N-1}, Coulomb and KZ connection forms, the cocycle
// (I0, I1) and its checks.
//
// Basis vectors f^{b_1}v (x) ... (x) f^{b_n}v are compositions b of the
// weight level. Forms live over the variables t1..tN, z1..zn; the highest
// weights m1..mn and k (kappa) are context parameters when symbolic.

#include <algorithm>
#include <bit>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "drwkz/errors.hpp"
#include "drwkz/padic.hpp"
#include "drwkz/rational/forms.hpp"

namespace drwkz::kz {

using rational::ContextPtr;
using rational::CoordForm;
using rational::LogForm;
using rational::Poly;
using rational::RationalCoeff;

using State = std::vector<int>;
using Vec = std::map<State, Poly>;
using PolyMatrix = std::vector<std::vector<Poly>>;
using FormVec = std::map<State, LogForm>;

enum class Gen { e, f, h };

/// Standard: 1/2 h(x)h + e(x)f + f(x)e. Diagonal: 1/2 h(x)h + e(x)e + f(x)f.
enum class CasimirVariant { standard, diagonal };

inline std::string variant_name(CasimirVariant v) { return v == CasimirVariant::standard ? "ef+fe" : "ee+ff"; }

/// All b in N^parts with |b| = total, lexicographic.
inline std::vector<State> compositions(int total, int parts) {
  std::vector<State> out;
  if (total < 0 || parts < 1) return out;
  State cur(static_cast<std::size_t>(parts));
  auto rec = [&](auto&& self, std::size_t k, int left) -> void {
    if (k + 1 == cur.size()) {
      cur[k] = left;
      out.push_back(cur);
      return;
    }
    for (int i = 0; i <= left; ++i) {
      cur[k] = i;
      self(self, k + 1, left - i);
    }
  };
  rec(rec, 0, total);
  return out;
}

inline std::string state_string(const State& s) {
  std::string r = "(";
  for (std::size_t i = 0; i < s.size(); ++i) r += (i ? "," : "") + std::to_string(s[i]);
  return r + ")";
}

/// Weights and level. m and kappa are either exact rationals or the
/// parameters m1..mn, k of the context.
struct Params {
  ContextPtr ctx;
  int n = 0;
  int N = 0;
  std::vector<Poly> m;
  RationalCoeff kappa;
  RationalCoeff inv_kappa;
  bool symbolic_m = false;
  bool symbolic_kappa = false;
};

/// nullopt selects the symbolic parameter.
inline Params make_params(int n, int N, std::optional<std::vector<mpq_class>> m, std::optional<mpq_class> kappa) {
  if (n < 1 || N < 0) throw PreconditionError("kz: need n >= 1 and N >= 0");
  if (m && static_cast<int>(m->size()) != n) throw PreconditionError("kz: one weight per factor expected");
  if (kappa && sgn(*kappa) == 0) throw DomainError("kz: kappa must be nonzero");
  std::vector<std::string> vars, params;
  for (int i = 1; i <= N; ++i) vars.push_back("t" + std::to_string(i));
  for (int b = 1; b <= n; ++b) vars.push_back("z" + std::to_string(b));
  if (!m)
    for (int b = 1; b <= n; ++b) params.push_back("m" + std::to_string(b));
  if (!kappa) params.push_back("k");
  Params P;
  P.ctx = rational::Context::make(vars, params);
  P.n = n;
  P.N = N;
  P.symbolic_m = !m;
  P.symbolic_kappa = !kappa;
  for (int b = 0; b < n; ++b)
    P.m.push_back(m ? Poly((*m)[static_cast<std::size_t>(b)]) : Poly::variable(P.ctx->index("m" + std::to_string(b + 1))));
  if (kappa) {
    P.kappa = RationalCoeff(*kappa);
    P.inv_kappa = RationalCoeff(mpq_class(1 / *kappa));
  } else {
    P.kappa = RationalCoeff::variable(*P.ctx, "k");
    std::vector<mpq_class> c(P.ctx->size());
    c[P.ctx->index("k")] = 1;
    P.inv_kappa = RationalCoeff::inverse_linear(*P.ctx, c, 0);
  }
  return P;
}

inline Params symbolic_params(int n, int N) { return make_params(n, N, std::nullopt, std::nullopt); }

// ---------------------------------------------------------------- sl2

/// Action of a generator on the k-th tensor factor.
inline Vec act_factor(Gen g, const Vec& v, std::size_t k, const std::vector<Poly>& m) {
  Vec r;
  auto acc = [&](State s, const Poly& c) {
    if (c.is_zero()) return;
    auto& slot = r[std::move(s)];
    slot = slot + c;
  };
  for (const auto& [s, c] : v) {
    const int j = s[k];
    State t = s;
    switch (g) {
      case Gen::f:
        ++t[k];
        acc(t, c);
        break;
      case Gen::h:
        acc(t, c * (m[k] - Poly(mpq_class(2 * j))));
        break;
      case Gen::e:
        if (j == 0) break;
        --t[k];
        acc(t, c * (m[k] - Poly(mpq_class(j - 1))).scaled(j));
        break;
    }
  }
  std::erase_if(r, [](const auto& kv) { return kv.second.is_zero(); });
  return r;
}

/// Diagonal action x (x) 1 ... + ... 1 (x) x.
inline Vec act_diagonal(Gen g, const Vec& v, const std::vector<Poly>& m) {
  Vec r;
  for (std::size_t k = 0; k < m.size(); ++k)
    for (const auto& [s, c] : act_factor(g, v, k, m)) r[s] = r[s] + c;
  std::erase_if(r, [](const auto& kv) { return kv.second.is_zero(); });
  return r;
}

inline Vec add_vec(Vec a, const Vec& b, const mpq_class& s = 1) {
  for (const auto& [st, c] : b) a[st] = a[st] + c.scaled(s);
  std::erase_if(a, [](const auto& kv) { return kv.second.is_zero(); });
  return a;
}

/// Matrices of e, f, h on span{f^j v : 0 <= j <= N}; f^N v is sent to 0.
struct Sl2Matrices {
  PolyMatrix e, f, h;
};

inline Sl2Matrices sl2_actions(const Poly& m, int N) {
  if (N < 0) throw PreconditionError("sl2_actions: N must be nonnegative");
  const std::size_t d = static_cast<std::size_t>(N) + 1;
  Sl2Matrices r{PolyMatrix(d, std::vector<Poly>(d)), PolyMatrix(d, std::vector<Poly>(d)), PolyMatrix(d, std::vector<Poly>(d))};
  const std::vector<Poly> ms{m};
  for (std::size_t j = 0; j < d; ++j) {
    Vec v{{State{static_cast<int>(j)}, Poly(1)}};
    for (auto [g, mat] : {std::pair{Gen::e, &r.e}, std::pair{Gen::f, &r.f}, std::pair{Gen::h, &r.h}})
      for (const auto& [s, c] : act_factor(g, v, 0, ms))
        if (static_cast<std::size_t>(s[0]) < d) (*mat)[static_cast<std::size_t>(s[0])][j] = c;
  }
  return r;
}

/// Omega through factors b and c.
inline Vec casimir_apply(const Vec& v, std::size_t b, std::size_t c, const std::vector<Poly>& m,
                         CasimirVariant variant = CasimirVariant::standard) {
  Vec r = act_factor(Gen::h, act_factor(Gen::h, v, c, m), b, m);
  for (auto& [s, x] : r) x = x.scaled(mpq_class(1, 2));
  if (variant == CasimirVariant::standard) {
    r = add_vec(r, act_factor(Gen::e, act_factor(Gen::f, v, c, m), b, m));
    r = add_vec(r, act_factor(Gen::f, act_factor(Gen::e, v, c, m), b, m));
  } else {
    r = add_vec(r, act_factor(Gen::e, act_factor(Gen::e, v, c, m), b, m));
    r = add_vec(r, act_factor(Gen::f, act_factor(Gen::f, v, c, m), b, m));
  }
  return r;
}

/// Matrix of a linear map between two bases: column j is the image of source[j].
template <class Map>
PolyMatrix matrix_of(const std::vector<State>& source, const std::vector<State>& target, Map&& map) {
  PolyMatrix M(target.size(), std::vector<Poly>(source.size()));
  for (std::size_t j = 0; j < source.size(); ++j) {
    Vec img = map(Vec{{source[j], Poly(1)}});
    for (std::size_t i = 0; i < target.size(); ++i) {
      auto it = img.find(target[i]);
      if (it != img.end()) {
        M[i][j] = it->second;
        img.erase(it);
      }
    }
    if (!img.empty()) throw PreconditionError("matrix_of: image leaves the target basis");
  }
  return M;
}

inline PolyMatrix casimir_matrix(std::size_t b, std::size_t c, const std::vector<State>& basis, const std::vector<Poly>& m,
                                 CasimirVariant variant = CasimirVariant::standard) {
  if (!(b < c && c < m.size())) throw PreconditionError("casimir_matrix: need b < c <= n");
  return matrix_of(basis, basis, [&](const Vec& v) { return casimir_apply(v, b, c, m, variant); });
}

inline PolyMatrix multiply(const PolyMatrix& a, const PolyMatrix& b) {
  const std::size_t inner = b.size(), cols = b.empty() ? 0 : b[0].size();
  PolyMatrix r(a.size(), std::vector<Poly>(cols));
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t k = 0; k < inner; ++k) {
      if (a[i][k].is_zero()) continue;
      for (std::size_t j = 0; j < cols; ++j)
        if (!b[k][j].is_zero()) r[i][j] = r[i][j] + a[i][k] * b[k][j];
    }
  return r;
}

inline bool is_zero(const PolyMatrix& a) {
  for (const auto& row : a)
    for (const auto& x : row)
      if (!x.is_zero()) return false;
  return true;
}

inline PolyMatrix subtract(PolyMatrix a, const PolyMatrix& b) {
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < a[i].size(); ++j) a[i][j] = a[i][j] - b[i][j];
  return a;
}

/// [Omega_bc, Delta(x)] = 0 on the level-N block, for x = e, f, h.
inline bool casimir_is_invariant(const std::vector<Poly>& m, int N, CasimirVariant variant) {
  const std::size_t n = m.size();
  for (std::size_t b = 0; b < n; ++b)
    for (std::size_t c = b + 1; c < n; ++c)
      for (Gen g : {Gen::e, Gen::f, Gen::h}) {
        for (const auto& s : compositions(N, static_cast<int>(n))) {
          Vec v{{s, Poly(1)}};
          Vec lhs = casimir_apply(act_diagonal(g, v, m), b, c, m, variant);
          Vec rhs = act_diagonal(g, casimir_apply(v, b, c, m, variant), m);
          if (!add_vec(lhs, rhs, -1).empty()) return false;
        }
      }
  return true;
}

// ---------------------------------------------------------------- forms

inline std::string t_name(int i) { return "t" + std::to_string(i + 1); }
inline std::string z_name(int b) { return "z" + std::to_string(b + 1); }

/// sum_{b<c} m_b m_c / 2 dlog(z_b - z_c) + sum_{i<j} 2 dlog(t_i - t_j) - sum m_b dlog(t_i - z_b)
inline LogForm omega_coulomb(const Params& P) {
  LogForm w(P.ctx, 1);
  for (int b = 0; b < P.n; ++b)
    for (int c = b + 1; c < P.n; ++c)
      w += LogForm::dlog(P.ctx, z_name(b), z_name(c)).times((P.m[b] * P.m[c]).scaled(mpq_class(1, 2)));
  for (int i = 0; i < P.N; ++i)
    for (int j = i + 1; j < P.N; ++j) w += LogForm::dlog(P.ctx, t_name(i), t_name(j)).scaled(2);
  for (int i = 0; i < P.N; ++i)
    for (int b = 0; b < P.n; ++b) w += LogForm::dlog(P.ctx, t_name(i), z_name(b)).times(P.m[b].scaled(-1));
  return w;
}

/// The KZ form as its pieces: (b, c, dlog(z_b - z_c)); the matrix part is Omega_bc.
struct KZTerm {
  std::size_t b, c;
  LogForm dlog;
};

inline std::vector<KZTerm> omega_kz(const Params& P) {
  std::vector<KZTerm> r;
  for (int b = 0; b < P.n; ++b)
    for (int c = b + 1; c < P.n; ++c)
      r.push_back({static_cast<std::size_t>(b), static_cast<std::size_t>(c), LogForm::dlog(P.ctx, z_name(b), z_name(c))});
  return r;
}

inline void accumulate(FormVec& v, const State& s, const LogForm& x) {
  if (x.is_zero()) return;
  auto it = v.find(s);
  if (it == v.end()) v.emplace(s, x);
  else it->second += x;
}

/// (omega_m - omega_KZ) ∧ V, multiplying from the left.
inline FormVec connection_action(const Params& P, const FormVec& V, CasimirVariant variant = CasimirVariant::standard) {
  const LogForm omega = omega_coulomb(P);
  const auto kz = omega_kz(P);
  FormVec r;
  for (const auto& [s, x] : V) {
    accumulate(r, s, wedge(omega, x));
    for (const auto& t : kz) {
      const LogForm dx = wedge(t.dlog, x);
      for (const auto& [s2, c2] : casimir_apply(Vec{{s, Poly(1)}}, t.b, t.c, P.m, variant))
        accumulate(r, s2, dx.times(c2.scaled(-1)));
    }
  }
  return r;
}

/// Wedge of dlog(t_idx - z_b) over the blocks of b, consuming t's from `first`.
inline LogForm block_wedge(const Params& P, const State& b, int first) {
  LogForm f = LogForm::scalar(P.ctx, RationalCoeff(1));
  int idx = first;
  for (std::size_t k = 0; k < b.size(); ++k)
    for (int r = 0; r < b[k]; ++r) f = wedge(f, LogForm::dlog(P.ctx, t_name(idx++), z_name(static_cast<int>(k))));
  return f;
}

inline int level(const State& s) {
  int t = 0;
  for (int x : s) t += x;
  return t;
}

/// dlog(t1 - z_.) ∧ ... over the blocks of b.
inline LogForm u_b(const Params& P, const State& b) {
  if (level(b) != P.N || static_cast<int>(b.size()) != P.n) throw PreconditionError("u_b: need |b| = N");
  return block_wedge(P, b, 0);
}

/// kappa times the block wedge of c over t2..tN.
inline LogForm u_c(const Params& P, const State& c) {
  if (level(c) != P.N - 1 || static_cast<int>(c.size()) != P.n) throw PreconditionError("u_c: need |c| = N - 1");
  return block_wedge(P, c, 1).times(P.kappa);
}

inline mpz_class factorial_product(const State& b) {
  mpz_class r = 1;
  for (int x : b) {
    mpz_class f;
    mpz_fac_ui(f.get_mpz_t(), static_cast<unsigned long>(x));
    r *= f;
  }
  return r;
}

inline LogForm normalized_alt(const LogForm& u, const State& b, int N) {
  return rational::alt_symmetrize(u, N).scaled(mpq_class(1, factorial_product(b)));
}

struct Cocycle {
  FormVec I0;  // on f^b v, |b| = N
  FormVec I1;  // on f (x) f^c v, |c| = N - 1
};

/// In p-adic mode factorials up to N must be invertible.
inline Cocycle build_cocycle(const Params& P, std::optional<u64> p = std::nullopt) {
  if (P.N < 1) throw PreconditionError("build_cocycle: need N >= 1");
  if (p && *p <= static_cast<u64>(P.N)) throw DomainError("build_cocycle: p-adic mode needs p > N");
  Cocycle I;
  for (const auto& b : compositions(P.N, P.n)) I.I0.emplace(b, normalized_alt(u_b(P, b), b, P.N));
  for (const auto& c : compositions(P.N - 1, P.n)) I.I1.emplace(c, normalized_alt(u_c(P, c), c, P.N));
  return I;
}

/// Every rational constant occurring in the cocycle lies in Z_(p).
inline bool p_integral(const Cocycle& I, u64 p) {
  for (const auto* part : {&I.I0, &I.I1})
    for (const auto& [s, x] : *part)
      for (const auto& [blk, c] : x.terms()) {
        if (!c.denominator().empty()) continue;  // only kappa can appear there
        for (const auto& [mono, q] : c.numerator().terms()) {
          auto v = val_p(q, p);
          if (v && *v < 0) return false;
        }
      }
  return true;
}

/// d_Ch I0: the component on f (x) f^c v collects e-coefficients from b = c + e_k.
inline FormVec chevalley_differential(const Params& P, const FormVec& I0) {
  FormVec r;
  for (const auto& [b, x] : I0)
    for (const auto& [c, coeff] : act_diagonal(Gen::e, Vec{{b, Poly(1)}}, P.m)) accumulate(r, c, x.times(coeff));
  return r;
}

// ---------------------------------------------------------------- residuals

using CoordVec = std::map<State, CoordForm>;

inline void accumulate(CoordVec& v, const State& s, const CoordForm& x) {
  if (x.is_zero()) return;
  auto it = v.find(s);
  if (it == v.end()) v.emplace(s, x);
  else it->second += x;
}

/// Coordinate expansion of the degree-k form x, or the zero form of degree k.
inline CoordForm expand(const Params& P, const FormVec& V, const State& s, int degree) {
  auto it = V.find(s);
  return it == V.end() ? CoordForm(P.ctx, degree) : rational::expand_coordinates(it->second);
}

/// (d + (1/kappa)(omega_m - omega_KZ)) V in coordinates.
inline CoordVec nabla(const Params& P, const FormVec& V, CasimirVariant variant = CasimirVariant::standard) {
  CoordVec r;
  for (const auto& [s, x] : V) accumulate(r, s, d(rational::expand_coordinates(x)));
  for (const auto& [s, x] : connection_action(P, V, variant))
    accumulate(r, s, rational::expand_coordinates(x).times(P.inv_kappa));
  return r;
}

inline std::string differential_string(const rational::Context& ctx, CoordForm::Mask mask) {
  std::string r;
  for (std::size_t v = 0; v < ctx.form_vars(); ++v)
    if (mask >> v & 1u) r += (r.empty() ? "d" : " d") + ctx.names()[v];
  return r.empty() ? "1" : r;
}

/// Zero test with a certificate: the first nonzero basis vector, its
/// differential monomial and the coefficient.
struct Residual {
  bool zero = true;
  std::string state;
  std::string term;
};

inline Residual check_zero(const rational::Context& ctx, const CoordVec& v) {
  for (const auto& [s, x] : v) {
    if (x.is_zero()) continue;
    const auto& [mask, c] = *x.terms().begin();
    return {false, state_string(s), "[" + c.reduced(ctx).to_string(ctx) + "] " + differential_string(ctx, mask)};
  }
  return {};
}

struct CocycleReport {
  Residual closed;     // nabla I0
  Residual chevalley;  // d_Ch I0 + nabla I1
  bool ok() const { return closed.zero && chevalley.zero; }
};

inline CocycleReport verify_cocycle(const Params& P, const Cocycle& I, CasimirVariant variant = CasimirVariant::standard) {
  CocycleReport r;
  r.closed = check_zero(*P.ctx, nabla(P, I.I0, variant));
  CoordVec second = nabla(P, I.I1, variant);
  for (const auto& [c, x] : chevalley_differential(P, I.I0)) accumulate(second, c, rational::expand_coordinates(x));
  r.chevalley = check_zero(*P.ctx, second);
  return r;
}

/// Curvature (1/kappa) dA + (1/kappa^2) A ∧ A of A = omega_m - omega_KZ on
/// the level-N block.
inline Residual curvature(const Params& P, CasimirVariant variant = CasimirVariant::standard) {
  const RationalCoeff inv2 = RationalCoeff::mul(*P.ctx, P.inv_kappa, P.inv_kappa);
  CoordVec total;
  for (const auto& s : compositions(P.N, P.n)) {
    FormVec V;
    V.emplace(s, LogForm::scalar(P.ctx, RationalCoeff(1)));
    FormVec A = connection_action(P, V, variant);
    for (const auto& [s2, x] : A) {
      accumulate(total, s2, d(rational::expand_coordinates(x)).times(P.inv_kappa));
    }
    for (const auto& [s2, x] : connection_action(P, A, variant))
      accumulate(total, s2, rational::expand_coordinates(x).times(inv2));
    // the residual is an operator; keep the source column in the certificate
    auto res = check_zero(*P.ctx, total);
    if (!res.zero) {
      res.state = state_string(s) + " -> " + res.state;
      return res;
    }
    total.clear();
  }
  return {};
}

// ---------------------------------------------------------------- bosonization

/// Smallest number of dz's over the terms of x; nullopt for x = 0.
inline std::optional<int> min_z_degree(const Params& P, const CoordForm& x) {
  std::optional<int> best;
  const CoordForm::Mask zmask = ((CoordForm::Mask{1} << P.n) - 1) << P.N;
  for (const auto& [mask, c] : x.terms()) {
    int k = std::popcount(mask & zmask);
    if (!best || k < *best) best = k;
  }
  return best;
}

struct BosonizationReport {
  Residual degree0;  // nabla_Coul eta(d_b) = eta(nabla_KZ^dual d_b)
  Residual degree1;  // with the dual Chevalley differential
  bool filtration = true;
  std::string filtration_detail;
  bool ok() const { return degree0.zero && degree1.zero && filtration; }
};

/// Pairs the dual Chevalley basis with the cocycle and checks that the
/// result intertwines the dual KZ connection and d_Ch^dual with the Coulomb
/// connection. Uses matrices (transposed), not the vector actions.
inline BosonizationReport bosonization_check(const Params& P, const Cocycle& I, CasimirVariant variant = CasimirVariant::standard) {
  BosonizationReport rep;
  // the dual pairing needs Omega to preserve the weight blocks
  for (int lvl : {P.N, P.N - 1})
    for (const auto& s : compositions(lvl, P.n))
      for (std::size_t b = 0; b < static_cast<std::size_t>(P.n); ++b)
        for (std::size_t c = b + 1; c < static_cast<std::size_t>(P.n); ++c)
          for (const auto& [s2, x] : casimir_apply(Vec{{s, Poly(1)}}, b, c, P.m, variant))
            if (level(s2) != lvl) {
              Residual& r = lvl == P.N ? rep.degree0 : rep.degree1;
              r = {false, state_string(s), "Casimir leaves the weight block: " + state_string(s2)};
              return rep;
            }
  const LogForm omega = omega_coulomb(P);
  const auto kz = omega_kz(P);
  const auto top = compositions(P.N, P.n), low = compositions(P.N - 1, P.n);
  auto eta = [](const FormVec& part, const State& s) -> const LogForm& { return part.at(s); };

  // nabla_Coul on a scalar-valued form, in coordinates
  auto coulomb = [&](const LogForm& x) {
    return d(rational::expand_coordinates(x)) + rational::expand_coordinates(wedge(omega, x)).times(P.inv_kappa);
  };
  // (1/kappa) sum_bc Omega_bc^T dlog_bc ∧ eta over a basis
  auto kz_dual = [&](const FormVec& part, const std::vector<State>& basis, std::size_t row, CoordVec& acc,
                     const State& key) {
    for (const auto& t : kz) {
      PolyMatrix O = casimir_matrix(t.b, t.c, basis, P.m, variant);
      for (std::size_t j = 0; j < basis.size(); ++j) {
        if (O[row][j].is_zero()) continue;
        CoordForm term = rational::expand_coordinates(wedge(t.dlog, eta(part, basis[j]).times(O[row][j])));
        auto zd = min_z_degree(P, term);
        if (zd && *zd < 1) {
          rep.filtration = false;
          rep.filtration_detail = "KZ term on " + state_string(key) + " has a dz-free component";
        }
        accumulate(acc, key, term.times(P.inv_kappa).scaled(-1));
      }
    }
  };

  CoordVec r0;
  for (std::size_t i = 0; i < top.size(); ++i) {
    const LogForm& w = eta(I.I0, top[i]);
    CoordForm c = coulomb(w);
    accumulate(r0, top[i], c);
    auto zw = min_z_degree(P, rational::expand_coordinates(w));
    auto zc = min_z_degree(P, rational::expand_coordinates(wedge(omega, w)));
    if (zw && zc && *zc < *zw) {
      rep.filtration = false;
      rep.filtration_detail = "Coulomb term lowers the z-degree on " + state_string(top[i]);
    }
    kz_dual(I.I0, top, i, r0, top[i]);
  }
  rep.degree0 = check_zero(*P.ctx, r0);

  // E[c][b]: coefficient of f^c v in Delta(e) f^b v
  PolyMatrix E = matrix_of(top, low, [&](const Vec& v) { return act_diagonal(Gen::e, v, P.m); });
  CoordVec r1;
  for (std::size_t i = 0; i < low.size(); ++i) {
    accumulate(r1, low[i], coulomb(eta(I.I1, low[i])));
    kz_dual(I.I1, low, i, r1, low[i]);
    for (std::size_t j = 0; j < top.size(); ++j)
      if (!E[i][j].is_zero()) accumulate(r1, low[i], rational::expand_coordinates(eta(I.I0, top[j]).times(E[i][j])));
  }
  rep.degree1 = check_zero(*P.ctx, r1);
  return rep;
}

// ---------------------------------------------------------------- Casimir arbitration

struct CasimirVerdict {
  CasimirVariant variant;
  bool invariant = false;
  bool cocycle = false;
  bool passes() const { return invariant && cocycle; }
};

/// Runs both variants through the invariance identity (n = 2, 3; N <= 2,
/// symbolic weights) and the cocycle identities (n = 2; N = 1, 2, symbolic).
inline std::vector<CasimirVerdict> arbitrate_casimir() {
  std::vector<CasimirVerdict> out;
  for (CasimirVariant v : {CasimirVariant::standard, CasimirVariant::diagonal}) {
    CasimirVerdict verdict{v};
    verdict.invariant = true;
    for (int n : {2, 3})
      for (int N = 0; N <= 2; ++N) verdict.invariant = verdict.invariant && casimir_is_invariant(symbolic_params(n, N).m, N, v);
    verdict.cocycle = true;
    for (int N : {1, 2}) {
      Params P = symbolic_params(2, N);
      verdict.cocycle = verdict.cocycle && verify_cocycle(P, build_cocycle(P), v).ok();
    }
    out.push_back(verdict);
  }
  return out;
}

inline std::optional<CasimirVariant> selected_variant(const std::vector<CasimirVerdict>& verdicts) {
  std::optional<CasimirVariant> pick;
  int passing = 0;
  for (const auto& v : verdicts)
    if (v.passes()) {
      ++passing;
      pick = v.variant;
    }
  return passing == 1 ? pick : std::nullopt;
}

}  // namespace drwkz::kz
