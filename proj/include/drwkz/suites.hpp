#pragma once

// Check suites behind the command-line subcommands. Each suite is a pure
// function of its JSON config and returns a report.

#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "drwkz/aomoto.hpp"
#include "drwkz/arrangement.hpp"
#include "drwkz/errors.hpp"
#include "drwkz/kz.hpp"
#include "drwkz/milnor.hpp"
#include "drwkz/random.hpp"
#include "drwkz/report.hpp"
#include "drwkz/witt/form.hpp"
#include "drwkz/witt/json.hpp"
#include "drwkz/witt/lattice.hpp"
#include "drwkz/witt/random.hpp"

namespace drwkz::suites {

using nlohmann::json;
using report::Report;
using report::Status;

/// Invalid run configuration.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace detail {

template <class T>
T get(const json& cfg, const char* key, T fallback) {
  if (!cfg.contains(key) || cfg[key].is_null()) return fallback;
  try {
    return cfg[key].get<T>();
  } catch (const json::exception&) {
    throw ConfigError(std::string("config: '") + key + "' has the wrong type");
  }
}

inline std::string require_path(const json& cfg, const char* key = "in") {
  if (!cfg.contains(key) || !cfg[key].is_string()) throw ConfigError(std::string("config: '") + key + "' (input path) is required");
  return cfg[key].get<std::string>();
}

inline u64 prime(const json& cfg, u64 fallback) {
  auto p = get<long long>(cfg, "p", static_cast<long long>(fallback));
  if (p < 2 || !is_prime(static_cast<u64>(p))) throw ConfigError("config: p must be prime");
  return static_cast<u64>(p);
}

inline int positive(const json& cfg, const char* key, int fallback) {
  int v = get<int>(cfg, key, fallback);
  if (v < 1) throw ConfigError(std::string("config: '") + key + "' must be >= 1");
  return v;
}

/// Integer or "a/b" string.
inline mpq_class scalar(const json& v) {
  try {
    return arrangement::detail::parse_scalar(v);
  } catch (const std::exception&) {
    throw ConfigError("config: expected an integer or an \"a/b\" string, got " + v.dump());
  }
}

inline json scalar_json(const mpq_class& q) { return q.get_den() == 1 ? json(q.get_num().get_si()) : json(q.get_str()); }

inline json vec_json(const std::vector<mpq_class>& v) {
  json a = json::array();
  for (const auto& q : v) a.push_back(scalar_json(q));
  return a;
}

inline json first_term(const witt::DRWForm& x) {
  auto j = witt::form_to_json(x);
  if (!j["terms"].empty()) j["terms"] = json::array({j["terms"][0]});
  return j;
}

}  // namespace detail

// ---------------------------------------------------------------- de Rham-Witt

/// The operator identities on seeded random E-forms over t1, t2^{±1},
/// (t1-z1)^{±1}, plus d^2 = 0 and closedness of F-fixed forms.
inline Report drw_identities(const json& cfg) {
  const u64 p = detail::prime(cfg, 5);
  const int a = detail::positive(cfg, "precision", 3);
  const auto seed = detail::get<std::uint64_t>(cfg, "seed", 42);
  const int samples = detail::positive(cfg, "samples", 100);
  Report rep("drw-identities", {{"p", p}, {"precision", a}, {"seed", seed}, {"samples", samples}});
  auto ring = witt::make_ring(p, a, {{witt::Atom::t(1), false}, {witt::Atom::t(2), true}, {witt::Atom::t_minus_z(1, 1), true}});
  Rng rng(seed);
  const mpq_class pq(static_cast<unsigned long>(p));

  struct Identity {
    const char* id;
    const char* ref;
    std::function<bool(const witt::DRWForm&, const witt::DRWForm&)> holds;
    std::size_t passed = 0;
    json certificate;
  };
  using witt::differential;
  using witt::frobenius;
  using witt::verschiebung;
  // dlog of the invertible atoms; F-fixed samples mix these with constants
  std::vector<witt::DRWForm> dlogs;
  for (const auto& spec : ring->atoms())
    if (spec.invertible) dlogs.push_back(witt::dlog_atom(ring, spec.atom));
  auto f_fixed_sample = [&](const witt::DRWForm& x) {
    witt::DRWForm fixed(x.ring_ptr(), x.degree());
    for (const auto& [k, c] : x.terms())
      if (std::all_of(k.exps.begin(), k.exps.end(), [](const witt::FracExponent& e) { return e.num == 0; }))
        fixed.add_term(c, k.exps, k.block);
    if (x.degree() == 1)
      for (const auto& g : dlogs) fixed += g * mpq_class(static_cast<long>(rng.uniform(0, 6)) - 3);
    if (x.degree() == 2)
      for (std::size_t i = 0; i < dlogs.size(); ++i)
        for (std::size_t j = i + 1; j < dlogs.size(); ++j) fixed += dlogs[i] * dlogs[j] * mpq_class(static_cast<long>(rng.uniform(0, 6)) - 3);
    return fixed;
  };
  std::vector<Identity> ids{
      {"drw.FV", "FV = p", [&](auto& x, auto&) { return frobenius(verschiebung(x)) == x * pq; }},
      {"drw.VF", "VF = p", [&](auto& x, auto&) { return verschiebung(frobenius(x)) == x * pq; }},
      {"drw.FdV", "FdV = d", [&](auto& x, auto&) { return frobenius(differential(verschiebung(x))) == differential(x); }},
      {"drw.dF", "dF = pFd", [&](auto& x, auto&) { return differential(frobenius(x)) == frobenius(differential(x)) * pq; }},
      {"drw.Vd", "Vd = pdV", [&](auto& x, auto&) { return verschiebung(differential(x)) == differential(verschiebung(x)) * pq; }},
      {"drw.projection", "V(x Fy) = V(x) y", [&](auto& x, auto& y) { return verschiebung(x * frobenius(y)) == verschiebung(x) * y; }},
      {"drw.dd", "d d = 0", [&](auto& x, auto&) { return differential(differential(x)).is_zero(); }},
      {"drw.F_fixed_closed", "F(x) = x implies dx = 0",
       [&](auto& x, auto&) {
         auto fixed = f_fixed_sample(x);
         return frobenius(fixed) == fixed && differential(fixed).is_zero();
       }},
  };
  std::size_t in_E = 0;
  for (int s = 0; s < samples; ++s) {
    witt::FormShape shape;
    shape.degree = static_cast<int>(rng.uniform(0, 2));
    shape.max_denominator_exp = a - 1;
    auto x = witt::random_E_form(ring, shape, rng);
    witt::FormShape shape_y = shape;
    shape_y.degree = static_cast<int>(rng.uniform(0, 1));
    auto y = witt::random_E_form(ring, shape_y, rng);
    in_E += witt::is_in_E(x) && witt::is_in_E(y);
    for (auto& id : ids) {
      if (id.holds(x, y)) ++id.passed;
      else if (id.certificate.is_null()) id.certificate = {{"sample", s}, {"x", witt::form_to_json(x)}, {"y", witt::form_to_json(y)}};
    }
  }
  rep.check("drw.samples_in_E", "generated samples lie in E", in_E == static_cast<std::size_t>(samples),
            {{"in_E", in_E}, {"samples", samples}});
  for (const auto& id : ids) {
    json payload{{"passed", id.passed}, {"samples", samples}};
    if (!id.certificate.is_null()) payload["certificate"] = id.certificate;
    rep.check(id.id, id.ref, id.passed == static_cast<std::size_t>(samples), payload);
  }
  bool dlog_ok = !dlogs.empty();
  for (const auto& x : dlogs) dlog_ok = dlog_ok && !x.is_zero() && frobenius(x) == x && differential(x).is_zero();
  rep.check("drw.dlog_F_fixed", "dlog f is F-fixed and closed", dlog_ok);
  return rep;
}

/// W_a of the point, the E^0 closed form on a monomial grid, and optionally
/// the normal form of an input form.
inline Report drw_normal_form(const json& cfg) {
  const u64 p = detail::prime(cfg, 5);
  const int a = detail::positive(cfg, "precision", 3);
  const int level = detail::positive(cfg, "level", a);
  if (level > a) throw ConfigError("config: level must not exceed precision");
  json echo{{"p", p}, {"precision", a}, {"level", level}};
  if (cfg.contains("in")) echo["in"] = detail::require_path(cfg);
  Report rep("drw-normal-form", echo);

  if (cfg.contains("in")) {
    std::ifstream in(echo["in"].get<std::string>());
    if (!in) throw ParseError("cannot open " + echo["in"].get<std::string>());
    json j;
    try {
      in >> j;
    } catch (const json::exception& e) {
      throw ParseError(std::string("input JSON: ") + e.what());
    }
    if (!j.contains("ring") || !j.contains("form")) throw ParseError("input JSON: need \"ring\" and \"form\"");
    auto ring = witt::ring_from_json(j["ring"]);
    auto x = witt::form_from_json(ring, j["form"]);
    const int lvl = std::min(level, ring->precision());
    const bool e = witt::is_in_E(x);
    rep.check("drw.input_in_E", "x and dx are integral", e, {{"form", witt::form_to_json(x)}});
    if (e) {
      auto nf = witt::wa_normal_form(x, lvl);
      rep.add("drw.normal_form", "canonical representative of x + Fil^a", Status::info,
              {{"level", lvl}, {"normal_form", witt::form_to_json(nf)}, {"in_Fil", witt::fil_membership(x, lvl)}});
      rep.check("drw.normal_form.idempotent", "normal form of a normal form is itself", witt::wa_normal_form(nf, lvl) == nf);
      rep.check("drw.normal_form.difference_in_Fil", "x - nf(x) lies in Fil^a", witt::fil_membership(x - nf, lvl));
    }
    return rep;
  }

  // constants c, c' agree in W_a of the point iff p^a | c - c'
  auto point = witt::make_ring(p, a, {});
  const long bound = static_cast<long>(checked_pow(p, level)) * 2 + 3;
  const mpz_class pa(static_cast<unsigned long>(checked_pow(p, level)));
  std::size_t pairs = 0;
  json bad;
  for (long c = -bound; c <= bound; ++c)
    for (long c2 = -bound; c2 <= bound; c2 += 3) {
      ++pairs;
      bool same = witt::wa_normal_form(witt::DRWForm::constant(point, c), level) ==
                  witt::wa_normal_form(witt::DRWForm::constant(point, c2), level);
      bool expect = mpz_class(c - c2) % pa == 0;
      if (same != expect && bad.is_null()) bad = {{"c", c}, {"c2", c2}};
    }
  json payload{{"pairs", pairs}, {"order", pa.get_str()}};
  if (!bad.is_null()) payload["certificate"] = bad;
  rep.check("drw.point_quotient", "constants modulo Fil^a realize Z/p^a", bad.is_null(), payload);

  // E^0 on c t^{j/p^k}: member iff val(c) >= 0 and val(c) >= k for p not dividing j
  auto line = witt::polynomial_ring(p, 4, 1);
  std::size_t cases = 0;
  json miss;
  for (int k = 0; k <= 3; ++k)
    for (long long j = 0; j <= static_cast<long long>(2 * p); ++j)
      for (int v = -1; v <= 4; ++v)
        for (long u : {1L, 2L}) {
          if (u % static_cast<long>(p) == 0) continue;
          mpq_class c = mpq_class(u) * (v >= 0 ? mpq_class(mpz_class(checked_pow(p, v))) : mpq_class(1, static_cast<unsigned long>(p)));
          auto e = witt::FracExponent::make(j, k, p);
          std::vector<witt::FracExponent> exps{e};
          auto x = witt::DRWForm::monomial(line, c, exps, {});
          const long need = e.num == 0 ? 0 : e.k;
          const bool closed_form = v >= 0 && v >= need;
          ++cases;
          if (witt::is_in_E(x) != closed_form && miss.is_null()) miss = {{"coeff", c.get_str()}, {"exponent", e.to_string(p)}};
        }
  json p2{{"cases", cases}};
  if (!miss.is_null()) p2["certificate"] = miss;
  rep.check("drw.E0_grid", "E^0 = union of p^i Z_p[t^{p^-i}]", miss.is_null(), p2);
  return rep;
}

// ---------------------------------------------------------------- arrangements

inline Report os_build(const json& cfg) {
  const std::string path = detail::require_path(cfg);
  json echo{{"in", path}};
  if (cfg.contains("expect")) echo["expect"] = cfg["expect"];
  Report rep("os-build", echo);
  auto arr = arrangement::load_arrangement(path);
  arrangement::OSAlgebra os(arr);
  json basis = json::array();
  for (int k = 0; k <= os.top_degree(); ++k) basis.push_back(os.basis(k));
  rep.add("os.dims", "graded dimensions of the Orlik-Solomon algebra", Status::info,
          {{"dims", os.dims()}, {"basis", basis}, {"hyperplanes", arr.size()}, {"field", arrangement::to_json(arr)["field"]}});
  if (cfg.contains("expect")) {
    auto want = detail::get<std::vector<std::size_t>>(cfg, "expect", {});
    rep.check("os.dims.expected", "dimensions match the expected values", want == os.dims(), {{"dims", os.dims()}, {"expect", want}});
  }
  return rep;
}

inline Report psi_verify(const json& cfg) {
  const std::string path = detail::require_path(cfg);
  auto arr = arrangement::load_arrangement(path);
  if (!arr.field().is_rational()) throw ConfigError("psi-verify: the rational target needs an arrangement over Q");
  arrangement::OSAlgebra os(arr);
  const int max_degree = detail::get<int>(cfg, "max_degree", os.top_degree());
  if (max_degree < 0 || max_degree > os.top_degree()) throw ConfigError("config: max_degree out of range");
  Report rep("psi-verify", {{"in", path}, {"max_degree", max_degree}});
  for (const auto& r : arrangement::verify_psi_iso(arr, max_degree, os))
    rep.check("psi.rank/degree=" + std::to_string(r.degree), "psi is an isomorphism onto the dlog span", r.ok(),
              {{"os_dim", r.os_dim}, {"psi_rank", r.psi_rank}});
  return rep;
}

inline Report aomoto(const json& cfg) {
  const std::string path = detail::require_path(cfg);
  auto os = std::make_shared<const arrangement::OSAlgebra>(arrangement::load_arrangement(path));
  const auto seed = detail::get<std::uint64_t>(cfg, "seed", 42);
  const u64 p = detail::prime(cfg, 5);
  aomoto::Weights w;
  std::string mode = "explicit";
  if (!cfg.contains("weights") || cfg["weights"] == "generic") {
    mode = "generic";
    Rng rng(seed);
    for (std::size_t i = 0; i < os->num_hyperplanes(); ++i) w.push_back(rng.rational(7, 5));
  } else if (cfg["weights"] == "padic") {
    mode = "padic";
    Rng rng(seed);
    w = aomoto::padic_small_weights(rng, os->num_hyperplanes(), p);
  } else if (cfg["weights"].is_array()) {
    for (const auto& v : cfg["weights"]) w.push_back(detail::scalar(v));
  } else {
    throw ConfigError("config: weights must be a list, \"generic\" or \"padic\"");
  }
  if (w.size() != os->num_hyperplanes()) throw ConfigError("config: one weight per hyperplane expected");
  json echo{{"in", path}, {"weights", mode == "explicit" ? detail::vec_json(w) : json(mode)}, {"seed", seed}};
  if (mode == "padic") echo["p"] = p;
  if (cfg.contains("expect")) echo["expect"] = cfg["expect"];
  Report rep("aomoto", echo);
  aomoto::AomotoComplex cx(os, w);
  json payload{{"dims", cx.cohomology_dims()}, {"euler", cx.euler_characteristic()}, {"weights", detail::vec_json(w)}};
  if (mode == "padic") {
    json vals = json::array();
    for (const auto& v : aomoto::weight_valuations(w, p)) vals.push_back(v ? json(*v) : json(nullptr));
    payload["valuations"] = vals;
  }
  rep.add("aomoto.dims", "cohomology of the Aomoto complex", Status::info, payload);
  rep.check("aomoto.d_squared", "omega ∧ omega = 0", cx.squares_to_zero());
  rep.check("aomoto.euler", "Euler characteristic equals that of the OS algebra",
            cx.euler_characteristic() == aomoto::os_euler_characteristic(*os),
            {{"euler", cx.euler_characteristic()}, {"os_euler", aomoto::os_euler_characteristic(*os)}});
  if (cfg.contains("expect")) {
    auto want = detail::get<std::vector<std::size_t>>(cfg, "expect", {});
    rep.check("aomoto.dims.expected", "dimensions match the expected values", want == cx.cohomology_dims(),
              {{"dims", cx.cohomology_dims()}, {"expect", want}});
  }
  return rep;
}

// ---------------------------------------------------------------- Milnor K

inline Report milnor_verify(const json& cfg) {
  const std::string path = detail::get<std::string>(cfg, "in", std::string(DRWKZ_DATA_DIR) + "/gelfand.json");
  Report rep("milnor-verify", {{"in", path}});
  auto d = milnor::load_derivation(path);
  auto r = milnor::verify_derivation(d);
  json payload{{"steps", d.steps.size()}, {"final_state", r.final_state.to_string(*d.ctx)}};
  if (r.failed_step) payload["certificate"] = {{"failed_step", *r.failed_step}, {"reason", r.reason}};
  rep.check("milnor.derivation", "every step applies a relation of K_2^M", r.ok, payload);
  // the realized difference start - end must vanish as a form
  milnor::KSymbol diff = d.start;
  diff.add_scaled(d.end, -1);
  auto form = rational::expand_coordinates(milnor::dlog_realize(diff, d.ctx));
  json p2{{"symbol", diff.to_string(*d.ctx)}};
  if (!form.is_zero()) p2["certificate"] = form.to_string();
  rep.check("milnor.dlog_realization", "dlog realization of start - end vanishes", form.is_zero(), p2);
  return rep;
}

inline Report milnor_probe(const json& cfg) {
  const std::string path = detail::require_path(cfg);
  const int budget = detail::positive(cfg, "budget", 20);
  Report rep("milnor-probe", {{"in", path}, {"budget", budget}, {"degree", 2}});
  auto arr = arrangement::load_arrangement(path);
  auto pr = milnor::chi_rank_probe(arr, 2, static_cast<std::size_t>(budget));
  rep.add("milnor.chi_rank_probe", "ranks of chi and dlog images against dim A_2", Status::info,
          {{"symbols", pr.symbols},
           {"chi_rank", pr.chi_rank},
           {"dlog_rank", pr.dlog_rank ? json(*pr.dlog_rank) : json(nullptr)},
           {"os_dim", pr.os_dim}});
  return rep;
}

// ---------------------------------------------------------------- KZ

namespace detail {

struct KZPoint {
  std::optional<std::vector<mpq_class>> m;
  std::optional<mpq_class> kappa;
};

/// Expands the m / kappa settings into parameter points.
inline std::vector<KZPoint> kz_points(const json& cfg, int n, json& echo) {
  const auto seed = get<std::uint64_t>(cfg, "seed", 42);
  const json m = cfg.value("m", json("symbolic"));
  const json kappa = cfg.value("kappa", json("symbolic"));
  const bool random = m == "random" || kappa == "random";
  const int samples = random ? positive(cfg, "samples", 5) : 1;
  echo["m"] = m;
  echo["kappa"] = kappa;
  if (random) {
    echo["seed"] = seed;
    echo["samples"] = samples;
  }
  if (!(m == "symbolic" || m == "random" || m.is_array())) throw ConfigError("config: m must be a list, \"symbolic\" or \"random\"");
  if (m.is_array() && static_cast<int>(m.size()) != n) throw ConfigError("config: m needs one weight per factor");
  if (!(kappa == "symbolic" || kappa == "random" || kappa.is_number_integer() || kappa.is_string()))
    throw ConfigError("config: kappa must be a value, \"symbolic\" or \"random\"");
  Rng rng(seed);
  std::vector<KZPoint> pts;
  for (int s = 0; s < samples; ++s) {
    KZPoint pt;
    if (m == "random") {
      pt.m.emplace();
      for (int b = 0; b < n; ++b) pt.m->push_back(rng.rational(9, 4));
    } else if (m.is_array()) {
      pt.m.emplace();
      for (const auto& v : m) pt.m->push_back(scalar(v));
    }
    if (kappa == "random") pt.kappa = rng.rational(9, 4);
    else if (kappa != "symbolic") {
      pt.kappa = scalar(kappa);
      if (sgn(*pt.kappa) == 0) throw ConfigError("config: kappa must be nonzero");
    }
    pts.push_back(std::move(pt));
  }
  return pts;
}

inline json point_json(const KZPoint& pt) {
  return {{"m", pt.m ? vec_json(*pt.m) : json("symbolic")}, {"kappa", pt.kappa ? scalar_json(*pt.kappa) : json("symbolic")}};
}

inline std::pair<int, int> kz_shape(const json& cfg) {
  if (!cfg.contains("n") || !cfg.contains("N")) throw ConfigError("config: n and N are required");
  const int n = get<int>(cfg, "n", 0), N = get<int>(cfg, "N", 0);
  if (n < 1 || N < 1) throw ConfigError("config: need n >= 1 and N >= 1");
  if (2 * n + N + 1 > static_cast<int>(rational::kMaxVars)) throw ConfigError("config: n, N too large for the variable budget");
  return {n, N};
}

inline kz::CasimirVariant casimir(const json& cfg, json& echo) {
  const auto name = get<std::string>(cfg, "casimir", "standard");
  echo["casimir"] = name;
  if (name == "standard") return kz::CasimirVariant::standard;
  if (name == "diagonal") return kz::CasimirVariant::diagonal;
  throw ConfigError("config: casimir must be \"standard\" or \"diagonal\"");
}

inline json residual_payload(const KZPoint& pt, const kz::Residual& r) {
  json j = point_json(pt);
  if (!r.zero) j["certificate"] = {{"basis_vector", r.state}, {"term", r.term}};
  return j;
}

inline std::string point_id(const std::string& base, int n, int N, std::size_t sample, std::size_t total) {
  std::string id = base + "/n=" + std::to_string(n) + ",N=" + std::to_string(N);
  if (total > 1) id += "/sample=" + std::to_string(sample);
  return id;
}

inline void casimir_arbitration(Report& rep) {
  auto verdicts = kz::arbitrate_casimir();
  auto pick = kz::selected_variant(verdicts);
  json vs = json::array();
  for (const auto& v : verdicts)
    vs.push_back({{"variant", kz::variant_name(v.variant)}, {"invariant", v.invariant}, {"cocycle", v.cocycle}});
  rep.check("kz.casimir.arbitration", "exactly one Casimir variant is invariant and yields a cocycle", pick.has_value(),
            {{"selected", pick ? json(kz::variant_name(*pick)) : json(nullptr)}, {"verdicts", vs}});
}

}  // namespace detail

inline Report kz_cocycle(const json& cfg) {
  auto [n, N] = detail::kz_shape(cfg);
  json echo{{"n", n}, {"N", N}};
  auto variant = detail::casimir(cfg, echo);
  std::optional<u64> p;
  if (cfg.contains("p")) p = echo["p"] = detail::prime(cfg, 0);
  auto pts = detail::kz_points(cfg, n, echo);
  Report rep("kz-cocycle", echo);
  if (p && *p <= static_cast<u64>(N)) throw ConfigError("config: p-adic mode needs p > N");
  if (pts.size() > 1)
    rep.add("kz.sampling", "random rational parameter points", Status::info,
            {{"points", pts.size()},
             {"degree_bound", 3},
             {"note", "kappa times each residual coefficient is a polynomial of degree <= 3 in (m, kappa)"}});
  for (std::size_t s = 0; s < pts.size(); ++s) {
    auto P = kz::make_params(n, N, pts[s].m, pts[s].kappa);
    auto I = kz::build_cocycle(P, p);
    auto r = kz::verify_cocycle(P, I, variant);
    rep.check(detail::point_id("kz.cocycle.closed", n, N, s, pts.size()), "nabla I0 = 0", r.closed.zero,
              detail::residual_payload(pts[s], r.closed));
    rep.check(detail::point_id("kz.cocycle.chevalley", n, N, s, pts.size()), "d_Ch I0 + nabla I1 = 0", r.chevalley.zero,
              detail::residual_payload(pts[s], r.chevalley));
    if (p)
      rep.check(detail::point_id("kz.cocycle.p_integral", n, N, s, pts.size()), "cocycle coefficients lie in Z_(p)",
                kz::p_integral(I, *p), detail::point_json(pts[s]));
  }
  detail::casimir_arbitration(rep);
  return rep;
}

inline Report kz_flatness(const json& cfg) {
  json echo = json::object();
  auto variant = detail::casimir(cfg, echo);
  std::vector<std::pair<int, int>> shapes;
  if (cfg.contains("n") || cfg.contains("N")) {
    if (!cfg.contains("n") || !cfg.contains("N")) throw ConfigError("config: give both n and N, or neither");
    const int n = detail::get<int>(cfg, "n", 0), N = detail::get<int>(cfg, "N", 0);
    if (n < 1 || N < 0) throw ConfigError("config: need n >= 1 and N >= 0");
    shapes.emplace_back(n, N);
    echo["n"] = n;
    echo["N"] = N;
  } else {
    for (int n = 1; n <= 3; ++n)
      for (int N = 0; N <= 2; ++N) shapes.emplace_back(n, N);
    echo["sweep"] = "n <= 3, N <= 2";
  }
  std::vector<detail::KZPoint> pts;
  Report rep("kz-flatness", echo);
  for (auto [n, N] : shapes) {
    json e = echo;
    auto ps = detail::kz_points(cfg, n, e);
    for (std::size_t s = 0; s < ps.size(); ++s) {
      auto P = kz::make_params(n, N, ps[s].m, ps[s].kappa);
      auto r = kz::curvature(P, variant);
      rep.check(detail::point_id("kz.flatness", n, N, s, ps.size()), "curvature of nabla_KZ,Coul vanishes", r.zero,
                detail::residual_payload(ps[s], r));
    }
  }
  return rep;
}

inline Report bosonization(const json& cfg) {
  auto [n, N] = detail::kz_shape(cfg);
  json echo{{"n", n}, {"N", N}};
  auto variant = detail::casimir(cfg, echo);
  auto pts = detail::kz_points(cfg, n, echo);
  Report rep("bosonization", echo);
  for (std::size_t s = 0; s < pts.size(); ++s) {
    auto P = kz::make_params(n, N, pts[s].m, pts[s].kappa);
    auto I = kz::build_cocycle(P);
    auto c = kz::verify_cocycle(P, I, variant);
    rep.check(detail::point_id("bosonization.cocycle", n, N, s, pts.size()), "I is a cocycle", c.ok(),
              detail::residual_payload(pts[s], c.closed.zero ? c.chevalley : c.closed));
    if (!c.ok()) continue;
    auto b = kz::bosonization_check(P, I, variant);
    rep.check(detail::point_id("bosonization.degree0", n, N, s, pts.size()), "eta intertwines the dual KZ and Coulomb connections",
              b.degree0.zero, detail::residual_payload(pts[s], b.degree0));
    rep.check(detail::point_id("bosonization.degree1", n, N, s, pts.size()), "eta commutes with the dual Chevalley differential",
              b.degree1.zero, detail::residual_payload(pts[s], b.degree1));
    json f = detail::point_json(pts[s]);
    if (!b.filtration) f["certificate"] = b.filtration_detail;
    rep.check(detail::point_id("bosonization.filtration", n, N, s, pts.size()), "eta respects the dz filtration", b.filtration, f);
  }
  return rep;
}

// ---------------------------------------------------------------- dispatch

inline const std::map<std::string, Report (*)(const json&)>& registry() {
  static const std::map<std::string, Report (*)(const json&)> r{
      {"drw-identities", &drw_identities}, {"drw-normal-form", &drw_normal_form}, {"os-build", &os_build},
      {"psi-verify", &psi_verify},         {"aomoto", &aomoto},                   {"milnor-verify", &milnor_verify},
      {"milnor-probe", &milnor_probe},     {"kz-cocycle", &kz_cocycle},           {"kz-flatness", &kz_flatness},
      {"bosonization", &bosonization},
  };
  return r;
}

inline Report run_suite(const std::string& name, const json& cfg) {
  auto it = registry().find(name);
  if (it == registry().end()) throw ConfigError("unknown suite " + name);
  if (!cfg.is_object()) throw ConfigError("config must be a JSON object");
  return it->second(cfg);
}

}  // namespace drwkz::suites
