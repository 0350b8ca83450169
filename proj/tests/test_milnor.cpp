#include <gtest/gtest.h>

#include <string>

#include "drwkz/milnor.hpp"
#include "drwkz/random.hpp"

using namespace drwkz;
using namespace drwkz::milnor;

namespace {

std::string data(const std::string& name) { return std::string(DRWKZ_DATA_DIR) + "/" + name; }

ContextPtr xy() { return Context::make({"x", "y"}); }

KSymbol sym(const Context& ctx, std::initializer_list<std::pair<long, std::vector<std::string>>> terms) {
  KSymbol s;
  bool first = true;
  for (const auto& [c, t] : terms) {
    Tuple tup;
    for (const auto& e : t) tup.push_back(parse_entry(ctx, e));
    if (first) s.degree = static_cast<int>(tup.size());
    first = false;
    s.add(tup, c);
  }
  return s;
}

nlohmann::json derivation_json(const std::string& start, const std::string& end, nlohmann::json steps) {
  return {{"vars", {"x", "y"}},
          {"z_half", true},
          {"start", nlohmann::json::parse(start)},
          {"end", nlohmann::json::parse(end)},
          {"steps", std::move(steps)}};
}

arrangement::Arrangement three_lines() { return arrangement::load_arrangement(data("arrangements/threelines.json")); }

}  // namespace

TEST(Factored, ParsingAndCanonicalForm) {
  auto c = xy();
  EXPECT_EQ(parse_entry(*c, "1 - y/x"), parse_entry(*c, "(x-y)/x"));
  EXPECT_EQ(parse_entry(*c, "x*y^-1 - 1"), parse_entry(*c, "(x - y)*y^-1"));
  EXPECT_EQ(parse_entry(*c, "y - x"), parse_entry(*c, "-(x-y)"));
  EXPECT_EQ(parse_entry(*c, "2*x - 2*y"), parse_entry(*c, "2*(x-y)"));
  EXPECT_EQ(parse_entry(*c, "x*x/x"), parse_entry(*c, "x"));
  EXPECT_EQ(parse_entry(*c, "(x^2 - y^2)/(x+y)"), parse_entry(*c, "x-y"));
  EXPECT_TRUE(parse_entry(*c, "x/x").is_constant());
  EXPECT_THROW(parse_entry(*c, "x^2 + y"), ParseError);
  EXPECT_THROW(parse_entry(*c, "x - x"), ParseError);
  EXPECT_THROW(parse_entry(*c, "z"), ParseError);
  EXPECT_THROW(parse_entry(*c, "(x"), ParseError);
}

TEST(Factored, ArithmeticAgreesWithEvaluation) {
  auto c = xy();
  Rng rng(2);
  const std::vector<std::string> pool{"x", "y", "x-y", "x+1", "2*y-3", "-x"};
  for (int trial = 0; trial < 30; ++trial) {
    auto a = parse_entry(*c, pool[static_cast<std::size_t>(rng.uniform(0, 5))]);
    auto b = parse_entry(*c, pool[static_cast<std::size_t>(rng.uniform(0, 5))]);
    std::vector<mpq_class> pt{rng.rational(9, 4), rng.rational(9, 4)};
    auto value = [&](const Factored& f) -> mpq_class {
      auto [n, d] = f.fraction(*c);
      return n.evaluate(pt) / d.evaluate(pt);
    };
    auto [na, da] = a.fraction(*c);
    auto [nb, db] = b.fraction(*c);
    if (sgn(na.evaluate(pt)) == 0 || sgn(nb.evaluate(pt)) == 0 || sgn(da.evaluate(pt)) == 0 || sgn(db.evaluate(pt)) == 0)
      continue;
    EXPECT_EQ(value(a * b), value(a) * value(b));
    EXPECT_EQ(value(a / b), value(a) / value(b));
    if (sgn(value(a) + value(b)) == 0) continue;
    try {
      EXPECT_EQ(value(add(*c, a, b)), value(a) + value(b));
    } catch (const DomainError&) {
      // a + b vanished identically
    }
  }
}

TEST(Derivation, GelfandFixtureVerifies) {
  auto d = load_derivation(data("gelfand.json"));
  auto r = verify_derivation(d);
  EXPECT_TRUE(r.ok) << r.reason;
  EXPECT_EQ(r.final_state, sym(*d.ctx, {{1, {"x", "y"}}}));
}

TEST(Derivation, GelfandNeedsTheHalf) {
  auto j = nlohmann::json::parse(std::ifstream(data("gelfand.json")));
  j["z_half"] = false;
  auto r = verify_derivation(derivation_from_json(j));
  EXPECT_FALSE(r.ok);
  ASSERT_TRUE(r.failed_step);
  EXPECT_EQ(*r.failed_step, 1u);
}

TEST(Derivation, EmptyStepList) {
  auto j = derivation_json(R"([{"coeff":1,"tuple":["x","y"]}])", R"([{"coeff":1,"tuple":["x","y"]}])", nlohmann::json::array());
  EXPECT_TRUE(verify_derivation(derivation_from_json(j)).ok);
  auto k = derivation_json(R"([{"coeff":1,"tuple":["x","y"]}])", R"([{"coeff":1,"tuple":["y","x"]}])", nlohmann::json::array());
  EXPECT_FALSE(verify_derivation(derivation_from_json(k)).ok);
}

TEST(Derivation, SteinbergSchemaIsExact) {
  // 1 - x^2 is not a product of linear forms, so the start symbol is rejected
  nlohmann::json bad = nlohmann::json::array({{{"rule", "steinberg"}, {"position", 0}, {"data", {{"tuple", {"x", "1-x^2"}}, {"coeff", -1}}}}});
  EXPECT_THROW(derivation_from_json(derivation_json(R"([{"coeff":1,"tuple":["x","1-x^2"]}])", "[]", bad)), ParseError);
  nlohmann::json wrong = nlohmann::json::array({{{"rule", "steinberg"}, {"position", 0}, {"data", {{"tuple", {"x", "1-2*x"}}, {"coeff", -1}}}}});
  auto r = verify_derivation(derivation_from_json(derivation_json(R"([{"coeff":1,"tuple":["x","1-2*x"]}])", "[]", wrong)));
  EXPECT_FALSE(r.ok);
  EXPECT_EQ(r.failed_step, std::optional<std::size_t>(0));
  nlohmann::json good = nlohmann::json::array({{{"rule", "steinberg"}, {"position", 0}, {"data", {{"tuple", {"x", "1-x"}}, {"coeff", -1}}}}});
  EXPECT_TRUE(verify_derivation(derivation_from_json(derivation_json(R"([{"coeff":1,"tuple":["x","1-x"]}])", "[]", good))).ok);
}

TEST(Derivation, MalformedStepsCarryTheirIndex) {
  auto one = [](nlohmann::json step) {
    nlohmann::json ok = {{"rule", "torsion-half"}, {"position", 0}, {"data", {{"tuple", {"x", "x"}}}}};
    return nlohmann::json::array({ok, std::move(step)});
  };
  const std::string start = R"([{"coeff":1,"tuple":["x","y"]}])";
  auto check = [&](nlohmann::json step) {
    try {
      derivation_from_json(derivation_json(start, start, one(std::move(step))));
      ADD_FAILURE() << "no ValidationError";
    } catch (const ValidationError& e) {
      EXPECT_EQ(e.step(), 1u);
    }
  };
  check({{"rule", "associativity"}, {"position", 0}, {"data", {{"tuple", {"x", "y"}}}}});
  check({{"rule", "steinberg"}, {"position", 1}, {"data", {{"tuple", {"x", "1-x"}}}}});
  check({{"rule", "bilinearity"}, {"position", 0}, {"data", {{"tuple", {"x", "y"}}}}});
  check({{"rule", "bilinearity"}, {"position", 0}});
  check({{"rule", "torsion-half"}, {"position", 0}, {"data", {{"tuple", {"x", "q"}}}}});
}

TEST(Derivation, BilinearityMismatchFails) {
  nlohmann::json steps = nlohmann::json::array(
      {{{"rule", "bilinearity"}, {"position", 1}, {"data", {{"tuple", {"x", "x*y"}}, {"f", "x"}, {"g", "x"}}}}});
  auto r = verify_derivation(derivation_from_json(derivation_json(R"([{"coeff":1,"tuple":["x","x*y"]}])", "[]", steps)));
  EXPECT_FALSE(r.ok);
  EXPECT_EQ(r.failed_step, std::optional<std::size_t>(0));
}

TEST(Chi, Examples) {
  auto arr = three_lines();
  arrangement::OSAlgebra os(arr);
  auto c = xy();
  arrangement::OSElement h01{1, {{{0}, 1}, {{1}, 1}}};
  EXPECT_EQ(chi(sym(*c, {{1, {"x*y"}}}), arr, *c, os), os.reduce(h01));
  EXPECT_TRUE(chi(sym(*c, {{1, {"5"}}}), arr, *c, os).is_zero());
  EXPECT_TRUE(chi(sym(*c, {{1, {"x", "x-y"}}, {-1, {"y", "x-y"}}, {-1, {"x", "y"}}}), arr, *c, os).is_zero());
  EXPECT_FALSE(chi(sym(*c, {{1, {"x", "y"}}}), arr, *c, os).is_zero());
  EXPECT_THROW(chi(sym(*c, {{1, {"x+1"}}}), arr, *c, os), DomainError);
}

TEST(Chi, IsMultiplicative) {
  auto arr = three_lines();
  arrangement::OSAlgebra os(arr);
  auto c = xy();
  Rng rng(6);
  const std::vector<std::string> pool{"x", "y", "x-y", "x*y", "x/(x-y)", "-y", "2*x*(x-y)^2"};
  auto pick = [&] { return parse_entry(*c, pool[static_cast<std::size_t>(rng.uniform(0, 6))]); };
  for (int trial = 0; trial < 25; ++trial) {
    KSymbol a{1, {}}, b{1, {}};
    a.add({pick()}, rng.rational(3, 1));
    a.add({pick()}, rng.rational(3, 1));
    b.add({pick()}, rng.rational(3, 1));
    EXPECT_EQ(chi(a * b, arr, *c, os), os.multiply(chi(a, arr, *c, os), chi(b, arr, *c, os)));
  }
}

TEST(DlogRealize, Examples) {
  auto c = xy();
  auto xy_form = dlog_realize(sym(*c, {{1, {"x", "y"}}}), c);
  EXPECT_TRUE(rational::equivalent(xy_form, wedge(rational::LogForm::dlog(c, "x"), rational::LogForm::dlog(c, "y"))));
  auto gelfand = sym(*c, {{1, {"x", "x-y"}}, {-1, {"y", "x-y"}}, {-1, {"x", "y"}}});
  EXPECT_TRUE(rational::expand_coordinates(dlog_realize(gelfand, c)).is_zero());
  EXPECT_TRUE(rational::expand_coordinates(dlog_realize(sym(*c, {{1, {"-1", "x"}}}), c)).is_zero());
}

TEST(DlogRealize, RuleInstancesVanish) {
  auto c = xy();
  Rng rng(8);
  const std::vector<std::string> pool{"x", "y", "x-y", "x+1", "y/x", "(x-y)/x", "-x*y", "3*x"};
  auto pick = [&] { return parse_entry(*c, pool[static_cast<std::size_t>(rng.uniform(0, 7))]); };
  for (int trial = 0; trial < 25; ++trial) {
    auto f = pick(), g = pick(), h = pick();
    DerivationStep bil{Rule::bilinearity, 0, {f * g, h}, f, g, 1};
    DerivationStep anti{Rule::inverse_antisymmetry, 0, {f, f.negated()}, {}, {}, 1};
    DerivationStep tor{Rule::torsion_half, 0, {f, f}, {}, {}, 1};
    Factored one_minus;
    try {
      one_minus = add(*c, Factored::constant(1), f.negated());
    } catch (const DomainError&) {
      continue;
    }
    DerivationStep st{Rule::steinberg, 0, {f, one_minus}, {}, {}, 1};
    for (const auto& s : {bil, anti, tor, st}) {
      std::string why;
      auto r = relation(*c, s, true, why);
      ASSERT_TRUE(r) << why;
      EXPECT_TRUE(rational::expand_coordinates(dlog_realize(*r, c)).is_zero()) << rule_name(s.rule);
    }
  }
}

TEST(ChiRankProbe, Examples) {
  auto three = chi_rank_probe(three_lines(), 2, 20);
  EXPECT_EQ(three.symbols, 20u);
  EXPECT_EQ(three.os_dim, 2u);
  EXPECT_EQ(three.chi_rank, 2u);
  EXPECT_EQ(three.dlog_rank, std::optional<std::size_t>(2));
  auto single = chi_rank_probe(arrangement::load_arrangement(data("arrangements/single_hyperplane.json")), 2, 20);
  EXPECT_EQ(single.chi_rank, 0u);
  EXPECT_EQ(single.os_dim, 0u);
  auto parallel = chi_rank_probe(arrangement::load_arrangement(data("arrangements/parallel_lines.json")), 2, 20);
  EXPECT_EQ(parallel.chi_rank, 0u);
  EXPECT_EQ(parallel.os_dim, 0u);
}
