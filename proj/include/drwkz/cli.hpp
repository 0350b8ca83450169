#pragma once

// Command-line front end: flags and an optional JSON config file become one
// config object, handed to the named suite.
//
// Exit codes: 0 all checks pass, 1 some check failed, 2 invalid config or input.

#include <fstream>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "drwkz/suites.hpp"

namespace drwkz::cli {

using nlohmann::json;

inline constexpr int kExitPass = 0;
inline constexpr int kExitFail = 1;
inline constexpr int kExitInvalid = 2;

namespace detail {

enum class Kind { integer, text, list, mixed };

struct Flag {
  const char* name;
  Kind kind;
  const char* help;
};

inline std::vector<std::string> split(const std::string& s) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else if (!std::isspace(static_cast<unsigned char>(c))) {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

inline json scalar_value(const std::string& s) {
  try {
    std::size_t used = 0;
    long long v = std::stoll(s, &used);
    if (used == s.size()) return v;
  } catch (const std::exception&) {
  }
  return s;
}

/// Flag text to JSON: integers, comma lists, or words like "symbolic".
inline json convert(const std::string& key, const std::string& raw, Kind kind) {
  switch (kind) {
    case Kind::integer: {
      json v = scalar_value(raw);
      if (!v.is_number_integer()) throw suites::ConfigError("--" + key + " expects an integer, got '" + raw + "'");
      return v;
    }
    case Kind::text: return raw;
    case Kind::list: {
      json a = json::array();
      for (const auto& item : split(raw)) {
        json v = scalar_value(item);
        if (!v.is_number_integer()) throw suites::ConfigError("--" + key + " expects a comma list of integers");
        a.push_back(v);
      }
      return a;
    }
    case Kind::mixed: {
      if (raw.find(',') == std::string::npos) {
        json v = scalar_value(raw);
        // a single weight is still a list for list-valued keys
        if (key == "m" || key == "weights") return v.is_string() && raw.find('/') == std::string::npos ? v : json::array({v});
        return v;
      }
      json a = json::array();
      for (const auto& item : split(raw)) a.push_back(scalar_value(item));
      return a;
    }
  }
  return raw;
}

inline const std::map<std::string, std::vector<Flag>>& flags() {
  static const Flag p{"p", Kind::integer, "prime"};
  static const Flag precision{"precision", Kind::integer, "p-adic precision a"};
  static const Flag seed{"seed", Kind::integer, "seed for all randomized checks"};
  static const Flag samples{"samples", Kind::integer, "number of random samples"};
  static const Flag in{"in", Kind::text, "input JSON file"};
  static const Flag n{"n", Kind::integer, "number of tensor factors"};
  static const Flag N{"N", Kind::integer, "weight level"};
  static const Flag m{"m", Kind::mixed, "highest weights: comma list, symbolic or random"};
  static const Flag kappa{"kappa", Kind::mixed, "kappa: value, symbolic or random"};
  static const Flag casimir{"casimir", Kind::text, "Casimir variant: standard or diagonal"};
  static const std::map<std::string, std::vector<Flag>> table{
      {"drw-identities", {p, precision, seed, samples}},
      {"drw-normal-form", {p, precision, {"level", Kind::integer, "filtration level (default: precision)"}, in}},
      {"os-build", {in, {"expect", Kind::list, "expected dimensions, comma list"}}},
      {"psi-verify", {in, {"max-degree", Kind::integer, "highest degree to check"}}},
      {"aomoto",
       {in, {"weights", Kind::mixed, "comma list, generic or padic"}, p, seed, {"expect", Kind::list, "expected dimensions"}}},
      {"milnor-verify", {in}},
      {"milnor-probe", {in, {"budget", Kind::integer, "number of symbols"}}},
      {"kz-cocycle", {n, N, m, kappa, p, seed, samples, casimir}},
      {"kz-flatness", {n, N, m, kappa, seed, samples, casimir}},
      {"bosonization", {n, N, m, kappa, seed, samples, casimir}},
  };
  return table;
}

inline const std::map<std::string, std::string>& descriptions() {
  static const std::map<std::string, std::string> d{
      {"drw-identities", "F, V, d identities on random de Rham-Witt forms"},
      {"drw-normal-form", "W_a normal forms: the point, the E^0 grid, or an input form"},
      {"os-build", "Orlik-Solomon algebra of an arrangement"},
      {"psi-verify", "rank of the dlog realization per degree"},
      {"aomoto", "Aomoto complex cohomology"},
      {"milnor-verify", "check a Milnor K_2 derivation"},
      {"milnor-probe", "chi and dlog ranks of degree-2 symbols"},
      {"kz-cocycle", "the hypergeometric cocycle identities"},
      {"kz-flatness", "curvature of the KZ-Coulomb connection"},
      {"bosonization", "chain-map check of the bosonization"},
  };
  return d;
}

}  // namespace detail

/// Runs one subcommand; the report goes to `out`, diagnostics to `err`.
inline int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Exact checks for de Rham-Witt forms, arrangements and KZ hypergeometric cocycles", "drwkz"};
  app.require_subcommand(1);
  std::string config_path, json_path, format = "text";
  app.add_option("--config", config_path, "JSON config file; flags override its keys");
  app.add_option("--json", json_path, "write the JSON report to this file");
  app.add_option("--format", format, "stdout format: text or json")->check(CLI::IsMember({"text", "json"}));

  std::map<std::string, std::map<std::string, std::string>> values;
  std::map<std::string, CLI::App*> subs;
  for (const auto& [name, flags] : detail::flags()) {
    auto* sub = app.add_subcommand(name, detail::descriptions().at(name));
    subs[name] = sub;
    for (const auto& f : flags) sub->add_option(std::string("--") + f.name, values[name][f.name], f.help);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kExitPass;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitInvalid;
  }

  try {
    json cfg = json::object();
    if (!config_path.empty()) {
      std::ifstream in(config_path);
      if (!in) throw suites::ConfigError("cannot open config " + config_path);
      try {
        in >> cfg;
      } catch (const json::exception& e) {
        throw suites::ConfigError(std::string("config JSON: ") + e.what());
      }
      if (!cfg.is_object()) throw suites::ConfigError("config must be a JSON object");
    }
    std::string name;
    for (const auto& [n, sub] : subs)
      if (sub->parsed()) name = n;
    for (const auto& f : detail::flags().at(name)) {
      auto* opt = subs[name]->get_option(std::string("--") + f.name);
      if (opt->count() == 0) continue;
      std::string key = f.name;
      std::replace(key.begin(), key.end(), '-', '_');
      cfg[key] = detail::convert(key, values[name][f.name], f.kind);
    }
    auto rep = suites::run_suite(name, cfg);
    const std::string dumped = rep.to_json().dump(2) + "\n";
    if (!json_path.empty()) {
      std::ofstream o(json_path);
      if (!o) throw suites::ConfigError("cannot write " + json_path);
      o << dumped;
    }
    if (format == "json") out << dumped;
    else rep.write_summary(out);
    return rep.ok() ? kExitPass : kExitFail;
  } catch (const suites::ConfigError& e) {
    err << "error: " << e.what() << "\n";
  } catch (const ParseError& e) {
    err << "error: " << e.what() << "\n";
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << "\n";
  } catch (const DomainError& e) {
    err << "error: " << e.what() << "\n";
  } catch (const PreconditionError& e) {
    err << "error: " << e.what() << "\n";
  } catch (const ResourceError& e) {
    err << "error: " << e.what() << "\n";
  }
  return kExitInvalid;
}

}  // namespace drwkz::cli
