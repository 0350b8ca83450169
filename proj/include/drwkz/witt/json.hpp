#pragma once

// JSON encoding of rings and de Rham-Witt forms:
//   ring: {"p": 5, "precision": 3, "atoms": [{"name": "t1", "invertible": false}, ...]}
//   form: {"degree": m, "terms": [{"coeff": "int", "exps": {"t1": "1/5^2"}, "block": ["t1"]}]}

#include <string>
#include <vector>

#include <json.hpp>

#include "drwkz/errors.hpp"
#include "drwkz/witt/form.hpp"

namespace drwkz::witt {

using nlohmann::json;

inline json ring_to_json(const RingSpec& ring) {
  json atoms = json::array();
  for (const auto& a : ring.atoms()) atoms.push_back({{"name", a.atom.name()}, {"invertible", a.invertible}});
  return {{"p", ring.prime()}, {"precision", ring.precision()}, {"atoms", atoms}};
}

inline RingPtr ring_from_json(const json& j) {
  try {
    std::vector<AtomSpec> atoms;
    for (const auto& a : j.at("atoms")) atoms.push_back({Atom::parse(a.at("name").get<std::string>()), a.value("invertible", false)});
    return make_ring(j.at("p").get<u64>(), j.at("precision").get<int>(), std::move(atoms));
  } catch (const json::exception& e) {
    throw ParseError(std::string("ring JSON: ") + e.what());
  }
}

inline json form_to_json(const DRWForm& x) {
  json terms = json::array();
  for (const auto& [k, c] : x.terms()) {
    json exps = json::object();
    json block = json::array();
    for (std::size_t i = 0; i < k.exps.size(); ++i) {
      if (k.exps[i].num != 0) exps[x.ring()[i].atom.name()] = k.exps[i].to_string(x.prime());
      if (k.block & (Block{1} << i)) block.push_back(x.ring()[i].atom.name());
    }
    terms.push_back({{"coeff", c.get_str()}, {"exps", exps}, {"block", block}});
  }
  return {{"degree", x.degree()}, {"terms", terms}};
}

inline DRWForm form_from_json(const RingPtr& ring, const json& j) {
  try {
    DRWForm x(ring, j.at("degree").get<int>());
    for (const auto& t : j.at("terms")) {
      mpq_class c;
      const auto& cj = t.at("coeff");
      if (cj.is_number_integer()) {
        c = mpq_class(static_cast<long>(cj.get<long long>()));
      } else if (c.set_str(cj.get<std::string>(), 10) != 0) {
        throw ParseError("bad coefficient '" + cj.get<std::string>() + "'");
      }
      c.canonicalize();
      std::vector<FracExponent> exps(ring->size());
      if (t.contains("exps")) {
        for (const auto& [name, val] : t.at("exps").items()) {
          std::size_t i = ring->index_of(Atom::parse(name));
          exps[i] = val.is_number_integer() ? FracExponent::make(val.get<long long>(), 0, ring->prime())
                                            : FracExponent::parse(val.get<std::string>(), ring->prime());
        }
      }
      std::vector<Atom> block;
      if (t.contains("block"))
        for (const auto& b : t.at("block")) block.push_back(Atom::parse(b.get<std::string>()));
      if (static_cast<int>(block.size()) != x.degree()) throw ParseError("block size differs from degree");
      x += DRWForm::monomial(ring, c, std::move(exps), block);
    }
    return x;
  } catch (const json::exception& e) {
    throw ParseError(std::string("form JSON: ") + e.what());
  }
}

}  // namespace drwkz::witt
