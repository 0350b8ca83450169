#pragma once

// Seeded generators of de Rham-Witt forms for property checks.

#include <vector>

#include "drwkz/random.hpp"
#include "drwkz/witt/form.hpp"

namespace drwkz::witt {

struct FormShape {
  int degree = 0;
  int terms = 4;
  int max_denominator_exp = 1;  // k in num/p^k
  long exponent_bound = 3;      // |num| bound before scaling
  long coeff_bound = 20;
};

inline Block random_block(Rng& rng, std::size_t atoms, int degree) {
  std::vector<std::size_t> idx(atoms);
  for (std::size_t i = 0; i < atoms; ++i) idx[i] = i;
  for (std::size_t i = 0; i + 1 < atoms; ++i) std::swap(idx[i], idx[i + static_cast<std::size_t>(rng.uniform(0, static_cast<long long>(atoms - i - 1)))]);
  Block b = 0;
  for (int i = 0; i < degree; ++i) b |= Block{1} << idx[static_cast<std::size_t>(i)];
  return b;
}

/// Random form with integer coefficients and exponents in Z[1/p] whose
/// denominators are at most p^max_denominator_exp.
inline DRWForm random_form(const RingPtr& ring, const FormShape& shape, Rng& rng) {
  const u64 p = ring->prime();
  DRWForm x(ring, shape.degree);
  for (int t = 0; t < shape.terms; ++t) {
    std::vector<FracExponent> exps(ring->size());
    for (std::size_t i = 0; i < ring->size(); ++i) {
      if (rng.uniform(0, 3) == 0) continue;
      int k = static_cast<int>(rng.uniform(0, shape.max_denominator_exp));
      long long lo = (*ring)[i].invertible ? -shape.exponent_bound : 0;
      exps[i] = FracExponent::make(rng.uniform(lo, shape.exponent_bound), k, p);
    }
    mpq_class c(static_cast<long>(rng.uniform(-shape.coeff_bound, shape.coeff_bound)));
    x.add_term(c, std::move(exps), random_block(rng, ring->size(), shape.degree));
  }
  return x;
}

/// Random element of E: each term of a random form is scaled by p^{d(I)},
/// and a boundary d(V^j y) with unit coefficients is mixed in.
inline DRWForm random_E_form(const RingPtr& ring, const FormShape& shape, Rng& rng) {
  const u64 p = ring->prime();
  DRWForm raw = random_form(ring, shape, rng);
  DRWForm x(ring, shape.degree);
  for (const auto& [k, c] : raw.terms()) {
    int d = 0;
    for (const auto& e : k.exps) d = std::max(d, e.k);
    mpz_class scale;
    mpz_ui_pow_ui(scale.get_mpz_t(), static_cast<unsigned long>(p), static_cast<unsigned long>(d));
    x.add_term(c * scale, k.exps, k.block);
  }
  if (shape.degree > 0 && shape.max_denominator_exp > 0 && rng.coin()) {
    FormShape lower = shape;
    lower.degree = shape.degree - 1;
    lower.max_denominator_exp = 0;
    lower.terms = 2;
    int j = static_cast<int>(rng.uniform(1, shape.max_denominator_exp));
    x += differential(iterate(verschiebung, random_form(ring, lower, rng), j));
  }
  return x;
}

}  // namespace drwkz::witt
