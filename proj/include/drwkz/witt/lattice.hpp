#pragma once

// Integrality lattice E, the filtration Fil^a = V^a E + d V^a E and the
// quotients W_a Omega = E / Fil^a.
//
// F, V and d act diagonally on the grading by exponent vectors, so each
// graded piece is handled separately. In the piece of exponent I write
// iota = sum_k i_k e_k = p^v iota' with iota' primitive and pick the first
// unit coordinate k0 of iota' as pivot. In the basis {iota', e_k (k != k0)}
//
//   Lambda^m = iota' ∧ Lambda'^{m-1}  (+)  Lambda''^m     (blocks avoiding k0)
//   E_I      = iota' ∧ Lambda'        (+)  p^{max(0,-v)} Lambda''
//   Fil^a_I  = p^A iota' ∧ Lambda'    (+)  p^B Lambda''
//
// with A = max(0, a + min(0, v)), B = max(a, -v). For iota = 0 both
// summands are scaled by p^a.

#include <map>
#include <optional>
#include <vector>

#include <gmpxx.h>

#include "drwkz/errors.hpp"
#include "drwkz/padic.hpp"
#include "drwkz/witt/form.hpp"

namespace drwkz::witt {

inline bool is_integral(const mpq_class& c, u64 p) {
  auto v = val_p(c, p);
  return !v || *v >= 0;
}

/// True iff every coefficient of x and of dx has non-negative valuation.
inline bool is_in_E(const DRWForm& x) {
  const u64 p = x.prime();
  for (const auto& [k, c] : x.terms())
    if (!is_integral(c, p)) return false;
  const DRWForm dx = differential(x);
  for (const auto& [k, c] : dx.terms())
    if (!is_integral(c, p)) return false;
  return true;
}

namespace detail {

struct GradedPiece {
  std::vector<FracExponent> exps;
  std::map<Block, mpq_class> coeffs;
};

inline std::vector<GradedPiece> split_by_grade(const DRWForm& x) {
  std::vector<GradedPiece> pieces;
  for (const auto& [k, c] : x.terms()) {
    if (pieces.empty() || pieces.back().exps != k.exps) pieces.push_back({k.exps, {}});
    pieces.back().coeffs[k.block] = c;
  }
  return pieces;
}

/// Coordinates of a graded piece in the adapted basis.
struct AdaptedCoordinates {
  bool iota_zero = true;
  long v = 0;                     // valuation of iota
  std::size_t pivot = 0;          // k0
  std::vector<mpq_class> iota;    // primitive iota'
  std::map<Block, mpq_class> alpha;  // blocks of size m-1 avoiding k0
  std::map<Block, mpq_class> beta;   // blocks of size m avoiding k0
};

inline AdaptedCoordinates adapt(const GradedPiece& piece, u64 p) {
  AdaptedCoordinates out;
  const std::size_t n = piece.exps.size();
  std::vector<mpq_class> iota(n);
  std::optional<long> vmin;
  for (std::size_t i = 0; i < n; ++i) {
    iota[i] = piece.exps[i].value(p);
    if (auto v = val_p(iota[i], p)) vmin = vmin ? std::min(*vmin, *v) : *v;
  }
  if (!vmin) {
    out.beta = piece.coeffs;
    return out;
  }
  out.iota_zero = false;
  out.v = *vmin;
  mpz_class scale;
  mpz_ui_pow_ui(scale.get_mpz_t(), static_cast<unsigned long>(p), static_cast<unsigned long>(std::labs(*vmin)));
  for (auto& c : iota) c = *vmin >= 0 ? mpq_class(c / scale) : mpq_class(c * scale);
  for (std::size_t i = 0; i < n; ++i) {
    auto v = val_p(iota[i], p);
    if (v && *v == 0) {
      out.pivot = i;
      break;
    }
  }
  out.iota = iota;
  const Block pivot_bit = Block{1} << out.pivot;
  const mpq_class u = iota[out.pivot];
  // alpha_{B'} = (coefficient of e_k0 ∧ e_B') / u
  for (const auto& [block, c] : piece.coeffs) {
    if (!(block & pivot_bit)) continue;
    Block rest = block & ~pivot_bit;
    int sign = block_merge_sign(pivot_bit, rest);
    out.alpha[rest] += sign * c / u;
  }
  // beta = x - iota' ∧ alpha
  std::map<Block, mpq_class> beta = piece.coeffs;
  for (const auto& [rest, a] : out.alpha) {
    for (std::size_t k = 0; k < n; ++k) {
      if (sgn(iota[k]) == 0) continue;
      Block bit = Block{1} << k;
      int sign = block_merge_sign(bit, rest);
      if (sign == 0) continue;
      beta[rest | bit] -= sign * iota[k] * a;
    }
  }
  for (auto& [block, c] : beta)
    if (sgn(c) != 0) {
      if (block & pivot_bit) throw std::logic_error("adapted decomposition left a pivot term");
      out.beta[block] = c;
    }
  return out;
}

inline bool divisible(const mpq_class& c, u64 p, long e) {
  auto v = val_p(c, p);
  return !v || *v >= e;
}

/// Canonical residue of a p-integral rational modulo p^e, as an integer.
inline mpz_class residue(const mpq_class& c, u64 p, long e) {
  if (e <= 0) return 0;
  mpz_class m;
  mpz_ui_pow_ui(m.get_mpz_t(), static_cast<unsigned long>(p), static_cast<unsigned long>(e));
  mpz_class inv;
  if (!mpz_invert(inv.get_mpz_t(), mpz_class(c.get_den()).get_mpz_t(), m.get_mpz_t()))
    throw DomainError("residue: coefficient is not p-integral");
  mpz_class r = (mpz_class(c.get_num()) * inv) % m;
  if (r < 0) r += m;
  return r;
}

struct FilExponents {
  long alpha;
  long beta;
};

inline FilExponents fil_exponents(const AdaptedCoordinates& ac, long level) {
  if (ac.iota_zero) return {level, level};
  return {std::max(0L, level + std::min(0L, ac.v)), std::max(level, -ac.v)};
}

inline void check_lattice_input(const DRWForm& x, int level) {
  if (level < 1 || level > x.ring().precision())
    throw PreconditionError("level must satisfy 1 <= level <= ring precision");
  for (const auto& [k, c] : x.terms())
    for (const auto& e : k.exps)
      if (e.k > x.ring().exponent_cap())
        throw PreconditionError("exponent denominator exceeds p^(a-1)");
  if (!is_in_E(x)) throw PreconditionError("form is not in E");
}

}  // namespace detail

/// Membership in Fil^level E = V^level E + d V^level E.
inline bool fil_membership(const DRWForm& x, int level) {
  detail::check_lattice_input(x, level);
  const u64 p = x.prime();
  for (const auto& piece : detail::split_by_grade(x)) {
    auto ac = detail::adapt(piece, p);
    auto ex = detail::fil_exponents(ac, level);
    for (const auto& [b, c] : ac.alpha)
      if (!detail::divisible(c, p, ex.alpha)) return false;
    for (const auto& [b, c] : ac.beta)
      if (!detail::divisible(c, p, ex.beta)) return false;
  }
  return true;
}

/// Canonical representative of x + Fil^level in W_level Omega.
inline DRWForm wa_normal_form(const DRWForm& x, int level) {
  detail::check_lattice_input(x, level);
  const u64 p = x.prime();
  DRWForm out(x.ring_ptr(), x.degree());
  for (const auto& piece : detail::split_by_grade(x)) {
    auto ac = detail::adapt(piece, p);
    auto ex = detail::fil_exponents(ac, level);
    for (const auto& [rest, a] : ac.alpha) {
      mpq_class r(detail::residue(a, p, ex.alpha));
      if (sgn(r) == 0) continue;
      for (std::size_t k = 0; k < ac.iota.size(); ++k) {
        if (sgn(ac.iota[k]) == 0) continue;
        Block bit = Block{1} << k;
        int sign = block_merge_sign(bit, rest);
        if (sign == 0) continue;
        out.add_term(sign * ac.iota[k] * r, piece.exps, rest | bit);
      }
    }
    for (const auto& [block, b] : ac.beta) out.add_term(mpq_class(detail::residue(b, p, ex.beta)), piece.exps, block);
  }
  return out;
}

}  // namespace drwkz::witt
