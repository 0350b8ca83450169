#pragma once

// De Rham-Witt forms: finite sums c * atom^I * dlog(atom_B) with exact
// coefficients in Z[1/p], and the operators F, V, d.

#include <bit>
#include <cstdint>
#include <map>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <gmpxx.h>

#include "drwkz/errors.hpp"
#include "drwkz/padic.hpp"
#include "drwkz/witt/ring.hpp"

namespace drwkz::witt {

using Block = std::uint32_t;  // bitmask over atom indices

/// Exponent vector (one entry per ring atom) together with a dlog block.
struct TermKey {
  std::vector<FracExponent> exps;
  Block block = 0;

  auto operator<=>(const TermKey&) const = default;
};

/// Sign of dlog_A ∧ dlog_B relative to dlog_{A∪B}; 0 if A and B overlap.
inline int block_merge_sign(Block a, Block b) {
  if (a & b) return 0;
  int inversions = 0;
  for (Block rest = b; rest; rest &= rest - 1) {
    int j = std::countr_zero(rest);
    Block above = a & ~((Block{2} << j) - 1);
    inversions += std::popcount(above);
  }
  return inversions % 2 ? -1 : 1;
}

class DRWForm {
 public:
  using Terms = std::map<TermKey, mpq_class>;

  DRWForm(RingPtr ring, int degree) : ring_(std::move(ring)), degree_(degree) {
    if (!ring_) throw PreconditionError("DRWForm: null ring");
    if (degree_ < 0 || degree_ > static_cast<int>(ring_->size()))
      throw PreconditionError("DRWForm: degree out of range");
  }

  static DRWForm constant(RingPtr ring, const mpq_class& c) {
    DRWForm f(ring, 0);
    f.add_term(c, std::vector<FracExponent>(ring->size()), 0);
    return f;
  }

  /// c * prod atom^exps * dlog(block atoms, in ring order).
  static DRWForm monomial(RingPtr ring, const mpq_class& c, std::vector<FracExponent> exps,
                          const std::vector<Atom>& block_atoms = {}) {
    Block block = 0;
    for (const auto& a : block_atoms) {
      Block bit = Block{1} << ring->index_of(a);
      if (block & bit) return DRWForm(ring, static_cast<int>(block_atoms.size()));
      block |= bit;
    }
    int sign = 1;
    // sign of sorting the given block order into ring order
    for (std::size_t i = 0; i < block_atoms.size(); ++i)
      for (std::size_t j = i + 1; j < block_atoms.size(); ++j)
        if (ring->index_of(block_atoms[i]) > ring->index_of(block_atoms[j])) sign = -sign;
    DRWForm f(ring, static_cast<int>(block_atoms.size()));
    f.add_term(sign * c, std::move(exps), block);
    return f;
  }

  const RingSpec& ring() const { return *ring_; }
  const RingPtr& ring_ptr() const { return ring_; }
  int degree() const { return degree_; }
  const Terms& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  u64 prime() const { return ring_->prime(); }

  /// Adds c * atom^exps * dlog_block, validating the exponent constraints.
  void add_term(const mpq_class& c, std::vector<FracExponent> exps, Block block) {
    if (exps.size() != ring_->size()) throw PreconditionError("DRWForm: exponent vector has wrong length");
    if (std::popcount(block) != degree_) throw PreconditionError("DRWForm: block size differs from degree");
    if (ring_->size() < 32 && (block >> ring_->size()) != 0) throw PreconditionError("DRWForm: block outside atom list");
    for (std::size_t i = 0; i < exps.size(); ++i) {
      exps[i].canonicalize(prime());
      if (exps[i].num < 0 && !(*ring_)[i].invertible)
        throw DomainError("DRWForm: negative exponent on non-invertible atom " + (*ring_)[i].atom.name());
    }
    if (sgn(c) == 0) return;
    TermKey key{std::move(exps), block};
    auto [it, inserted] = terms_.try_emplace(std::move(key), c);
    if (!inserted) {
      it->second += c;
      if (sgn(it->second) == 0) terms_.erase(it);
    }
  }

  DRWForm& operator+=(const DRWForm& o) {
    check_compatible(o);
    if (o.degree_ != degree_) throw PreconditionError("DRWForm: adding forms of different degree");
    for (const auto& [k, c] : o.terms_) add_term(c, k.exps, k.block);
    return *this;
  }

  friend DRWForm operator+(DRWForm a, const DRWForm& b) { return a += b; }
  friend DRWForm operator-(const DRWForm& a) { return a * mpq_class(-1); }
  friend DRWForm operator-(DRWForm a, const DRWForm& b) { return a += -b; }

  friend DRWForm operator*(const DRWForm& a, const mpq_class& s) {
    DRWForm r(a.ring_, a.degree_);
    if (sgn(s) == 0) return r;
    for (const auto& [k, c] : a.terms_) r.terms_.emplace(k, c * s);
    return r;
  }
  friend DRWForm operator*(const DRWForm& a, const mpz_class& s) { return a * mpq_class(s); }

  /// Wedge product; dlog blocks with a repeated atom vanish.
  friend DRWForm operator*(const DRWForm& a, const DRWForm& b) {
    a.check_compatible(b);
    const u64 p = a.prime();
    DRWForm r(a.ring_, a.degree_ + b.degree_);
    for (const auto& [ka, ca] : a.terms_) {
      for (const auto& [kb, cb] : b.terms_) {
        int sign = block_merge_sign(ka.block, kb.block);
        if (sign == 0) continue;
        std::vector<FracExponent> e(ka.exps.size());
        for (std::size_t i = 0; i < e.size(); ++i) e[i] = FracExponent::add(ka.exps[i], kb.exps[i], p);
        r.add_term(sign * ca * cb, std::move(e), ka.block | kb.block);
      }
    }
    return r;
  }

  friend bool operator==(const DRWForm& a, const DRWForm& b) {
    return *a.ring_ == *b.ring_ && a.degree_ == b.degree_ && a.terms_ == b.terms_;
  }

  std::string to_string() const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [k, c] : terms_) {
      if (!first) os << " + ";
      first = false;
      os << "(" << c.get_str() << ")";
      for (std::size_t i = 0; i < k.exps.size(); ++i)
        if (k.exps[i].num != 0) os << "*" << (*ring_)[i].atom.name() << "^(" << k.exps[i].to_string(prime()) << ")";
      for (std::size_t i = 0; i < ring_->size(); ++i)
        if (k.block & (Block{1} << i)) os << " dlog(" << (*ring_)[i].atom.name() << ")";
    }
    return os.str();
  }

 private:
  void check_compatible(const DRWForm& o) const {
    if (ring_ != o.ring_ && !(*ring_ == *o.ring_)) throw PreconditionError("DRWForm: forms over different rings");
  }

  RingPtr ring_;
  int degree_;
  Terms terms_;
};

/// d(c t^I dlog_B) = c * sum_{k not in B} i_k t^I dlog_k ∧ dlog_B.
inline DRWForm differential(const DRWForm& x) {
  const u64 p = x.prime();
  // top-degree forms are closed; the zero result keeps the input degree
  if (x.degree() == static_cast<int>(x.ring().size())) return DRWForm(x.ring_ptr(), x.degree());
  DRWForm r(x.ring_ptr(), x.degree() + 1);
  for (const auto& [k, c] : x.terms()) {
    for (std::size_t i = 0; i < k.exps.size(); ++i) {
      Block bit = Block{1} << i;
      if ((k.block & bit) || k.exps[i].num == 0) continue;
      int sign = block_merge_sign(bit, k.block);
      r.add_term(sign * c * k.exps[i].value(p), k.exps, k.block | bit);
    }
  }
  return r;
}

/// F: atom^e -> atom^{pe}; dlog blocks are fixed.
inline DRWForm frobenius(const DRWForm& x) {
  const u64 p = x.prime();
  DRWForm r(x.ring_ptr(), x.degree());
  for (const auto& [k, c] : x.terms()) {
    auto e = k.exps;
    for (auto& ei : e) ei = ei.times_p(p);
    r.add_term(c, std::move(e), k.block);
  }
  return r;
}

/// V = p F^{-1}: coefficient times p, exponents divided by p.
inline DRWForm verschiebung(const DRWForm& x) {
  const u64 p = x.prime();
  DRWForm r(x.ring_ptr(), x.degree());
  for (const auto& [k, c] : x.terms()) {
    auto e = k.exps;
    for (auto& ei : e) ei = ei.divided_by_p(p);
    r.add_term(c * static_cast<unsigned long>(p), std::move(e), k.block);
  }
  return r;
}

inline DRWForm iterate(DRWForm (*op)(const DRWForm&), DRWForm x, int times) {
  for (int i = 0; i < times; ++i) x = op(x);
  return x;
}

/// Teichmüller lift of scalar * prod atom^e (integer exponents).
inline DRWForm teichmuller(RingPtr ring, const std::vector<long long>& exponents, u64 scalar) {
  if (exponents.size() != ring->size()) throw PreconditionError("teichmuller: exponent vector has wrong length");
  std::vector<FracExponent> exps;
  for (long long e : exponents) exps.push_back(FracExponent{e, 0});
  PadicScalar lift = teichmuller_lift(scalar, ring->prime(), ring->precision());
  return DRWForm::monomial(ring, mpq_class(static_cast<unsigned long>(lift.value())), std::move(exps));
}

/// Same, with exponents given as fractional exponents; rejects non-integers.
inline DRWForm teichmuller(RingPtr ring, const std::vector<FracExponent>& exponents, u64 scalar) {
  std::vector<long long> ints;
  for (const auto& e : exponents) {
    if (!e.is_integral()) throw DomainError("teichmuller: exponent is not an integer");
    ints.push_back(e.num);
  }
  return teichmuller(std::move(ring), ints, scalar);
}

/// The closed, F-fixed 1-form dlog(atom) of an invertible atom.
inline DRWForm dlog_atom(RingPtr ring, const Atom& atom) {
  std::size_t i = ring->index_of(atom);
  if (!(*ring)[i].invertible) throw DomainError("dlog_atom: atom " + atom.name() + " is not invertible");
  return DRWForm::monomial(ring, 1, std::vector<FracExponent>(ring->size()), {atom});
}

/// Reduces integral coefficients modulo p^a into [0, p^a).
inline DRWForm reduce_coefficients(const DRWForm& x, int precision) {
  mpz_class m;
  mpz_ui_pow_ui(m.get_mpz_t(), static_cast<unsigned long>(x.prime()), static_cast<unsigned long>(precision));
  DRWForm r(x.ring_ptr(), x.degree());
  for (const auto& [k, c] : x.terms()) {
    if (c.get_den() != 1) throw DomainError("reduce_coefficients: non-integral coefficient");
    mpz_class v = c.get_num() % m;
    if (v < 0) v += m;
    r.add_term(mpq_class(v), k.exps, k.block);
  }
  return r;
}

}  // namespace drwkz::witt
