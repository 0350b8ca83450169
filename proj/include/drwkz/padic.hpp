#pragma once

// Truncated p-adic integers Z/p^a and p-adic valuations of rationals.

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>

#include <gmpxx.h>

#include "drwkz/errors.hpp"

namespace drwkz {

using u64 = std::uint64_t;

inline bool is_prime(u64 n) {
  if (n < 2) return false;
  for (u64 d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

/// base^e, throwing ResourceError when the result does not fit in 63 bits.
inline u64 checked_pow(u64 base, int e) {
  u64 r = 1;
  for (int i = 0; i < e; ++i) {
    if (base != 0 && r > (u64{1} << 62) / base)
      throw ResourceError("p^a exceeds 62 bits");
    r *= base;
  }
  return r;
}

/// p-adic valuation of a nonzero rational; std::nullopt encodes the
/// infinite valuation of 0.
inline std::optional<long> val_p(const mpq_class& x, u64 p) {
  if (sgn(x) == 0) return std::nullopt;
  const mpz_class pz(static_cast<unsigned long>(p));
  long v = 0;
  mpz_class num = x.get_num();
  mpz_class den = x.get_den();
  while (mpz_divisible_p(num.get_mpz_t(), pz.get_mpz_t())) {
    num /= pz;
    ++v;
  }
  while (mpz_divisible_p(den.get_mpz_t(), pz.get_mpz_t())) {
    den /= pz;
    --v;
  }
  return v;
}

inline std::optional<long> val_p(long long x, u64 p) { return val_p(mpq_class(static_cast<long>(x)), p); }

/// d(x) = max(0, -v_p(x)): the p-power denominator exponent. d(0) = 0.
inline long denominator_exponent(const mpq_class& x, u64 p) {
  auto v = val_p(x, p);
  return v && *v < 0 ? -*v : 0;
}

/// Residue class in Z/p^a, stored canonically in [0, p^a).
class PadicScalar {
 public:
  PadicScalar(u64 p, int precision, long long value = 0) : p_(p), precision_(precision) {
    if (!is_prime(p)) throw PreconditionError("PadicScalar: p must be prime");
    if (precision < 1) throw PreconditionError("PadicScalar: precision must be >= 1");
    modulus_ = checked_pow(p, precision);
    long long r = value % static_cast<long long>(modulus_);
    if (r < 0) r += static_cast<long long>(modulus_);
    value_ = static_cast<u64>(r);
  }

  PadicScalar(u64 p, int precision, const mpz_class& value) : PadicScalar(p, precision, 0) {
    mpz_class m(static_cast<unsigned long>(modulus_));
    mpz_class r = value % m;
    if (r < 0) r += m;
    value_ = r.get_ui();
  }

  /// Image of a p-integral rational (denominator prime to p).
  static PadicScalar from_rational(u64 p, int precision, const mpq_class& q) {
    auto v = val_p(q, p);
    if (v && *v < 0) throw DomainError("PadicScalar: rational is not p-integral");
    PadicScalar num(p, precision, mpz_class(q.get_num()));
    PadicScalar den(p, precision, mpz_class(q.get_den()));
    return num * invert(den);
  }

  u64 prime() const { return p_; }
  int precision() const { return precision_; }
  u64 modulus() const { return modulus_; }
  u64 value() const { return value_; }
  bool is_zero() const { return value_ == 0; }

  /// Largest v <= a with p^v | value. The zero class reports a, read as ">= a".
  int valuation() const {
    if (value_ == 0) return precision_;
    int v = 0;
    u64 x = value_;
    while (x % p_ == 0) {
      x /= p_;
      ++v;
    }
    return v;
  }

  bool is_unit() const { return value_ % p_ != 0; }

  PadicScalar reduced(int precision) const {
    if (precision > precision_) throw PreconditionError("PadicScalar: cannot raise precision");
    return PadicScalar(p_, precision, static_cast<long long>(value_ % checked_pow(p_, precision)));
  }

  friend PadicScalar operator+(const PadicScalar& a, const PadicScalar& b) {
    auto [x, y] = align(a, b);
    u64 s = x.value_ + y.value_;
    if (s >= x.modulus_) s -= x.modulus_;
    x.value_ = s;
    return x;
  }

  friend PadicScalar operator-(const PadicScalar& a) {
    PadicScalar r = a;
    r.value_ = a.value_ == 0 ? 0 : a.modulus_ - a.value_;
    return r;
  }

  friend PadicScalar operator-(const PadicScalar& a, const PadicScalar& b) { return a + (-b); }

  friend PadicScalar operator*(const PadicScalar& a, const PadicScalar& b) {
    auto [x, y] = align(a, b);
    x.value_ = static_cast<u64>((static_cast<unsigned __int128>(x.value_) * y.value_) % x.modulus_);
    return x;
  }

  friend PadicScalar operator*(const PadicScalar& a, const mpz_class& k) {
    return a * PadicScalar(a.p_, a.precision_, k);
  }

  friend bool operator==(const PadicScalar& a, const PadicScalar& b) {
    return a.p_ == b.p_ && a.precision_ == b.precision_ && a.value_ == b.value_;
  }

  PadicScalar pow(u64 e) const {
    PadicScalar result(p_, precision_, 1);
    PadicScalar base = *this;
    while (e) {
      if (e & 1) result = result * base;
      base = base * base;
      e >>= 1;
    }
    return result;
  }

  std::string to_string() const {
    return std::to_string(value_) + " mod " + std::to_string(p_) + "^" + std::to_string(precision_);
  }

  friend std::ostream& operator<<(std::ostream& os, const PadicScalar& x) { return os << x.to_string(); }

  static PadicScalar invert(const PadicScalar& x);

 private:
  static std::pair<PadicScalar, PadicScalar> align(const PadicScalar& a, const PadicScalar& b) {
    if (a.p_ != b.p_) throw PreconditionError("PadicScalar: mismatched primes");
    if (a.precision_ == b.precision_) return {a, b};
    int prec = std::min(a.precision_, b.precision_);
    return {a.reduced(prec), b.reduced(prec)};
  }

  u64 p_;
  int precision_;
  u64 modulus_ = 1;
  u64 value_ = 0;
};

/// Inverse of a unit of Z/p^a by the extended Euclidean algorithm.
inline PadicScalar invert_unit(const PadicScalar& x) {
  if (!x.is_unit()) throw DomainError("invert_unit: argument is not a unit");
  long long r0 = static_cast<long long>(x.modulus()), r1 = static_cast<long long>(x.value());
  long long s0 = 0, s1 = 1;
  while (r1 != 0) {
    long long q = r0 / r1;
    long long tmp = r0 - q * r1;
    r0 = r1;
    r1 = tmp;
    tmp = s0 - q * s1;
    s0 = s1;
    s1 = tmp;
  }
  return PadicScalar(x.prime(), x.precision(), s0);
}

inline PadicScalar PadicScalar::invert(const PadicScalar& x) { return invert_unit(x); }

/// Teichmüller representative of a nonzero residue mod p, computed by
/// iterated p-th powers (a-1 iterations reach the fixed point).
inline PadicScalar teichmuller_lift(u64 residue, u64 p, int precision) {
  if (residue % p == 0) throw DomainError("teichmuller_lift: residue must be nonzero mod p");
  PadicScalar x(p, precision, static_cast<long long>(residue % p));
  for (int i = 1; i < precision; ++i) x = x.pow(p);
  return x;
}

/// Truncation of (1 - pF)^{-1} x = sum_{i<a} p^i F^i(x).
///
/// Works for any value type T supporting `+` and multiplication by an
/// mpz_class; F must preserve precision.
template <class T, class Endomorphism>
T geometric_resolvent(const Endomorphism& apply_F, const T& x, u64 p, int precision) {
  T acc = x;
  T iterate = x;
  mpz_class weight = 1;
  for (int i = 1; i < precision; ++i) {
    iterate = apply_F(iterate);
    weight *= static_cast<unsigned long>(p);
    acc = acc + iterate * weight;
  }
  return acc;
}

}  // namespace drwkz
