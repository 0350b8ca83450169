#pragma once

// Atoms, fractional exponents and ring descriptors for the fractional-exponent
// rings C = U_r Q_p[atom^{±1/p^r}].

#include <algorithm>
#include <charconv>
#include <compare>
#include <cstdint>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include <gmpxx.h>

#include "drwkz/errors.hpp"
#include "drwkz/padic.hpp"

namespace drwkz::witt {

enum class AtomKind : std::uint8_t { t = 0, z = 1, t_minus_t = 2, t_minus_z = 3, z_minus_z = 4 };

/// A generator of the ring: a coordinate t_i / z_b or a shifted difference.
/// Atoms are ordered lexicographically on (kind, indices).
struct Atom {
  AtomKind kind = AtomKind::t;
  int first = 1;
  int second = 0;

  static Atom t(int i) { return {AtomKind::t, i, 0}; }
  static Atom z(int b) { return {AtomKind::z, b, 0}; }
  static Atom t_minus_z(int i, int b) { return {AtomKind::t_minus_z, i, b}; }
  static Atom t_minus_t(int i, int j) { return {AtomKind::t_minus_t, i, j}; }
  static Atom z_minus_z(int b, int c) { return {AtomKind::z_minus_z, b, c}; }

  auto operator<=>(const Atom&) const = default;

  std::string name() const {
    switch (kind) {
      case AtomKind::t: return "t" + std::to_string(first);
      case AtomKind::z: return "z" + std::to_string(first);
      case AtomKind::t_minus_t: return "t" + std::to_string(first) + "-t" + std::to_string(second);
      case AtomKind::t_minus_z: return "t" + std::to_string(first) + "-z" + std::to_string(second);
      case AtomKind::z_minus_z: return "z" + std::to_string(first) + "-z" + std::to_string(second);
    }
    return {};
  }

  /// Parses "t3", "z1", "t1-z2", "t1-t2", "z1-z2".
  static Atom parse(std::string_view s) {
    auto coordinate = [&](std::string_view part, char& letter) {
      if (part.size() < 2 || (part[0] != 't' && part[0] != 'z'))
        throw ParseError("bad atom '" + std::string(s) + "'");
      letter = part[0];
      int idx = 0;
      auto [ptr, ec] = std::from_chars(part.data() + 1, part.data() + part.size(), idx);
      if (ec != std::errc() || ptr != part.data() + part.size() || idx < 1)
        throw ParseError("bad atom index in '" + std::string(s) + "'");
      return idx;
    };
    auto dash = s.find('-');
    char a = 0, b = 0;
    if (dash == std::string_view::npos) {
      int i = coordinate(s, a);
      return a == 't' ? Atom::t(i) : Atom::z(i);
    }
    int i = coordinate(s.substr(0, dash), a);
    int j = coordinate(s.substr(dash + 1), b);
    if (a == 't' && b == 'z') return Atom::t_minus_z(i, j);
    if (a == 't' && b == 't' && i < j) return Atom::t_minus_t(i, j);
    if (a == 'z' && b == 'z' && i < j) return Atom::z_minus_z(i, j);
    throw ParseError("atom '" + std::string(s) + "' is not in canonical orientation");
  }
};

/// Exponent num / p^k in Z[1/p]; canonical when k > 0 implies p does not
/// divide num. In canonical form d(e) = k.
struct FracExponent {
  long long num = 0;
  int k = 0;

  static FracExponent make(long long num, int k, u64 p) {
    FracExponent e{num, k};
    e.canonicalize(p);
    return e;
  }

  void canonicalize(u64 p) {
    const auto pp = static_cast<long long>(p);
    if (num == 0) {
      k = 0;
      return;
    }
    while (k > 0 && num % pp == 0) {
      num /= pp;
      --k;
    }
    while (k < 0) {
      num *= pp;
      ++k;
    }
  }

  mpq_class value(u64 p) const {
    mpz_class den;
    mpz_ui_pow_ui(den.get_mpz_t(), static_cast<unsigned long>(p), static_cast<unsigned long>(k));
    mpq_class q(mpz_class(static_cast<long>(num)), den);
    q.canonicalize();
    return q;
  }

  FracExponent times_p(u64 p) const { return make(num, k - 1, p); }
  FracExponent divided_by_p(u64 p) const { return make(num, k + 1, p); }

  static FracExponent add(const FracExponent& a, const FracExponent& b, u64 p) {
    int k = std::max(a.k, b.k);
    long long na = a.num, nb = b.num;
    for (int i = a.k; i < k; ++i) na *= static_cast<long long>(p);
    for (int i = b.k; i < k; ++i) nb *= static_cast<long long>(p);
    return make(na + nb, k, p);
  }

  bool is_integral() const { return k == 0; }

  auto operator<=>(const FracExponent&) const = default;

  /// "num" or "num/p^k" with the prime written out, e.g. "3/5^2".
  std::string to_string(u64 p) const {
    if (k == 0) return std::to_string(num);
    return std::to_string(num) + "/" + std::to_string(p) + "^" + std::to_string(k);
  }

  static FracExponent parse(std::string_view s, u64 p) {
    auto parse_int = [&](std::string_view part) {
      long long v = 0;
      auto [ptr, ec] = std::from_chars(part.data(), part.data() + part.size(), v);
      if (ec != std::errc() || ptr != part.data() + part.size())
        throw ParseError("bad exponent '" + std::string(s) + "'");
      return v;
    };
    auto slash = s.find('/');
    if (slash == std::string_view::npos) return make(parse_int(s), 0, p);
    long long num = parse_int(s.substr(0, slash));
    auto den = s.substr(slash + 1);
    auto caret = den.find('^');
    if (caret == std::string_view::npos) {
      // plain denominator, must be a power of p
      long long d = parse_int(den);
      int k = 0;
      while (d > 1 && d % static_cast<long long>(p) == 0) {
        d /= static_cast<long long>(p);
        ++k;
      }
      if (d != 1) throw ParseError("exponent denominator is not a power of p: '" + std::string(s) + "'");
      return make(num, k, p);
    }
    if (parse_int(den.substr(0, caret)) != static_cast<long long>(p))
      throw ParseError("exponent base differs from the ring prime: '" + std::string(s) + "'");
    return make(num, static_cast<int>(parse_int(den.substr(caret + 1))), p);
  }
};

struct AtomSpec {
  Atom atom;
  bool invertible = false;
};

/// Ambient ring: prime, working precision and the sorted atom list.
/// Non-invertible atoms only carry exponents in N[1/p].
class RingSpec {
 public:
  RingSpec(u64 p, int precision, std::vector<AtomSpec> atoms) : p_(p), precision_(precision), atoms_(std::move(atoms)) {
    if (!is_prime(p)) throw PreconditionError("RingSpec: p must be prime");
    if (precision < 1) throw PreconditionError("RingSpec: precision must be >= 1");
    if (atoms_.size() > 31) throw ResourceError("RingSpec: at most 31 atoms");
    std::sort(atoms_.begin(), atoms_.end(), [](const AtomSpec& a, const AtomSpec& b) { return a.atom < b.atom; });
    for (std::size_t i = 1; i < atoms_.size(); ++i)
      if (atoms_[i].atom == atoms_[i - 1].atom) throw PreconditionError("RingSpec: duplicate atom " + atoms_[i].atom.name());
  }

  u64 prime() const { return p_; }
  int precision() const { return precision_; }
  std::size_t size() const { return atoms_.size(); }
  const std::vector<AtomSpec>& atoms() const { return atoms_; }
  const AtomSpec& operator[](std::size_t i) const { return atoms_[i]; }

  /// Largest admissible denominator exponent for lattice computations.
  int exponent_cap() const { return precision_ - 1; }

  std::size_t index_of(const Atom& a) const {
    for (std::size_t i = 0; i < atoms_.size(); ++i)
      if (atoms_[i].atom == a) return i;
    throw DomainError("atom " + a.name() + " is not declared in the ring");
  }

  bool operator==(const RingSpec& o) const {
    if (p_ != o.p_ || precision_ != o.precision_ || atoms_.size() != o.atoms_.size()) return false;
    for (std::size_t i = 0; i < atoms_.size(); ++i)
      if (atoms_[i].atom != o.atoms_[i].atom || atoms_[i].invertible != o.atoms_[i].invertible) return false;
    return true;
  }

 private:
  u64 p_;
  int precision_;
  std::vector<AtomSpec> atoms_;
};

using RingPtr = std::shared_ptr<const RingSpec>;

inline RingPtr make_ring(u64 p, int precision, std::vector<AtomSpec> atoms) {
  return std::make_shared<const RingSpec>(p, precision, std::move(atoms));
}

/// Polynomial ring in t_1..t_n.
inline RingPtr polynomial_ring(u64 p, int precision, int n) {
  std::vector<AtomSpec> atoms;
  for (int i = 1; i <= n; ++i) atoms.push_back({Atom::t(i), false});
  return make_ring(p, precision, std::move(atoms));
}

/// Laurent ring in t_1..t_n with t_i invertible for i in `invertible`.
inline RingPtr laurent_ring(u64 p, int precision, int n, const std::vector<int>& invertible) {
  std::vector<AtomSpec> atoms;
  for (int i = 1; i <= n; ++i)
    atoms.push_back({Atom::t(i), std::find(invertible.begin(), invertible.end(), i) != invertible.end()});
  return make_ring(p, precision, std::move(atoms));
}

}  // namespace drwkz::witt
