#include <gtest/gtest.h>

#include "drwkz/padic.hpp"
#include "drwkz/random.hpp"

using namespace drwkz;

namespace {

// Brute-force inverse search; independent of the Euclidean implementation.
u64 brute_inverse(u64 x, u64 modulus) {
  for (u64 y = 0; y < modulus; ++y)
    if ((x * y) % modulus == 1) return y;
  return 0;
}

}  // namespace

TEST(ValP, Examples) {
  EXPECT_EQ(val_p(50, 5), 2);
  EXPECT_EQ(val_p(1, 7), 0);
  EXPECT_EQ(val_p(mpq_class(3, 4), 2), -2);
  EXPECT_EQ(val_p(mpq_class(-25, 3), 5), 2);
}

TEST(ValP, ZeroHasInfiniteValuation) { EXPECT_FALSE(val_p(0, 3).has_value()); }

TEST(ValP, DenominatorExponent) {
  EXPECT_EQ(denominator_exponent(mpq_class(1, 25), 5), 2);
  EXPECT_EQ(denominator_exponent(mpq_class(10), 5), 0);
}

TEST(PadicScalar, CanonicalResidueAndValuation) {
  PadicScalar x(5, 3, -1);
  EXPECT_EQ(x.value(), 124u);
  EXPECT_EQ(PadicScalar(5, 3, 50).valuation(), 2);
  EXPECT_EQ(PadicScalar(5, 3, 125).valuation(), 3);  // zero class: ">= a"
  EXPECT_TRUE(PadicScalar(5, 3, 125).is_zero());
}

TEST(PadicScalar, MixedPrecisionReducesToMinimum) {
  PadicScalar a(3, 4, 80), b(3, 2, 1);
  auto s = a + b;
  EXPECT_EQ(s.precision(), 2);
  EXPECT_EQ(s.value(), (80u + 1u) % 9u);
}

TEST(PadicScalar, MismatchedPrimesRejected) {
  EXPECT_THROW(PadicScalar(3, 2, 1) + PadicScalar(5, 2, 1), PreconditionError);
  EXPECT_THROW(PadicScalar(4, 2, 1), PreconditionError);
}

TEST(InvertUnit, Examples) {
  EXPECT_EQ(brute_inverse(2, 25), 13u);
  EXPECT_EQ(invert_unit(PadicScalar(5, 2, 2)).value(), 13u);
  EXPECT_EQ(invert_unit(PadicScalar(7, 3, 1)).value(), 1u);
  EXPECT_EQ(invert_unit(PadicScalar(3, 1, 2)).value(), 2u);
}

TEST(InvertUnit, NonUnitRejected) { EXPECT_THROW(invert_unit(PadicScalar(5, 2, 10)), DomainError); }

TEST(InvertUnit, AgreesWithBruteForceAndIsInvolutive) {
  for (u64 p : {2u, 3u, 5u, 7u}) {
    for (int a = 1; a <= 3; ++a) {
      u64 m = checked_pow(p, a);
      for (u64 x = 1; x < m; ++x) {
        if (x % p == 0) continue;
        PadicScalar s(p, a, static_cast<long long>(x));
        auto inv = invert_unit(s);
        EXPECT_EQ(inv.value(), brute_inverse(x, m));
        EXPECT_EQ(invert_unit(inv), s);
      }
    }
  }
}

TEST(GeometricResolvent, Examples) {
  auto identity = [](const PadicScalar& x) { return x; };
  EXPECT_EQ(geometric_resolvent(identity, PadicScalar(5, 2, 1), 5, 2).value(), 6u);
  EXPECT_EQ(geometric_resolvent(identity, PadicScalar(5, 2, 0), 5, 2).value(), 0u);
  auto times3 = [](const PadicScalar& x) { return x * mpz_class(3); };
  EXPECT_EQ(geometric_resolvent(times3, PadicScalar(7, 1, 11), 7, 1).value(), 4u);
}

TEST(GeometricResolvent, InvertsOneMinusPF) {
  Rng rng(7);
  for (int trial = 0; trial < 200; ++trial) {
    u64 p = std::vector<u64>{2, 3, 5, 7}[static_cast<std::size_t>(rng.uniform(0, 3))];
    int a = static_cast<int>(rng.uniform(1, 5));
    // additive endomorphisms of Z/p^a are multiplications by a constant
    mpz_class c(static_cast<long>(rng.uniform(0, 1000)));
    auto F = [&](const PadicScalar& x) { return x * c; };
    PadicScalar x(p, a, rng.uniform(0, 100000));
    auto r = geometric_resolvent(F, x, p, a);
    auto back = r - F(r) * mpz_class(static_cast<unsigned long>(p));
    EXPECT_EQ(back, x);
  }
}

TEST(PadicScalar, RingAxiomsOnRandomTriples) {
  Rng rng(11);
  for (int trial = 0; trial < 500; ++trial) {
    u64 p = std::vector<u64>{3, 5, 7, 11}[static_cast<std::size_t>(rng.uniform(0, 3))];
    int a = static_cast<int>(rng.uniform(1, 6));
    PadicScalar x(p, a, rng.uniform(-1000000, 1000000));
    PadicScalar y(p, a, rng.uniform(-1000000, 1000000));
    PadicScalar z(p, a, rng.uniform(-1000000, 1000000));
    EXPECT_EQ((x + y) + z, x + (y + z));
    EXPECT_EQ((x * y) * z, x * (y * z));
    EXPECT_EQ(x * (y + z), x * y + x * z);
    EXPECT_EQ(x + y, y + x);
    EXPECT_EQ(x * y, y * x);
    EXPECT_TRUE((x - x).is_zero());
  }
}

TEST(Teichmuller, FixedPointOfPthPower) {
  auto t = teichmuller_lift(2, 5, 2);
  EXPECT_EQ(t.value(), 7u);
  EXPECT_EQ(t.pow(5), t);
  for (u64 p : {3u, 5u, 7u})
    for (int a = 1; a <= 4; ++a)
      for (u64 r = 1; r < p; ++r) {
        auto l = teichmuller_lift(r, p, a);
        EXPECT_EQ(l.pow(p), l);
        EXPECT_EQ(l.value() % p, r);
      }
  EXPECT_THROW(teichmuller_lift(5, 5, 2), DomainError);
}
