#pragma once

#include <cstdint>
#include <random>

#include <gmpxx.h>

namespace drwkz {

/// Seeded generator with platform-independent bounded draws, so a seed
/// reproduces the same samples everywhere.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform integer in [lo, hi].
  long long uniform(long long lo, long long hi) {
    const auto span = static_cast<std::uint64_t>(hi - lo) + 1;
    return lo + static_cast<long long>(engine_() % span);
  }

  bool coin() { return engine_() & 1; }

  /// Random rational with numerator in [-num_bound, num_bound] and
  /// denominator in [1, den_bound]; never zero when nonzero is set.
  mpq_class rational(long num_bound, long den_bound, bool nonzero = true) {
    for (;;) {
      long n = static_cast<long>(uniform(-num_bound, num_bound));
      long d = static_cast<long>(uniform(1, den_bound));
      if (nonzero && n == 0) continue;
      mpq_class q(n, d);
      q.canonicalize();
      return q;
    }
  }

  std::mt19937_64& engine() { return engine_; }

 private:
  std::mt19937_64 engine_;
};

}  // namespace drwkz
