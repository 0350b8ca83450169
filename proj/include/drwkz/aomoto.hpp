#pragma once

// The Orlik-Solomon algebra with differential omega ∧ -, omega the weighted
// sum of the generators.

#include <memory>
#include <optional>
#include <vector>

#include <gmpxx.h>

#include "drwkz/arrangement.hpp"
#include "drwkz/errors.hpp"
#include "drwkz/linalg.hpp"
#include "drwkz/padic.hpp"

namespace drwkz::aomoto {

using arrangement::OSAlgebra;
using arrangement::OSElement;
using Weights = std::vector<mpq_class>;

class AomotoComplex {
 public:
  AomotoComplex(std::shared_ptr<const OSAlgebra> os, Weights weights) : os_(std::move(os)), weights_(std::move(weights)) {
    if (weights_.size() != os_->num_hyperplanes()) throw PreconditionError("Aomoto: one weight per hyperplane expected");
    OSElement omega{1, {}};
    for (std::size_t i = 0; i < weights_.size(); ++i) omega.add({static_cast<int>(i)}, weights_[i]);
    for (int k = 0; k < os_->top_degree(); ++k) {
      const auto& src = os_->basis(k);
      linalg::Matrix m(os_->dim(k + 1), std::vector<mpq_class>(src.size()));
      for (std::size_t j = 0; j < src.size(); ++j) {
        auto image = os_->coordinates(omega * OSElement{k, {{src[j], 1}}});
        for (std::size_t i = 0; i < image.size(); ++i) m[i][j] = image[i];
      }
      matrices_.push_back(std::move(m));
    }
  }

  const OSAlgebra& os() const { return *os_; }
  const Weights& weights() const { return weights_; }
  int top_degree() const { return os_->top_degree(); }

  /// Matrix of omega ∧ - from degree k to k + 1.
  const linalg::Matrix& matrix(int k) const { return matrices_.at(static_cast<std::size_t>(k)); }

  std::size_t rank(int k) const {
    if (k < 0 || k >= static_cast<int>(matrices_.size())) return 0;
    return linalg::rank(matrices_[static_cast<std::size_t>(k)]);
  }

  /// Consecutive differentials compose to zero.
  bool squares_to_zero() const {
    for (std::size_t k = 0; k + 1 < matrices_.size(); ++k)
      if (!linalg::is_zero(linalg::multiply(matrices_[k + 1], matrices_[k]))) return false;
    return true;
  }

  std::vector<std::size_t> cohomology_dims() const {
    std::vector<std::size_t> d;
    for (int k = 0; k <= top_degree(); ++k) d.push_back(os_->dim(k) - rank(k) - rank(k - 1));
    return d;
  }

  long euler_characteristic() const {
    long e = 0;
    auto d = cohomology_dims();
    for (std::size_t k = 0; k < d.size(); ++k) e += (k % 2 ? -1 : 1) * static_cast<long>(d[k]);
    return e;
  }

 private:
  std::shared_ptr<const OSAlgebra> os_;
  Weights weights_;
  std::vector<linalg::Matrix> matrices_;
};

inline long os_euler_characteristic(const OSAlgebra& os) {
  long e = 0;
  for (int k = 0; k <= os.top_degree(); ++k) e += (k % 2 ? -1 : 1) * static_cast<long>(os.dim(k));
  return e;
}

/// p-adic valuations of the weights; nullopt for a zero weight.
inline std::vector<std::optional<long>> weight_valuations(const Weights& w, u64 p) {
  std::vector<std::optional<long>> v;
  for (const auto& x : w) v.push_back(val_p(x, p));
  return v;
}

/// Weights p * k_i with k_i drawn from [-bound, bound].
template <class Rng>
Weights padic_small_weights(Rng& rng, std::size_t count, u64 p, long bound = 5) {
  Weights w;
  for (std::size_t i = 0; i < count; ++i) w.emplace_back(static_cast<long>(p) * static_cast<long>(rng.uniform(-bound, bound)));
  return w;
}

}  // namespace drwkz::aomoto
