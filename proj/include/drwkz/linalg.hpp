#pragma once

// Exact linear algebra over Q and F_p on sparse vectors.

#include <cstddef>
#include <map>
#include <vector>

#include <gmpxx.h>

#include "drwkz/errors.hpp"
#include "drwkz/padic.hpp"

namespace drwkz::linalg {

using SparseVec = std::map<std::size_t, mpq_class>;

inline void axpy(SparseVec& y, const mpq_class& a, const SparseVec& x) {
  for (const auto& [i, c] : x) {
    auto [it, fresh] = y.try_emplace(i, 0);
    it->second += a * c;
    if (sgn(it->second) == 0) y.erase(it);
  }
}

/// Incremental reduced row echelon form. The pivot of a row is its largest
/// column, so the columns left free are the small ones.
class Echelon {
 public:
  /// Remainder of v modulo the span of the rows; supported on free columns.
  SparseVec reduce(SparseVec v) const {
    auto it = v.end();
    while (it != v.begin()) {
      --it;
      auto row = rows_.find(it->first);
      if (row == rows_.end()) continue;
      const mpq_class a = -it->second;
      const std::size_t col = it->first;
      axpy(v, a, row->second);
      // entries at or above col are settled; resume just below it
      it = v.lower_bound(col);
    }
    return v;
  }

  /// Adds v to the span; returns false when v was already in it.
  bool insert(const SparseVec& v) {
    SparseVec r = reduce(v);
    if (r.empty()) return false;
    auto top = std::prev(r.end());
    const std::size_t pivot = top->first;
    const mpq_class inv = 1 / top->second;
    for (auto& [i, c] : r) c *= inv;
    // keep the form reduced: clear the new pivot column from other rows
    for (auto& [p, row] : rows_) {
      auto hit = row.find(pivot);
      if (hit == row.end()) continue;
      const mpq_class a = -hit->second;
      axpy(row, a, r);
    }
    rows_.emplace(pivot, std::move(r));
    return true;
  }

  std::size_t rank() const { return rows_.size(); }
  bool is_pivot(std::size_t col) const { return rows_.count(col) != 0; }
  const std::map<std::size_t, SparseVec>& rows() const { return rows_; }

 private:
  std::map<std::size_t, SparseVec> rows_;
};

inline std::size_t rank(const std::vector<SparseVec>& vectors) {
  Echelon e;
  for (const auto& v : vectors) e.insert(v);
  return e.rank();
}

/// Rank of a dense rational matrix.
inline std::size_t rank(const std::vector<std::vector<mpq_class>>& rows) {
  std::vector<SparseVec> vs;
  for (const auto& r : rows) {
    SparseVec v;
    for (std::size_t j = 0; j < r.size(); ++j)
      if (sgn(r[j]) != 0) v.emplace(j, r[j]);
    vs.push_back(std::move(v));
  }
  return rank(vs);
}

/// Rank over F_p of an integer matrix.
inline std::size_t rank_mod_p(std::vector<std::vector<long long>> rows, u64 p) {
  if (!is_prime(p)) throw PreconditionError("rank_mod_p: modulus is not prime");
  const auto P = static_cast<long long>(p);
  for (auto& r : rows)
    for (auto& x : r) x = ((x % P) + P) % P;
  std::size_t rank = 0;
  const std::size_t cols = rows.empty() ? 0 : rows[0].size();
  for (std::size_t c = 0; c < cols && rank < rows.size(); ++c) {
    std::size_t piv = rank;
    while (piv < rows.size() && rows[piv][c] == 0) ++piv;
    if (piv == rows.size()) continue;
    std::swap(rows[piv], rows[rank]);
    const auto inv = static_cast<long long>(invert_unit(PadicScalar(p, 1, rows[rank][c])).value());
    for (auto& x : rows[rank]) x = static_cast<long long>((static_cast<__int128>(x) * inv) % P);
    for (std::size_t r = 0; r < rows.size(); ++r) {
      if (r == rank || rows[r][c] == 0) continue;
      const long long a = rows[r][c];
      for (std::size_t j = 0; j < cols; ++j)
        rows[r][j] = static_cast<long long>(((rows[r][j] - static_cast<__int128>(a) * rows[rank][j]) % P + P) % P);
    }
    ++rank;
  }
  return rank;
}

/// Matrix (rows x cols) acting on column vectors, stored densely.
using Matrix = std::vector<std::vector<mpq_class>>;

inline Matrix multiply(const Matrix& a, const Matrix& b) {
  if (a.empty() || b.empty()) return {};
  const std::size_t inner = b.size(), cols = b[0].size();
  Matrix r(a.size(), std::vector<mpq_class>(cols));
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t k = 0; k < inner; ++k) {
      if (sgn(a[i][k]) == 0) continue;
      for (std::size_t j = 0; j < cols; ++j) r[i][j] += a[i][k] * b[k][j];
    }
  return r;
}

inline bool is_zero(const Matrix& m) {
  for (const auto& r : m)
    for (const auto& x : r)
      if (sgn(x) != 0) return false;
  return true;
}

}  // namespace drwkz::linalg
