#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "crnbkk/rational.hpp"

/// Dense exact linear algebra over Q and Z for desk-scale problems.
namespace crnbkk::linalg {

using Vec = std::vector<Rational>;
using Mat = std::vector<Vec>;
using IntVec = std::vector<std::int64_t>;

inline Vec to_rational(const IntVec& v) {
  Vec out;
  out.reserve(v.size());
  for (auto x : v) out.emplace_back(static_cast<long>(x));
  return out;
}

inline Rational dot(const Vec& a, const Vec& b) {
  Rational s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

inline Rational dot(const IntVec& a, const Vec& b) {
  Rational s = 0;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i] != 0) s += b[i] * static_cast<long>(a[i]);
  return s;
}

inline std::int64_t dot(const IntVec& a, const IntVec& b) {
  std::int64_t s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

/// In-place reduced row echelon form; returns the pivot column of each
/// nonzero row.
inline std::vector<std::size_t> rref(Mat& m) {
  std::vector<std::size_t> pivots;
  if (m.empty()) return pivots;
  const std::size_t rows = m.size(), cols = m[0].size();
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < rows; ++c) {
    std::size_t p = r;
    while (p < rows && m[p][c] == 0) ++p;
    if (p == rows) continue;
    std::swap(m[p], m[r]);
    const Rational inv = 1 / m[r][c];
    for (std::size_t j = c; j < cols; ++j) m[r][j] *= inv;
    for (std::size_t i = 0; i < rows; ++i) {
      if (i == r || m[i][c] == 0) continue;
      const Rational f = m[i][c];
      for (std::size_t j = c; j < cols; ++j) m[i][j] -= f * m[r][j];
    }
    pivots.push_back(c);
    ++r;
  }
  return pivots;
}

inline std::size_t rank(Mat m) { return rref(m).size(); }

/// Basis of {x : m x = 0}; one vector per free column.
inline Mat kernel(Mat m, std::size_t cols) {
  Mat basis;
  if (m.empty()) {
    for (std::size_t c = 0; c < cols; ++c) {
      Vec e(cols, 0);
      e[c] = 1;
      basis.push_back(std::move(e));
    }
    return basis;
  }
  const auto pivots = rref(m);
  std::vector<bool> is_pivot(cols, false);
  for (auto p : pivots) is_pivot[p] = true;
  for (std::size_t f = 0; f < cols; ++f) {
    if (is_pivot[f]) continue;
    Vec v(cols, 0);
    v[f] = 1;
    for (std::size_t r = 0; r < pivots.size(); ++r) v[pivots[r]] = -m[r][f];
    basis.push_back(std::move(v));
  }
  return basis;
}

/// Unique solution of a x = b, or nullopt when singular or inconsistent.
inline std::optional<Vec> solve(const Mat& a, const Vec& b) {
  const std::size_t n = a.empty() ? 0 : a[0].size();
  Mat aug = a;
  for (std::size_t i = 0; i < aug.size(); ++i) aug[i].push_back(b[i]);
  const auto pivots = rref(aug);
  if (pivots.size() != n) return std::nullopt;
  for (std::size_t i = n; i < aug.size(); ++i)
    if (aug[i][n] != 0) return std::nullopt;
  Vec x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = aug[i][n];
  return x;
}

/// Fraction-free (Bareiss) determinant of a square integer matrix.
inline Integer determinant(std::vector<std::vector<Integer>> m) {
  const std::size_t n = m.size();
  if (n == 0) return 1;
  Integer sign = 1, prev = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (m[k][k] == 0) {
      std::size_t p = k + 1;
      while (p < n && m[p][k] == 0) ++p;
      if (p == n) return 0;
      std::swap(m[p], m[k]);
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      for (std::size_t j = k + 1; j < n; ++j) {
        m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) / prev;
      }
    }
    prev = m[k][k];
  }
  return sign * m[n - 1][n - 1];
}

inline Integer determinant(const std::vector<IntVec>& rows) {
  std::vector<std::vector<Integer>> m;
  for (const auto& r : rows) {
    std::vector<Integer> row;
    for (auto x : r) row.emplace_back(static_cast<long>(x));
    m.push_back(std::move(row));
  }
  return determinant(std::move(m));
}

inline Rational determinant(const Mat& a) {
  Mat m = a;
  const std::size_t n = m.size();
  Rational det = 1;
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t p = c;
    while (p < n && m[p][c] == 0) ++p;
    if (p == n) return 0;
    if (p != c) {
      std::swap(m[p], m[c]);
      det = -det;
    }
    det *= m[c][c];
    for (std::size_t i = c + 1; i < n; ++i) {
      if (m[i][c] == 0) continue;
      const Rational f = m[i][c] / m[c][c];
      for (std::size_t j = c; j < n; ++j) m[i][j] -= f * m[c][j];
    }
  }
  return det;
}

/// Scales a rational vector to the primitive integer vector on the same ray.
inline IntVec primitive(const Vec& v) {
  Integer l = 1;
  for (const auto& x : v)
    if (x != 0) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), x.get_den_mpz_t());
  std::vector<Integer> z;
  Integer g = 0;
  for (const auto& x : v) {
    Integer n = x.get_num() * (l / x.get_den());
    mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), n.get_mpz_t());
    z.push_back(std::move(n));
  }
  IntVec out;
  for (auto& n : z) out.push_back(to_int64(g == 0 ? n : Integer(n / g)));
  return out;
}

/// Product of the Smith invariant factors of an integer matrix of full row
/// rank, i.e. the gcd of its maximal minors. For the edge matrix of a lattice
/// simplex this is the normalized volume relative to the lattice of its
/// affine span.
inline Integer lattice_index(const std::vector<IntVec>& rows_in) {
  std::vector<std::vector<Integer>> m;
  for (const auto& r : rows_in) {
    std::vector<Integer> row;
    for (auto x : r) row.emplace_back(static_cast<long>(x));
    m.push_back(std::move(row));
  }
  const std::size_t rows = m.size();
  if (rows == 0) return 1;
  const std::size_t cols = m[0].size();
  Integer product = 1;
  for (std::size_t t = 0; t < rows; ++t) {
    for (;;) {
      // Smallest nonzero entry in the trailing block becomes the pivot.
      std::size_t pr = rows, pc = cols;
      for (std::size_t i = t; i < rows; ++i)
        for (std::size_t j = t; j < cols; ++j)
          if (m[i][j] != 0 && (pr == rows || abs(m[i][j]) < abs(m[pr][pc]))) pr = i, pc = j;
      if (pr == rows) return 0;
      std::swap(m[t], m[pr]);
      for (auto& row : m) std::swap(row[t], row[pc]);
      bool clean = true;
      for (std::size_t i = t + 1; i < rows; ++i) {
        if (m[i][t] == 0) continue;
        const Integer q = m[i][t] / m[t][t];
        for (std::size_t j = t; j < cols; ++j) m[i][j] -= q * m[t][j];
        if (m[i][t] != 0) clean = false;
      }
      for (std::size_t j = t + 1; j < cols; ++j) {
        if (m[t][j] == 0) continue;
        const Integer q = m[t][j] / m[t][t];
        for (std::size_t i = t; i < rows; ++i) m[i][j] -= q * m[i][t];
        if (m[t][j] != 0) clean = false;
      }
      if (clean) break;
    }
    product *= abs(m[t][t]);
  }
  return product;
}

}  // namespace crnbkk::linalg
