#pragma once

#include <cmath>
#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

#include "fpsz/scalar.hpp"

namespace fpsz {

template <class T>
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), data_(rows * cols, Field<T>::zero()) {}

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  T& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const T& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  // Leading k x k block.
  Matrix leading(std::size_t k) const {
    Matrix out(k, k);
    for (std::size_t i = 0; i < k; ++i)
      for (std::size_t j = 0; j < k; ++j) out(i, j) = (*this)(i, j);
    return out;
  }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<T> data_;
};

template <class T>
struct LdlFactor {
  Matrix<T> lower;  // unit lower triangular; rows past the singular index are unset
  std::vector<RealOf<T>> pivots;
  std::optional<std::size_t> singular_at;
  std::optional<RealOf<T>> singular_pivot;  // the rejected pivot

  std::size_t rank() const { return pivots.size(); }
};

// H = L D L^* for Hermitian H, without pivoting. Pivot i is the squared norm
// of the i-th Gram-Schmidt residual. Factorization stops at the first pivot
// that is <= 0, or, for float scalars, <= rel_tol * (largest earlier pivot).
template <class T>
LdlFactor<T> ldl_factor(const Matrix<T>& h, double rel_tol = 1e-12) {
  using F = Field<T>;
  const std::size_t n = h.rows();
  LdlFactor<T> out;
  out.lower = Matrix<T>(n, n);
  out.pivots.reserve(n);
  double largest = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < i; ++j) {
      T s = h(i, j);
      for (std::size_t k = 0; k < j; ++k)
        s -= out.lower(i, k) * real_to_scalar<T>(out.pivots[k]) * F::conj(out.lower(j, k));
      s /= real_to_scalar<T>(out.pivots[j]);
      out.lower(i, j) = std::move(s);
    }
    T d = h(i, i);
    for (std::size_t k = 0; k < i; ++k)
      d -= real_to_scalar<T>(F::norm(out.lower(i, k)) * out.pivots[k]);
    RealOf<T> pivot = F::real(d);
    bool singular = false;
    if constexpr (F::exact) {
      singular = sgn(pivot) <= 0;
    } else {
      singular = !(pivot > 0.0) || (i > 0 && pivot <= rel_tol * largest);
      largest = std::fmax(largest, pivot);
    }
    if (singular) {
      out.singular_at = i;
      out.singular_pivot = std::move(pivot);
      return out;
    }
    out.lower(i, i) = F::one();
    out.pivots.push_back(std::move(pivot));
  }
  return out;
}

// Solves H x = b given a full-rank factor of H.
template <class T>
std::vector<T> ldl_solve(const LdlFactor<T>& f, std::vector<T> b) {
  using F = Field<T>;
  const std::size_t n = b.size();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < i; ++k) b[i] -= f.lower(i, k) * b[k];
  for (std::size_t i = 0; i < n; ++i) b[i] /= real_to_scalar<T>(f.pivots[i]);
  for (std::size_t i = n; i-- > 0;)
    for (std::size_t k = i + 1; k < n; ++k) b[i] -= F::conj(f.lower(k, i)) * b[k];
  return b;
}

// Inverse of the leading n x n unit lower triangular block.
template <class T>
Matrix<T> unit_lower_inverse(const Matrix<T>& lower, std::size_t n) {
  Matrix<T> inv(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    inv(i, i) = Field<T>::one();
    for (std::size_t j = 0; j < i; ++j) {
      T s = Field<T>::zero();
      for (std::size_t k = j; k < i; ++k) s -= lower(i, k) * inv(k, j);
      inv(i, j) = std::move(s);
    }
  }
  return inv;
}

// Determinant by Gaussian elimination with row exchanges; independent of the
// LDL path. Exact scalars take the first nonzero pivot, floats the largest.
template <class T>
T determinant(Matrix<T> a) {
  using F = Field<T>;
  const std::size_t n = a.rows();
  T det = F::one();
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t p = n;
    if constexpr (F::exact) {
      for (std::size_t r = c; r < n; ++r)
        if (!F::is_zero(a(r, c))) {
          p = r;
          break;
        }
    } else {
      double best = 0.0;
      for (std::size_t r = c; r < n; ++r) {
        double mag = std::abs(a(r, c));
        if (mag > best) {
          best = mag;
          p = r;
        }
      }
    }
    if (p == n) return F::zero();
    if (p != c) {
      for (std::size_t j = 0; j < n; ++j) std::swap(a(p, j), a(c, j));
      det = -det;
    }
    det *= a(c, c);
    for (std::size_t r = c + 1; r < n; ++r) {
      if (F::is_zero(a(r, c))) continue;
      T factor = a(r, c) / a(c, c);
      for (std::size_t j = c; j < n; ++j) a(r, j) -= factor * a(c, j);
    }
  }
  return det;
}

// Positive semidefiniteness by symmetric elimination that skips zero pivots
// (admitted only when the rest of their column vanishes).
template <class T>
bool is_psd(Matrix<T> a, double rel_tol = 1e-10) {
  using F = Field<T>;
  const std::size_t n = a.rows();
  double scale = 0.0;
  if constexpr (!F::exact)
    for (std::size_t i = 0; i < n; ++i) scale = std::fmax(scale, std::fabs(F::real(a(i, i))));
  auto near_zero = [&](const T& x) {
    if constexpr (F::exact) {
      return F::is_zero(x);
    } else {
      return std::abs(x) <= rel_tol * std::fmax(scale, 1.0);
    }
  };
  for (std::size_t k = 0; k < n; ++k) {
    RealOf<T> d = F::real(a(k, k));
    if (near_zero(a(k, k))) {
      for (std::size_t r = k + 1; r < n; ++r)
        if (!near_zero(a(r, k))) return false;
      continue;
    }
    if (d < 0) return false;
    for (std::size_t r = k + 1; r < n; ++r) {
      if (F::is_zero(a(r, k))) continue;
      T factor = a(r, k) / a(k, k);
      for (std::size_t j = k; j < n; ++j) a(r, j) -= factor * a(k, j);
    }
  }
  return true;
}

}  // namespace fpsz
