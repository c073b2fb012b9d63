#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "aras/dense.hpp"

namespace aras {

struct SvdFactors {
  DenseMatrix left;            // n x k, orthonormal columns
  Vec singular_values;         // length k, non-increasing, >= 0
  DenseMatrix right;           // m x k, orthonormal columns
};

namespace detail {

// Economy SVD of X (rows >= cols assumed) by one-sided Jacobi:
// rotate column pairs of B = X V until all pairs are numerically orthogonal.
inline SvdFactors jacobi_svd_tall(const DenseMatrix& X) {
  const std::size_t m = X.rows(), n = X.cols();
  DenseMatrix B = X;
  DenseMatrix V = DenseMatrix::identity(n);
  const double eps = 1e-15;
  const int max_sweeps = 60;
  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    bool rotated = false;
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        double app = 0.0, aqq = 0.0, apq = 0.0;
        for (std::size_t i = 0; i < m; ++i) {
          const double bp = B(i, p), bq = B(i, q);
          app += bp * bp;
          aqq += bq * bq;
          apq += bp * bq;
        }
        if (std::abs(apq) <= eps * std::sqrt(app * aqq)) continue;
        rotated = true;
        const double tau = (aqq - app) / (2.0 * apq);
        const double t = (tau >= 0 ? 1.0 : -1.0) /
                         (std::abs(tau) + std::sqrt(1.0 + tau * tau));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = c * t;
        for (std::size_t i = 0; i < m; ++i) {
          const double bp = B(i, p), bq = B(i, q);
          B(i, p) = c * bp - s * bq;
          B(i, q) = s * bp + c * bq;
        }
        for (std::size_t i = 0; i < n; ++i) {
          const double vp = V(i, p), vq = V(i, q);
          V(i, p) = c * vp - s * vq;
          V(i, q) = s * vp + c * vq;
        }
      }
    }
    if (!rotated) break;
  }

  Vec sigma(n);
  for (std::size_t j = 0; j < n; ++j) {
    double s = 0.0;
    for (std::size_t i = 0; i < m; ++i) s += B(i, j) * B(i, j);
    sigma[j] = std::sqrt(s);
  }
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return sigma[a] > sigma[b]; });

  SvdFactors f;
  f.left = DenseMatrix(m, n);
  f.right = DenseMatrix(n, n);
  f.singular_values.resize(n);
  const double smax = sigma.empty() ? 0.0 : sigma[order[0]];
  for (std::size_t jj = 0; jj < n; ++jj) {
    const std::size_t j = order[jj];
    f.singular_values[jj] = sigma[j];
    for (std::size_t i = 0; i < n; ++i) f.right(i, jj) = V(i, j);
    if (sigma[j] > smax * 1e-14 && sigma[j] > 0.0) {
      for (std::size_t i = 0; i < m; ++i) f.left(i, jj) = B(i, j) / sigma[j];
    }
  }
  // Orthonormal completion for (numerically) zero singular directions, so the
  // left factor always has orthonormal columns.
  for (std::size_t jj = 0; jj < n; ++jj) {
    const std::size_t j = order[jj];
    if (sigma[j] > smax * 1e-14 && sigma[j] > 0.0) continue;
    Vec v(m, 0.0);
    for (std::size_t trial = 0; trial < m; ++trial) {
      v.assign(m, 0.0);
      v[trial] = 1.0;
      for (int pass = 0; pass < 2; ++pass)
        for (std::size_t k = 0; k < n; ++k) {
          if (k == jj) continue;
          double r = 0.0;
          for (std::size_t i = 0; i < m; ++i) r += f.left(i, k) * v[i];
          for (std::size_t i = 0; i < m; ++i) v[i] -= r * f.left(i, k);
        }
      const double nrm = norm2(v);
      if (nrm > 0.5) { scale(v, 1.0 / nrm); break; }
    }
    for (std::size_t i = 0; i < m; ++i) f.left(i, jj) = v[i];
  }
  return f;
}

}  // namespace detail

inline SvdFactors dense_svd(const DenseMatrix& X) {
  for (std::size_t i = 0; i < X.rows(); ++i)
    for (std::size_t j = 0; j < X.cols(); ++j)
      if (!std::isfinite(X(i, j)))
        throw std::invalid_argument("dense_svd: non-finite input entry");
  if (X.rows() >= X.cols()) return detail::jacobi_svd_tall(X);
  SvdFactors f = detail::jacobi_svd_tall(X.transpose());
  std::swap(f.left, f.right);
  return f;
}

}  // namespace aras
