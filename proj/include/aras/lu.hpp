#pragma once

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "aras/dense.hpp"

namespace aras {

// Dense LU factorization with partial pivoting.
class LuFactors {
public:
  LuFactors() = default;

  explicit LuFactors(const DenseMatrix& A) : n_(A.rows()), lu_(A), piv_(A.rows()) {
    if (A.rows() != A.cols()) throw std::invalid_argument("lu_factor: matrix not square");
    for (std::size_t i = 0; i < n_; ++i) piv_[i] = i;
    sign_ = 1.0;
    for (std::size_t k = 0; k < n_; ++k) {
      std::size_t p = k;
      double best = std::abs(lu_(k, k));
      for (std::size_t i = k + 1; i < n_; ++i) {
        double v = std::abs(lu_(i, k));
        if (v > best) { best = v; p = i; }
      }
      if (best == 0.0)
        throw std::runtime_error("lu_factor: singular matrix (zero pivot at column " +
                                 std::to_string(k) + ")");
      if (p != k) {
        for (std::size_t j = 0; j < n_; ++j) std::swap(lu_(k, j), lu_(p, j));
        std::swap(piv_[k], piv_[p]);
        sign_ = -sign_;
      }
      const double pivot = lu_(k, k);
      for (std::size_t i = k + 1; i < n_; ++i) {
        const double m = lu_(i, k) / pivot;
        lu_(i, k) = m;
        if (m == 0.0) continue;
        for (std::size_t j = k + 1; j < n_; ++j) lu_(i, j) -= m * lu_(k, j);
      }
    }
  }

  std::size_t dimension() const { return n_; }

  Vec solve(const Vec& b) const {
    if (b.size() != n_) throw std::invalid_argument("lu_solve: dimension mismatch");
    Vec x(n_);
    for (std::size_t i = 0; i < n_; ++i) x[i] = b[piv_[i]];
    for (std::size_t i = 1; i < n_; ++i) {
      double s = x[i];
      for (std::size_t j = 0; j < i; ++j) s -= lu_(i, j) * x[j];
      x[i] = s;
    }
    for (std::size_t ii = n_; ii-- > 0;) {
      double s = x[ii];
      for (std::size_t j = ii + 1; j < n_; ++j) s -= lu_(ii, j) * x[j];
      x[ii] = s / lu_(ii, ii);
    }
    return x;
  }

  double determinant() const {
    double d = sign_;
    for (std::size_t i = 0; i < n_; ++i) d *= lu_(i, i);
    return d;
  }

private:
  std::size_t n_ = 0;
  DenseMatrix lu_;
  std::vector<std::size_t> piv_;
  double sign_ = 1.0;
};

inline LuFactors lu_factor(const DenseMatrix& A) { return LuFactors(A); }
inline Vec lu_solve(const LuFactors& F, const Vec& b) { return F.solve(b); }

// 1-norm condition estimate via a few rounds of the power method on
// |A| / |A^-1| actions; used only as a guard threshold.
inline double condition_estimate_1norm(const DenseMatrix& A, const LuFactors& F) {
  const std::size_t n = A.rows();
  double anorm = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += std::abs(A(i, j));
    anorm = std::max(anorm, s);
  }
  Vec x(n, 1.0 / double(n));
  double inv_norm = 0.0;
  for (int it = 0; it < 5; ++it) {
    Vec y = F.solve(x);
    double n1 = 0.0;
    for (double v : y) n1 += std::abs(v);
    if (n1 <= inv_norm * (1.0 + 1e-12)) break;
    inv_norm = n1;
    double mx = 0.0; std::size_t arg = 0;
    for (std::size_t i = 0; i < n; ++i)
      if (std::abs(y[i]) > mx) { mx = std::abs(y[i]); arg = i; }
    x.assign(n, 0.0);
    x[arg] = 1.0;
  }
  return anorm * inv_norm;
}

}  // namespace aras
