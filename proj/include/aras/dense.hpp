#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace aras {

using Vec = std::vector<double>;

// Row-major dense matrix.
class DenseMatrix {
public:
  DenseMatrix() = default;
  DenseMatrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  static DenseMatrix identity(std::size_t n) {
    DenseMatrix I(n, n);
    for (std::size_t i = 0; i < n; ++i) I(i, i) = 1.0;
    return I;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  double* data() { return data_.data(); }
  const double* data() const { return data_.data(); }

  DenseMatrix transpose() const {
    DenseMatrix T(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) T(j, i) = (*this)(i, j);
    return T;
  }

  Vec col(std::size_t j) const {
    Vec c(rows_);
    for (std::size_t i = 0; i < rows_; ++i) c[i] = (*this)(i, j);
    return c;
  }

  void set_col(std::size_t j, const Vec& c) {
    for (std::size_t i = 0; i < rows_; ++i) (*this)(i, j) = c[i];
  }

  double max_abs() const {
    double m = 0.0;
    for (double v : data_) m = std::max(m, std::abs(v));
    return m;
  }

private:
  std::size_t rows_ = 0, cols_ = 0;
  Vec data_;
};

inline DenseMatrix matmul(const DenseMatrix& A, const DenseMatrix& B) {
  if (A.cols() != B.rows()) throw std::invalid_argument("matmul: dimension mismatch");
  DenseMatrix C(A.rows(), B.cols());
  for (std::size_t i = 0; i < A.rows(); ++i) {
    for (std::size_t k = 0; k < A.cols(); ++k) {
      const double aik = A(i, k);
      if (aik == 0.0) continue;
      for (std::size_t j = 0; j < B.cols(); ++j) C(i, j) += aik * B(k, j);
    }
  }
  return C;
}

inline Vec matvec(const DenseMatrix& A, const Vec& x) {
  if (A.cols() != x.size()) throw std::invalid_argument("matvec: dimension mismatch");
  Vec y(A.rows(), 0.0);
  for (std::size_t i = 0; i < A.rows(); ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < A.cols(); ++j) s += A(i, j) * x[j];
    y[i] = s;
  }
  return y;
}

inline double dot(const Vec& a, const Vec& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

inline double norm2(const Vec& a) { return std::sqrt(dot(a, a)); }

inline void axpy(double alpha, const Vec& x, Vec& y) {
  for (std::size_t i = 0; i < x.size(); ++i) y[i] += alpha * x[i];
}

inline void scale(Vec& x, double alpha) {
  for (double& v : x) v *= alpha;
}

// Modified Gram-Schmidt with one reorthogonalization pass.
// Throws if a column becomes numerically dependent.
inline DenseMatrix orthonormalize(const DenseMatrix& V) {
  DenseMatrix Q = V;
  const std::size_t n = V.rows(), q = V.cols();
  for (std::size_t j = 0; j < q; ++j) {
    Vec v = Q.col(j);
    const double orig = norm2(v);
    for (int pass = 0; pass < 2; ++pass) {
      for (std::size_t k = 0; k < j; ++k) {
        Vec qk = Q.col(k);
        double r = dot(qk, v);
        axpy(-r, qk, v);
      }
    }
    const double nrm = norm2(v);
    if (nrm < 1e-13 * (orig > 0 ? orig : 1.0))
      throw std::runtime_error("orthonormalize: column " + std::to_string(j) +
                               " is numerically dependent");
    scale(v, 1.0 / nrm);
    Q.set_col(j, v);
    (void)n;
  }
  return Q;
}

}  // namespace aras
