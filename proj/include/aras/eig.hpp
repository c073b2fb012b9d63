#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

#include "aras/dense.hpp"
#include "aras/lu.hpp"

namespace aras {

namespace detail {

// Householder reduction to upper Hessenberg form (in place).
inline void hessenberg(DenseMatrix& A) {
  const std::size_t n = A.rows();
  if (n < 3) return;
  for (std::size_t k = 0; k + 2 < n; ++k) {
    double scale = 0.0;
    for (std::size_t i = k + 1; i < n; ++i) scale += std::abs(A(i, k));
    if (scale == 0.0) continue;
    double h = 0.0;
    Vec v(n, 0.0);
    for (std::size_t i = k + 1; i < n; ++i) {
      v[i] = A(i, k) / scale;
      h += v[i] * v[i];
    }
    double g = (v[k + 1] >= 0 ? -std::sqrt(h) : std::sqrt(h));
    h -= v[k + 1] * g;
    v[k + 1] -= g;
    if (h == 0.0) continue;
    // Apply P = I - v v^T / h from both sides.
    for (std::size_t j = 0; j < n; ++j) {
      double s = 0.0;
      for (std::size_t i = k + 1; i < n; ++i) s += v[i] * A(i, j);
      s /= h;
      for (std::size_t i = k + 1; i < n; ++i) A(i, j) -= s * v[i];
    }
    for (std::size_t i = 0; i < n; ++i) {
      double s = 0.0;
      for (std::size_t j = k + 1; j < n; ++j) s += A(i, j) * v[j];
      s /= h;
      for (std::size_t j = k + 1; j < n; ++j) A(i, j) -= s * v[j];
    }
    A(k + 1, k) = scale * g;
    for (std::size_t i = k + 2; i < n; ++i) A(i, k) = 0.0;
  }
}

// Francis double-shift QR on an upper Hessenberg matrix; eigenvalues only.
inline std::vector<std::complex<double>> hqr(DenseMatrix& a) {
  const int n = int(a.rows());
  std::vector<std::complex<double>> wri(n);
  double anorm = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = std::max(i - 1, 0); j < n; ++j) anorm += std::abs(a(i, j));
  if (anorm == 0.0) return wri;  // zero matrix
  const double eps = 2.22e-16;
  int nn = n - 1;
  double t = 0.0;
  while (nn >= 0) {
    int its = 0;
    int l;
    do {
      for (l = nn; l > 0; --l) {
        double s = std::abs(a(l - 1, l - 1)) + std::abs(a(l, l));
        if (s == 0.0) s = anorm;
        if (std::abs(a(l, l - 1)) <= eps * s) {
          a(l, l - 1) = 0.0;
          break;
        }
      }
      double x = a(nn, nn);
      if (l == nn) {
        wri[nn--] = x + t;
      } else {
        double y = a(nn - 1, nn - 1);
        double w = a(nn, nn - 1) * a(nn - 1, nn);
        if (l == nn - 1) {
          double p = 0.5 * (y - x);
          double q = p * p + w;
          double z = std::sqrt(std::abs(q));
          x += t;
          if (q >= 0.0) {
            z = p + (p >= 0 ? z : -z);
            wri[nn - 1] = wri[nn] = x + z;
            if (z != 0.0) wri[nn] = x - w / z;
          } else {
            wri[nn] = std::complex<double>(x + p, -z);
            wri[nn - 1] = std::conj(wri[nn]);
          }
          nn -= 2;
        } else {
          if (its == 60)
            throw std::runtime_error("dense_eigenvalues: QR iteration failed to converge");
          double p = 0, q = 0, z = 0, r = 0, s = 0;
          if (its == 10 || its == 20 || its == 30 || its == 40 || its == 50) {
            // Exceptional shift.
            t += x;
            for (int i = 0; i <= nn; ++i) a(i, i) -= x;
            s = std::abs(a(nn, nn - 1)) + std::abs(a(nn - 1, nn - 2));
            y = x = 0.75 * s;
            w = -0.4375 * s * s;
          }
          ++its;
          int m;
          for (m = nn - 2; m >= l; --m) {
            z = a(m, m);
            r = x - z;
            s = y - z;
            p = (r * s - w) / a(m + 1, m) + a(m, m + 1);
            q = a(m + 1, m + 1) - z - r - s;
            r = a(m + 2, m + 1);
            s = std::abs(p) + std::abs(q) + std::abs(r);
            p /= s;
            q /= s;
            r /= s;
            if (m == l) break;
            double u = std::abs(a(m, m - 1)) * (std::abs(q) + std::abs(r));
            double v = std::abs(p) * (std::abs(a(m - 1, m - 1)) + std::abs(z) +
                                      std::abs(a(m + 1, m + 1)));
            if (u <= eps * v) break;
          }
          for (int i = m; i < nn - 1; ++i) {
            a(i + 2, i) = 0.0;
            if (i != m) a(i + 2, i - 1) = 0.0;
          }
          for (int k = m; k < nn; ++k) {
            if (k != m) {
              p = a(k, k - 1);
              q = a(k + 1, k - 1);
              r = 0.0;
              if (k + 1 != nn) r = a(k + 2, k - 1);
              x = std::abs(p) + std::abs(q) + std::abs(r);
              if (x != 0.0) {
                p /= x;
                q /= x;
                r /= x;
              }
            }
            s = std::sqrt(p * p + q * q + r * r);
            if (p < 0) s = -s;
            if (s == 0.0) continue;
            if (k == m) {
              if (l != m) a(k, k - 1) = -a(k, k - 1);
            } else {
              a(k, k - 1) = -s * x;
            }
            p += s;
            x = p / s;
            double yy = q / s;
            z = r / s;
            q = q / p;
            r = r / p;
            for (int j = k; j <= nn; ++j) {
              p = a(k, j) + q * a(k + 1, j);
              if (k + 1 != nn) {
                p += r * a(k + 2, j);
                a(k + 2, j) -= p * z;
              }
              a(k + 1, j) -= p * yy;
              a(k, j) -= p * x;
            }
            const int mmin = (nn < k + 3 ? nn : k + 3);
            for (int i = l; i <= mmin; ++i) {
              p = x * a(i, k) + yy * a(i, k + 1);
              if (k + 1 != nn) {
                p += z * a(i, k + 2);
                a(i, k + 2) -= p * r;
              }
              a(i, k + 1) -= p * q;
              a(i, k) -= p;
            }
          }
        }
      }
    } while (l + 1 < nn);
  }
  return wri;
}

}  // namespace detail

// All eigenvalues of a square matrix, sorted by decreasing modulus.
inline std::vector<std::complex<double>> dense_eigenvalues(const DenseMatrix& T) {
  if (T.rows() != T.cols()) throw std::invalid_argument("dense_eigenvalues: not square");
  DenseMatrix H = T;
  detail::hessenberg(H);
  auto ev = detail::hqr(H);
  std::stable_sort(ev.begin(), ev.end(),
                   [](const std::complex<double>& a, const std::complex<double>& b) {
                     return std::abs(a) > std::abs(b);
                   });
  return ev;
}

// Eigenvector for a (nearly) real eigenvalue of A via shifted inverse iteration.
inline Vec real_eigenvector(const DenseMatrix& A, double lambda) {
  const std::size_t n = A.rows();
  double shift = lambda;
  DenseMatrix S = A;
  double scl = std::max(1.0, A.max_abs());
  for (int attempt = 0; attempt < 4; ++attempt) {
    S = A;
    for (std::size_t i = 0; i < n; ++i) S(i, i) -= shift;
    LuFactors F;
    try {
      F = LuFactors(S);
    } catch (const std::runtime_error&) {
      shift += scl * 1e-12 * (attempt + 1);
      continue;
    }
    Vec v(n);
    for (std::size_t i = 0; i < n; ++i) v[i] = 1.0 / std::sqrt(double(n) + double(i));
    for (int it = 0; it < 8; ++it) {
      Vec w = F.solve(v);
      const double nrm = norm2(w);
      if (!std::isfinite(nrm) || nrm == 0.0) break;
      scale(w, 1.0 / nrm);
      v = w;
    }
    // Accept if the residual is small relative to the matrix scale.
    Vec Av = matvec(A, v);
    Vec r = Av;
    axpy(-lambda, v, r);
    if (norm2(r) <= 1e-8 * scl) return v;
    shift += scl * 1e-10 * (attempt + 1);
  }
  throw std::runtime_error("real_eigenvector: inverse iteration did not converge");
}

}  // namespace aras
