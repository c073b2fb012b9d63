#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

#include "aras/aitken.hpp"
#include "aras/dense.hpp"
#include "aras/eig.hpp"
#include "aras/schwarz.hpp"
#include "aras/sparse.hpp"
#include "aras/svd.hpp"

namespace aras {

// Analytic two-domain description of the band-split Poisson problem on
// [0,1] x [0,pi]: N_x x-steps per half-domain (including the overlap region),
// m_y grid points in y, and an overlap of delta_steps mesh intervals.
struct TwoDomainPoissonSpec {
  std::size_t N_x = 0;
  std::size_t m_y = 0;
  double h_x = 0.0;
  double h_y = 0.0;
  std::size_t overlap_steps = 0;

  std::size_t modes() const { return m_y - 2; }

  double lambda(std::size_t l) const {  // l = 1..m_y-2
    return (2.0 / (h_y * h_y)) * (1.0 - std::cos(double(l) * M_PI / double(m_y - 1)));
  }
};

// Spec for the grid actually assembled: m_x x m_y points (with boundary),
// 2-domain band split along x with grid overlap delta_grid.
inline TwoDomainPoissonSpec two_domain_spec(std::size_t m_x, std::size_t m_y,
                                            std::size_t delta_grid) {
  TwoDomainPoissonSpec s;
  const std::size_t half = (m_x - 2) / 2;  // owned interior x-lines per half
  s.N_x = half + delta_grid + 1;
  s.overlap_steps = 2 * delta_grid + 1;
  s.m_y = m_y;
  s.h_x = 1.0 / double(m_x - 1);
  s.h_y = M_PI / double(m_y - 1);
  return s;
}

// delta_l = (r1^{N-d} - r2^{N-d}) / (r1^N - r2^N), evaluated with r2 = 1/r1
// so only powers of r2 < 1 appear (no overflow for large lambda*N).
inline double interface_mode_factor(double lambda, double h, std::size_t N, std::size_t d) {
  if (d == 0) return 1.0;
  const double a = lambda * h * h;
  const double disc = std::sqrt(a * a + 4.0 * a);
  const double r1 = (2.0 + a + disc) / 2.0;
  const double r2 = 1.0 / r1;  // Vieta: r1 * r2 = 1
  const double num = std::pow(r2, double(d)) * (1.0 - std::pow(r2, 2.0 * double(N - d)));
  const double den = 1.0 - std::pow(r2, 2.0 * double(N));
  return num / den;
}

inline std::vector<double> analytic_interface_modes(const TwoDomainPoissonSpec& spec) {
  if (spec.overlap_steps > spec.N_x)
    throw std::invalid_argument("analytic_interface_modes: overlap exceeds N_x");
  std::vector<double> d(spec.modes());
  for (std::size_t l = 1; l <= spec.modes(); ++l)
    d[l - 1] = interface_mode_factor(spec.lambda(l), spec.h_x, spec.N_x, spec.overlap_steps);
  std::sort(d.begin(), d.end(), std::greater<double>());
  return d;
}

inline std::vector<std::complex<double>> analytic_spectrum(const TwoDomainPoissonSpec& spec) {
  const auto d = analytic_interface_modes(spec);
  std::vector<std::complex<double>> s;
  s.reserve(2 * d.size());
  for (double v : d) {
    s.emplace_back(v, 0.0);
    s.emplace_back(-v, 0.0);
  }
  return s;
}

struct RhoTriple {
  double ras = 0.0;
  double aras = 0.0;
  double aras2 = 0.0;
};

// rho(T_RAS) = delta_1, rho(T_ARAS(q)) = delta_{q+1}, rho(T_ARAS2(q)) = delta_{q+1}^2.
inline RhoTriple theoretical_rho(const TwoDomainPoissonSpec& spec, std::size_t q) {
  const auto d = analytic_interface_modes(spec);
  if (q > d.size()) throw std::invalid_argument("theoretical_rho: q exceeds mode count");
  RhoTriple t;
  t.ras = d.empty() ? 0.0 : d[0];
  const double dq1 = (q < d.size()) ? d[q] : 0.0;
  t.aras = dq1;
  t.aras2 = dq1 * dq1;
  return t;
}

// ---------------------------------------------------------------------------
// Dense spectral diagnostics of preconditioned operators.

inline DenseMatrix assemble_iteration_operator(const SparseMatrix& A, const Preconditioner& M) {
  const std::size_t m = A.nrows;
  if (m > 5000)
    throw std::invalid_argument("assemble_iteration_operator: problem too large for dense assembly");
  DenseMatrix T(m, m);
  Vec e(m, 0.0);
  for (std::size_t j = 0; j < m; ++j) {
    e[j] = 1.0;
    Vec Ae = spmv(A, e);
    Vec z = M.apply(Ae);
    for (std::size_t i = 0; i < m; ++i) T(i, j) = (i == j ? 1.0 : 0.0) - z[i];
    e[j] = 0.0;
  }
  return T;
}

inline DenseMatrix assemble_preconditioned_matrix(const SparseMatrix& A, const Preconditioner& M) {
  const std::size_t m = A.nrows;
  if (m > 5000)
    throw std::invalid_argument("assemble_preconditioned_matrix: problem too large");
  DenseMatrix MA(m, m);
  Vec e(m, 0.0);
  for (std::size_t j = 0; j < m; ++j) {
    e[j] = 1.0;
    Vec Ae = spmv(A, e);
    MA.set_col(j, M.apply(Ae));
    e[j] = 0.0;
  }
  return MA;
}

inline double spectral_radius(const SparseMatrix& A, const Preconditioner& M) {
  DenseMatrix T = assemble_iteration_operator(A, M);
  auto ev = dense_eigenvalues(T);
  return ev.empty() ? 0.0 : std::abs(ev.front());
}

inline double condition_number(const SparseMatrix& A, const Preconditioner& M) {
  DenseMatrix MA = assemble_preconditioned_matrix(A, M);
  SvdFactors f = dense_svd(MA);
  const double smax = f.singular_values.front();
  const double smin = f.singular_values.back();
  if (smin <= 0.0) throw std::runtime_error("condition_number: singular preconditioned matrix");
  return smax / smin;
}

// ---------------------------------------------------------------------------
// Eigen-truncated coarse space: keep the 2q eigenvalues of the assembled
// interface operator P of largest modulus (they come in +/- pairs for the
// elliptic two-domain case), orthonormalize their eigenvectors.
inline CoarseInterfaceSpace eigen_truncated_basis(const SparseMatrix& A,
                                                  const RasPreconditioner& M,
                                                  std::size_t q_pairs) {
  DenseMatrix P = assemble_interface_operator(A, M);
  const std::size_t n = P.rows();
  auto ev = dense_eigenvalues(P);
  const std::size_t cols = std::min(2 * q_pairs, n);
  DenseMatrix V(n, cols);
  for (std::size_t j = 0; j < cols; ++j)
    V.set_col(j, real_eigenvector(P, ev[j].real()));
  CoarseInterfaceSpace cs;
  cs.basis = orthonormalize(V);
  cs.coarse_operator = DenseMatrix(cols, cols);
  // Phat = U^T P U.
  DenseMatrix PU = matmul(P, cs.basis);
  for (std::size_t i = 0; i < cols; ++i)
    for (std::size_t j = 0; j < cols; ++j) {
      double s = 0.0;
      for (std::size_t r = 0; r < n; ++r) s += cs.basis(r, i) * PU(r, j);
      cs.coarse_operator(i, j) = s;
    }
  cs.origin = BasisOrigin::AnalyticEigen;
  return cs;
}

// Full physical coarse space: basis = I_n, Phat = assembled P.
inline CoarseInterfaceSpace full_interface_space(const SparseMatrix& A,
                                                 const RasPreconditioner& M) {
  CoarseInterfaceSpace cs;
  const std::size_t n = M.partition().interface_size();
  cs.basis = DenseMatrix::identity(n);
  cs.coarse_operator = assemble_interface_operator(A, M);
  cs.origin = BasisOrigin::FullPhysical;
  return cs;
}

}  // namespace aras
