#pragma once

#include <cmath>
#include <cstdint>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "aras/dense.hpp"
#include "aras/eig.hpp"
#include "aras/lu.hpp"
#include "aras/schwarz.hpp"
#include "aras/svd.hpp"

namespace aras {

enum class BasisOrigin { Random, Svd, FullPhysical, AnalyticEigen };

struct CoarseInterfaceSpace {
  DenseMatrix basis;        // U_q, n x q, orthonormal columns
  DenseMatrix coarse_operator;  // Phat, q x q
  BasisOrigin origin = BasisOrigin::FullPhysical;
  double svd_tol = 1e-12;
  Vec source_sigma;         // retained singular values when origin == Svd

  std::size_t n() const { return basis.rows(); }
  std::size_t q() const { return basis.cols(); }
};

// ---------------------------------------------------------------------------
// Aitken acceleration in the physical space.
// Given u^0..u^{n+1} from a purely linearly converging process u^{k+1} =
// P u^k + c, recover the limit xi = (I-P)^{-1}(u^{n+1} - P u^n).
inline Vec aitken_physical(const std::vector<Vec>& iterates) {
  if (iterates.size() < 3)
    throw std::invalid_argument("aitken_physical: need at least 3 iterates");
  const std::size_t n = iterates.front().size();
  if (iterates.size() != n + 2)
    throw std::invalid_argument("aitken_physical: need n+2 iterates of length n");
  DenseMatrix Eold(n, n), Enew(n, n);
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t i = 0; i < n; ++i) {
      Eold(i, k) = iterates[k + 1][i] - iterates[k][i];
      Enew(i, k) = iterates[k + 2][i] - iterates[k + 1][i];
    }
  }
  LuFactors F;
  try {
    F = LuFactors(Eold);
  } catch (const std::runtime_error&) {
    throw std::runtime_error(
        "aitken_physical: difference matrix is singular; use the SVD variant");
  }
  if (condition_estimate_1norm(Eold, F) > 1e14)
    throw std::runtime_error(
        "aitken_physical: difference matrix is ill-conditioned; use the SVD variant");
  // P = Enew * Eold^{-1}  =>  P^T columns solve Eold^T x = Enew^T col.
  DenseMatrix P(n, n);
  {
    LuFactors Ft(Eold.transpose());
    for (std::size_t i = 0; i < n; ++i) {
      Vec row(n);
      for (std::size_t j = 0; j < n; ++j) row[j] = Enew(i, j);
      Vec pi = Ft.solve(row);
      for (std::size_t j = 0; j < n; ++j) P(i, j) = pi[j];
    }
  }
  DenseMatrix ImP = DenseMatrix::identity(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) ImP(i, j) -= P(i, j);
  Vec rhs = iterates[n + 1];
  Vec Pun = matvec(P, iterates[n]);
  axpy(-1.0, Pun, rhs);
  return LuFactors(ImP).solve(rhs);
}

// ---------------------------------------------------------------------------
// Random orthonormal interface basis: q_i uniform-[0,1] vectors supported on
// Gamma_i, then a global orthonormalization. Deterministic for fixed seed.
namespace detail {

class SplitMix64 {
public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}
  double uniform01() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    z = z ^ (z >> 31);
    return double(z >> 11) * 0x1.0p-53;
  }

private:
  std::uint64_t state_;
};

}  // namespace detail

inline DenseMatrix random_basis(std::size_t n, const std::vector<std::size_t>& q_per_subdomain,
                                std::uint64_t seed, const OverlapPartition& part) {
  if (q_per_subdomain.size() != part.p)
    throw std::invalid_argument("random_basis: one count per subdomain required");
  std::size_t q = 0;
  for (std::size_t i = 0; i < part.p; ++i) {
    if (q_per_subdomain[i] > part.gamma_i[i].size())
      throw std::invalid_argument("random_basis: q_i exceeds |Gamma_i|");
    q += q_per_subdomain[i];
  }
  if (q > n) throw std::invalid_argument("random_basis: sum q_i exceeds n");
  // Position of each global interface index within Gamma.
  std::vector<std::size_t> pos(part.m, n);
  for (std::size_t l = 0; l < part.gamma.size(); ++l) pos[part.gamma[l]] = l;
  for (int attempt = 0; attempt < 3; ++attempt) {
    detail::SplitMix64 rng(seed + std::uint64_t(attempt) * 0x51ed2701ULL);
    DenseMatrix V(n, q);
    std::size_t col = 0;
    for (std::size_t i = 0; i < part.p; ++i)
      for (std::size_t k = 0; k < q_per_subdomain[i]; ++k, ++col)
        for (std::size_t v : part.gamma_i[i]) V(pos[v], col) = rng.uniform01();
    try {
      return orthonormalize(V);
    } catch (const std::runtime_error&) {
      continue;
    }
  }
  throw std::runtime_error("random_basis: rank-deficient draws after 3 attempts");
}

inline std::vector<std::size_t> proportional_split(std::size_t q, const OverlapPartition& part) {
  const double n = double(part.interface_size());
  std::vector<std::size_t> qi(part.p);
  std::size_t total = 0;
  for (std::size_t i = 0; i < part.p; ++i) {
    qi[i] = std::size_t(std::llround(double(q) * double(part.gamma_i[i].size()) / n));
    qi[i] = std::min(qi[i], part.gamma_i[i].size());
    total += qi[i];
  }
  // Fix rounding drift while respecting the per-subdomain caps.
  std::size_t guard = 0;
  while (total != q && guard++ < 4 * part.p) {
    for (std::size_t i = 0; i < part.p && total != q; ++i) {
      if (total < q && qi[i] < part.gamma_i[i].size()) { ++qi[i]; ++total; }
      else if (total > q && qi[i] > 0) { --qi[i]; --total; }
    }
  }
  return qi;
}

// ---------------------------------------------------------------------------
// Phat = U^T G(U): one homogeneous RAS iteration per basis column.
inline DenseMatrix build_coarse_operator(const SparseMatrix& A, const RasPreconditioner& M,
                                         const DenseMatrix& basis) {
  const std::size_t n = basis.rows(), q = basis.cols();
  if (n != M.partition().interface_size())
    throw std::invalid_argument("build_coarse_operator: basis rows != |Gamma|");
  DenseMatrix W(n, q);
  for (std::size_t j = 0; j < q; ++j)
    W.set_col(j, homogeneous_interface_iteration(A, M, basis.col(j)));
  DenseMatrix Phat(q, q);
  for (std::size_t i = 0; i < q; ++i)
    for (std::size_t j = 0; j < q; ++j) {
      double s = 0.0;
      for (std::size_t r = 0; r < n; ++r) s += basis(r, i) * W(r, j);
      Phat(i, j) = s;
    }
  return Phat;
}

// ---------------------------------------------------------------------------
// SVD interface basis from a trace of interface iterates (oldest first).
// Columns of Y are taken newest-first; retained directions have sigma > tol.
struct SvdTraceBasis {
  DenseMatrix basis;  // n x l
  Vec sigma;          // retained singular values
  std::size_t l = 0;
};

inline SvdTraceBasis svd_basis_from_trace(const std::vector<Vec>& trace, double tol) {
  if (trace.size() < 3)
    throw std::invalid_argument("svd_basis_from_trace: need at least 3 iterates");
  const std::size_t n = trace.front().size(), cols = trace.size();
  DenseMatrix Y(n, cols);
  for (std::size_t j = 0; j < cols; ++j) Y.set_col(j, trace[cols - 1 - j]);
  SvdFactors f = dense_svd(Y);
  SvdTraceBasis out;
  std::size_t l = 0;
  while (l < f.singular_values.size() && f.singular_values[l] > tol) ++l;
  out.l = l;
  out.basis = DenseMatrix(n, l);
  out.sigma.assign(f.singular_values.begin(), f.singular_values.begin() + l);
  for (std::size_t j = 0; j < l; ++j)
    for (std::size_t i = 0; i < n; ++i) out.basis(i, j) = f.left(i, j);
  return out;
}

namespace detail {

// Solve (I - Phat) y = u_new - Phat u_prev in the coarse space.
inline Vec coarse_aitken_limit(const DenseMatrix& Phat, const Vec& u_prev, const Vec& u_new) {
  const std::size_t l = Phat.rows();
  DenseMatrix ImP = DenseMatrix::identity(l);
  for (std::size_t i = 0; i < l; ++i)
    for (std::size_t j = 0; j < l; ++j) ImP(i, j) -= Phat(i, j);
  LuFactors F;
  try {
    F = LuFactors(ImP);
  } catch (const std::runtime_error&) {
    throw std::runtime_error("aitken: (I - Phat) is singular; acceleration impossible");
  }
  Vec rhs = u_new;
  Vec Pu = matvec(Phat, u_prev);
  axpy(-1.0, Pu, rhs);
  return F.solve(rhs);
}

// Least-squares/pseudo-inverse solve via SVD with relative cutoff.
inline DenseMatrix pinv_multiply(const DenseMatrix& Eold, const DenseMatrix& Enew) {
  SvdFactors f = dense_svd(Eold);
  const double cutoff = (f.singular_values.empty() ? 0.0 : f.singular_values[0]) * 1e-13;
  // P = Enew * V * diag(1/sigma) * U^T
  const std::size_t l = Eold.rows(), k = f.singular_values.size();
  DenseMatrix T(k, l);  // diag(1/sigma) U^T
  for (std::size_t i = 0; i < k; ++i) {
    const double inv = f.singular_values[i] > cutoff ? 1.0 / f.singular_values[i] : 0.0;
    for (std::size_t j = 0; j < l; ++j) T(i, j) = inv * f.left(j, i);
  }
  return matmul(matmul(Enew, f.right), T);
}

}  // namespace detail

// Aitken acceleration in the SVD coefficient space, with explicit inversion of
// the coefficient difference matrix (pseudo-inverse guarded).
inline Vec aitken_svd_inversion(const std::vector<Vec>& trace, double tol) {
  SvdTraceBasis tb = svd_basis_from_trace(trace, tol);
  if (tb.l == 0)
    throw std::runtime_error("aitken_svd_inversion: trace already converged (l = 0)");
  const std::size_t l = tb.l, m = trace.size();
  if (m < l + 2)
    throw std::runtime_error("aitken_svd_inversion: not enough iterates for retained rank");
  // Coefficients uhat^k = U^T u^k.
  std::vector<Vec> uh(m);
  for (std::size_t k = 0; k < m; ++k) {
    uh[k].assign(l, 0.0);
    for (std::size_t j = 0; j < l; ++j)
      for (std::size_t i = 0; i < trace[k].size(); ++i)
        uh[k][j] += tb.basis(i, j) * trace[k][i];
  }
  // Newest l+1 coefficient differences.
  DenseMatrix Eold(l, l), Enew(l, l);
  for (std::size_t c = 0; c < l; ++c) {
    const std::size_t k = m - 1 - l + c;  // so c sweeps the newest l differences
    for (std::size_t i = 0; i < l; ++i) {
      Eold(i, c) = uh[k][i] - uh[k - 1][i];
      Enew(i, c) = uh[k + 1][i] - uh[k][i];
    }
  }
  DenseMatrix Phat = detail::pinv_multiply(Eold, Enew);
  Vec yinf = detail::coarse_aitken_limit(Phat, uh[m - 2], uh[m - 1]);
  Vec out(trace.front().size(), 0.0);
  for (std::size_t j = 0; j < l; ++j)
    for (std::size_t i = 0; i < out.size(); ++i) out[i] += tb.basis(i, j) * yinf[j];
  return out;
}

// Aitken acceleration in the SVD space without inversion: Phat is built by
// applying the homogeneous iteration to each basis column (l RAS applies).
// Also returns the coarse space for reuse by the two-level preconditioner.
inline std::pair<Vec, CoarseInterfaceSpace> aitken_svd_application(
    const SparseMatrix& A, const RasPreconditioner& M, const std::vector<Vec>& trace,
    double tol) {
  SvdTraceBasis tb = svd_basis_from_trace(trace, tol);
  M.counters()->svds += 1;
  if (tb.l == 0)
    throw std::runtime_error("aitken_svd_application: trace already converged (l = 0)");
  const std::size_t l = tb.l, m = trace.size();
  DenseMatrix Phat = build_coarse_operator(A, M, tb.basis);
  Vec uh_prev(l, 0.0), uh_new(l, 0.0);
  for (std::size_t j = 0; j < l; ++j)
    for (std::size_t i = 0; i < trace.front().size(); ++i) {
      uh_prev[j] += tb.basis(i, j) * trace[m - 2][i];
      uh_new[j] += tb.basis(i, j) * trace[m - 1][i];
    }
  Vec yinf = detail::coarse_aitken_limit(Phat, uh_prev, uh_new);
  Vec out(trace.front().size(), 0.0);
  for (std::size_t j = 0; j < l; ++j)
    for (std::size_t i = 0; i < out.size(); ++i) out[i] += tb.basis(i, j) * yinf[j];
  CoarseInterfaceSpace cs;
  cs.basis = tb.basis;
  cs.coarse_operator = Phat;
  cs.origin = BasisOrigin::Svd;
  cs.svd_tol = tol;
  cs.source_sigma = tb.sigma;
  return {out, cs};
}

// ---------------------------------------------------------------------------
// Build an SVD coarse space from the interface trace of q+2 fixed-point sweeps
// on A u = f starting from u = 0. The sweeps are run without a divergence
// guard on purpose: for indefinite problems the fixed-point process may grow,
// which only makes the dominant interface directions easier to capture.
// Cost: p*(q+2) local solves for the trace, one SVD, p*l solves for Phat.
inline CoarseInterfaceSpace svd_trace_space(const SparseMatrix& A, const RasPreconditioner& M,
                                            const Vec& f, std::size_t q, double tol = 1e-12) {
  const OverlapPartition& part = M.partition();
  const std::size_t n = part.interface_size();
  std::vector<Vec> trace;
  Vec u(A.nrows, 0.0);
  trace.push_back(restrict_interface(part, u));
  for (std::size_t k = 0; k < q + 2; ++k) {
    Vec r = f;
    Vec Au = spmv(A, u);
    axpy(-1.0, Au, r);
    Vec z = M.apply(r);
    axpy(1.0, z, u);
    trace.push_back(restrict_interface(part, u));
  }
  // Columns newest-first, relative singular-value cutoff, at most q kept.
  const std::size_t cols = trace.size();
  DenseMatrix Y(n, cols);
  for (std::size_t j = 0; j < cols; ++j) Y.set_col(j, trace[cols - 1 - j]);
  SvdFactors fac = dense_svd(Y);
  M.counters()->svds += 1;
  const double smax = fac.singular_values.empty() ? 0.0 : fac.singular_values[0];
  std::size_t l = 0;
  while (l < fac.singular_values.size() && l < q && fac.singular_values[l] > tol * smax) ++l;
  CoarseInterfaceSpace cs;
  cs.basis = DenseMatrix(n, l);
  for (std::size_t j = 0; j < l; ++j)
    for (std::size_t i = 0; i < n; ++i) cs.basis(i, j) = fac.left(i, j);
  cs.coarse_operator = build_coarse_operator(A, M, cs.basis);
  cs.origin = BasisOrigin::Svd;
  cs.svd_tol = tol;
  cs.source_sigma.assign(fac.singular_values.begin(), fac.singular_values.begin() + l);
  return cs;
}

// ---------------------------------------------------------------------------
// Coarse-space persistence: plain text dump of n, q, basis, Phat (row-major).
inline void save_coarse_space(const std::string& path, const CoarseInterfaceSpace& cs) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("save_coarse_space: cannot open " + path);
  out.precision(17);
  out << cs.n() << ' ' << cs.q() << '\n';
  for (std::size_t i = 0; i < cs.n(); ++i)
    for (std::size_t j = 0; j < cs.q(); ++j)
      out << cs.basis(i, j) << (j + 1 < cs.q() ? ' ' : '\n');
  for (std::size_t i = 0; i < cs.q(); ++i)
    for (std::size_t j = 0; j < cs.q(); ++j)
      out << cs.coarse_operator(i, j) << (j + 1 < cs.q() ? ' ' : '\n');
}

inline CoarseInterfaceSpace load_coarse_space(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("load_coarse_space: cannot open " + path);
  std::size_t n = 0, q = 0;
  if (!(in >> n >> q)) throw std::runtime_error("load_coarse_space: bad header");
  CoarseInterfaceSpace cs;
  cs.basis = DenseMatrix(n, q);
  cs.coarse_operator = DenseMatrix(q, q);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < q; ++j)
      if (!(in >> cs.basis(i, j))) throw std::runtime_error("load_coarse_space: truncated");
  for (std::size_t i = 0; i < q; ++i)
    for (std::size_t j = 0; j < q; ++j)
      if (!(in >> cs.coarse_operator(i, j)))
        throw std::runtime_error("load_coarse_space: truncated");
  return cs;
}

}  // namespace aras
