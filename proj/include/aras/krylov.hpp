#pragma once

#include <chrono>
#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "aras/schwarz.hpp"
#include "aras/sparse.hpp"

namespace aras {

struct SolveReport {
  std::string method;
  std::string preconditioner;
  std::size_t iterations = 0;
  Vec precond_residuals;  // per accepted iterate, length iterations+1
  Vec true_residuals;     // same indexing
  double final_true_relative = 0.0;
  bool converged = false;
  double wall_seconds = 0.0;
  Vec solution;
};

namespace detail {

inline double true_resid(const SparseMatrix& A, const Vec& x, const Vec& b) {
  Vec r = b;
  Vec Ax = spmv(A, x);
  axpy(-1.0, Ax, r);
  return norm2(r);
}

}  // namespace detail

// Full-memory left-preconditioned GCR. Stops when the preconditioned residual
// norm (relative to the preconditioned rhs, or absolute) drops below tol.
inline SolveReport gcr(const SparseMatrix& A, const Preconditioner& M, const Vec& b,
                       const Vec& x0, double tol, std::size_t max_it,
                       StopMode stop = StopMode::Relative) {
  const auto t0 = std::chrono::steady_clock::now();
  SolveReport rep;
  rep.method = "GCR";
  Vec x = x0;
  Vec r0 = b;
  {
    Vec Ax = spmv(A, x);
    axpy(-1.0, Ax, r0);
  }
  Vec z = M.apply(r0);
  const double z0 = norm2(z);
  const double bnorm = norm2(b);
  const double denom = (stop == StopMode::Relative && z0 > 0.0) ? z0 : 1.0;
  std::vector<Vec> dirs, adirs;
  Vec zr = z;
  for (std::size_t k = 0;; ++k) {
    const double zn = norm2(zr);
    rep.precond_residuals.push_back(zn);
    rep.true_residuals.push_back(detail::true_resid(A, x, b));
    if (zn / denom <= tol) {
      rep.converged = true;
      break;
    }
    if (k == max_it) break;
    Vec p = zr;
    Vec ap = M.apply(spmv(A, p));
    for (std::size_t j = 0; j < dirs.size(); ++j) {
      const double beta = dot(ap, adirs[j]);
      axpy(-beta, dirs[j], p);
      axpy(-beta, adirs[j], ap);
    }
    const double apn = norm2(ap);
    if (apn < 1e-14 * (z0 > 0 ? z0 : 1.0))
      throw std::runtime_error("gcr: breakdown (search direction vanished) at iteration " +
                               std::to_string(k));
    scale(p, 1.0 / apn);
    scale(ap, 1.0 / apn);
    const double alpha = dot(zr, ap);
    axpy(alpha, p, x);
    axpy(-alpha, ap, zr);
    dirs.push_back(std::move(p));
    adirs.push_back(std::move(ap));
    rep.iterations = k + 1;
  }
  rep.solution = x;
  rep.final_true_relative = rep.true_residuals.back() / (bnorm > 0 ? bnorm : 1.0);
  rep.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return rep;
}

// Left-preconditioned GMRES with modified Gram-Schmidt Arnoldi.
// Happy breakdown is treated as convergence. restart == nullopt: full GMRES.
inline SolveReport gmres(const SparseMatrix& A, const Preconditioner& M, const Vec& b,
                         const Vec& x0, double tol, std::size_t max_it,
                         std::optional<std::size_t> restart = std::nullopt,
                         StopMode stop = StopMode::Relative) {
  const auto t0 = std::chrono::steady_clock::now();
  SolveReport rep;
  rep.method = "GMRES";
  const double bnorm = norm2(b);
  Vec x = x0;
  double denom = 1.0;
  bool denom_set = false;
  std::size_t total_it = 0;
  bool done = false;
  while (!done) {
    Vec r = b;
    {
      Vec Ax = spmv(A, x);
      axpy(-1.0, Ax, r);
    }
    Vec z = M.apply(r);
    double beta = norm2(z);
    if (!denom_set) {
      denom = (stop == StopMode::Relative && beta > 0.0) ? beta : 1.0;
      denom_set = true;
      rep.precond_residuals.push_back(beta);
      rep.true_residuals.push_back(norm2(r));
    }
    if (beta / denom <= tol) {
      rep.converged = true;
      break;
    }
    const std::size_t m = restart ? std::min(*restart, max_it - total_it)
                                  : (max_it - total_it);
    if (m == 0) break;
    std::vector<Vec> V{z};
    scale(V[0], 1.0 / beta);
    std::vector<std::vector<double>> H;  // H[j] holds column j (length j+2)
    std::vector<double> cs, sn, g{beta};
    std::size_t j = 0;
    bool happy = false;
    for (; j < m; ++j) {
      Vec w = M.apply(spmv(A, V[j]));
      H.emplace_back(j + 2, 0.0);
      for (std::size_t i = 0; i <= j; ++i) {
        H[j][i] = dot(w, V[i]);
        axpy(-H[j][i], V[i], w);
      }
      H[j][j + 1] = norm2(w);
      const double wnorm = H[j][j + 1];
      // Apply accumulated Givens rotations to the new column.
      for (std::size_t i = 0; i < j; ++i) {
        const double t = cs[i] * H[j][i] + sn[i] * H[j][i + 1];
        H[j][i + 1] = -sn[i] * H[j][i] + cs[i] * H[j][i + 1];
        H[j][i] = t;
      }
      double c, s;
      const double h0 = H[j][j], h1 = H[j][j + 1];
      const double rr = std::hypot(h0, h1);
      if (rr == 0.0) { c = 1.0; s = 0.0; } else { c = h0 / rr; s = h1 / rr; }
      cs.push_back(c);
      sn.push_back(s);
      H[j][j] = rr;
      H[j][j + 1] = 0.0;
      g.push_back(-s * g[j]);
      g[j] = c * g[j];
      ++total_it;
      const double resid = std::abs(g[j + 1]);
      rep.precond_residuals.push_back(resid);
      rep.iterations = total_it;
      if (resid / denom <= tol) {
        rep.converged = true;
        ++j;
        break;
      }
      if (wnorm < 1e-300) { happy = true; ++j; break; }
      V.push_back(w);
      scale(V.back(), 1.0 / wnorm);
      if (total_it >= max_it) { ++j; break; }
    }
    // Back-substitute y and update x.
    std::vector<double> y(j, 0.0);
    for (std::size_t ii = j; ii-- > 0;) {
      double s = g[ii];
      for (std::size_t kk = ii + 1; kk < j; ++kk) s -= H[kk][ii] * y[kk];
      y[ii] = s / H[ii][ii];
    }
    for (std::size_t kk = 0; kk < j; ++kk) axpy(y[kk], V[kk], x);
    if (rep.converged || happy || total_it >= max_it) {
      if (happy) rep.converged = true;
      done = true;
    }
    // Record the true residual for the accepted iterate(s).
    rep.true_residuals.push_back(detail::true_resid(A, x, b));
  }
  // Pad the true-residual history to match indexing loosely (per-cycle records).
  rep.solution = x;
  if (rep.true_residuals.empty()) rep.true_residuals.push_back(detail::true_resid(A, x, b));
  rep.final_true_relative = rep.true_residuals.back() / (bnorm > 0 ? bnorm : 1.0);
  rep.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return rep;
}

}  // namespace aras
