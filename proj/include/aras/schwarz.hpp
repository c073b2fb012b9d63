#pragma once

#include <atomic>
#include <cmath>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "aras/lu.hpp"
#include "aras/partition.hpp"
#include "aras/sparse.hpp"

namespace aras {

struct Counters {
  std::atomic<long> local_solves{0};
  std::atomic<long> spmvs{0};
  std::atomic<long> svds{0};

  void reset() {
    local_solves = 0;
    spmvs = 0;
    svds = 0;
  }
};

// Any left preconditioner: y = M^{-1} r.
class Preconditioner {
public:
  virtual ~Preconditioner() = default;
  virtual Vec apply(const Vec& r) const = 0;
  virtual std::size_t dimension() const = 0;
};

class IdentityPreconditioner final : public Preconditioner {
public:
  explicit IdentityPreconditioner(std::size_t m) : m_(m) {}
  Vec apply(const Vec& r) const override { return r; }
  std::size_t dimension() const override { return m_; }

private:
  std::size_t m_;
};

enum class SchwarzMode { RAS, AS };

// One-level restricted (or classical) additive Schwarz preconditioner:
// M^{-1} = sum_i R~_i^T A_i^{-1} R_i  (RAS)  or  sum_i R_i^T A_i^{-1} R_i (AS).
class RasPreconditioner final : public Preconditioner {
public:
  RasPreconditioner(const SparseMatrix& A, OverlapPartition part,
                    SchwarzMode mode = SchwarzMode::RAS)
      : part_(std::move(part)), mode_(mode) {
    if (A.nrows != A.ncols || A.nrows != part_.m)
      throw std::invalid_argument("build_ras: partition inconsistent with A");
    factors_.reserve(part_.p);
    for (std::size_t i = 0; i < part_.p; ++i) {
      try {
        factors_.emplace_back(dense_submatrix(A, part_.extended[i]));
      } catch (const std::runtime_error&) {
        throw std::runtime_error("build_ras: singular local block in subdomain " +
                                 std::to_string(i));
      }
    }
    counters_ = std::make_shared<Counters>();
  }

  Vec apply(const Vec& r) const override {
    if (r.size() != part_.m) throw std::invalid_argument("apply_ras: dimension mismatch");
    Vec y(part_.m, 0.0);
    for (std::size_t i = 0; i < part_.p; ++i) {
      Vec loc = restrict_subdomain(part_, i, r);
      Vec sol = factors_[i].solve(loc);
      if (mode_ == SchwarzMode::RAS) {
        for (std::size_t l = 0; l < sol.size(); ++l) {
          const std::size_t v = part_.extended[i][l];
          if (part_.owner[v] == i) y[v] += sol[l];
        }
      } else {
        for (std::size_t l = 0; l < sol.size(); ++l) y[part_.extended[i][l]] += sol[l];
      }
    }
    counters_->local_solves += long(part_.p);
    return y;
  }

  std::size_t dimension() const override { return part_.m; }
  const OverlapPartition& partition() const { return part_; }
  SchwarzMode mode() const { return mode_; }
  std::shared_ptr<Counters> counters() const { return counters_; }

private:
  OverlapPartition part_;
  SchwarzMode mode_;
  std::vector<LuFactors> factors_;
  std::shared_ptr<Counters> counters_;
};

enum class StopMode { Relative, Absolute };

struct RichardsonTrace {
  std::vector<Vec> history;  // u^0 .. u^K
  Vec residual_norms;        // ||f - A u^k||_2 per recorded iterate
  bool converged = false;
  bool diverged = false;
  std::size_t steps = 0;  // number of M^{-1} applications performed
  std::size_t iterations() const { return steps; }
};

// u^k = u^{k-1} + M^{-1}(f - A u^{k-1}), stopping on the 2-norm residual.
inline RichardsonTrace richardson_run(const SparseMatrix& A, const Preconditioner& M,
                                      const Vec& f, const Vec& u0, double tol,
                                      std::size_t max_it,
                                      StopMode stop = StopMode::Relative,
                                      bool keep_history = true) {
  RichardsonTrace trace;
  const double fnorm = norm2(f);
  const double denom = (stop == StopMode::Relative && fnorm > 0.0) ? fnorm : 1.0;
  Vec u = u0;
  double r0 = -1.0;
  for (std::size_t k = 0;; ++k) {
    Vec r = f;
    Vec Au = spmv(A, u);
    axpy(-1.0, Au, r);
    const double rn = norm2(r);
    if (keep_history || trace.history.empty())
      trace.history.push_back(u);
    else
      trace.history.back() = u;
    (void)k;
    trace.residual_norms.push_back(rn);
    if (!std::isfinite(rn)) {
      trace.diverged = true;
      break;
    }
    if (r0 < 0.0) r0 = rn;
    if (rn / denom <= tol) {
      trace.converged = true;
      break;
    }
    if (rn > 1e8 * (r0 > 0 ? r0 : 1.0)) {
      trace.diverged = true;
      break;
    }
    if (k == max_it) break;
    Vec z = M.apply(r);
    axpy(1.0, z, u);
    ++trace.steps;
  }
  return trace;
}

// Action of the interface error-transfer operator P on an interface vector g:
// put g on Gamma, run one RAS step with zero right-hand side, read Gamma back.
inline Vec homogeneous_interface_iteration(const SparseMatrix& A, const RasPreconditioner& M,
                                           const Vec& g) {
  const OverlapPartition& part = M.partition();
  if (g.size() != part.interface_size())
    throw std::invalid_argument("homogeneous_interface_iteration: dimension mismatch");
  Vec x = prolong_interface(part, g);
  Vec Ax = spmv(A, x);
  scale(Ax, -1.0);
  Vec z = M.apply(Ax);
  axpy(1.0, z, x);
  return restrict_interface(part, x);
}

// Dense n x n interface operator P, assembled column by column.
inline DenseMatrix assemble_interface_operator(const SparseMatrix& A,
                                               const RasPreconditioner& M) {
  const std::size_t n = M.partition().interface_size();
  DenseMatrix P(n, n);
  Vec e(n, 0.0);
  for (std::size_t j = 0; j < n; ++j) {
    e[j] = 1.0;
    P.set_col(j, homogeneous_interface_iteration(A, M, e));
    e[j] = 0.0;
  }
  return P;
}

}  // namespace aras
