#pragma once

#include <memory>
#include <stdexcept>
#include <utility>

#include "aras/aitken.hpp"
#include "aras/lu.hpp"
#include "aras/schwarz.hpp"

namespace aras {

enum class ArasVariant { ARAS, ARAS2 };

// Two-level preconditioner
//   M^{-1}_{ARAS} = (I + RG^T U ((I - Phat)^{-1} - I) U^T RG) M^{-1}_{RAS}
// and its richardson-squared variant
//   M^{-1}_{ARAS2} = 2 M^{-1} - M^{-1} A M^{-1}   (two applies + one spmv).
class ArasPreconditioner final : public Preconditioner {
public:
  ArasPreconditioner(const SparseMatrix& A, std::shared_ptr<RasPreconditioner> ras,
                     CoarseInterfaceSpace coarse, ArasVariant variant)
      : A_(&A), ras_(std::move(ras)), coarse_(std::move(coarse)), variant_(variant) {
    if (coarse_.q() > 0) {
      if (coarse_.n() != ras_->partition().interface_size())
        throw std::invalid_argument("build_aras: coarse basis rows != |Gamma|");
      const std::size_t q = coarse_.q();
      DenseMatrix ImP = DenseMatrix::identity(q);
      for (std::size_t i = 0; i < q; ++i)
        for (std::size_t j = 0; j < q; ++j) ImP(i, j) -= coarse_.coarse_operator(i, j);
      try {
        correction_ = LuFactors(ImP);
      } catch (const std::runtime_error&) {
        throw std::runtime_error("build_aras: (I - Phat) is singular");
      }
    }
  }

  Vec apply(const Vec& r) const override {
    if (variant_ == ArasVariant::ARAS) return apply_aras(r);
    // ARAS2: 2 M^{-1} r - M^{-1} A M^{-1} r.
    Vec z = apply_aras(r);
    Vec Az = spmv(*A_, z);
    ras_->counters()->spmvs += 1;
    Vec w = apply_aras(Az);
    Vec y = z;
    scale(y, 2.0);
    axpy(-1.0, w, y);
    return y;
  }

  std::size_t dimension() const override { return ras_->dimension(); }
  const CoarseInterfaceSpace& coarse() const { return coarse_; }
  const RasPreconditioner& ras() const { return *ras_; }
  ArasVariant variant() const { return variant_; }

private:
  Vec apply_aras(const Vec& r) const {
    Vec z = ras_->apply(r);
    if (coarse_.q() == 0) return z;
    const OverlapPartition& part = ras_->partition();
    Vec zg = restrict_interface(part, z);
    const std::size_t q = coarse_.q(), n = coarse_.n();
    // w = U^T (RG z); v = (I - Phat)^{-1} w; correction = U (v - w) on Gamma.
    Vec w(q, 0.0);
    for (std::size_t j = 0; j < q; ++j)
      for (std::size_t i = 0; i < n; ++i) w[j] += coarse_.basis(i, j) * zg[i];
    Vec v = correction_.solve(w);
    Vec diff = v;
    axpy(-1.0, w, diff);
    Vec corr(n, 0.0);
    for (std::size_t j = 0; j < q; ++j)
      for (std::size_t i = 0; i < n; ++i) corr[i] += coarse_.basis(i, j) * diff[j];
    for (std::size_t i = 0; i < n; ++i) z[part.gamma[i]] += corr[i];
    return z;
  }

  const SparseMatrix* A_;
  std::shared_ptr<RasPreconditioner> ras_;
  CoarseInterfaceSpace coarse_;
  ArasVariant variant_;
  LuFactors correction_;
};

struct CostReport {
  long local_solves = 0;
  long spmvs = 0;
  long svds = 0;
};

inline CostReport cost_report(const Counters& c) {
  return {c.local_solves.load(), c.spmvs.load(), c.svds.load()};
}

}  // namespace aras
