#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <memory>

#include "aras/analysis.hpp"
#include "aras/partition.hpp"
#include "aras/problems.hpp"
#include "aras/schwarz.hpp"

using namespace aras;

namespace {

SparseMatrix laplacian_1d(std::size_t n) {
  std::vector<std::tuple<std::size_t, std::size_t, double>> t;
  for (std::size_t i = 0; i < n; ++i) {
    t.emplace_back(i, i, 2.0);
    if (i > 0) t.emplace_back(i, i - 1, -1.0);
    if (i + 1 < n) t.emplace_back(i, i + 1, -1.0);
  }
  return sparse_from_triplets(n, n, std::move(t));
}

// Brute-force densified sum_i R~_i^T A_i^{-1} R_i (or R_i^T for AS).
DenseMatrix dense_schwarz(const SparseMatrix& A, const OverlapPartition& part,
                          SchwarzMode mode) {
  const std::size_t m = A.nrows;
  DenseMatrix M(m, m);
  for (std::size_t i = 0; i < part.p; ++i) {
    DenseMatrix Ai = dense_submatrix(A, part.extended[i]);
    LuFactors F(Ai);
    const std::size_t s = part.extended[i].size();
    for (std::size_t c = 0; c < s; ++c) {
      Vec e(s, 0.0);
      e[c] = 1.0;
      Vec col = F.solve(e);
      for (std::size_t r = 0; r < s; ++r) {
        const std::size_t gr = part.extended[i][r];
        if (mode == SchwarzMode::RAS && part.owner[gr] != i) continue;
        M(gr, part.extended[i][c]) += col[r];
      }
    }
  }
  return M;
}

}  // namespace

TEST_CASE("single-domain RAS is a direct solve", "[schwarz]") {
  SparseMatrix A = sparse_from_triplets(2, 2, {{0, 0, 2.0}, {0, 1, 1.0}, {1, 0, 1.0}, {1, 1, 2.0}});
  auto part = extend_overlap(A, band_partition(2, 1), 0);
  RasPreconditioner M(A, part);
  Vec b{3.0, 3.0};
  Vec x = M.apply(b);
  CHECK(x[0] == Catch::Approx(1.0));
  CHECK(x[1] == Catch::Approx(1.0));
}

TEST_CASE("RAS apply matches dense assembly", "[schwarz]") {
  SparseMatrix A = laplacian_1d(10);
  auto part = extend_overlap(A, band_partition(10, 2), 1);
  RasPreconditioner M(A, part);
  DenseMatrix Md = dense_schwarz(A, part, SchwarzMode::RAS);
  for (std::size_t k = 0; k < 10; ++k) {
    Vec e(10, 0.0);
    e[k] = 1.0;
    Vec y = M.apply(e);
    for (std::size_t i = 0; i < 10; ++i)
      CHECK(y[i] == Catch::Approx(Md(i, k)).margin(1e-12));
  }
}

TEST_CASE("RAS apply matches dense assembly on 16x16 Poisson", "[schwarz]") {
  GridProblem p = poisson2d(16, 16);
  auto part = extend_overlap(p.matrix, band_partition(p.matrix.nrows, 2), 1);
  RasPreconditioner M(p.matrix, part);
  DenseMatrix Md = dense_schwarz(p.matrix, part, SchwarzMode::RAS);
  const std::size_t m = p.matrix.nrows;
  Vec e(m, 0.0);
  for (std::size_t k = 0; k < m; k += 17) {
    e[k] = 1.0;
    Vec y = M.apply(e);
    for (std::size_t i = 0; i < m; ++i)
      CHECK(y[i] == Catch::Approx(Md(i, k)).margin(1e-10));
    e[k] = 0.0;
  }
}

TEST_CASE("RAS counters", "[schwarz]") {
  GridProblem p = poisson2d(10, 10);
  auto part = extend_overlap(p.matrix, band_partition(p.matrix.nrows, 4), 1);
  RasPreconditioner M(p.matrix, part);
  M.apply(Vec(p.matrix.nrows, 1.0));
  CHECK(M.counters()->local_solves == 4);
}

TEST_CASE("richardson trivial cases", "[schwarz]") {
  SparseMatrix A = sparse_from_triplets(2, 2, {{0, 0, 2.0}, {0, 1, 1.0}, {1, 0, 1.0}, {1, 1, 2.0}});
  auto part = extend_overlap(A, band_partition(2, 1), 0);
  RasPreconditioner M(A, part);

  // Exact initial guess: zero iterations.
  Vec f{3.0, 3.0};
  auto t0 = richardson_run(A, M, f, {1.0, 1.0}, 1e-10, 100);
  CHECK(t0.converged);
  CHECK(t0.iterations() == 0);

  // Exact-inverse preconditioner: one iteration from zero.
  auto t1 = richardson_run(A, M, f, {0.0, 0.0}, 1e-10, 100);
  CHECK(t1.converged);
  CHECK(t1.iterations() == 1);
  CHECK(t1.history.size() == t1.iterations() + 1);
}

TEST_CASE("richardson divergence detection", "[schwarz]") {
  // u^{k+1} = u^k + M^{-1}(f - A u^k) with M^{-1} = -3 A^{-1} diverges (T = 4I).
  SparseMatrix A = sparse_from_triplets(1, 1, {{0, 0, 1.0}});
  class Bad final : public Preconditioner {
  public:
    Vec apply(const Vec& r) const override { return {-3.0 * r[0]}; }
    std::size_t dimension() const override { return 1; }
  } bad;
  auto t = richardson_run(A, bad, {1.0}, {0.0}, 1e-10, 500);
  CHECK(t.diverged);
  CHECK_FALSE(t.converged);
}

TEST_CASE("homogeneous interface iteration, 1-D hand value", "[schwarz]") {
  // m=10, p=2, delta=1: Gamma = {3, 6}. Putting g=1 at global node 6 (the
  // artificial boundary of domain 1) and solving domain 2's block {4..9} with
  // zero interior forcing leaves the discrete harmonic value at node 3:
  // u(3) after the sweep = value propagated by domain 1's solve of {0..5}
  // with boundary data at 6. Hand solve: local solution u_j = j*g/7 on the
  // line 0..7 pinned at u_0-side boundary 0 and u_7 = g; node 3 is owned by
  // domain 1 and reads 0 here; node 6's image lands on Gamma_2 = {3}.
  SparseMatrix A = laplacian_1d(10);
  auto part = extend_overlap(A, band_partition(10, 2), 1);
  RasPreconditioner M(A, part);
  REQUIRE(part.gamma == std::vector<std::size_t>{3, 6});
  Vec g{0.0, 1.0};  // unit value at node 6
  Vec pg = homogeneous_interface_iteration(A, M, g);
  // Domain 1 solves indices {0..5} with Dirichlet data 1 at node 6: the
  // local discrete harmonic is u_j = (j+1)/7, so the trace at node 3 is 4/7.
  CHECK(pg[0] == Catch::Approx(4.0 / 7.0));
  CHECK(pg[1] == Catch::Approx(0.0).margin(1e-14));

  // Zero maps to zero, and the operator is linear.
  Vec z = homogeneous_interface_iteration(A, M, {0.0, 0.0});
  CHECK(norm2(z) == 0.0);
  Vec g1{0.3, -0.7}, g2{1.1, 0.4};
  Vec lhs = homogeneous_interface_iteration(A, M, {0.3 * g1[0] + 0.5 * g2[0],
                                                   0.3 * g1[1] + 0.5 * g2[1]});
  Vec r1 = homogeneous_interface_iteration(A, M, g1);
  Vec r2 = homogeneous_interface_iteration(A, M, g2);
  for (std::size_t i = 0; i < 2; ++i)
    CHECK(lhs[i] == Catch::Approx(0.3 * r1[i] + 0.5 * r2[i]).margin(1e-12));
}

TEST_CASE("pure linear convergence: interface errors follow P", "[schwarz]") {
  GridProblem p = poisson2d(16, 16);
  auto part = extend_overlap(p.matrix, band_partition(p.matrix.nrows, 2), 1);
  RasPreconditioner M(p.matrix, part);
  DenseMatrix P = assemble_interface_operator(p.matrix, M);
  // Reference solution.
  Vec u = lu_solve(lu_factor(densify(p.matrix)), p.rhs);
  auto trace = richardson_run(p.matrix, M, p.rhs, Vec(p.matrix.nrows, 0.0), 1e-14, 12);
  for (std::size_t k = 2; k < 7; ++k) {
    Vec ek(part.interface_size()), ek1(part.interface_size());
    for (std::size_t l = 0; l < part.gamma.size(); ++l) {
      ek[l] = trace.history[k][part.gamma[l]] - u[part.gamma[l]];
      ek1[l] = trace.history[k + 1][part.gamma[l]] - u[part.gamma[l]];
    }
    Vec Pek = matvec(P, ek);
    axpy(-1.0, ek1, Pek);
    CHECK(norm2(Pek) <= 1e-9 * norm2(ek));
  }
}

TEST_CASE("rho(T_RAS) equals max |eig(P)| on the band case", "[schwarz]") {
  GridProblem p = poisson2d(12, 12);
  auto part = extend_overlap(p.matrix, band_partition(p.matrix.nrows, 2), 1);
  RasPreconditioner M(p.matrix, part);
  DenseMatrix P = assemble_interface_operator(p.matrix, M);
  auto evP = dense_eigenvalues(P);
  const double rhoT = spectral_radius(p.matrix, M);
  CHECK(std::abs(evP[0]) == Catch::Approx(rhoT).margin(1e-6));
}

TEST_CASE("RAS converges no slower than AS", "[schwarz]") {
  GridProblem p = poisson2d(16, 16);
  auto owned = band_partition(p.matrix.nrows, 2);
  auto part = extend_overlap(p.matrix, owned, 1);
  RasPreconditioner Mras(p.matrix, part, SchwarzMode::RAS);
  RasPreconditioner Mas(p.matrix, part, SchwarzMode::AS);
  Vec u0(p.matrix.nrows, 0.0);
  auto tr = richardson_run(p.matrix, Mras, p.rhs, u0, 1e-10, 2000, StopMode::Relative, false);
  auto ta = richardson_run(p.matrix, Mas, p.rhs, u0, 1e-10, 2000, StopMode::Relative, false);
  CHECK(tr.converged);
  CHECK(tr.iterations() <= ta.iterations());
}

TEST_CASE("singular local block reports the subdomain", "[schwarz]") {
  // Second diagonal block is exactly zero.
  SparseMatrix A = sparse_from_triplets(
      4, 4, {{0, 0, 2.0}, {0, 1, -1.0}, {1, 0, -1.0}, {1, 1, 2.0}, {2, 2, 0.0}, {3, 3, 1.0}});
  auto part = extend_overlap(A, {{0, 1}, {2, 3}}, 0);
  CHECK_THROWS_WITH(RasPreconditioner(A, part),
                    Catch::Matchers::ContainsSubstring("subdomain 1"));
}
