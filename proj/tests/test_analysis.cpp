#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <memory>

#include "aras/analysis.hpp"
#include "aras/aras.hpp"
#include "aras/partition.hpp"
#include "aras/problems.hpp"

using namespace aras;

TEST_CASE("interface mode factor basics", "[analysis]") {
  // No overlap: the factor is 1 for every mode.
  CHECK(interface_mode_factor(5.0, 0.1, 10, 0) == 1.0);
  // Characteristic roots satisfy r1 r2 = 1 and r1 + r2 = 2 + lambda h^2; the
  // closed form must agree with a direct small-N evaluation.
  const double lam = 7.3, h = 0.2;
  const double a = lam * h * h;
  const double r1 = (2.0 + a + std::sqrt(a * a + 4.0 * a)) / 2.0;
  const double r2 = (2.0 + a - std::sqrt(a * a + 4.0 * a)) / 2.0;
  CHECK(r1 * r2 == Catch::Approx(1.0));
  CHECK(r1 + r2 == Catch::Approx(2.0 + a));
  const std::size_t N = 9, d = 3;
  const double direct = (std::pow(r1, double(N - d)) - std::pow(r2, double(N - d))) /
                        (std::pow(r1, double(N)) - std::pow(r2, double(N)));
  CHECK(interface_mode_factor(lam, h, N, d) == Catch::Approx(direct).epsilon(1e-13));
  // Large lambda*N: no overflow, value in (0, 1).
  const double big = interface_mode_factor(1e6, 0.05, 400, 3);
  CHECK(std::isfinite(big));
  CHECK(big > 0.0);
  CHECK(big < 1.0);
  // Monotone decreasing in the overlap depth.
  double prev = 1.0;
  for (std::size_t dd = 1; dd <= 6; ++dd) {
    const double f = interface_mode_factor(lam, h, 12, dd);
    CHECK(f < prev);
    prev = f;
  }
}

TEST_CASE("analytic spectrum is symmetric and sorted", "[analysis]") {
  TwoDomainPoissonSpec s = two_domain_spec(16, 16, 1);
  auto d = analytic_interface_modes(s);
  REQUIRE(d.size() == 14);
  CHECK(std::is_sorted(d.rbegin(), d.rend()));
  auto spec = analytic_spectrum(s);
  REQUIRE(spec.size() == 28);
  for (std::size_t i = 0; i < d.size(); ++i) {
    CHECK(spec[2 * i].real() == Catch::Approx(d[i]));
    CHECK(spec[2 * i + 1].real() == Catch::Approx(-d[i]));
  }
}

TEST_CASE("analytic eigenvalues match the assembled interface operator", "[analysis]") {
  GridProblem p = poisson2d(16, 16);
  auto part = extend_overlap(p.matrix, band_partition(p.matrix.nrows, 2), 1);
  RasPreconditioner M(p.matrix, part);
  DenseMatrix P = assemble_interface_operator(p.matrix, M);
  auto ev = dense_eigenvalues(P);  // sorted by decreasing modulus
  TwoDomainPoissonSpec s = two_domain_spec(16, 16, 1);
  auto d = analytic_interface_modes(s);
  REQUIRE(ev.size() == 2 * d.size());
  for (std::size_t i = 0; i < d.size(); ++i) {
    CHECK(std::abs(ev[2 * i]) == Catch::Approx(d[i]).margin(1e-6));
    CHECK(std::abs(ev[2 * i + 1]) == Catch::Approx(d[i]).margin(1e-6));
    CHECK(std::abs(ev[2 * i].imag()) < 1e-8);
  }
}

TEST_CASE("theoretical rho at the extremes", "[analysis]") {
  TwoDomainPoissonSpec s = two_domain_spec(16, 16, 1);
  auto d = analytic_interface_modes(s);
  RhoTriple t0 = theoretical_rho(s, 0);
  CHECK(t0.ras == Catch::Approx(d[0]));
  CHECK(t0.aras == Catch::Approx(d[0]));
  CHECK(t0.aras2 == Catch::Approx(d[0] * d[0]));
  RhoTriple tq = theoretical_rho(s, 5);
  CHECK(tq.aras == Catch::Approx(d[5]));
  RhoTriple tall = theoretical_rho(s, d.size());
  CHECK(tall.aras == 0.0);
  CHECK(tall.aras2 == 0.0);
  CHECK_THROWS_AS(theoretical_rho(s, d.size() + 1), std::invalid_argument);
}

TEST_CASE("reference convergence factors on the 32x32 half-split", "[analysis]") {
  TwoDomainPoissonSpec s = two_domain_spec(32, 32, 1);
  REQUIRE(s.N_x == 17);
  REQUIRE(s.overlap_steps == 3);
  auto d = analytic_interface_modes(s);
  REQUIRE(d.size() == 30);
  CHECK(d[0] == Catch::Approx(0.8106).margin(5e-4));
  CHECK(d[15] == Catch::Approx(0.2535).margin(5e-4));
  CHECK(d[29] == Catch::Approx(0.1531).margin(5e-4));
  CHECK(d[15] * d[15] == Catch::Approx(0.0643).margin(5e-4));
}

TEST_CASE("measured rho follows the analytic prediction across q", "[analysis]") {
  GridProblem p = poisson2d(16, 16);
  auto part = extend_overlap(p.matrix, band_partition(p.matrix.nrows, 2), 1);
  auto ras = std::make_shared<RasPreconditioner>(p.matrix, part);
  TwoDomainPoissonSpec s = two_domain_spec(16, 16, 1);
  double prev = 2.0;
  for (std::size_t q : {0ul, 2ul, 5ul}) {
    RhoTriple pred = theoretical_rho(s, q);
    CoarseInterfaceSpace cs;
    if (q == 0) {
      cs.basis = DenseMatrix(part.interface_size(), 0);
      cs.coarse_operator = DenseMatrix(0, 0);
    } else {
      cs = eigen_truncated_basis(p.matrix, *ras, q);
    }
    ArasPreconditioner M1(p.matrix, ras, cs, ArasVariant::ARAS);
    const double rho = spectral_radius(p.matrix, M1);
    CHECK(rho == Catch::Approx(pred.aras).margin(1e-4));
    CHECK(rho < prev);
    prev = rho;
  }
}

TEST_CASE("eigen-truncated basis is orthonormal and reproduces the top spectrum",
          "[analysis]") {
  GridProblem p = poisson2d(14, 14);
  auto part = extend_overlap(p.matrix, band_partition(p.matrix.nrows, 2), 1);
  RasPreconditioner M(p.matrix, part);
  const std::size_t q = 3;
  CoarseInterfaceSpace cs = eigen_truncated_basis(p.matrix, M, q);
  REQUIRE(cs.q() == 2 * q);
  const std::size_t n = cs.n();
  for (std::size_t a = 0; a < cs.q(); ++a)
    for (std::size_t b = 0; b <= a; ++b) {
      double s = 0.0;
      for (std::size_t i = 0; i < n; ++i) s += cs.basis(i, a) * cs.basis(i, b);
      CHECK(s == Catch::Approx(a == b ? 1.0 : 0.0).margin(1e-10));
    }
  auto evP = dense_eigenvalues(assemble_interface_operator(p.matrix, M));
  auto evH = dense_eigenvalues(cs.coarse_operator);
  for (std::size_t i = 0; i < 2 * q; ++i)
    CHECK(std::abs(evH[i]) == Catch::Approx(std::abs(evP[i])).margin(1e-8));
}

TEST_CASE("full interface space", "[analysis]") {
  GridProblem p = poisson2d(12, 12);
  auto part = extend_overlap(p.matrix, band_partition(p.matrix.nrows, 2), 1);
  RasPreconditioner M(p.matrix, part);
  CoarseInterfaceSpace cs = full_interface_space(p.matrix, M);
  CHECK(cs.q() == part.interface_size());
  DenseMatrix P = assemble_interface_operator(p.matrix, M);
  CHECK(cs.coarse_operator.rows() == P.rows());
  for (std::size_t i = 0; i < P.rows(); ++i)
    for (std::size_t j = 0; j < P.cols(); ++j)
      CHECK(cs.coarse_operator(i, j) == Catch::Approx(P(i, j)).margin(1e-14));
}

TEST_CASE("condition number of an exactly preconditioned system is one", "[analysis]") {
  GridProblem p = poisson2d(10, 10);
  class Inv final : public Preconditioner {
  public:
    explicit Inv(const SparseMatrix& A) : f_(densify(A)), m_(A.nrows) {}
    Vec apply(const Vec& r) const override { return f_.solve(r); }
    std::size_t dimension() const override { return m_; }

  private:
    LuFactors f_;
    std::size_t m_;
  } inv(p.matrix);
  CHECK(condition_number(p.matrix, inv) == Catch::Approx(1.0).margin(1e-10));
  // Identity preconditioner: kappa_2(A) = lambda_max / lambda_min.
  IdentityPreconditioner I(p.matrix.nrows);
  const double hx = p.h_x(), hy = p.h_y();
  auto lam = [&](std::size_t k, std::size_t l) {
    return (2.0 / (hx * hx)) * (1.0 - std::cos(double(k) * M_PI / double(p.m_x - 1))) +
           (2.0 / (hy * hy)) * (1.0 - std::cos(double(l) * M_PI / double(p.m_y - 1)));
  };
  const double kref = lam(p.m_x - 2, p.m_y - 2) / lam(1, 1);
  CHECK(condition_number(p.matrix, I) == Catch::Approx(kref).epsilon(1e-10));
}

TEST_CASE("dense assembly is capped", "[analysis]") {
  GridProblem p = poisson2d(74, 74);  // 72^2 = 5184 unknowns
  IdentityPreconditioner I(p.matrix.nrows);
  CHECK_THROWS_AS(assemble_iteration_operator(p.matrix, I), std::invalid_argument);
  CHECK_THROWS_AS(assemble_preconditioned_matrix(p.matrix, I), std::invalid_argument);
}
