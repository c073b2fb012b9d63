#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <tuple>
#include <vector>

#include "aras/sparse.hpp"

namespace aras {

enum class OperatorKind { Poisson, Helmholtz };

// Finite-difference grid problem over the interior points of an
// m_x x m_y grid (boundary included in the counts, Dirichlet rows
// eliminated). Interior numbering: index = ix * (m_y - 2) + iy, so a
// "row" of the numbering is a grid line of constant x and a band split
// cuts the domain along x.
struct GridProblem {
  std::size_t m_x = 0, m_y = 0;
  double len_x = 1.0, len_y = 1.0;
  OperatorKind kind = OperatorKind::Poisson;
  double omega = 0.0;
  SparseMatrix matrix;
  Vec rhs;

  std::size_t nx() const { return m_x - 2; }
  std::size_t ny() const { return m_y - 2; }
  double h_x() const { return len_x / double(m_x - 1); }
  double h_y() const { return len_y / double(m_y - 1); }
  double x_of(std::size_t ix) const { return double(ix + 1) * h_x(); }
  double y_of(std::size_t iy) const { return double(iy + 1) * h_y(); }
};

namespace detail {

inline GridProblem five_point(std::size_t m_x, std::size_t m_y, double len_x, double len_y,
                              double shift) {
  if (m_x < 3 || m_y < 3) throw std::invalid_argument("grid generator: need m >= 3");
  GridProblem p;
  p.m_x = m_x;
  p.m_y = m_y;
  p.len_x = len_x;
  p.len_y = len_y;
  const std::size_t nx = m_x - 2, ny = m_y - 2, N = nx * ny;
  const double ax = 1.0 / (p.h_x() * p.h_x());
  const double ay = 1.0 / (p.h_y() * p.h_y());
  std::vector<std::tuple<std::size_t, std::size_t, double>> trip;
  trip.reserve(5 * N);
  for (std::size_t ix = 0; ix < nx; ++ix)
    for (std::size_t iy = 0; iy < ny; ++iy) {
      const std::size_t row = ix * ny + iy;
      trip.emplace_back(row, row, 2.0 * ax + 2.0 * ay - shift);
      if (ix > 0) trip.emplace_back(row, row - ny, -ax);
      if (ix + 1 < nx) trip.emplace_back(row, row + ny, -ax);
      if (iy > 0) trip.emplace_back(row, row - 1, -ay);
      if (iy + 1 < ny) trip.emplace_back(row, row + 1, -ay);
    }
  p.matrix = sparse_from_triplets(N, N, std::move(trip));
  return p;
}

}  // namespace detail

// Smooth manufactured solution: product of half-sine bumps.
inline Vec bump_solution(const GridProblem& p) {
  Vec u(p.nx() * p.ny());
  for (std::size_t ix = 0; ix < p.nx(); ++ix)
    for (std::size_t iy = 0; iy < p.ny(); ++iy)
      u[ix * p.ny() + iy] = std::sin(M_PI * p.x_of(ix) / p.len_x) *
                            std::sin(M_PI * p.y_of(iy) / p.len_y);
  return u;
}

enum class RhsKind { Manufactured, Ones, Random, RampX };

inline Vec make_rhs(const GridProblem& p, RhsKind kind, std::uint64_t seed = 0) {
  const std::size_t N = p.nx() * p.ny();
  switch (kind) {
    case RhsKind::Manufactured:
      return spmv(p.matrix, bump_solution(p));
    case RhsKind::Ones:
      return Vec(N, 1.0);
    case RhsKind::Random: {
      Vec f(N);
      std::uint64_t state = seed;
      for (double& v : f) {
        std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        z = z ^ (z >> 31);
        v = double(z >> 11) * 0x1.0p-53;
      }
      return f;
    }
    case RhsKind::RampX: {
      Vec f(N);
      for (std::size_t ix = 0; ix < p.nx(); ++ix)
        for (std::size_t iy = 0; iy < p.ny(); ++iy)
          f[ix * p.ny() + iy] = p.x_of(ix) / p.len_x;
      return f;
    }
  }
  throw std::invalid_argument("make_rhs: unknown kind");
}

// -laplace u = f on [0,1] x [0,pi], Dirichlet boundary, 5-point stencil.
inline GridProblem poisson2d(std::size_t m_x, std::size_t m_y) {
  GridProblem p = detail::five_point(m_x, m_y, 1.0, M_PI, 0.0);
  p.kind = OperatorKind::Poisson;
  p.rhs = make_rhs(p, RhsKind::Manufactured);
  return p;
}

// (-laplace - omega) u = f on the unit square with
// omega = 0.98 * (4/h^2) * (1 - cos(pi h)), just under the smallest
// eigenvalue of the 2-D discrete Laplacian.
inline GridProblem helmholtz2d(std::size_t m) {
  const double h = 1.0 / double(m - 1);
  const double omega = 0.98 * (4.0 / (h * h)) * (1.0 - std::cos(M_PI * h));
  GridProblem p = detail::five_point(m, m, 1.0, 1.0, omega);
  p.kind = OperatorKind::Helmholtz;
  p.omega = omega;
  p.rhs = make_rhs(p, RhsKind::Manufactured);
  return p;
}

}  // namespace aras
