#pragma once

#include <algorithm>
#include <cstddef>
#include <map>
#include <stdexcept>
#include <tuple>
#include <vector>

#include "aras/dense.hpp"

namespace aras {

// Compressed-row sparse matrix with sorted, duplicate-free columns per row.
struct SparseMatrix {
  std::size_t nrows = 0;
  std::size_t ncols = 0;
  std::vector<std::size_t> row_offsets;  // length nrows+1
  std::vector<std::size_t> col_indices;
  Vec values;

  std::size_t nnz() const { return values.size(); }
};

// Build CSR from (row, col, value) triplets; duplicates are summed.
inline SparseMatrix sparse_from_triplets(
    std::size_t nrows, std::size_t ncols,
    std::vector<std::tuple<std::size_t, std::size_t, double>> triplets) {
  for (const auto& [i, j, v] : triplets) {
    (void)v;
    if (i >= nrows || j >= ncols)
      throw std::invalid_argument("sparse_from_triplets: index out of range");
  }
  std::sort(triplets.begin(), triplets.end(),
            [](const auto& a, const auto& b) {
              return std::tie(std::get<0>(a), std::get<1>(a)) <
                     std::tie(std::get<0>(b), std::get<1>(b));
            });
  SparseMatrix A;
  A.nrows = nrows;
  A.ncols = ncols;
  A.row_offsets.assign(nrows + 1, 0);
  for (std::size_t k = 0; k < triplets.size(); ++k) {
    const auto& [i, j, v] = triplets[k];
    if (!A.col_indices.empty() && A.row_offsets[i + 1] > A.row_offsets[i] &&
        k > 0 && std::get<0>(triplets[k - 1]) == i && std::get<1>(triplets[k - 1]) == j) {
      A.values.back() += v;
      continue;
    }
    A.col_indices.push_back(j);
    A.values.push_back(v);
    A.row_offsets[i + 1]++;
  }
  for (std::size_t i = 0; i < nrows; ++i) A.row_offsets[i + 1] += A.row_offsets[i];
  return A;
}

inline Vec spmv(const SparseMatrix& A, const Vec& x) {
  if (x.size() != A.ncols) throw std::invalid_argument("spmv: dimension mismatch");
  Vec y(A.nrows, 0.0);
  for (std::size_t i = 0; i < A.nrows; ++i) {
    double s = 0.0;
    for (std::size_t k = A.row_offsets[i]; k < A.row_offsets[i + 1]; ++k)
      s += A.values[k] * x[A.col_indices[k]];
    y[i] = s;
  }
  return y;
}

inline SparseMatrix sparse_scale(const SparseMatrix& A, double c) {
  SparseMatrix B = A;
  for (double& v : B.values) v *= c;
  return B;
}

inline DenseMatrix densify(const SparseMatrix& A) {
  DenseMatrix D(A.nrows, A.ncols);
  for (std::size_t i = 0; i < A.nrows; ++i)
    for (std::size_t k = A.row_offsets[i]; k < A.row_offsets[i + 1]; ++k)
      D(i, A.col_indices[k]) = A.values[k];
  return D;
}

// Dense principal submatrix A(rows, rows) in the given index order.
inline DenseMatrix dense_submatrix(const SparseMatrix& A,
                                   const std::vector<std::size_t>& rows) {
  std::vector<std::ptrdiff_t> pos(A.ncols, -1);
  for (std::size_t l = 0; l < rows.size(); ++l) pos[rows[l]] = std::ptrdiff_t(l);
  DenseMatrix D(rows.size(), rows.size());
  for (std::size_t l = 0; l < rows.size(); ++l) {
    const std::size_t i = rows[l];
    for (std::size_t k = A.row_offsets[i]; k < A.row_offsets[i + 1]; ++k) {
      const std::ptrdiff_t c = pos[A.col_indices[k]];
      if (c >= 0) D(l, std::size_t(c)) = A.values[k];
    }
  }
  return D;
}

// Symmetric adjacency (pattern of A + A^T, no self loops).
inline std::vector<std::vector<std::size_t>> adjacency(const SparseMatrix& A) {
  std::vector<std::vector<std::size_t>> adj(A.nrows);
  for (std::size_t i = 0; i < A.nrows; ++i)
    for (std::size_t k = A.row_offsets[i]; k < A.row_offsets[i + 1]; ++k) {
      const std::size_t j = A.col_indices[k];
      if (j == i) continue;
      adj[i].push_back(j);
      adj[j].push_back(i);
    }
  for (auto& nb : adj) {
    std::sort(nb.begin(), nb.end());
    nb.erase(std::unique(nb.begin(), nb.end()), nb.end());
  }
  return adj;
}

}  // namespace aras
