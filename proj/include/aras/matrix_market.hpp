#pragma once

#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "aras/sparse.hpp"

namespace aras {

// Matrix Market coordinate-format I/O (real general/symmetric, 1-based).
inline SparseMatrix read_matrix_market(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("read_matrix_market: cannot open " + path);
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("read_matrix_market: empty file");
  std::istringstream banner(line);
  std::string tag, object, format, field, symmetry;
  banner >> tag >> object >> format >> field >> symmetry;
  if (tag != "%%MatrixMarket" || object != "matrix" || format != "coordinate" ||
      field != "real" || (symmetry != "general" && symmetry != "symmetric"))
    throw std::runtime_error("read_matrix_market: unsupported header: " + line);
  const bool symmetric = (symmetry == "symmetric");
  while (std::getline(in, line)) {
    if (!line.empty() && line[0] != '%') break;
  }
  std::istringstream sizes(line);
  std::size_t nrows = 0, ncols = 0, nnz = 0;
  if (!(sizes >> nrows >> ncols >> nnz))
    throw std::runtime_error("read_matrix_market: bad size line");
  std::vector<std::tuple<std::size_t, std::size_t, double>> trip;
  trip.reserve(symmetric ? 2 * nnz : nnz);
  for (std::size_t k = 0; k < nnz; ++k) {
    std::size_t i = 0, j = 0;
    double v = 0.0;
    if (!(in >> i >> j >> v))
      throw std::runtime_error("read_matrix_market: truncated entry list");
    if (i < 1 || j < 1 || i > nrows || j > ncols)
      throw std::runtime_error("read_matrix_market: index out of range");
    trip.emplace_back(i - 1, j - 1, v);
    if (symmetric && i != j) trip.emplace_back(j - 1, i - 1, v);
  }
  return sparse_from_triplets(nrows, ncols, std::move(trip));
}

inline void write_matrix_market(const std::string& path, const SparseMatrix& A) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("write_matrix_market: cannot open " + path);
  out << "%%MatrixMarket matrix coordinate real general\n";
  out << A.nrows << ' ' << A.ncols << ' ' << A.nnz() << '\n';
  out.precision(17);
  for (std::size_t i = 0; i < A.nrows; ++i)
    for (std::size_t k = A.row_offsets[i]; k < A.row_offsets[i + 1]; ++k)
      out << (i + 1) << ' ' << (A.col_indices[k] + 1) << ' ' << A.values[k] << '\n';
}

inline Vec read_vector_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("read_vector_file: cannot open " + path);
  Vec v;
  double x;
  while (in >> x) v.push_back(x);
  return v;
}

inline void write_vector_file(const std::string& path, const Vec& v) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("write_vector_file: cannot open " + path);
  out.precision(17);
  for (double x : v) out << x << '\n';
}

}  // namespace aras
