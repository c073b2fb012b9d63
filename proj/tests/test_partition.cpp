#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <set>

#include "aras/partition.hpp"
#include "aras/problems.hpp"
#include "aras/sparse.hpp"

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

bool connected(const std::vector<std::vector<std::size_t>>& adj,
               const std::vector<std::size_t>& part) {
  if (part.empty()) return false;
  std::set<std::size_t> inpart(part.begin(), part.end()), seen;
  std::vector<std::size_t> stack{part[0]};
  seen.insert(part[0]);
  while (!stack.empty()) {
    const std::size_t u = stack.back();
    stack.pop_back();
    for (std::size_t v : adj[u])
      if (inpart.count(v) && !seen.count(v)) {
        seen.insert(v);
        stack.push_back(v);
      }
  }
  return seen.size() == part.size();
}

}  // namespace

TEST_CASE("band partition sizes", "[partition]") {
  auto p2 = band_partition(10, 2);
  CHECK(p2[0] == std::vector<std::size_t>{0, 1, 2, 3, 4});
  CHECK(p2[1] == std::vector<std::size_t>{5, 6, 7, 8, 9});

  auto p9 = band_partition(9, 2);
  CHECK(p9[0].size() == 5);
  CHECK(p9[1].size() == 4);
  CHECK(p9[1].front() == 5);

  CHECK_THROWS(band_partition(3, 5));
}

TEST_CASE("overlap extension and exterior interface, 1-D", "[partition]") {
  SparseMatrix A = laplacian_1d(10);
  auto part = extend_overlap(A, band_partition(10, 2), 1);
  CHECK(part.extended[0] == std::vector<std::size_t>{0, 1, 2, 3, 4, 5});
  CHECK(part.extended[1] == std::vector<std::size_t>{4, 5, 6, 7, 8, 9});
  // The interface of a subdomain is its artificial boundary: the first
  // layer outside the extended subdomain.
  CHECK(part.gamma_i[0] == std::vector<std::size_t>{6});
  CHECK(part.gamma_i[1] == std::vector<std::size_t>{3});
  CHECK(part.gamma == std::vector<std::size_t>{3, 6});
  CHECK(part.interface_size() == 2);
}

TEST_CASE("zero overlap couples the crossing-edge endpoints", "[partition]") {
  SparseMatrix A = laplacian_1d(10);
  auto part = extend_overlap(A, band_partition(10, 2), 0);
  CHECK(part.extended[0] == part.owned[0]);
  CHECK(part.gamma == std::vector<std::size_t>{4, 5});
}

TEST_CASE("saturating overlap reaches all rows", "[partition]") {
  SparseMatrix A = laplacian_1d(10);
  auto part = extend_overlap(A, band_partition(10, 2), 20);
  for (std::size_t i = 0; i < 2; ++i) {
    CHECK(part.extended[i].size() == 10);
    CHECK(part.gamma_i[i].empty());
  }
}

TEST_CASE("overlap monotonicity", "[partition]") {
  GridProblem p = poisson2d(12, 12);
  auto owned = band_partition(p.matrix.nrows, 3);
  std::vector<std::size_t> prev;
  for (std::size_t d = 0; d <= 3; ++d) {
    auto part = extend_overlap(p.matrix, owned, d);
    if (d > 0) {
      std::set<std::size_t> cur(part.extended[1].begin(), part.extended[1].end());
      for (std::size_t v : prev) CHECK(cur.count(v) == 1);
    }
    prev = part.extended[1];
  }
}

TEST_CASE("interface indices are owned by a different subdomain", "[partition]") {
  GridProblem p = poisson2d(16, 16);
  auto part = extend_overlap(p.matrix, band_partition(p.matrix.nrows, 4), 1);
  for (std::size_t i = 0; i < part.p; ++i)
    for (std::size_t v : part.gamma_i[i]) CHECK(part.owner[v] != i);
}

TEST_CASE("band interface count on a grid: |Gamma| = m_x (2p-2)", "[partition]") {
  // 5-point stencil, row = line of constant x with m_y-2 interior points.
  for (std::size_t pcount : {2ul, 4ul}) {
    GridProblem p = poisson2d(18, 18);
    auto part = extend_overlap(p.matrix, band_partition(p.matrix.nrows, pcount), 1);
    CHECK(part.interface_size() == (p.m_y - 2) * (2 * pcount - 2));
  }
}

TEST_CASE("restriction and prolongation identities", "[partition]") {
  GridProblem p = poisson2d(10, 10);
  auto part = extend_overlap(p.matrix, band_partition(p.matrix.nrows, 3), 1);
  const std::size_t m = part.m, n = part.interface_size();
  Vec x(m);
  for (std::size_t i = 0; i < m; ++i) x[i] = std::sin(double(i) + 1.0);

  // R_Gamma R_Gamma^T = I_n.
  Vec g(n);
  for (std::size_t i = 0; i < n; ++i) g[i] = double(i) - 2.5;
  Vec back = restrict_interface(part, prolong_interface(part, g));
  CHECK(back == g);

  // prolong_interface is zero off Gamma.
  Vec lifted = prolong_interface(part, g);
  std::set<std::size_t> gam(part.gamma.begin(), part.gamma.end());
  for (std::size_t i = 0; i < m; ++i)
    if (!gam.count(i)) CHECK(lifted[i] == 0.0);

  // Partition of unity: sum_i R~_i^T R_i x = x (any overlap).
  Vec acc(m, 0.0);
  for (std::size_t i = 0; i < part.p; ++i) {
    Vec loc = restrict_subdomain(part, i, x);
    Vec scattered = prolong_restricted(part, i, loc);
    axpy(1.0, scattered, acc);
  }
  for (std::size_t i = 0; i < m; ++i) CHECK(acc[i] == Catch::Approx(x[i]).margin(1e-14));
}

TEST_CASE("greedy partition on a path", "[partition]") {
  SparseMatrix A = laplacian_1d(10);
  auto owned = greedy_graph_partition(A, 2, 0);
  const auto adj = adjacency(A);
  REQUIRE(owned.size() == 2);
  CHECK(owned[0].size() + owned[1].size() == 10);
  CHECK(connected(adj, owned[0]));
  CHECK(connected(adj, owned[1]));
}

TEST_CASE("greedy partition on a grid: sizes and connectivity", "[partition]") {
  GridProblem p = poisson2d(10, 10);  // 8x8 interior
  auto owned = greedy_graph_partition(p.matrix, 4, 0);
  const auto adj = adjacency(p.matrix);
  std::size_t total = 0;
  for (const auto& s : owned) {
    CHECK(s.size() >= 13);
    CHECK(s.size() <= 19);
    CHECK(connected(adj, s));
    total += s.size();
  }
  CHECK(total == 64);
  // Deterministic for a fixed seed.
  CHECK(greedy_graph_partition(p.matrix, 4, 0) == owned);
}

TEST_CASE("greedy partition respects components", "[partition]") {
  // Two disjoint paths of 5 vertices.
  std::vector<std::tuple<std::size_t, std::size_t, double>> t;
  for (std::size_t i = 0; i < 10; ++i) t.emplace_back(i, i, 2.0);
  for (std::size_t i = 0; i < 4; ++i) {
    t.emplace_back(i, i + 1, -1.0);
    t.emplace_back(i + 1, i, -1.0);
    t.emplace_back(i + 5, i + 6, -1.0);
    t.emplace_back(i + 6, i + 5, -1.0);
  }
  SparseMatrix A = sparse_from_triplets(10, 10, std::move(t));
  auto owned = greedy_graph_partition(A, 2, 0);
  std::set<std::size_t> s0(owned[0].begin(), owned[0].end());
  const bool comp0 = s0.count(0) > 0;
  for (std::size_t v = 0; v < 5; ++v) CHECK(s0.count(v) == (comp0 ? 1u : 0u));
  for (std::size_t v = 5; v < 10; ++v) CHECK(s0.count(v) == (comp0 ? 0u : 1u));
}

TEST_CASE("partition file round trip", "[partition]") {
  auto owned = band_partition(11, 3);
  const std::string path = "part_roundtrip_test.txt";
  save_partition(path, owned, 11, 2);
  PartitionFile f = load_partition(path);
  CHECK(f.m == 11);
  CHECK(f.delta == 2);
  CHECK(f.owned == owned);
  std::remove(path.c_str());
}
