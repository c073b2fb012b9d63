#pragma once

#include <algorithm>
#include <deque>
#include <fstream>
#include <limits>
#include <numeric>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "aras/sparse.hpp"

namespace aras {

// Overlapping algebraic partition of the row set of A.
//
// owned[i]    = W_{i,0}, a disjoint cover of {0..m-1}
// extended[i] = W_{i,delta}, the delta-fold adjacency closure of owned[i]
// gamma_i[i]  = the first layer of vertices strictly outside W_{i,delta}
//               (the artificial boundary of subdomain i)
// gamma       = union of the gamma_i, sorted ascending
struct OverlapPartition {
  std::size_t p = 0;
  std::size_t m = 0;
  std::size_t delta = 0;
  std::vector<std::vector<std::size_t>> owned;
  std::vector<std::vector<std::size_t>> extended;
  std::vector<std::vector<std::size_t>> gamma_i;
  std::vector<std::size_t> gamma;
  std::vector<std::size_t> owner;  // row -> owning subdomain

  std::size_t interface_size() const { return gamma.size(); }
};

inline std::vector<std::vector<std::size_t>> band_partition(std::size_t m, std::size_t p) {
  if (p == 0 || p > m) throw std::invalid_argument("band_partition: need 1 <= p <= m");
  std::vector<std::vector<std::size_t>> owned(p);
  const std::size_t base = m / p, extra = m % p;
  std::size_t next = 0;
  for (std::size_t i = 0; i < p; ++i) {
    const std::size_t size = base + (i < extra ? 1 : 0);
    for (std::size_t k = 0; k < size; ++k) owned[i].push_back(next++);
  }
  return owned;
}

namespace detail {

inline std::vector<std::size_t> bfs_order(const std::vector<std::vector<std::size_t>>& adj,
                                          std::size_t start,
                                          std::vector<int>& dist) {
  dist.assign(adj.size(), -1);
  std::deque<std::size_t> q{start};
  dist[start] = 0;
  std::vector<std::size_t> order;
  while (!q.empty()) {
    const std::size_t u = q.front();
    q.pop_front();
    order.push_back(u);
    for (std::size_t v : adj[u])
      if (dist[v] < 0) {
        dist[v] = dist[u] + 1;
        q.push_back(v);
      }
  }
  return order;
}

}  // namespace detail

// Deterministic METIS stand-in: grow p connected parts from spread-out seeds
// by synchronized BFS, then attach any leftovers to the smallest neighbor part.
inline std::vector<std::vector<std::size_t>> greedy_graph_partition(const SparseMatrix& A,
                                                                    std::size_t p,
                                                                    std::size_t seed) {
  const std::size_t m = A.nrows;
  if (p == 0 || p > m) throw std::invalid_argument("greedy_graph_partition: need 1 <= p <= m");
  const auto adj = adjacency(A);

  // Pick seeds: start from a deterministic vertex, then repeatedly take the
  // vertex farthest from all chosen seeds (k-center style). Vertices in other
  // components have infinite distance, so components get their own seeds.
  std::vector<std::size_t> seeds;
  std::vector<int> dist, best(m, std::numeric_limits<int>::max());
  seeds.push_back(seed % m);
  detail::bfs_order(adj, seeds[0], dist);
  for (std::size_t i = 0; i < m; ++i)
    best[i] = (dist[i] < 0 ? std::numeric_limits<int>::max() : dist[i]);
  while (seeds.size() < p) {
    std::size_t far = 0;
    int fd = -1;
    for (std::size_t i = 0; i < m; ++i)
      if (best[i] > fd) {
        fd = best[i];
        far = i;
      }
    seeds.push_back(far);
    detail::bfs_order(adj, far, dist);
    for (std::size_t i = 0; i < m; ++i)
      if (dist[i] >= 0) best[i] = std::min(best[i], dist[i]);
  }

  std::vector<std::ptrdiff_t> part(m, -1);
  std::vector<std::vector<std::size_t>> owned(p);
  std::deque<std::pair<std::size_t, std::size_t>> frontier;  // (vertex, part)
  const std::size_t cap = (m + p - 1) / p + std::max<std::size_t>(1, m / (10 * p));
  for (std::size_t i = 0; i < p; ++i)
    if (part[seeds[i]] < 0) {
      part[seeds[i]] = std::ptrdiff_t(i);
      owned[i].push_back(seeds[i]);
      frontier.emplace_back(seeds[i], i);
    }
  while (!frontier.empty()) {
    const auto [u, i] = frontier.front();
    frontier.pop_front();
    for (std::size_t v : adj[u]) {
      if (part[v] >= 0 || owned[i].size() >= cap) continue;
      part[v] = std::ptrdiff_t(i);
      owned[i].push_back(v);
      frontier.emplace_back(v, i);
    }
  }
  // Attach anything left (capped-out or isolated) to the smallest adjacent
  // part, or the globally smallest part if none is adjacent.
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t v = 0; v < m; ++v) {
      if (part[v] >= 0) continue;
      std::ptrdiff_t target = -1;
      for (std::size_t u : adj[v])
        if (part[u] >= 0 &&
            (target < 0 || owned[std::size_t(part[u])].size() < owned[std::size_t(target)].size()))
          target = part[u];
      if (target < 0) continue;
      part[v] = target;
      owned[std::size_t(target)].push_back(v);
      changed = true;
    }
    // Isolated vertices (no assigned neighbor at all): dump into smallest part.
    bool any_unassigned = false;
    for (std::size_t v = 0; v < m; ++v) any_unassigned |= (part[v] < 0);
    if (any_unassigned && !changed) {
      for (std::size_t v = 0; v < m; ++v)
        if (part[v] < 0) {
          std::size_t smallest = 0;
          for (std::size_t i = 1; i < p; ++i)
            if (owned[i].size() < owned[smallest].size()) smallest = i;
          part[v] = std::ptrdiff_t(smallest);
          owned[smallest].push_back(v);
        }
      changed = false;
    }
  }
  for (auto& s : owned) std::sort(s.begin(), s.end());
  return owned;
}

inline OverlapPartition extend_overlap(const SparseMatrix& A,
                                       const std::vector<std::vector<std::size_t>>& owned,
                                       std::size_t delta) {
  const std::size_t m = A.nrows;
  OverlapPartition part;
  part.p = owned.size();
  part.m = m;
  part.delta = delta;
  part.owned = owned;
  part.owner.assign(m, part.p);
  for (std::size_t i = 0; i < part.p; ++i)
    for (std::size_t v : owned[i]) {
      if (part.owner[v] != part.p)
        throw std::invalid_argument("extend_overlap: owned sets are not disjoint");
      part.owner[v] = i;
    }
  for (std::size_t v = 0; v < m; ++v)
    if (part.owner[v] == part.p)
      throw std::invalid_argument("extend_overlap: owned sets do not cover all rows");

  const auto adj = adjacency(A);
  part.extended.resize(part.p);
  part.gamma_i.resize(part.p);
  std::vector<char> mark(m, 0);
  for (std::size_t i = 0; i < part.p; ++i) {
    std::vector<std::size_t> cur = owned[i];
    for (std::size_t v : cur) mark[v] = 1;
    std::vector<std::size_t> layer = cur;
    for (std::size_t step = 0; step < delta; ++step) {
      std::vector<std::size_t> next;
      for (std::size_t u : layer)
        for (std::size_t v : adj[u])
          if (!mark[v]) {
            mark[v] = 1;
            next.push_back(v);
          }
      cur.insert(cur.end(), next.begin(), next.end());
      layer = std::move(next);
      if (layer.empty()) break;
    }
    std::sort(cur.begin(), cur.end());
    part.extended[i] = cur;
    // Exterior layer: first ring of vertices outside W_{i,delta}.
    std::vector<std::size_t> ring;
    for (std::size_t u : cur)
      for (std::size_t v : adj[u])
        if (!mark[v]) {
          mark[v] = 1;
          ring.push_back(v);
        }
    std::sort(ring.begin(), ring.end());
    part.gamma_i[i] = ring;
    for (std::size_t v : cur) mark[v] = 0;
    for (std::size_t v : ring) mark[v] = 0;
  }
  std::set<std::size_t> g;
  for (const auto& gi : part.gamma_i) g.insert(gi.begin(), gi.end());
  part.gamma.assign(g.begin(), g.end());
  return part;
}

// R_{i,delta}: pick the W_{i,delta} entries in local (ascending-global) order.
inline Vec restrict_subdomain(const OverlapPartition& part, std::size_t i, const Vec& x) {
  if (x.size() != part.m) throw std::invalid_argument("restrict: dimension mismatch");
  Vec loc(part.extended[i].size());
  for (std::size_t l = 0; l < loc.size(); ++l) loc[l] = x[part.extended[i][l]];
  return loc;
}

// R~_{i,delta}^T: scatter only the owned entries, zeros elsewhere.
inline Vec prolong_restricted(const OverlapPartition& part, std::size_t i, const Vec& x_local) {
  if (x_local.size() != part.extended[i].size())
    throw std::invalid_argument("prolong_restricted: dimension mismatch");
  Vec g(part.m, 0.0);
  for (std::size_t l = 0; l < x_local.size(); ++l) {
    const std::size_t v = part.extended[i][l];
    if (part.owner[v] == i) g[v] = x_local[l];
  }
  return g;
}

// R_{i,delta}^T: scatter all local entries (AS mode write-back).
inline Vec prolong_full(const OverlapPartition& part, std::size_t i, const Vec& x_local) {
  if (x_local.size() != part.extended[i].size())
    throw std::invalid_argument("prolong_full: dimension mismatch");
  Vec g(part.m, 0.0);
  for (std::size_t l = 0; l < x_local.size(); ++l) g[part.extended[i][l]] = x_local[l];
  return g;
}

// R_Gamma and R_Gamma^T.
inline Vec restrict_interface(const OverlapPartition& part, const Vec& x) {
  if (x.size() != part.m) throw std::invalid_argument("restrict_interface: dimension mismatch");
  Vec g(part.gamma.size());
  for (std::size_t l = 0; l < g.size(); ++l) g[l] = x[part.gamma[l]];
  return g;
}

inline Vec prolong_interface(const OverlapPartition& part, const Vec& g) {
  if (g.size() != part.gamma.size())
    throw std::invalid_argument("prolong_interface: dimension mismatch");
  Vec x(part.m, 0.0);
  for (std::size_t l = 0; l < g.size(); ++l) x[part.gamma[l]] = g[l];
  return x;
}

inline void save_partition(const std::string& path,
                           const std::vector<std::vector<std::size_t>>& owned,
                           std::size_t m, std::size_t delta) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("save_partition: cannot open " + path);
  out << owned.size() << ' ' << m << ' ' << delta << '\n';
  for (const auto& s : owned) {
    for (std::size_t k = 0; k < s.size(); ++k) out << s[k] << (k + 1 < s.size() ? ' ' : '\n');
    if (s.empty()) out << '\n';
  }
}

struct PartitionFile {
  std::vector<std::vector<std::size_t>> owned;
  std::size_t m = 0;
  std::size_t delta = 0;
};

inline PartitionFile load_partition(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("load_partition: cannot open " + path);
  PartitionFile f;
  std::size_t p = 0;
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("load_partition: empty file");
  std::istringstream head(line);
  if (!(head >> p >> f.m >> f.delta))
    throw std::runtime_error("load_partition: bad header line");
  f.owned.resize(p);
  for (std::size_t i = 0; i < p; ++i) {
    if (!std::getline(in, line))
      throw std::runtime_error("load_partition: missing subdomain line");
    std::istringstream row(line);
    std::size_t v;
    while (row >> v) f.owned[i].push_back(v);
  }
  return f;
}

}  // namespace aras
