#pragma once
// Shared fixtures and brute-force oracles for the test suites. Nothing here
// calls into the covering or encoding code paths it is used to check.

#include <algorithm>
#include <cstdint>
#include <functional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "mcover/graph.hpp"

namespace mcover::test {

enum FiveVertex : VertexId { a = 0, b = 1, c = 2, d = 3, e = 4 };

/// Left graph of the worked five-vertex example.
inline MutexGraph five_vertex() {
  const std::vector<Edge> edges{{a, b}, {a, c}, {a, e}, {b, c}, {b, e}, {c, d}, {c, e}, {d, e}};
  return build_graph(5, edges, {"a", "b", "c", "d", "e"});
}

inline std::vector<std::string> numbered_symbols(std::size_t n) {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < n; ++i) out.push_back("f" + std::to_string(i));
  return out;
}

inline MutexGraph random_graph(std::mt19937& rng, std::size_t n, double density) {
  std::bernoulli_distribution coin(density);
  std::vector<Edge> edges;
  for (VertexId u = 0; u < n; ++u)
    for (VertexId v = u + 1; v < n; ++v)
      if (coin(rng)) edges.emplace_back(u, v);
  return build_graph(n, edges, numbered_symbols(n));
}

/// Complete multipartite graph with the given part sizes.
inline MutexGraph complete_multipartite(const std::vector<std::size_t>& sizes) {
  std::vector<std::size_t> part;
  for (std::size_t i = 0; i < sizes.size(); ++i) part.insert(part.end(), sizes[i], i);
  std::vector<Edge> edges;
  for (VertexId u = 0; u < part.size(); ++u)
    for (VertexId v = u + 1; v < part.size(); ++v)
      if (part[u] != part[v]) edges.emplace_back(u, v);
  return build_graph(part.size(), edges, numbered_symbols(part.size()));
}

using EdgeSet = std::set<std::pair<VertexId, VertexId>>;

inline std::pair<VertexId, VertexId> key(VertexId x, VertexId y) {
  return {std::min(x, y), std::max(x, y)};
}

inline EdgeSet edge_set(const MutexGraph& g) {
  EdgeSet out;
  for (VertexId u = 0; u < g.vertex_count(); ++u)
    for (VertexId v = u + 1; v < g.vertex_count(); ++v)
      if (g.has_edge(u, v)) out.insert({u, v});
  return out;
}

/// Reachability by transitive closure over an adjacency matrix.
inline std::vector<std::vector<bool>> reachability(const MutexGraph& g) {
  const std::size_t n = g.vertex_count();
  std::vector<std::vector<bool>> r(n, std::vector<bool>(n, false));
  for (VertexId u = 0; u < n; ++u) {
    r[u][u] = true;
    for (VertexId v = 0; v < n; ++v)
      if (g.has_edge(u, v)) r[u][v] = true;
  }
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < n; ++i)
      if (r[i][k])
        for (std::size_t j = 0; j < n; ++j)
          if (r[k][j]) r[i][j] = true;
  return r;
}

/// Independent sets of g as bitmasks, by checking every subset.
inline std::vector<std::uint32_t> independent_sets(const MutexGraph& g) {
  const EdgeSet edges = edge_set(g);
  std::vector<std::uint32_t> out;
  for (std::uint32_t m = 0; m < (1U << g.vertex_count()); ++m) {
    bool ok = true;
    for (const auto& [u, v] : edges)
      if (((m >> u) & 1U) && ((m >> v) & 1U)) {
        ok = false;
        break;
      }
    if (ok) out.push_back(m);
  }
  return out;
}

/// Score of `vs` recomputed from first principles against an explicit set of
/// uncovered edges: partitions of vs by union-find over non-adjacent pairs,
/// default partition by scanning every vertex, newly covered edges by
/// enumerating all cross pairs.
inline long long oracle_score(const MutexGraph& g, const EdgeSet& uncovered,
                              const std::vector<VertexId>& vs) {
  const EdgeSet all = edge_set(g);
  std::vector<std::size_t> parent(vs.size());
  for (std::size_t i = 0; i < vs.size(); ++i) parent[i] = i;
  std::function<std::size_t(std::size_t)> find = [&](std::size_t x) {
    return parent[x] == x ? x : parent[x] = find(parent[x]);
  };
  for (std::size_t i = 0; i < vs.size(); ++i)
    for (std::size_t j = i + 1; j < vs.size(); ++j)
      if (!all.count(key(vs[i], vs[j]))) parent[find(i)] = find(j);
  std::vector<std::vector<VertexId>> parts;
  std::vector<long> slot(vs.size(), -1);
  for (std::size_t i = 0; i < vs.size(); ++i) {
    const std::size_t r = find(i);
    if (slot[r] < 0) {
      slot[r] = static_cast<long>(parts.size());
      parts.emplace_back();
    }
    parts[static_cast<std::size_t>(slot[r])].push_back(vs[i]);
  }
  std::vector<VertexId> defaults;
  for (VertexId x = 0; x < g.vertex_count(); ++x) {
    bool common = true;
    for (VertexId v : vs)
      if (!all.count(key(x, v))) common = false;
    if (!common) continue;
    int unc = 0;
    for (const auto& [p, q] : uncovered)
      if (p == x || q == x) ++unc;
    if (unc >= 2) defaults.push_back(x);
  }
  if (!defaults.empty()) parts.push_back(defaults);

  long long newly = 0;
  for (std::size_t i = 0; i < parts.size(); ++i)
    for (std::size_t j = i + 1; j < parts.size(); ++j)
      for (VertexId x : parts[i])
        for (VertexId y : parts[j])
          if (uncovered.count(key(x, y))) ++newly;
  long long cost = 0;
  for (const auto& p : parts) cost += p.size() == 1 ? 1 : 2 * static_cast<long long>(p.size()) + 1;
  return 2 * newly - cost;
}

/// Calls fn for every set partition of `items` (restricted growth strings).
inline void for_each_set_partition(const std::vector<VertexId>& items,
                                   const std::function<void(const std::vector<std::vector<VertexId>>&)>& fn) {
  const std::size_t n = items.size();
  std::vector<std::size_t> label(n, 0);
  std::function<void(std::size_t, std::size_t)> rec = [&](std::size_t i, std::size_t used) {
    if (i == n) {
      std::vector<std::vector<VertexId>> parts(used);
      for (std::size_t k = 0; k < n; ++k) parts[label[k]].push_back(items[k]);
      fn(parts);
      return;
    }
    for (std::size_t l = 0; l <= used; ++l) {
      label[i] = l;
      rec(i + 1, std::max(used, l + 1));
    }
  };
  if (n == 0) {
    fn({});
    return;
  }
  rec(0, 0);
}

}  // namespace mcover::test
