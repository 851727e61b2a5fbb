#pragma once

#include <algorithm>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <deque>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "mcover/error.hpp"

namespace mcover {

/// Dense vertex index, contiguous 0..n-1 within one graph.
using VertexId = std::uint32_t;

/// Undirected edge in canonical orientation (u < v).
struct Edge {
  VertexId u = 0;
  VertexId v = 0;

  Edge() = default;
  Edge(VertexId a, VertexId b) : u(std::min(a, b)), v(std::max(a, b)) {}

  friend auto operator<=>(const Edge&, const Edge&) = default;
};

/// Undirected graph whose edges are mutual exclusions between vertices.
///
/// Stored as compressed adjacency rows, each sorted ascending, so neighbor
/// iteration is deterministic and adjacency tests are a binary search.
/// Immutable after construction.
class MutexGraph {
 public:
  MutexGraph() = default;

  /// Builds a graph over `n` vertices. Duplicate and reversed edges collapse
  /// to one; self-loops and out-of-range endpoints raise InputError.
  /// `labels` is either empty or has exactly `n` entries.
  static MutexGraph build(std::size_t n, std::span<const Edge> edges,
                          std::vector<std::string> labels = {}) {
    if (!labels.empty() && labels.size() != n)
      throw InputError("label table has " + std::to_string(labels.size()) +
                       " entries for " + std::to_string(n) + " vertices");
    std::vector<std::pair<VertexId, VertexId>> arcs;
    arcs.reserve(edges.size() * 2);
    for (const Edge& e : edges) {
      if (e.u >= n || e.v >= n)
        throw InputError("edge (" + std::to_string(e.u) + "," + std::to_string(e.v) +
                         ") has an endpoint outside 0.." +
                         (n == 0 ? std::string("(empty)") : std::to_string(n - 1)));
      if (e.u == e.v)
        throw InputError("edge (" + std::to_string(e.u) + "," + std::to_string(e.v) +
                         ") is a self-loop");
      arcs.emplace_back(e.u, e.v);
      arcs.emplace_back(e.v, e.u);
    }
    std::sort(arcs.begin(), arcs.end());
    arcs.erase(std::unique(arcs.begin(), arcs.end()), arcs.end());

    MutexGraph g;
    g.offsets_.assign(n + 1, 0);
    for (const auto& [from, to] : arcs) ++g.offsets_[from + 1];
    for (std::size_t i = 0; i < n; ++i) g.offsets_[i + 1] += g.offsets_[i];
    g.targets_.reserve(arcs.size());
    for (const auto& arc : arcs) g.targets_.push_back(arc.second);
    g.labels_ = std::move(labels);
    return g;
  }

  std::size_t vertex_count() const noexcept {
    return offsets_.empty() ? 0 : offsets_.size() - 1;
  }
  std::size_t edge_count() const noexcept { return targets_.size() / 2; }

  std::span<const VertexId> neighbors(VertexId v) const {
    return {targets_.data() + offsets_[v], targets_.data() + offsets_[v + 1]};
  }
  std::size_t degree(VertexId v) const { return offsets_[v + 1] - offsets_[v]; }

  /// Position of `v` inside the flattened adjacency of `u`, or npos.
  std::size_t arc_index(VertexId u, VertexId v) const {
    auto first = targets_.begin() + static_cast<std::ptrdiff_t>(offsets_[u]);
    auto last = targets_.begin() + static_cast<std::ptrdiff_t>(offsets_[u + 1]);
    auto it = std::lower_bound(first, last, v);
    if (it == last || *it != v) return npos;
    return static_cast<std::size_t>(it - targets_.begin());
  }
  std::size_t arc_begin(VertexId u) const { return offsets_[u]; }

  bool has_edge(VertexId u, VertexId v) const {
    if (u >= vertex_count() || v >= vertex_count() || u == v) return false;
    return degree(u) <= degree(v) ? arc_index(u, v) != npos : arc_index(v, u) != npos;
  }

  /// All edges, ascending by (u, v).
  std::vector<Edge> edges() const {
    std::vector<Edge> out;
    out.reserve(edge_count());
    for (VertexId u = 0; u < vertex_count(); ++u)
      for (VertexId v : neighbors(u))
        if (u < v) out.emplace_back(u, v);
    return out;
  }

  bool has_labels() const noexcept { return !labels_.empty(); }
  const std::vector<std::string>& labels() const noexcept { return labels_; }
  std::string_view label(VertexId v) const {
    return labels_.empty() ? std::string_view{} : std::string_view{labels_[v]};
  }

  /// Same vertex count and edge set; labels are not compared.
  friend bool operator==(const MutexGraph& a, const MutexGraph& b) {
    return a.vertex_count() == b.vertex_count() && a.offsets_ == b.offsets_ &&
           a.targets_ == b.targets_;
  }

  static constexpr std::size_t npos = static_cast<std::size_t>(-1);

 private:
  std::vector<std::size_t> offsets_;
  std::vector<VertexId> targets_;
  std::vector<std::string> labels_;
};

inline MutexGraph build_graph(std::size_t n, std::span<const Edge> edges,
                              std::vector<std::string> labels = {}) {
  return MutexGraph::build(n, edges, std::move(labels));
}

/// Complement over the same vertex set. Quadratic in the vertex count; the
/// covering code only applies it to small induced subgraphs.
inline MutexGraph complement(const MutexGraph& g) {
  const std::size_t n = g.vertex_count();
  std::vector<Edge> edges;
  for (VertexId u = 0; u < n; ++u) {
    auto nb = g.neighbors(u);
    auto it = nb.begin();
    for (VertexId v = u + 1; v < n; ++v) {
      while (it != nb.end() && *it < v) ++it;
      if (it == nb.end() || *it != v) edges.emplace_back(u, v);
    }
  }
  return MutexGraph::build(n, edges, g.labels());
}

/// A subgraph re-indexed to 0..k-1, with the mapping back to the parent ids.
struct InducedSubgraph {
  MutexGraph graph;
  std::vector<VertexId> original;  ///< original[local] = parent id, ascending
};

/// Subgraph induced by `vs` (duplicates ignored). Unknown vertices raise
/// InputError.
inline InducedSubgraph induced_subgraph(const MutexGraph& g, std::span<const VertexId> vs) {
  InducedSubgraph out;
  out.original.assign(vs.begin(), vs.end());
  std::sort(out.original.begin(), out.original.end());
  out.original.erase(std::unique(out.original.begin(), out.original.end()),
                     out.original.end());
  for (VertexId v : out.original)
    if (v >= g.vertex_count())
      throw InputError("vertex " + std::to_string(v) + " is not in the graph");

  std::vector<Edge> edges;
  std::vector<std::string> labels;
  for (std::size_t i = 0; i < out.original.size(); ++i) {
    const VertexId u = out.original[i];
    if (g.has_labels()) labels.emplace_back(g.label(u));
    // Walk both sorted lists in step.
    auto nb = g.neighbors(u);
    auto it = std::upper_bound(nb.begin(), nb.end(), u);
    for (std::size_t j = i + 1; j < out.original.size() && it != nb.end(); ++j) {
      const VertexId v = out.original[j];
      it = std::lower_bound(it, nb.end(), v);
      if (it != nb.end() && *it == v)
        edges.emplace_back(static_cast<VertexId>(i), static_cast<VertexId>(j));
    }
  }
  out.graph = MutexGraph::build(out.original.size(), edges, std::move(labels));
  return out;
}

/// Connected components ordered by smallest member; members ascending.
inline std::vector<std::vector<VertexId>> connected_components(const MutexGraph& g) {
  const std::size_t n = g.vertex_count();
  std::vector<bool> seen(n, false);
  std::vector<std::vector<VertexId>> out;
  std::deque<VertexId> queue;
  for (VertexId root = 0; root < n; ++root) {
    if (seen[root]) continue;
    std::vector<VertexId> comp;
    seen[root] = true;
    queue.push_back(root);
    while (!queue.empty()) {
      VertexId v = queue.front();
      queue.pop_front();
      comp.push_back(v);
      for (VertexId w : g.neighbors(v))
        if (!seen[w]) {
          seen[w] = true;
          queue.push_back(w);
        }
    }
    std::sort(comp.begin(), comp.end());
    out.push_back(std::move(comp));
  }
  return out;
}

}  // namespace mcover
