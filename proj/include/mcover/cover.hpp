#pragma once

#include <algorithm>
#include <charconv>
#include <cstddef>
#include <cstdint>
#include <istream>
#include <numeric>
#include <ostream>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "mcover/error.hpp"
#include "mcover/graph.hpp"

namespace mcover {

/// One vertex class of a multiclique. Members ascending, nonempty.
using Partition = std::vector<VertexId>;

/// Pairwise-disjoint partitions; every cross-partition pair is meant to be
/// an edge of the source graph.
struct Multiclique {
  std::vector<Partition> partitions;

  std::size_t vertex_count() const {
    std::size_t n = 0;
    for (const auto& p : partitions) n += p.size();
    return n;
  }
  friend bool operator==(const Multiclique&, const Multiclique&) = default;
};

/// Fraction of the edge set a covering run must reach before it stops.
/// Stored as an exact ratio so that thresholds such as ceil(0.9 * |E|) are
/// not subject to rounding.
class CoverageFraction {
 public:
  constexpr CoverageFraction() = default;
  CoverageFraction(std::uint64_t num, std::uint64_t den) : num_(num), den_(den) {
    if (den == 0 || num == 0 || num > den)
      throw InputError("coverage fraction must lie in (0,1]");
  }

  /// Accepts "1", "0.9", ".75" or "9/10".
  static CoverageFraction parse(std::string_view text) {
    auto bad = [&] {
      return InputError("invalid coverage fraction '" + std::string(text) + "'");
    };
    if (text.empty()) throw bad();
    if (auto slash = text.find('/'); slash != std::string_view::npos) {
      std::uint64_t a = 0, b = 0;
      if (!digits(text.substr(0, slash), a) || !digits(text.substr(slash + 1), b)) throw bad();
      return {a, b};
    }
    auto dot = text.find('.');
    std::string_view whole = text.substr(0, dot);
    std::string_view frac = dot == std::string_view::npos ? std::string_view{} : text.substr(dot + 1);
    if (frac.size() > 12 || (whole.empty() && frac.empty())) throw bad();
    std::uint64_t w = 0, f = 0;
    if (!whole.empty() && !digits(whole, w)) throw bad();
    if (!frac.empty() && !digits(frac, f)) throw bad();
    std::uint64_t den = 1;
    for (std::size_t i = 0; i < frac.size(); ++i) den *= 10;
    return {w * den + f, den};
  }

  std::uint64_t numerator() const noexcept { return num_; }
  std::uint64_t denominator() const noexcept { return den_; }
  bool is_full() const noexcept { return num_ == den_; }
  double value() const noexcept { return static_cast<double>(num_) / static_cast<double>(den_); }

  /// ceil(fraction * edges)
  std::size_t threshold(std::size_t edges) const {
    const unsigned __int128 prod = static_cast<unsigned __int128>(num_) * edges;
    return static_cast<std::size_t>((prod + den_ - 1) / den_);
  }

 private:
  static bool digits(std::string_view s, std::uint64_t& out) {
    if (s.empty() || s.size() > 18) return false;
    out = 0;
    for (char c : s) {
      if (c < '0' || c > '9') return false;
      out = out * 10 + static_cast<std::uint64_t>(c - '0');
    }
    return true;
  }

  std::uint64_t num_ = 1;
  std::uint64_t den_ = 1;
};

/// Record of which edges of a graph are still uncovered.
///
/// One flag per adjacency slot of the graph (both orientations of an edge are
/// flagged together). The state borrows the graph; it must not outlive it.
class CoverState {
 public:
  explicit CoverState(const MutexGraph& g)
      : graph_(&g),
        flags_(g.edge_count() * 2, 1),
        uncovered_degree_(g.vertex_count()),
        uncovered_(g.edge_count()) {
    for (VertexId v = 0; v < g.vertex_count(); ++v) uncovered_degree_[v] = g.degree(v);
  }

  /// Only the listed edges start uncovered; each must be an edge of `g`.
  CoverState(const MutexGraph& g, std::span<const Edge> uncovered)
      : graph_(&g),
        flags_(g.edge_count() * 2, 0),
        uncovered_degree_(g.vertex_count(), 0),
        uncovered_(0) {
    for (const Edge& e : uncovered) {
      const std::size_t a = g.arc_index(e.u, e.v);
      if (a == MutexGraph::npos)
        throw InputError("(" + std::to_string(e.u) + "," + std::to_string(e.v) +
                         ") is not an edge of the graph");
      if (flags_[a]) continue;
      flags_[a] = 1;
      flags_[g.arc_index(e.v, e.u)] = 1;
      ++uncovered_degree_[e.u];
      ++uncovered_degree_[e.v];
      ++uncovered_;
    }
  }

  const MutexGraph& graph() const noexcept { return *graph_; }
  std::size_t uncovered_count() const noexcept { return uncovered_; }
  std::size_t uncovered_degree(VertexId v) const { return uncovered_degree_[v]; }

  bool is_uncovered(VertexId u, VertexId v) const {
    const std::size_t a = graph_->arc_index(u, v);
    return a != MutexGraph::npos && flags_[a] != 0;
  }
  /// Flag of the adjacency slot `arc` (an index into the flattened rows).
  bool arc_uncovered(std::size_t arc) const { return flags_[arc] != 0; }

  /// Marks (u,v) covered; returns true if it was uncovered.
  bool cover_edge(VertexId u, VertexId v) {
    const std::size_t a = graph_->arc_index(u, v);
    if (a == MutexGraph::npos || !flags_[a]) return false;
    flags_[a] = 0;
    flags_[graph_->arc_index(v, u)] = 0;
    --uncovered_degree_[u];
    --uncovered_degree_[v];
    --uncovered_;
    return true;
  }

  /// Marks every edge of `g` between different partitions of `mc` covered.
  /// Returns how many of them were uncovered before.
  std::size_t cover(const Multiclique& mc) {
    std::vector<std::pair<VertexId, std::uint32_t>> owner;
    for (std::uint32_t i = 0; i < mc.partitions.size(); ++i)
      for (VertexId v : mc.partitions[i]) owner.emplace_back(v, i);
    std::sort(owner.begin(), owner.end());
    std::size_t newly = 0;
    for (const auto& [x, px] : owner) {
      const std::size_t base = graph_->arc_begin(x);
      auto nb = graph_->neighbors(x);
      // Both rows are sorted, so merge.
      std::size_t k = 0;
      for (std::size_t i = 0; i < nb.size() && k < owner.size(); ++i) {
        const VertexId y = nb[i];
        if (y <= x) continue;
        while (k < owner.size() && owner[k].first < y) ++k;
        if (k < owner.size() && owner[k].first == y && owner[k].second != px &&
            flags_[base + i]) {
          cover_edge(x, y);
          ++newly;
        }
      }
    }
    return newly;
  }

  template <class Fn>
  void for_each_uncovered_neighbor(VertexId v, Fn&& fn) const {
    const std::size_t base = graph_->arc_begin(v);
    auto nb = graph_->neighbors(v);
    for (std::size_t i = 0; i < nb.size(); ++i)
      if (flags_[base + i]) fn(nb[i]);
  }

  /// Uncovered edges ascending by (u, v).
  std::vector<Edge> uncovered_edges() const {
    std::vector<Edge> out;
    out.reserve(uncovered_);
    for (VertexId u = 0; u < graph_->vertex_count(); ++u)
      for_each_uncovered_neighbor(u, [&](VertexId v) {
        if (u < v) out.emplace_back(u, v);
      });
    return out;
  }

  /// Covered edges ascending by (u, v).
  std::vector<Edge> covered_edges() const {
    std::vector<Edge> out;
    for (VertexId u = 0; u < graph_->vertex_count(); ++u) {
      const std::size_t base = graph_->arc_begin(u);
      auto nb = graph_->neighbors(u);
      for (std::size_t i = 0; i < nb.size(); ++i)
        if (u < nb[i] && !flags_[base + i]) out.emplace_back(u, nb[i]);
    }
    return out;
  }

 private:
  const MutexGraph* graph_;
  std::vector<std::uint8_t> flags_;
  std::vector<std::size_t> uncovered_degree_;
  std::size_t uncovered_;
};

/// Ordered sequence of multicliques together with the edges they cover.
struct Covering {
  std::vector<Multiclique> multicliques;
  std::vector<Edge> covered;          ///< ascending
  std::size_t source_edges = 0;       ///< |E| of the covered graph
  std::vector<std::size_t> uncovered_trace;  ///< uncovered count after each emission
  std::size_t fallbacks = 0;          ///< single-edge fallbacks taken by the greedy loop
};

// ---------------------------------------------------------------------------
// Primitives

/// Cost in literals of one partition inside the ASP encoding.
constexpr long long partition_cost(std::size_t size) {
  if (size == 0) return 0;
  if (size == 1) return 1;
  return 2 * static_cast<long long>(size) + 1;
}

/// Partitions `vs` into the connected components of the complement of the
/// induced subgraph: the unique edge-maximal multiclique on exactly `vs`.
inline Multiclique make_multiclique(const MutexGraph& g, std::span<const VertexId> vs) {
  InducedSubgraph sub = induced_subgraph(g, vs);
  Multiclique mc;
  for (auto& comp : connected_components(complement(sub.graph))) {
    Partition p;
    p.reserve(comp.size());
    for (VertexId local : comp) p.push_back(sub.original[local]);
    mc.partitions.push_back(std::move(p));
  }
  return mc;
}

/// Cross-partition vertex pairs, canonical and ascending.
inline std::vector<Edge> edges_covered_by(const Multiclique& mc) {
  std::vector<Edge> out;
  for (std::size_t i = 0; i < mc.partitions.size(); ++i)
    for (std::size_t j = i + 1; j < mc.partitions.size(); ++j)
      for (VertexId x : mc.partitions[i])
        for (VertexId y : mc.partitions[j]) out.emplace_back(x, y);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

inline std::size_t count_uncovered_incident_edges(const CoverState& state, const MutexGraph&,
                                                  VertexId x) {
  return state.uncovered_degree(x);
}

/// Common neighbours of all of `vs` that still have at least two uncovered
/// incident edges. Empty for empty `vs`.
inline std::vector<VertexId> defaults_for(const CoverState& state, const MutexGraph& g,
                                          std::span<const VertexId> vs) {
  if (vs.empty()) return {};
  // Start from the smallest neighbourhood.
  auto smallest = std::min_element(vs.begin(), vs.end(), [&](VertexId a, VertexId b) {
    return g.degree(a) < g.degree(b);
  });
  std::vector<VertexId> out;
  for (VertexId c : g.neighbors(*smallest)) {
    if (state.uncovered_degree(c) < 2) continue;
    bool common = true;
    for (VertexId v : vs)
      if (!g.has_edge(v, c)) {
        common = false;
        break;
      }
    if (common) out.push_back(c);
  }
  return out;
}

/// Literal savings of the multiclique on `vs` extended by its default
/// partition: 2 * |newly covered| - complexity cost.
inline long long score(const CoverState& state, const MutexGraph& g,
                       std::span<const VertexId> vs) {
  Multiclique mc = make_multiclique(g, vs);
  std::vector<VertexId> defaults = defaults_for(state, g, vs);
  if (!defaults.empty()) mc.partitions.push_back(std::move(defaults));
  long long newly = 0;
  for (std::size_t i = 0; i < mc.partitions.size(); ++i)
    for (std::size_t j = i + 1; j < mc.partitions.size(); ++j)
      for (VertexId x : mc.partitions[i])
        for (VertexId y : mc.partitions[j])
          if (state.is_uncovered(x, y)) ++newly;
  long long cost = 0;
  for (const auto& p : mc.partitions) cost += partition_cost(p.size());
  return 2 * newly - cost;
}

namespace detail {

/// Evaluates score(vs + {w}) for many candidates w against a fixed `vs`.
///
/// The components of `vs`, its default partition and the uncovered edge
/// counts between them are cached on reset(); each candidate is then priced
/// from one pass over its own adjacency row. Must agree exactly with score().
class ExtensionScorer {
 public:
  ExtensionScorer(const CoverState& state, const MutexGraph& g)
      : state_(state),
        g_(g),
        comp_of_(g.vertex_count(), -1),
        default_index_(g.vertex_count(), -1) {}

  void reset(std::span<const VertexId> vs) {
    for (VertexId v : members_) comp_of_[v] = -1;
    for (VertexId d : defaults_) default_index_[d] = -1;

    members_.assign(vs.begin(), vs.end());
    Multiclique mc = make_multiclique(g_, vs);
    const std::size_t c = mc.partitions.size();
    comp_size_.assign(c, 0);
    for (std::size_t i = 0; i < c; ++i) {
      comp_size_[i] = mc.partitions[i].size();
      for (VertexId v : mc.partitions[i]) comp_of_[v] = static_cast<int>(i);
    }
    pair_uncovered_.assign(c * c, 0);
    row_uncovered_.assign(c, 0);
    cross_total_ = 0;
    for (VertexId x : members_) {
      const int cx = comp_of_[x];
      state_.for_each_uncovered_neighbor(x, [&](VertexId y) {
        const int cy = comp_of_[y];
        if (cy < 0 || cy == cx || y < x) return;
        ++pair_uncovered_[static_cast<std::size_t>(cx) * c + static_cast<std::size_t>(cy)];
        ++pair_uncovered_[static_cast<std::size_t>(cy) * c + static_cast<std::size_t>(cx)];
        ++row_uncovered_[static_cast<std::size_t>(cx)];
        ++row_uncovered_[static_cast<std::size_t>(cy)];
        ++cross_total_;
      });
    }
    comps_cost_ = 0;
    for (std::size_t s : comp_size_) comps_cost_ += partition_cost(s);

    defaults_ = defaults_for(state_, g_, vs);
    default_uncovered_.assign(defaults_.size(), 0);
    defaults_total_ = 0;
    for (std::size_t i = 0; i < defaults_.size(); ++i) {
      const VertexId d = defaults_[i];
      default_index_[d] = static_cast<int>(i);
      state_.for_each_uncovered_neighbor(d, [&](VertexId y) {
        if (comp_of_[y] >= 0) ++default_uncovered_[i];
      });
      defaults_total_ += default_uncovered_[i];
    }
    adj_count_.assign(c, 0);
    unc_count_.assign(c, 0);
  }

  long long base_score() const {
    return 2 * (cross_total_ + defaults_total_) -
           (comps_cost_ + partition_cost(defaults_.size()));
  }

  const std::vector<VertexId>& defaults() const { return defaults_; }
  bool in_set(VertexId v) const { return comp_of_[v] >= 0; }

  /// Vertices adjacent to some member or default; every other candidate
  /// scores exactly untouched_score().
  void touching(std::vector<VertexId>& out, std::vector<std::uint8_t>& mark) const {
    auto visit = [&](VertexId v) {
      for (VertexId w : g_.neighbors(v))
        if (!mark[w] && comp_of_[w] < 0) {
          mark[w] = 1;
          out.push_back(w);
        }
    };
    for (VertexId v : members_) visit(v);
    for (VertexId d : defaults_) visit(d);
  }

  long long untouched_score() const {
    return -partition_cost(members_.size() + 1);
  }

  /// score(vs + {w}) for w not in vs.
  long long score_with(VertexId w) {
    touched_.clear();
    long long default_count = 0, default_unc_sum = 0, unc_to_defaults = 0;
    const std::size_t base = g_.arc_begin(w);
    auto nb = g_.neighbors(w);
    for (std::size_t i = 0; i < nb.size(); ++i) {
      const VertexId y = nb[i];
      const bool unc = state_.arc_uncovered(base + i);
      if (const int cy = comp_of_[y]; cy >= 0) {
        const auto ci = static_cast<std::size_t>(cy);
        if (adj_count_[ci] == 0) touched_.push_back(ci);
        ++adj_count_[ci];
        if (unc) ++unc_count_[ci];
      } else if (const int di = default_index_[y]; di >= 0) {
        ++default_count;
        default_unc_sum += default_uncovered_[static_cast<std::size_t>(di)];
        if (unc) ++unc_to_defaults;
      }
    }
    // Components fully adjacent to w stay separate; all others merge with w.
    const std::size_t c = comp_size_.size();
    kept_.clear();
    long long unc_to_kept = 0;
    std::size_t kept_vertices = 0;
    for (std::size_t ci : touched_) {
      if (adj_count_[ci] == comp_size_[ci]) {
        kept_.push_back(ci);
        unc_to_kept += unc_count_[ci];
        kept_vertices += comp_size_[ci];
      }
      adj_count_[ci] = 0;
      unc_count_[ci] = 0;
    }
    long long cross = 0;
    long long cost = 0;
    for (std::size_t a = 0; a < kept_.size(); ++a) {
      cross += row_uncovered_[kept_[a]];
      cost += partition_cost(comp_size_[kept_[a]]);
      for (std::size_t b = a + 1; b < kept_.size(); ++b)
        cross -= pair_uncovered_[kept_[a] * c + kept_[b]];
    }
    const std::size_t merged = 1 + members_.size() - kept_vertices;
    cost += partition_cost(merged) + partition_cost(static_cast<std::size_t>(default_count));
    const long long newly = cross + unc_to_kept + default_unc_sum + unc_to_defaults;
    return 2 * newly - cost;
  }

 private:
  const CoverState& state_;
  const MutexGraph& g_;
  std::vector<VertexId> members_;
  std::vector<int> comp_of_;
  std::vector<std::size_t> comp_size_;
  std::vector<long long> pair_uncovered_;
  std::vector<long long> row_uncovered_;
  long long cross_total_ = 0;
  long long comps_cost_ = 0;
  std::vector<VertexId> defaults_;
  std::vector<int> default_index_;
  std::vector<long long> default_uncovered_;
  long long defaults_total_ = 0;
  std::vector<std::size_t> adj_count_;
  std::vector<long long> unc_count_;
  std::vector<std::size_t> touched_;
  std::vector<std::size_t> kept_;
};

inline Multiclique lowest_uncovered_edge(const CoverState& state) {
  const MutexGraph& g = state.graph();
  for (VertexId u = 0; u < g.vertex_count(); ++u) {
    const std::size_t base = g.arc_begin(u);
    auto nb = g.neighbors(u);
    for (std::size_t i = 0; i < nb.size(); ++i)
      if (nb[i] > u && state.arc_uncovered(base + i)) return Multiclique{{{u}, {nb[i]}}};
  }
  throw ContractViolation("no uncovered edge left");
}

inline Multiclique next_multiclique(const CoverState& state, const MutexGraph& g,
                                    bool& fell_back) {
  fell_back = false;
  if (state.uncovered_count() == 0)
    throw ContractViolation("next_multiclique called with no uncovered edges");

  VertexId seed = 0;
  for (VertexId v = 1; v < g.vertex_count(); ++v)
    if (state.uncovered_degree(v) > state.uncovered_degree(seed)) seed = v;

  std::vector<VertexId> vs{seed};
  ExtensionScorer scorer(state, g);
  std::vector<VertexId> candidates;
  std::vector<std::uint8_t> mark(g.vertex_count(), 0);
  while (true) {
    scorer.reset(vs);
    const long long current = scorer.base_score();

    candidates.clear();
    scorer.touching(candidates, mark);
    for (VertexId w : candidates) mark[w] = 0;
    // The lowest-id vertex outside vs and untouched stands in for all of them.
    std::sort(candidates.begin(), candidates.end());
    VertexId untouched = static_cast<VertexId>(g.vertex_count());
    {
      auto it = candidates.begin();
      for (VertexId w = 0; w < g.vertex_count(); ++w) {
        while (it != candidates.end() && *it < w) ++it;
        if (scorer.in_set(w) || (it != candidates.end() && *it == w)) continue;
        untouched = w;
        break;
      }
    }

    bool found = false;
    VertexId best = 0;
    long long best_score = 0;
    auto consider = [&](VertexId w, long long s) {
      if (!found || s > best_score || (s == best_score && w < best)) {
        found = true;
        best = w;
        best_score = s;
      }
    };
    for (VertexId w : candidates) consider(w, scorer.score_with(w));
    if (untouched < g.vertex_count()) consider(untouched, scorer.untouched_score());

    if (!found || best_score <= current) break;
    vs.insert(std::upper_bound(vs.begin(), vs.end(), best), best);
  }

  std::vector<VertexId> all = vs;
  const auto& defaults = scorer.defaults();
  all.insert(all.end(), defaults.begin(), defaults.end());
  Multiclique mc = make_multiclique(g, all);

  bool progress = false;
  for (std::size_t i = 0; i < mc.partitions.size() && !progress; ++i)
    for (std::size_t j = i + 1; j < mc.partitions.size() && !progress; ++j)
      for (VertexId x : mc.partitions[i]) {
        for (VertexId y : mc.partitions[j])
          if (state.is_uncovered(x, y)) {
            progress = true;
            break;
          }
        if (progress) break;
      }
  if (!progress) {
    fell_back = true;
    return lowest_uncovered_edge(state);
  }
  return mc;
}

}  // namespace detail

/// Greedily grows one multiclique that covers at least one uncovered edge.
/// Seeds with the vertex of highest uncovered degree, then adds the vertex
/// whose inclusion gives the best score while the score strictly improves.
/// Ties go to the lowest vertex id.
inline Multiclique next_multiclique(const CoverState& state, const MutexGraph& g) {
  bool fell_back = false;
  return detail::next_multiclique(state, g, fell_back);
}

/// Greedy multiclique covering. Stops once ceil(fraction * |E|) edges are
/// covered; with the default fraction every edge is covered.
inline Covering find_cover(const MutexGraph& g, CoverageFraction fraction = {}) {
  CoverState state(g);
  Covering out;
  out.source_edges = g.edge_count();
  const std::size_t target = fraction.threshold(g.edge_count());
  std::size_t covered = 0;
  while (covered < target) {
    bool fell_back = false;
    Multiclique mc = detail::next_multiclique(state, g, fell_back);
    const std::size_t newly = state.cover(mc);
    if (newly == 0) throw ContractViolation("multiclique covered no new edge");
    covered += newly;
    if (fell_back) ++out.fallbacks;
    out.multicliques.push_back(std::move(mc));
    out.uncovered_trace.push_back(state.uncovered_count());
  }
  out.covered = state.covered_edges();
  return out;
}

/// One two-singleton multiclique per edge, ascending.
inline Covering naive_cover(const MutexGraph& g) {
  Covering out;
  out.source_edges = g.edge_count();
  out.covered = g.edges();
  std::size_t remaining = out.covered.size();
  for (const Edge& e : out.covered) {
    out.multicliques.push_back(Multiclique{{{e.u}, {e.v}}});
    out.uncovered_trace.push_back(--remaining);
  }
  return out;
}

/// Biclique baseline in the style of identify-biclique: each round starts
/// from the empty first part and the whole vertex set as second part, moves
/// vertices into the first part while the clause reduction
/// |C|*|C'| - (|C| + |C'|) strictly grows, then deletes the biclique's edges
/// from the working graph.
///
/// The first pick always has reduction -1, so it goes to the vertex of
/// largest remaining degree. Later ties prefer the larger second part, then
/// the lower id.
inline Covering identify_biclique_cover(const MutexGraph& g) {
  CoverState work(g);
  Covering out;
  out.source_edges = g.edge_count();
  const std::size_t n = g.vertex_count();
  std::vector<std::size_t> count(n, 0);
  std::vector<std::uint8_t> in_first(n, 0);
  std::vector<VertexId> touched;

  while (work.uncovered_count() > 0) {
    VertexId seed = 0;
    for (VertexId v = 1; v < n; ++v)
      if (work.uncovered_degree(v) > work.uncovered_degree(seed)) seed = v;

    std::vector<VertexId> first{seed};
    std::vector<VertexId> second;
    work.for_each_uncovered_neighbor(seed, [&](VertexId y) { second.push_back(y); });
    in_first[seed] = 1;
    auto reduction = [](long long a, long long b) { return a * b - (a + b); };
    long long current = reduction(1, static_cast<long long>(second.size()));

    while (true) {
      touched.clear();
      for (VertexId y : second)
        work.for_each_uncovered_neighbor(y, [&](VertexId z) {
          if (in_first[z]) return;
          if (count[z] == 0) touched.push_back(z);
          ++count[z];
        });
      bool found = false;
      VertexId best = 0;
      std::size_t best_size = 0;
      long long best_red = 0;
      const auto a = static_cast<long long>(first.size() + 1);
      for (VertexId z : touched) {
        const long long r = reduction(a, static_cast<long long>(count[z]));
        if (!found || r > best_red || (r == best_red && count[z] > best_size) ||
            (r == best_red && count[z] == best_size && z < best)) {
          found = true;
          best = z;
          best_size = count[z];
          best_red = r;
        }
      }
      for (VertexId z : touched) count[z] = 0;
      if (!found || best_red <= current) break;

      std::vector<VertexId> next;
      for (VertexId y : second)
        if (y != best && work.is_uncovered(best, y)) next.push_back(y);
      second.swap(next);
      first.push_back(best);
      in_first[best] = 1;
      current = best_red;
    }

    for (VertexId v : first) in_first[v] = 0;
    std::sort(first.begin(), first.end());
    std::sort(second.begin(), second.end());
    for (VertexId x : first)
      for (VertexId y : second) work.cover_edge(x, y);
    out.multicliques.push_back(Multiclique{{std::move(first), std::move(second)}});
    out.uncovered_trace.push_back(work.uncovered_count());
  }
  out.covered = g.edges();
  return out;
}

// ---------------------------------------------------------------------------
// Text form: one line per multiclique, e.g. "m {0,1,3} {2} {4}".

inline void write_covering(std::ostream& out, const Covering& c) {
  for (const Multiclique& mc : c.multicliques) {
    out << 'm';
    for (const Partition& p : mc.partitions) {
      out << " {";
      for (std::size_t i = 0; i < p.size(); ++i) out << (i ? "," : "") << p[i];
      out << '}';
    }
    out << '\n';
  }
}

inline std::string to_text(const Covering& c) {
  std::ostringstream out;
  write_covering(out, c);
  return out.str();
}

/// Reads a covering of `g`. Partitions must be disjoint and every
/// cross-partition pair must be an edge of `g`.
inline Covering read_covering(std::istream& in, const MutexGraph& g,
                              const std::string& source = "<covering>") {
  Covering out;
  out.source_edges = g.edge_count();
  CoverState state(g);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string_view s = line;
    while (!s.empty() && (s.back() == '\r' || s.back() == ' ')) s.remove_suffix(1);
    if (s.empty() || s.front() == '#') continue;
    if (s.front() != 'm') throw InputError(source, lineno, 1, "expected 'm {..} {..}'");
    Multiclique mc;
    std::size_t i = 1;
    while (i < s.size()) {
      if (s[i] == ' ') {
        ++i;
        continue;
      }
      if (s[i] != '{') throw InputError(source, lineno, i + 1, "expected '{'");
      const auto close = s.find('}', i);
      if (close == std::string_view::npos) throw InputError(source, lineno, i + 1, "missing '}'");
      Partition p;
      std::string_view body = s.substr(i + 1, close - i - 1);
      std::size_t k = 0;
      while (k <= body.size()) {
        auto comma = body.find(',', k);
        if (comma == std::string_view::npos) comma = body.size();
        std::string_view tok = body.substr(k, comma - k);
        VertexId v = 0;
        auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
        if (tok.empty() || ec != std::errc{} || ptr != tok.data() + tok.size() ||
            v >= g.vertex_count())
          throw InputError(source, lineno, i + 2 + k,
                           "bad vertex '" + std::string(tok) + "'");
        p.push_back(v);
        k = comma + 1;
      }
      std::sort(p.begin(), p.end());
      mc.partitions.push_back(std::move(p));
      i = close + 1;
    }
    std::vector<VertexId> all;
    for (const auto& p : mc.partitions) all.insert(all.end(), p.begin(), p.end());
    std::sort(all.begin(), all.end());
    if (std::adjacent_find(all.begin(), all.end()) != all.end())
      throw InputError(source, lineno, 0, "partitions are not disjoint");
    for (const Edge& e : edges_covered_by(mc))
      if (!g.has_edge(e.u, e.v))
        throw InputError(source, lineno, 0,
                         "pair (" + std::to_string(e.u) + "," + std::to_string(e.v) +
                             ") is not an edge of the graph");
    state.cover(mc);
    out.multicliques.push_back(std::move(mc));
    out.uncovered_trace.push_back(state.uncovered_count());
  }
  out.covered = state.covered_edges();
  return out;
}

}  // namespace mcover
