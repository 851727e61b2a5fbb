#pragma once
// Layered reachability and eventual fluent mutexes.
//
// eventual_fluent_mutexes runs the planning-graph mutex propagation under the
// assumption that every two distinct non-preserving actions are mutex. The
// only action mutexes kept explicitly are those between an applicable regular
// action and a preserving action, one bit per (action, preserved fluent).

#include <algorithm>
#include <compare>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include <boost/dynamic_bitset.hpp>
#include <nlohmann/json.hpp>

#include "mcover/error.hpp"
#include "mcover/graph.hpp"
#include "mcover/strips.hpp"

namespace mcover {

using Layer = std::uint32_t;
inline constexpr Layer kUnreachable = std::numeric_limits<Layer>::max();

/// First layer of every fluent and action in the delete-relaxed planning
/// graph. A fluent first holds at the layer after its earliest adder.
struct FirstLayers {
  std::vector<Layer> fluent;
  std::vector<Layer> action;

  /// Smallest makespan at which every goal may hold, or kUnreachable.
  Layer goal_layer(const StripsProblem& p) const {
    Layer k = 0;
    for (FluentId g : p.goal()) k = std::max(k, fluent[g]);
    return k;
  }
};

inline FirstLayers first_appearance_layers(const StripsProblem& p) {
  FirstLayers out{std::vector<Layer>(p.fluent_count(), kUnreachable),
                  std::vector<Layer>(p.action_count(), kUnreachable)};
  std::vector<std::vector<ActionId>> consumers(p.fluent_count());
  std::vector<std::size_t> missing(p.action_count());
  std::vector<ActionId> frontier;
  for (ActionId a = 0; a < p.action_count(); ++a) {
    missing[a] = p.action(a).pre.size();
    for (FluentId f : p.action(a).pre) consumers[f].push_back(a);
    if (missing[a] == 0) frontier.push_back(a);
  }
  std::vector<FluentId> fresh(p.init().begin(), p.init().end());
  for (FluentId f : fresh) out.fluent[f] = 0;
  for (Layer k = 0; !fresh.empty() || !frontier.empty(); ++k) {
    for (FluentId f : fresh)
      for (ActionId a : consumers[f])
        if (--missing[a] == 0) frontier.push_back(a);
    fresh.clear();
    for (ActionId a : frontier) {
      out.action[a] = k;
      for (FluentId f : p.action(a).add)
        if (out.fluent[f] == kUnreachable) {
          out.fluent[f] = k + 1;
          fresh.push_back(f);
        }
    }
    frontier.clear();
  }
  return out;
}

/// Drops fluents and actions that never appear in the relaxed planning graph.
inline StripsProblem prune_unreachable(const StripsProblem& p) {
  const FirstLayers layers = first_appearance_layers(p);
  std::vector<bool> keep_fluent(p.fluent_count()), keep_action(p.action_count());
  for (FluentId f = 0; f < p.fluent_count(); ++f) keep_fluent[f] = layers.fluent[f] != kUnreachable;
  for (ActionId a = 0; a < p.action_count(); ++a) keep_action[a] = layers.action[a] != kUnreachable;
  return restrict_problem(p, keep_fluent, keep_action);
}

struct MutexPair {
  FluentId f = 0;
  FluentId g = 0;

  MutexPair() = default;
  MutexPair(FluentId x, FluentId y) : f(std::min(x, y)), g(std::max(x, y)) {}
  friend auto operator<=>(const MutexPair&, const MutexPair&) = default;
};

struct LayerStats {
  std::size_t fluents = 0;
  std::size_t applicable_regular_actions = 0;
  std::size_t preserved_fluents = 0;
  std::size_t fluent_mutexes = 0;
  /// (regular, preserving) plus (preserving, preserving) action mutexes.
  std::size_t stored_action_mutexes = 0;
};

struct PlanningGraph {
  std::vector<Layer> fluent_first_layer;
  std::vector<Layer> action_first_layer;
  /// Filled only when requested; one sorted set per layer.
  std::vector<std::vector<MutexPair>> fluent_mutex_by_layer;
  std::vector<LayerStats> layers;
  Layer stabilized_layer = 0;
  std::size_t peak_stored_action_mutexes = 0;
};

struct MutexResult {
  std::vector<MutexPair> pairs;
  PlanningGraph graph;
};

struct MutexOptions {
  bool keep_layers = false;
};

namespace detail {

using Bits = boost::dynamic_bitset<std::uint64_t>;

/// Mutexes between regular actions and preserving actions at one layer:
/// row a has bit F set when a is mutex with preserve(F).
class PreserveMutexStore {
 public:
  void reset() {
    rows_.clear();
    entries_ = 0;
  }

  void set_row(ActionId regular, Bits mutex_with_preserved) {
    entries_ += mutex_with_preserved.count();
    rows_.emplace_back(regular, std::move(mutex_with_preserved));
  }

  std::size_t entries() const { return entries_; }

 private:
  std::vector<std::pair<ActionId, Bits>> rows_;
  std::size_t entries_ = 0;
};

inline std::vector<MutexPair> pairs_of(const std::vector<Bits>& m) {
  std::vector<MutexPair> out;
  for (FluentId f = 0; f < m.size(); ++f)
    for (auto g = m[f].find_next(f); g != Bits::npos; g = m[f].find_next(g))
      out.emplace_back(f, static_cast<FluentId>(g));
  return out;
}

inline std::size_t pair_count(const std::vector<Bits>& m) {
  std::size_t n = 0;
  for (const Bits& row : m) n += row.count();
  return n / 2;
}

}  // namespace detail

/// Fluent pairs that can never hold together, from the planning graph
/// built to a fixpoint of (fluent set, fluent-mutex set).
///
/// At layer k, with fluents F_k, mutexes M_k and P_k the fluents of F_k
/// that have a preserving action, two fluents are non-mutex at k+1 iff
/// - both are in P_k and not mutex at k, or
/// - one applicable regular action adds both, or
/// - an applicable regular action a adds one and the other, G, is in P_k,
///   is not deleted by a, and is not mutex with any precondition of a.
/// A regular action is applicable when its preconditions are in F_k and
/// pairwise non-mutex.
inline MutexResult eventual_fluent_mutexes(const StripsProblem& p, MutexOptions opts = {}) {
  using detail::Bits;
  const std::size_t n = p.fluent_count();
  MutexResult out;
  PlanningGraph& pg = out.graph;
  pg.fluent_first_layer.assign(n, kUnreachable);
  pg.action_first_layer.assign(p.action_count(), kUnreachable);

  Bits has_preserve(n);
  std::vector<ActionId> preserve_of(n, StripsProblem::npos);
  std::vector<ActionId> regular;
  std::vector<Bits> add_bits(p.action_count()), del_bits(p.action_count());
  for (ActionId a = 0; a < p.action_count(); ++a) {
    const Action& act = p.action(a);
    if (act.is_preserving) {
      has_preserve.set(act.pre.front());
      preserve_of[act.pre.front()] = a;
      continue;
    }
    regular.push_back(a);
    add_bits[a].resize(n);
    del_bits[a].resize(n);
    for (FluentId f : act.add) add_bits[a].set(f);
    for (FluentId f : act.del) del_bits[a].set(f);
  }

  Bits present(n);
  for (FluentId f : p.init()) present.set(f);
  std::vector<Bits> mutex(n, Bits(n));
  detail::PreserveMutexStore store;

  for (Layer k = 0;; ++k) {
    for (auto f = present.find_first(); f != Bits::npos; f = present.find_next(f))
      if (pg.fluent_first_layer[f] == kUnreachable) pg.fluent_first_layer[f] = k;
    if (opts.keep_layers) pg.fluent_mutex_by_layer.push_back(detail::pairs_of(mutex));

    const Bits preserved = present & has_preserve;
    LayerStats stats;
    stats.fluents = present.count();
    stats.preserved_fluents = preserved.count();
    stats.fluent_mutexes = detail::pair_count(mutex);

    std::vector<Bits> nonmutex(n, Bits(n));
    for (auto f = preserved.find_first(); f != Bits::npos; f = preserved.find_next(f)) {
      nonmutex[f] |= preserved - mutex[f];
      if (pg.action_first_layer[preserve_of[f]] == kUnreachable)
        pg.action_first_layer[preserve_of[f]] = k;
    }
    std::size_t preserve_preserve = 0;
    for (auto f = preserved.find_first(); f != Bits::npos; f = preserved.find_next(f))
      preserve_preserve += (mutex[f] & preserved).count();
    store.reset();

    Bits next = preserved;
    for (ActionId a : regular) {
      const Action& act = p.action(a);
      bool applicable = true;
      for (std::size_t i = 0; applicable && i < act.pre.size(); ++i) {
        if (!present.test(act.pre[i])) applicable = false;
        for (std::size_t j = i + 1; applicable && j < act.pre.size(); ++j)
          if (mutex[act.pre[i]].test(act.pre[j])) applicable = false;
      }
      if (!applicable) continue;
      ++stats.applicable_regular_actions;
      if (pg.action_first_layer[a] == kUnreachable) pg.action_first_layer[a] = k;

      Bits compatible = preserved - del_bits[a];
      for (FluentId q : act.pre) compatible -= mutex[q];
      store.set_row(a, preserved - compatible);

      const Bits reach = compatible | add_bits[a];
      for (FluentId f : act.add) nonmutex[f] |= reach;
      for (auto g = compatible.find_first(); g != Bits::npos; g = compatible.find_next(g))
        nonmutex[g] |= add_bits[a];
      next |= add_bits[a];
    }
    stats.stored_action_mutexes = store.entries() + preserve_preserve;
    pg.peak_stored_action_mutexes =
        std::max(pg.peak_stored_action_mutexes, stats.stored_action_mutexes);
    pg.layers.push_back(stats);

    std::vector<Bits> next_mutex(n, Bits(n));
    for (auto f = next.find_first(); f != Bits::npos; f = next.find_next(f)) {
      next_mutex[f] = next - nonmutex[f];
      next_mutex[f].reset(f);
    }
    // Mutexes among fluents already present can only disappear.
    for (auto f = present.find_first(); f != Bits::npos; f = present.find_next(f))
      if (!((next_mutex[f] & present).is_subset_of(mutex[f])))
        throw ContractViolation("fluent mutex reappeared at layer " + std::to_string(k + 1) +
                                " for " + p.fluent_name(static_cast<FluentId>(f)));

    if (next == present && next_mutex == mutex) {
      pg.stabilized_layer = k;
      out.pairs = detail::pairs_of(mutex);
      return out;
    }
    present = std::move(next);
    mutex = std::move(next_mutex);
  }
}

/// Mutex graph over the fluents that occur in some pair (or all fluents),
/// in fluent-id order, labeled with fluent terms.
inline MutexGraph mutex_graph_of(const StripsProblem& p, const std::vector<MutexPair>& pairs,
                                 bool all_fluents = false) {
  std::vector<VertexId> vertex(p.fluent_count(), std::numeric_limits<VertexId>::max());
  std::vector<bool> used(p.fluent_count(), all_fluents);
  for (const MutexPair& m : pairs) used[m.f] = used[m.g] = true;
  std::vector<std::string> labels;
  for (FluentId f = 0; f < p.fluent_count(); ++f)
    if (used[f]) {
      vertex[f] = static_cast<VertexId>(labels.size());
      labels.push_back(p.fluent_name(f));
    }
  std::vector<Edge> edges;
  edges.reserve(pairs.size());
  for (const MutexPair& m : pairs) edges.emplace_back(vertex[m.f], vertex[m.g]);
  const std::size_t vertices = labels.size();
  return build_graph(vertices, edges, std::move(labels));
}

inline nlohmann::json mutex_pairs_json(const StripsProblem& p, const std::vector<MutexPair>& pairs) {
  nlohmann::json out = nlohmann::json::array();
  for (const MutexPair& m : pairs) out.push_back({p.fluent_name(m.f), p.fluent_name(m.g)});
  return out;
}

}  // namespace mcover
