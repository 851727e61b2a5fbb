#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <map>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "mcover/cover.hpp"
#include "mcover/error.hpp"
#include "mcover/graph.hpp"

namespace mcover {

/// One rule of an emitted program. Guard atoms such as step(T) are not
/// counted in literal_count.
struct AspRule {
  std::string text;
  std::size_t literal_count = 0;
};

/// Per-layer size of an encoding: rules (CL) and literals (Lit).
struct EncodingStats {
  std::size_t edges = 0;
  std::size_t rules = 0;
  std::size_t literals = 0;
  std::size_t edges_covered = 0;

  friend bool operator==(const EncodingStats&, const EncodingStats&) = default;
};

struct AspProgram {
  std::vector<AspRule> rules;
  EncodingStats stats;

  std::string text() const {
    std::string out;
    for (const auto& r : rules) {
      out += r.text;
      out += '\n';
    }
    return out;
  }
};

inline void to_json(nlohmann::json& j, const EncodingStats& s) {
  j = nlohmann::json{{"edges", s.edges},
                     {"rules", s.rules},
                     {"literals", s.literals},
                     {"edges_covered", s.edges_covered}};
}

inline constexpr std::string_view kStatsCsvHeader = "Edges,CL,Lit,Edges_covered";

inline std::string stats_csv_row(const EncodingStats& s) {
  return std::to_string(s.edges) + ',' + std::to_string(s.rules) + ',' +
         std::to_string(s.literals) + ',' + std::to_string(s.edges_covered);
}

/// Literal and rule count of one multiclique in the ASP encoding.
inline EncodingStats multiclique_stats(const Multiclique& mc) {
  EncodingStats s;
  s.rules = 1;
  for (const auto& p : mc.partitions) {
    s.literals += static_cast<std::size_t>(partition_cost(p.size()));
    if (p.size() > 1) s.rules += p.size();
  }
  return s;
}

namespace detail {

inline const std::string& symbol_of(std::span<const std::string> symbols, VertexId v) {
  if (v >= symbols.size() || symbols[v].empty())
    throw EncodingError("vertex " + std::to_string(v) + " has no symbol");
  return symbols[v];
}

inline std::string holds_atom(std::string_view fluent) {
  return "holds(" + std::string(fluent) + ",T)";
}

inline std::vector<std::string> sorted_symbols(std::span<const std::string> symbols,
                                               const Partition& p) {
  std::vector<std::string> out;
  out.reserve(p.size());
  for (VertexId v : p) out.push_back(symbol_of(symbols, v));
  std::sort(out.begin(), out.end());
  return out;
}

inline AspRule binary_constraint(std::string a, std::string b) {
  if (b < a) std::swap(a, b);
  return {":- " + holds_atom(a) + "; " + holds_atom(b) + ".", 2};
}

}  // namespace detail

/// Renders a covering as layer-parameterized ASP constraints.
///
/// Multiclique i, partition j with more than one member gets one defining
/// rule per member, `partitionHolds(part(i,j),T) :- holds(F,T).`, and is
/// referenced from the "at most one" constraint by its partitionHolds atom.
/// Singleton partitions go into the constraint directly as holds atoms. A
/// multiclique of two singletons is written as a plain binary constraint.
inline AspProgram emit_multiclique_program(const Covering& c,
                                           std::span<const std::string> symbols) {
  AspProgram prog;
  prog.stats.edges = c.source_edges;
  prog.stats.edges_covered = c.covered.size();
  for (std::size_t i = 0; i < c.multicliques.size(); ++i) {
    const Multiclique& mc = c.multicliques[i];
    if (mc.partitions.size() < 2)
      throw EncodingError("multiclique " + std::to_string(i) + " has fewer than two partitions");
    if (mc.partitions.size() == 2 && mc.partitions[0].size() == 1 &&
        mc.partitions[1].size() == 1) {
      prog.rules.push_back(
          detail::binary_constraint(detail::symbol_of(symbols, mc.partitions[0][0]),
                                    detail::symbol_of(symbols, mc.partitions[1][0])));
      continue;
    }
    std::string aggregate;
    for (std::size_t j = 0; j < mc.partitions.size(); ++j) {
      const Partition& p = mc.partitions[j];
      if (!aggregate.empty()) aggregate += "; ";
      if (p.size() == 1) {
        aggregate += detail::holds_atom(detail::symbol_of(symbols, p[0]));
        continue;
      }
      const std::string head =
          "partitionHolds(part(" + std::to_string(i) + "," + std::to_string(j) + "),T)";
      for (const std::string& f : detail::sorted_symbols(symbols, p))
        prog.rules.push_back({head + " :- " + detail::holds_atom(f) + ".", 2});
      aggregate += head;
    }
    prog.rules.push_back({":- {" + aggregate + "} > 1; step(T).", mc.partitions.size()});
  }
  for (const auto& r : prog.rules) {
    ++prog.stats.rules;
    prog.stats.literals += r.literal_count;
  }
  return prog;
}

/// One binary constraint per edge.
inline AspProgram emit_naive_program(const MutexGraph& g, std::span<const std::string> symbols) {
  AspProgram prog;
  prog.stats.edges = g.edge_count();
  prog.stats.edges_covered = g.edge_count();
  for (const Edge& e : g.edges())
    prog.rules.push_back(detail::binary_constraint(detail::symbol_of(symbols, e.u),
                                                   detail::symbol_of(symbols, e.v)));
  prog.stats.rules = prog.rules.size();
  prog.stats.literals = 2 * prog.rules.size();
  return prog;
}

/// Size of the SAT biclique encoding: |C| + |C'| binary clauses per biclique.
inline EncodingStats biclique_sat_stats(const Covering& c) {
  EncodingStats s;
  s.edges = c.source_edges;
  s.edges_covered = c.covered.size();
  for (std::size_t i = 0; i < c.multicliques.size(); ++i) {
    const Multiclique& mc = c.multicliques[i];
    if (mc.partitions.size() != 2)
      throw EncodingError("multiclique " + std::to_string(i) + " is not a biclique");
    s.rules += mc.partitions[0].size() + mc.partitions[1].size();
  }
  s.literals = 2 * s.rules;
  return s;
}

// ---------------------------------------------------------------------------
// Exhaustive model enumeration over one layer.

namespace detail {

/// Splits on `sep` at parenthesis/brace depth zero.
inline std::vector<std::string_view> split_top(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  int depth = 0;
  std::size_t start = 0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    const char ch = s[i];
    if (ch == '(' || ch == '{') ++depth;
    else if (ch == ')' || ch == '}') --depth;
    else if (ch == sep && depth == 0) {
      out.push_back(s.substr(start, i - start));
      start = i + 1;
    }
  }
  out.push_back(s.substr(start));
  for (auto& part : out) {
    while (!part.empty() && part.front() == ' ') part.remove_prefix(1);
    while (!part.empty() && part.back() == ' ') part.remove_suffix(1);
  }
  return out;
}

/// "name(X,T)" -> X, for the given predicate name.
inline bool layer_argument(std::string_view atom, std::string_view name, std::string_view& arg) {
  if (atom.size() < name.size() + 4 || atom.substr(0, name.size()) != name ||
      atom[name.size()] != '(' || atom.back() != ')')
    return false;
  auto inner = atom.substr(name.size() + 1, atom.size() - name.size() - 2);
  auto parts = split_top(inner, ',');
  if (parts.size() != 2 || parts[1] != "T") return false;
  arg = parts[0];
  return true;
}

}  // namespace detail

using VertexMask = std::uint32_t;

/// All sets of held fluents (as bitmasks over vertex ids) that satisfy a
/// program made of this module's rule forms, with partitionHolds atoms taking
/// the values their defining rules give them. Exhaustive; at most 15 symbols.
inline std::vector<VertexMask> enumerate_constraint_models(std::span<const AspRule> rules,
                                                           std::span<const std::string> symbols) {
  const std::size_t n = symbols.size();
  if (n > 15) throw ContractViolation("model enumeration is limited to 15 symbols");
  std::map<std::string, VertexId, std::less<>> fluent_id;
  for (VertexId v = 0; v < n; ++v) fluent_id.emplace(symbols[v], v);
  std::map<std::string, std::size_t, std::less<>> part_id;
  std::vector<VertexMask> part_def;

  auto fluent_of = [&](std::string_view atom, const std::string& rule) -> VertexId {
    std::string_view arg;
    if (!detail::layer_argument(atom, "holds", arg))
      throw EncodingError("unsupported literal '" + std::string(atom) + "' in: " + rule);
    auto it = fluent_id.find(arg);
    if (it == fluent_id.end())
      throw EncodingError("unknown fluent '" + std::string(arg) + "' in: " + rule);
    return it->second;
  };
  auto part_of = [&](std::string_view key) {
    auto it = part_id.find(key);
    if (it != part_id.end()) return it->second;
    part_id.emplace(std::string(key), part_def.size());
    part_def.push_back(0);
    return part_def.size() - 1;
  };

  struct Element {
    bool is_part;
    std::size_t index;
  };
  std::vector<std::vector<Element>> constraints;

  for (const AspRule& rule : rules) {
    std::string_view s = rule.text;
    if (s.empty() || s.back() != '.') throw EncodingError("rule lacks final '.': " + rule.text);
    s.remove_suffix(1);
    const auto arrow = s.find(":-");
    if (arrow == std::string_view::npos) throw EncodingError("not a rule: " + rule.text);
    std::string_view head = s.substr(0, arrow);
    while (!head.empty() && head.back() == ' ') head.remove_suffix(1);
    std::string_view body = s.substr(arrow + 2);
    while (!body.empty() && body.front() == ' ') body.remove_prefix(1);

    if (!head.empty()) {
      std::string_view key;
      if (!detail::layer_argument(head, "partitionHolds", key))
        throw EncodingError("unsupported rule head: " + rule.text);
      part_def[part_of(key)] |= VertexMask{1} << fluent_of(body, rule.text);
      continue;
    }
    std::vector<Element> elems;
    if (!body.empty() && body.front() == '{') {
      auto parts = detail::split_top(body, ';');
      // parts: "{a; b; ...} > 1" is split inside braces only at depth 0, so
      // the first part holds the whole aggregate.
      std::string_view agg = parts[0];
      const auto close = agg.rfind('}');
      if (close == std::string_view::npos || detail::split_top(agg.substr(close + 1), ';')[0] != "> 1")
        throw EncodingError("unsupported aggregate: " + rule.text);
      for (std::string_view e : detail::split_top(agg.substr(1, close - 1), ';')) {
        std::string_view key;
        if (detail::layer_argument(e, "partitionHolds", key))
          elems.push_back({true, part_of(key)});
        else
          elems.push_back({false, fluent_of(e, rule.text)});
      }
      for (std::size_t i = 1; i < parts.size(); ++i)
        if (parts[i] != "step(T)") throw EncodingError("unsupported guard in: " + rule.text);
    } else {
      auto parts = detail::split_top(body, ';');
      if (parts.size() != 2) throw EncodingError("unsupported constraint: " + rule.text);
      for (std::string_view e : parts) elems.push_back({false, fluent_of(e, rule.text)});
    }
    constraints.push_back(std::move(elems));
  }

  std::vector<VertexMask> models;
  const VertexMask limit = VertexMask{1} << n;
  for (VertexMask m = 0; m < limit; ++m) {
    bool ok = true;
    for (const auto& elems : constraints) {
      std::size_t count = 0;
      for (const Element& e : elems) {
        const bool holds = e.is_part ? (part_def[e.index] & m) != 0 : ((m >> e.index) & 1U) != 0;
        if (holds && ++count > 1) break;
      }
      if (count > 1) {
        ok = false;
        break;
      }
    }
    if (ok) models.push_back(m);
  }
  return models;
}

}  // namespace mcover
