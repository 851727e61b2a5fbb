#pragma once

#include <charconv>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "mcover/error.hpp"
#include "mcover/graph.hpp"

namespace mcover {

// Text format:
//   # comment
//   p <n> <m>
//   e <u> <v>        (m lines, 0-based ids)
//   l <v> <symbol>   (optional)

namespace detail {

inline std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

inline std::vector<std::string_view> split_ws(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && (s[i] == ' ' || s[i] == '\t' || s[i] == '\r')) ++i;
    std::size_t j = i;
    while (j < s.size() && s[j] != ' ' && s[j] != '\t' && s[j] != '\r') ++j;
    if (j > i) out.push_back(s.substr(i, j - i));
    i = j;
  }
  return out;
}

template <class T>
bool parse_uint(std::string_view s, T& out) {
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc{} && ptr == s.data() + s.size();
}

}  // namespace detail

inline MutexGraph read_graph(std::istream& in, const std::string& source = "<graph>") {
  std::string line;
  std::size_t lineno = 0;
  bool have_header = false;
  std::size_t n = 0, m = 0;
  std::vector<Edge> edges;
  std::vector<std::string> labels;
  bool any_label = false;

  while (std::getline(in, line)) {
    ++lineno;
    std::string_view body = detail::trim(line);
    if (body.empty() || body.front() == '#') continue;
    auto fields = detail::split_ws(body);
    const std::string_view tag = fields[0];
    if (tag == "p") {
      if (have_header) throw InputError(source, lineno, 0, "duplicate 'p' header");
      if (fields.size() != 3 || !detail::parse_uint(fields[1], n) ||
          !detail::parse_uint(fields[2], m))
        throw InputError(source, lineno, 0, "expected 'p <n> <m>'");
      have_header = true;
      edges.reserve(m);
    } else if (tag == "e") {
      if (!have_header) throw InputError(source, lineno, 0, "edge before 'p' header");
      VertexId u = 0, v = 0;
      if (fields.size() != 3 || !detail::parse_uint(fields[1], u) ||
          !detail::parse_uint(fields[2], v))
        throw InputError(source, lineno, 0, "expected 'e <u> <v>'");
      if (u >= n || v >= n)
        throw InputError(source, lineno, 0,
                         "edge (" + std::to_string(u) + "," + std::to_string(v) +
                             ") references a vertex >= " + std::to_string(n));
      if (u == v)
        throw InputError(source, lineno, 0, "self-loop on vertex " + std::to_string(u));
      edges.emplace_back(u, v);
    } else if (tag == "l") {
      if (!have_header) throw InputError(source, lineno, 0, "label before 'p' header");
      VertexId v = 0;
      if (fields.size() < 3 || !detail::parse_uint(fields[1], v))
        throw InputError(source, lineno, 0, "expected 'l <v> <symbol>'");
      if (v >= n)
        throw InputError(source, lineno, 0, "label for unknown vertex " + std::to_string(v));
      if (!any_label) labels.assign(n, std::string{});
      any_label = true;
      // Symbol is the rest of the line after the vertex id.
      const auto rest = static_cast<std::size_t>(fields[1].data() + fields[1].size() - body.data());
      labels[v] = std::string(detail::trim(body.substr(rest)));
    } else {
      throw InputError(source, lineno, 0, "unknown line tag '" + std::string(tag) + "'");
    }
  }
  if (!have_header) throw InputError(source, lineno, 0, "missing 'p <n> <m>' header");
  if (edges.size() != m)
    throw InputError(source, lineno, 0,
                     "header declares " + std::to_string(m) + " edges but " +
                         std::to_string(edges.size()) + " were listed");
  return MutexGraph::build(n, edges, std::move(labels));
}

inline MutexGraph parse_graph(const std::string& text, const std::string& source = "<graph>") {
  std::istringstream in(text);
  return read_graph(in, source);
}

/// Canonical serialization: header, edges ascending by (u, v), then labels.
inline void write_graph(std::ostream& out, const MutexGraph& g) {
  out << "p " << g.vertex_count() << ' ' << g.edge_count() << '\n';
  for (const Edge& e : g.edges()) out << "e " << e.u << ' ' << e.v << '\n';
  if (g.has_labels())
    for (VertexId v = 0; v < g.vertex_count(); ++v)
      if (!g.label(v).empty()) out << "l " << v << ' ' << g.label(v) << '\n';
}

inline std::string to_text(const MutexGraph& g) {
  std::ostringstream out;
  write_graph(out, g);
  return out.str();
}

}  // namespace mcover
