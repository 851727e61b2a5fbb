#pragma once
// Batch commands behind the mcover executable. Each command reads files,
// writes its primary output to `out` (or to RunConfig::output) and returns
// a process exit status.

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <nlohmann/json.hpp>

#include "mcover/aspplan.hpp"
#include "mcover/cover.hpp"
#include "mcover/encode.hpp"
#include "mcover/error.hpp"
#include "mcover/graph_io.hpp"
#include "mcover/pddl.hpp"
#include "mcover/planning.hpp"

namespace mcover::cli {

namespace exit_code {
inline constexpr int ok = 0;
inline constexpr int usage = 1;
inline constexpr int input = 2;
inline constexpr int solver = 3;
inline constexpr int internal = 4;
inline constexpr int no_plan = 10;
}  // namespace exit_code

enum class Baseline { multiclique, biclique, naive };

struct RunConfig {
  CoverageFraction coverage_fraction;
  Baseline baseline = Baseline::multiclique;
  bool neededness = false;
  std::optional<std::string> solver_cmd;
  int max_makespan = 64;
  PlanEncoding plan_encoding;
  std::string output;      // empty: standard output
  std::string stats_json;  // empty: not written
  std::string stats_csv;
  std::string pairs_json;
  std::string covering;    // encode: read this covering instead of computing one
  unsigned jobs = 0;       // bench workers; 0 picks the hardware concurrency
  bool keep_programs = false;
};

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
  if (!out) throw InputError("cannot write " + path);
}

inline void emit(const RunConfig& cfg, std::ostream& out, const std::string& text) {
  if (cfg.output.empty()) out << text;
  else write_file(cfg.output, text);
}

inline MutexGraph load_graph(const std::string& path) { return parse_graph(read_file(path), path); }

/// Vertex symbols for encoding: graph labels, else "v<id>".
inline std::vector<std::string> symbols_of(const MutexGraph& g) {
  if (g.has_labels()) {
    for (VertexId v = 0; v < g.vertex_count(); ++v)
      if (g.label(v).empty()) throw EncodingError("vertex " + std::to_string(v) + " has no label");
    return g.labels();
  }
  std::vector<std::string> out;
  out.reserve(g.vertex_count());
  for (VertexId v = 0; v < g.vertex_count(); ++v) out.push_back("v" + std::to_string(v));
  return out;
}

inline Covering cover_with(const MutexGraph& g, Baseline b, CoverageFraction fraction) {
  switch (b) {
    case Baseline::biclique: return identify_biclique_cover(g);
    case Baseline::naive: return naive_cover(g);
    case Baseline::multiclique: break;
  }
  return find_cover(g, fraction);
}

/// The size a baseline is judged by: the ASP program for multicliques and
/// the naive encoding, binary SAT clauses for bicliques.
inline EncodingStats baseline_stats(const MutexGraph& g, const Covering& c, Baseline b) {
  if (b == Baseline::biclique) return biclique_sat_stats(c);
  if (b == Baseline::naive) return emit_naive_program(g, symbols_of(g)).stats;
  return emit_multiclique_program(c, symbols_of(g)).stats;
}

inline void write_stats(const RunConfig& cfg, const EncodingStats& s) {
  if (!cfg.stats_json.empty()) write_file(cfg.stats_json, nlohmann::json(s).dump() + "\n");
  if (!cfg.stats_csv.empty())
    write_file(cfg.stats_csv, std::string(kStatsCsvHeader) + "\n" + stats_csv_row(s) + "\n");
}

/// Grounded problem, optionally restricted to the relaxed-reachable part.
inline StripsProblem load_problem(const std::string& domain, const std::string& problem, bool neededness) {
  StripsProblem p = parse_pddl(read_file(domain), read_file(problem), domain, problem);
  if (neededness) p = prune_unreachable(p);
  return add_preserving_actions(std::move(p));
}

inline int cmd_cover(const std::string& graph_path, const RunConfig& cfg, std::ostream& out) {
  const MutexGraph g = load_graph(graph_path);
  const Covering c = cover_with(g, cfg.baseline, cfg.coverage_fraction);
  emit(cfg, out, to_text(c));
  write_stats(cfg, baseline_stats(g, c, cfg.baseline));
  return exit_code::ok;
}

inline int cmd_encode(const std::string& graph_path, const RunConfig& cfg, std::ostream& out) {
  const MutexGraph g = load_graph(graph_path);
  const std::vector<std::string> symbols = symbols_of(g);
  AspProgram prog;
  if (!cfg.covering.empty()) {
    std::istringstream in(read_file(cfg.covering));
    prog = emit_multiclique_program(read_covering(in, g, cfg.covering), symbols);
  } else if (cfg.baseline == Baseline::naive) {
    prog = emit_naive_program(g, symbols);
  } else {
    prog = emit_multiclique_program(cover_with(g, cfg.baseline, cfg.coverage_fraction), symbols);
  }
  emit(cfg, out, prog.text());
  write_stats(cfg, prog.stats);
  return exit_code::ok;
}

inline int cmd_mutexgraph(const std::string& domain, const std::string& problem, const RunConfig& cfg,
                          std::ostream& out) {
  const StripsProblem p = load_problem(domain, problem, cfg.neededness);
  const MutexResult m = eventual_fluent_mutexes(p);
  emit(cfg, out, to_text(mutex_graph_of(p, m.pairs, true)));
  if (!cfg.pairs_json.empty()) write_file(cfg.pairs_json, mutex_pairs_json(p, m.pairs).dump(1) + "\n");
  return exit_code::ok;
}

inline int cmd_plan(const std::string& domain, const std::string& problem, const RunConfig& cfg,
                    std::ostream& out, std::ostream& log) {
  const StripsProblem p = load_problem(domain, problem, cfg.neededness);
  const MutexResult m = eventual_fluent_mutexes(p);
  const MutexGraph g = mutex_graph_of(p, m.pairs);
  const AspProgram constraints =
      cfg.baseline == Baseline::naive
          ? emit_naive_program(g, g.labels())
          : emit_multiclique_program(cover_with(g, cfg.baseline, cfg.coverage_fraction), g.labels());
  write_stats(cfg, constraints.stats);

  SolveOptions opts;
  if (cfg.solver_cmd) opts.solver.command = *cfg.solver_cmd;
  else if (const char* env = std::getenv("MCOVER_SOLVER")) opts.solver.command = env;
  opts.max_makespan = cfg.max_makespan;
  opts.encoding = cfg.plan_encoding;
  opts.keep_programs = cfg.keep_programs;

  SolveResult r;
  try {
    r = solve_loop(p, constraints, m.pairs, opts);
  } catch (const UnsolvableError& e) {
    log << "no plan: " << e.what() << '\n';
    return exit_code::no_plan;
  }
  for (const SolveAttempt& a : r.attempts)
    log << "makespan " << a.makespan << ": " << (a.satisfiable ? "SAT" : "UNSAT") << " ("
        << static_cast<long long>(a.seconds * 1000) << " ms)\n";
  if (!r.plan) {
    log << "no plan within makespan " << cfg.max_makespan << '\n';
    return exit_code::no_plan;
  }
  emit(cfg, out, plan_text(p, *r.plan));
  return exit_code::ok;
}

// ---------------------------------------------------------------------------
// Benchmark table.

inline constexpr std::string_view kBenchHeader = "Instance,Edges,CL,Lit,Edges*,CL*,Lit*,R-Lit,time_ms,error";

/// One instance: a graph file, a directory holding domain.pddl and
/// problem.pddl, or an explicit domain/problem pair.
struct BenchInstance {
  std::string name;
  std::vector<std::string> paths;
};

struct BenchRow {
  std::string instance;
  std::optional<EncodingStats> full, partial;
  std::size_t r_lit = 0;
  long long time_ms = 0;
  std::string error;
};

/// One instance per non-empty, non-'#' line; relative paths resolve against
/// `base`.
inline std::vector<BenchInstance> parse_instance_list(const std::string& text,
                                                      const std::filesystem::path& base) {
  std::vector<BenchInstance> out;
  std::istringstream in(text);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::istringstream fields(line);
    std::vector<std::string> tokens;
    for (std::string t; fields >> t;) tokens.push_back(t);
    if (tokens.empty() || tokens[0].front() == '#') continue;
    if (tokens.size() > 2) throw InputError("<instances>", lineno, 0, "expected one or two paths");
    BenchInstance inst{tokens[0], {}};
    for (const std::string& t : tokens) {
      const std::filesystem::path path(t);
      inst.paths.push_back((path.is_absolute() ? path : base / path).string());
    }
    out.push_back(std::move(inst));
  }
  return out;
}

inline MutexGraph bench_graph(const BenchInstance& inst, bool neededness) {
  std::vector<std::string> paths = inst.paths;
  if (paths.size() == 1 && std::filesystem::is_directory(paths[0]))
    paths = {paths[0] + "/domain.pddl", paths[0] + "/problem.pddl"};
  if (paths.size() == 1) return load_graph(paths[0]);
  const StripsProblem p = load_problem(paths[0], paths[1], neededness);
  return mutex_graph_of(p, eventual_fluent_mutexes(p).pairs);
}

inline BenchRow bench_one(const BenchInstance& inst, const RunConfig& cfg, CoverageFraction partial) {
  BenchRow row{inst.name, {}, {}, 0, 0, {}};
  const auto start = std::chrono::steady_clock::now();
  try {
    const MutexGraph g = bench_graph(inst, cfg.neededness);
    row.full = baseline_stats(g, cover_with(g, cfg.baseline, {}), cfg.baseline);
    row.partial = baseline_stats(g, cover_with(g, cfg.baseline, partial), cfg.baseline);
    row.r_lit = biclique_sat_stats(identify_biclique_cover(g)).literals;
  } catch (const std::exception& e) {
    row.full.reset();
    row.partial.reset();
    row.error = e.what();
  }
  row.time_ms = std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - start)
                    .count();
  return row;
}

inline std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + '"';
}

inline std::string bench_csv_row(const BenchRow& r) {
  std::string out = csv_field(r.instance);
  if (r.full && r.partial) {
    for (std::size_t v : {r.full->edges, r.full->rules, r.full->literals, r.partial->edges_covered,
                          r.partial->rules, r.partial->literals, r.r_lit})
      out += "," + std::to_string(v);
  } else {
    out += ",,,,,,,";
  }
  return out + "," + std::to_string(r.time_ms) + "," + csv_field(r.error) + "\n";
}

/// Rows in input order. The starred columns use the configured fraction
/// when it is below 1, otherwise 9/10.
inline std::vector<BenchRow> run_bench(const std::vector<BenchInstance>& instances, const RunConfig& cfg) {
  const CoverageFraction partial = cfg.coverage_fraction.is_full() ? CoverageFraction(9, 10)
                                                                   : cfg.coverage_fraction;
  std::vector<BenchRow> rows(instances.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i; (i = next.fetch_add(1)) < instances.size();) rows[i] = bench_one(instances[i], cfg, partial);
  };
  const unsigned hw = std::max(1U, std::thread::hardware_concurrency());
  const std::size_t workers = std::min<std::size_t>(cfg.jobs ? cfg.jobs : hw, instances.size());
  std::vector<std::jthread> pool;
  for (std::size_t w = 1; w < workers; ++w) pool.emplace_back(worker);
  if (workers > 0) worker();
  return rows;
}

inline int cmd_bench(const std::string& list_path, const RunConfig& cfg, std::ostream& out) {
  const std::string text = list_path == "-" ? std::string(std::istreambuf_iterator<char>(std::cin), {})
                                            : read_file(list_path);
  const std::filesystem::path base =
      list_path == "-" ? std::filesystem::current_path() : std::filesystem::path(list_path).parent_path();
  std::string csv = std::string(kBenchHeader) + "\n";
  for (const BenchRow& r : run_bench(parse_instance_list(text, base), cfg)) csv += bench_csv_row(r);
  emit(cfg, out, csv);
  return exit_code::ok;
}

/// Maps an exception escaping a command to its exit status.
inline int exit_status_of(const std::exception_ptr& e, std::ostream& err) {
  try {
    std::rethrow_exception(e);
  } catch (const InputError& x) {
    err << "error: " << x.what() << '\n';
    return exit_code::input;
  } catch (const EncodingError& x) {
    err << "error: " << x.what() << '\n';
    return exit_code::input;
  } catch (const UnsolvableError& x) {
    err << "no plan: " << x.what() << '\n';
    return exit_code::no_plan;
  } catch (const SolverError& x) {
    err << "solver error: " << x.what() << '\n';
    return exit_code::solver;
  } catch (const std::exception& x) {
    err << "internal error: " << x.what() << '\n';
    return exit_code::internal;
  }
}

}  // namespace mcover::cli
