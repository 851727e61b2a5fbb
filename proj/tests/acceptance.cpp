// Acceptance suite: one PASS/FAIL line per criterion. Exits nonzero when any
// criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <iostream>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "mcover/aspplan.hpp"
#include "mcover/cli.hpp"
#include "mcover/cover.hpp"
#include "mcover/encode.hpp"
#include "mcover/planning.hpp"
#include "planning_support.hpp"
#include "support.hpp"

using namespace mcover;
using namespace mcover::test;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

int failures = 0;

void criterion(int id, const std::string& title, const std::function<Outcome()>& body) {
  const auto start = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (!o.pass) ++failures;
  std::printf("%s  %d. %s: %s [%.2f s]\n", o.pass ? "PASS" : "FAIL", id, title.c_str(), o.detail.c_str(), secs);
  std::fflush(stdout);
}

double seconds_since(std::chrono::steady_clock::time_point t) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t).count();
}

std::vector<std::uint32_t> models_of(const AspProgram& prog, const MutexGraph& g) {
  auto m = enumerate_constraint_models(prog.rules, g.labels());
  std::sort(m.begin(), m.end());
  return m;
}

struct Pipeline {
  StripsProblem problem;
  MutexResult mutexes;
  MutexGraph graph;
};

Pipeline planning_graph(const std::string& name) {
  Pipeline out{add_preserving_actions(load_problem(name)), {}, {}};
  out.mutexes = eventual_fluent_mutexes(out.problem);
  out.graph = mutex_graph_of(out.problem, out.mutexes.pairs, true);
  return out;
}

/// Graphs every covering criterion runs over: the worked examples, the
/// planning micro-domains and seeded random graphs.
std::vector<MutexGraph> standard_suite() {
  std::vector<MutexGraph> out{five_vertex(), planning_graph("ferry").graph};
  for (const std::string& d : micro_domains()) out.push_back(planning_graph(d).graph);
  std::mt19937 rng(20240601);
  for (int i = 0; i < 200; ++i) out.push_back(random_graph(rng, 1 + i % 12, 0.1 + 0.8 * (i % 9) / 8.0));
  return out;
}

/// Union of random complete multipartite graphs over a shared vertex pool,
/// stopping once at least `target` distinct edges exist.
MutexGraph planted_multicliques(std::mt19937& rng, std::size_t n, std::size_t target) {
  std::uniform_int_distribution<VertexId> vertex(0, static_cast<VertexId>(n - 1));
  std::uniform_int_distribution<int> parts(3, 8), size(4, 30);
  std::vector<Edge> edges;
  std::vector<std::uint64_t> keys;
  std::size_t distinct = 0;
  while (distinct < target) {
    std::set<VertexId> used;
    std::vector<std::vector<VertexId>> cls(static_cast<std::size_t>(parts(rng)));
    for (auto& c : cls)
      for (int s = size(rng); s > 0; --s) {
        const VertexId v = vertex(rng);
        if (used.insert(v).second) c.push_back(v);
      }
    for (std::size_t i = 0; i < cls.size(); ++i)
      for (std::size_t j = i + 1; j < cls.size(); ++j)
        for (VertexId x : cls[i])
          for (VertexId y : cls[j]) {
            edges.emplace_back(x, y);
            keys.push_back((std::uint64_t{std::min(x, y)} << 32) | std::max(x, y));
          }
    std::sort(keys.begin(), keys.end());
    keys.erase(std::unique(keys.begin(), keys.end()), keys.end());
    distinct = keys.size();
  }
  return build_graph(n, edges);
}

std::string find_solver() {
  if (const char* env = std::getenv("MCOVER_SOLVER")) return env;
  if (std::system("command -v clingo > /dev/null 2>&1") == 0) return "clingo";
  return "";
}

/// Parses "k: a b" plan lines back into action ids.
Plan parse_plan(const StripsProblem& p, const std::string& text) {
  Plan plan;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) {
    std::istringstream fields(line);
    std::string head, name;
    fields >> head;
    std::vector<ActionId> step;
    while (fields >> name) {
      const ActionId a = p.find_action(name);
      if (a == StripsProblem::npos) throw InputError("plan names unknown action " + name);
      step.push_back(a);
    }
    std::sort(step.begin(), step.end());
    plan.steps.push_back(step);
  }
  plan.makespan = static_cast<int>(plan.steps.size());
  return plan;
}

}  // namespace

int main() {
  criterion(1, "ferry worked example", [] {
    const auto start = std::chrono::steady_clock::now();
    const Pipeline pl = planning_graph("ferry");
    const MutexGraph& g = pl.graph;
    const AspProgram naive = emit_naive_program(g, g.labels());
    const AspProgram multi = emit_multiclique_program(find_cover(g), g.labels());
    const auto naive_models = models_of(naive, g);
    const auto multi_models = models_of(multi, g);
    const auto oracle = independent_sets(g);
    const double secs = seconds_since(start);
    std::ostringstream d;
    d << "edges=" << g.edge_count() << " (want 22); naive " << naive.stats.rules << "/"
      << naive.stats.literals << " (want 22/44); multiclique " << multi.stats.rules << " rules/"
      << multi.stats.literals << " literals (bound 12/30, target 10/25); models " << multi_models.size()
      << " of 2^" << g.vertex_count() << ", equal to naive and to independent sets: "
      << (multi_models == naive_models && naive_models == oracle ? "yes" : "no") << "; " << secs
      << " s (< 1 s)";
    const bool ok = g.edge_count() == 22 && naive.stats.rules == 22 && naive.stats.literals == 44 &&
                    multi.stats.rules <= 12 && multi.stats.literals <= 30 && multi_models == naive_models &&
                    naive_models == oracle && secs < 1.0;
    return Outcome{ok, d.str()};
  });

  criterion(2, "five-vertex multiclique", [] {
    const MutexGraph g = five_vertex();
    const std::vector<VertexId> all{a, b, c, d, e};
    const Multiclique mc = make_multiclique(g, all);
    const std::vector<Edge> covered = edges_covered_by(mc);
    EdgeSet missing = edge_set(g);
    for (const Edge& x : covered) missing.erase(key(x.u, x.v));
    const Covering full = find_cover(g);
    const bool parts_ok = mc.partitions == std::vector<Partition>{{a, b, d}, {c}, {e}};
    const bool ok = parts_ok && covered.size() == 7 && missing == EdgeSet{{a, b}} && full.covered.size() == 8;
    std::ostringstream out;
    out << "partitions {a,b,d},{c},{e}: " << (parts_ok ? "yes" : "no") << "; covers " << covered.size()
        << "/8 leaving " << (missing == EdgeSet{{a, b}} ? "(a,b)" : "other edges") << "; find_cover covers "
        << full.covered.size() << "/8";
    return Outcome{ok, out.str()};
  });

  criterion(3, "semantic equivalence on 200 random graphs", [] {
    const auto start = std::chrono::steady_clock::now();
    std::mt19937 rng(3);
    std::uniform_int_distribution<std::size_t> size(1, 12);
    std::uniform_real_distribution<double> density(0.1, 0.9);
    int mismatches = 0;
    std::size_t edges = 0;
    for (int i = 0; i < 200; ++i) {
      const MutexGraph g = random_graph(rng, size(rng), density(rng));
      edges += g.edge_count();
      if (models_of(emit_multiclique_program(find_cover(g), g.labels()), g) != independent_sets(g)) ++mismatches;
    }
    const double secs = seconds_since(start);
    return Outcome{mismatches == 0 && secs < 60,
                   std::to_string(mismatches) + " mismatches (0 allowed) over " + std::to_string(edges) +
                       " edges; " + std::to_string(secs) + " s (< 60 s)"};
  });

  criterion(4, "score oracle", [] {
    std::mt19937 rng(4);
    std::uniform_int_distribution<std::size_t> size(1, 8);
    std::uniform_real_distribution<double> density(0.1, 0.9);
    std::bernoulli_distribution keep(0.6);
    long long checks = 0, mismatches = 0;
    for (int i = 0; i < 100; ++i) {
      const std::size_t n = size(rng);
      const MutexGraph g = random_graph(rng, n, density(rng));
      std::vector<Edge> open;
      for (const Edge& x : g.edges())
        if (i % 4 == 0 || keep(rng)) open.push_back(x);
      const CoverState state(g, open);
      EdgeSet unc;
      for (const Edge& x : open) unc.insert(key(x.u, x.v));
      detail::ExtensionScorer scorer(state, g);
      for (std::uint32_t mask = 1; mask < (1U << n); ++mask) {
        std::vector<VertexId> vs;
        for (VertexId v = 0; v < n; ++v)
          if ((mask >> v) & 1U) vs.push_back(v);
        const long long expected = oracle_score(g, unc, vs);
        ++checks;
        if (score(state, g, vs) != expected) ++mismatches;
        // The incremental path prices vs as an extension of vs minus its last member.
        if (vs.size() > 1) {
          const std::vector<VertexId> base(vs.begin(), vs.end() - 1);
          scorer.reset(base);
          ++checks;
          if (scorer.score_with(vs.back()) != expected) ++mismatches;
        }
      }
    }
    return Outcome{mismatches == 0,
                   std::to_string(mismatches) + " mismatches (0 allowed) in " + std::to_string(checks) + " checks"};
  });

  criterion(5, "progress and termination", [] {
    std::size_t coverings = 0, standard_fallbacks = 0, not_decreasing = 0;
    for (const MutexGraph& g : standard_suite()) {
      const Covering c = find_cover(g);
      ++coverings;
      standard_fallbacks += c.fallbacks;
      std::size_t prev = g.edge_count();
      for (std::size_t u : c.uncovered_trace) {
        if (u >= prev) ++not_decreasing;
        prev = u;
      }
      if (prev != 0) ++not_decreasing;
    }
    std::mt19937 rng(5);
    std::uniform_int_distribution<std::size_t> size(2, 60);
    std::uniform_real_distribution<double> density(0.02, 0.98);
    std::size_t fuzz_fallbacks = 0, fuzz_incomplete = 0;
    for (int i = 0; i < 500; ++i) {
      const MutexGraph g = random_graph(rng, size(rng), density(rng));
      const Covering c = find_cover(g);
      fuzz_fallbacks += c.fallbacks;
      std::size_t prev = g.edge_count();
      for (std::size_t u : c.uncovered_trace) {
        if (u >= prev) ++not_decreasing;
        prev = u;
      }
      if (c.covered.size() != g.edge_count()) ++fuzz_incomplete;
    }
    std::ostringstream d;
    d << coverings << " standard coverings, " << not_decreasing << " non-decreasing steps (0 allowed), "
      << standard_fallbacks << " fallbacks (0 allowed); 500 fuzzed graphs: " << fuzz_fallbacks << " fallbacks, "
      << fuzz_incomplete << " incomplete (0 allowed)";
    return Outcome{not_decreasing == 0 && standard_fallbacks == 0 && fuzz_incomplete == 0, d.str()};
  });

  criterion(6, "compaction", [] {
    std::size_t over_naive = 0, graphs = 0;
    for (const MutexGraph& g : standard_suite()) {
      ++graphs;
      const auto stats = emit_multiclique_program(find_cover(g), g.labels()).stats;
      if (stats.literals > 2 * g.edge_count()) ++over_naive;
    }
    // Every complete multipartite graph with 2..5 parts of sizes 1..5.
    constexpr std::size_t kSlack = 2;
    std::size_t families = 0, over_bound = 0, single = 0;
    std::vector<std::size_t> sizes;
    std::function<void(std::size_t)> rec = [&](std::size_t min_size) {
      if (sizes.size() >= 2) {
        const MutexGraph g = complete_multipartite(sizes);
        const Covering c = find_cover(g);
        const auto stats = emit_multiclique_program(c, g.labels()).stats;
        std::size_t bound = kSlack;
        for (std::size_t s : sizes) bound += 2 * s + 1;
        ++families;
        if (stats.literals > bound || stats.literals > 2 * g.edge_count()) ++over_bound;
        if (c.multicliques.size() == 1) ++single;
      }
      if (sizes.size() == 5) return;
      for (std::size_t s = min_size; s <= 5; ++s) {
        sizes.push_back(s);
        rec(s);
        sizes.pop_back();
      }
    };
    rec(1);
    std::ostringstream d;
    d << over_naive << " of " << graphs << " test graphs exceed 2|E| (0 allowed); " << over_bound << " of "
      << families << " multipartite graphs exceed sum(2n_i+1)+" << kSlack << " (0 allowed); " << single
      << " covered by one multiclique";
    return Outcome{over_naive == 0 && over_bound == 0, d.str()};
  });

  criterion(7, "large-graph compaction (synthetic, AIRPORTS files unavailable)", [] {
    std::mt19937 rng(7);
    std::ostringstream d;
    bool ok = true;
    const std::vector<std::pair<std::size_t, std::size_t>> shapes{{4000, 100000}, {8000, 300000}, {16000, 1000000}};
    for (const auto& [n, target] : shapes) {
      const MutexGraph g = planted_multicliques(rng, n, target);
      const auto t0 = std::chrono::steady_clock::now();
      const Covering full = find_cover(g);
      const auto stats = emit_multiclique_program(full, cli::symbols_of(g)).stats;
      const Covering part = find_cover(g, CoverageFraction(9, 10));
      const auto pstats = emit_multiclique_program(part, cli::symbols_of(g)).stats;
      const double secs = seconds_since(t0);
      const std::size_t naive = 2 * g.edge_count();
      const bool this_ok = full.covered.size() == g.edge_count() && 10 * stats.literals <= naive &&
                           part.covered.size() >= CoverageFraction(9, 10).threshold(g.edge_count()) &&
                           pstats.literals <= stats.literals;
      ok = ok && this_ok;
      d << (d.tellp() > 0 ? "; " : "") << "|E|=" << g.edge_count() << " Lit=" << stats.literals << " ("
        << std::round(1000.0 * static_cast<double>(stats.literals) / static_cast<double>(naive)) / 10
        << "% of 2|E|, <= 10%) Edges*=" << part.covered.size() << " Lit*=" << pstats.literals << " " << secs
        << " s";
    }
    return Outcome{ok, d.str()};
  });

  criterion(8, "mutex soundness and graphplan agreement", [] {
    std::mt19937 rng(8);
    std::uniform_int_distribution<std::size_t> fl(2, 10), ac(1, 15);
    std::size_t unsound = 0, deviations = 0, unsound_deviations = 0, pairs = 0;
    for (int i = 0; i < 50; ++i) {
      // Alternate free-form effects with mutex-rich state-variable problems.
      const StripsProblem p = i % 2 ? random_variable_problem(rng, fl(rng), ac(rng))
                                    : random_problem(rng, fl(rng), ac(rng));
      const auto ours = as_set(eventual_fluent_mutexes(p).pairs);
      const auto truth = true_mutexes(p);
      const auto graphplan = graphplan_mutexes(p, false);
      pairs += ours.size();
      for (const auto& m : ours)
        if (!truth.count(m)) ++unsound;
      if (ours != graphplan) {
        ++deviations;
        for (const auto& m : graphplan)
          if (!truth.count(m)) ++unsound_deviations;
      }
    }
    std::ostringstream d;
    d << pairs << " pairs over 50 problems; " << unsound << " unsound (0 allowed); " << deviations
      << " problems differ from parallel graphplan";
    if (deviations) d << ", " << unsound_deviations << " of those differences unsound (0 allowed)";
    return Outcome{unsound == 0 && unsound_deviations == 0, d.str()};
  });

  criterion(9, "end-to-end planning", [] {
    const std::string solver = find_solver();
    if (solver.empty())
      return Outcome{false, "no ASP solver available (set MCOVER_SOLVER or put clingo on PATH)"};
    std::vector<std::string> names{"ferry"};
    names.insert(names.end(), micro_domains().begin(), micro_domains().end());
    std::ostringstream d;
    bool ok = true;
    for (const std::string& name : names) {
      cli::RunConfig cfg;
      cfg.solver_cmd = solver;
      cfg.max_makespan = 16;
      std::ostringstream out, log;
      const int code = cli::cmd_plan(data_path(name + "/domain.pddl"), data_path(name + "/problem.pddl"), cfg,
                                     out, log);
      const StripsProblem p = add_preserving_actions(load_problem(name));
      const int optimal = minimal_parallel_makespan(p, 16);
      bool this_ok = code == cli::exit_code::ok;
      int got = -1;
      if (this_ok) {
        const Plan plan = parse_plan(p, out.str());
        got = plan.makespan;
        this_ok = !validate_plan(p, plan) && got == optimal;
      }
      ok = ok && this_ok;
      d << (d.tellp() > 0 ? ", " : "") << name << " " << got << "/" << optimal << (this_ok ? "" : " (bad)");
    }
    return Outcome{ok, "makespan found/optimal: " + d.str()};
  });

  std::printf("%d criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
