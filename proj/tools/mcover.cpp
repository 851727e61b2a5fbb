#include <iostream>
#include <map>
#include <string>

#include "CLI11.hpp"
#include "mcover/cli.hpp"

using namespace mcover;
using namespace mcover::cli;

int main(int argc, char** argv) {
  CLI::App app{"Multiclique compression of mutex constraints for ASP planning"};
  app.require_subcommand(1);
  RunConfig cfg;
  std::string fraction = "1";

  const std::map<std::string, Baseline> baselines{
      {"multiclique", Baseline::multiclique}, {"biclique", Baseline::biclique}, {"naive", Baseline::naive}};
  const std::map<std::string, ActionMutexMode> action_modes{{"smart", ActionMutexMode::smart},
                                                            {"pairwise", ActionMutexMode::pairwise}};
  const std::map<std::string, FluentMutexMode> fluent_modes{{"encoded", FluentMutexMode::encoded},
                                                            {"pairwise", FluentMutexMode::pairwise}};

  auto add_cover_flags = [&](CLI::App* sub) {
    sub->add_option("--coverage-fraction", fraction, "Stop covering at this fraction of the edges, in (0,1]");
    sub->add_option("--baseline", cfg.baseline, "Covering strategy")
        ->transform(CLI::CheckedTransformer(baselines, CLI::ignore_case));
  };
  auto add_stats_flags = [&](CLI::App* sub) {
    sub->add_option("--stats-json", cfg.stats_json, "Write encoding stats as JSON");
    sub->add_option("--stats-csv", cfg.stats_csv, "Write encoding stats as CSV");
  };
  auto add_output = [&](CLI::App* sub) { sub->add_option("-o,--output", cfg.output, "Output file"); };

  std::string graph, domain, problem, list;

  CLI::App* cover = app.add_subcommand("cover", "Cover a mutex graph with multicliques");
  cover->add_option("graph", graph, "Graph file")->required();
  add_cover_flags(cover);
  add_stats_flags(cover);
  add_output(cover);

  CLI::App* encode = app.add_subcommand("encode", "Emit the ASP constraints for a mutex graph");
  encode->add_option("graph", graph, "Graph file")->required();
  encode->add_option("--covering", cfg.covering, "Encode this covering instead of computing one");
  add_cover_flags(encode);
  add_stats_flags(encode);
  add_output(encode);

  CLI::App* mutexgraph = app.add_subcommand("mutexgraph", "Eventual fluent mutex graph of a PDDL problem");
  mutexgraph->add_option("domain", domain, "PDDL domain")->required();
  mutexgraph->add_option("problem", problem, "PDDL problem")->required();
  mutexgraph->add_flag("--neededness", cfg.neededness, "Drop fluents and actions unreachable from init");
  mutexgraph->add_option("--pairs-json", cfg.pairs_json, "Also write the mutex pairs as JSON");
  add_output(mutexgraph);

  CLI::App* plan = app.add_subcommand("plan", "Find a minimal-makespan plan with an ASP solver");
  plan->add_option("domain", domain, "PDDL domain")->required();
  plan->add_option("problem", problem, "PDDL problem")->required();
  plan->add_flag("--neededness", cfg.neededness, "Drop fluents and actions unreachable from init");
  plan->add_option("--solver", cfg.solver_cmd, "Solver command (default: $MCOVER_SOLVER or clingo)");
  plan->add_option("--max-makespan", cfg.max_makespan, "Largest makespan tried")->check(CLI::NonNegativeNumber);
  plan->add_option("--action-mutex", cfg.plan_encoding.actions, "Action mutex rules")
      ->transform(CLI::CheckedTransformer(action_modes, CLI::ignore_case));
  plan->add_option("--fluent-mutex", cfg.plan_encoding.fluents, "Fluent mutex rules")
      ->transform(CLI::CheckedTransformer(fluent_modes, CLI::ignore_case));
  plan->add_flag("--keep-programs", cfg.keep_programs, "Keep the generated .lp files");
  add_cover_flags(plan);
  add_stats_flags(plan);
  add_output(plan);

  CLI::App* bench = app.add_subcommand("bench", "Encoding size table over a list of instances");
  bench->add_option("instances", list, "Instance list file, one instance per line ('-' for stdin)")->required();
  bench->add_option("-j,--jobs", cfg.jobs, "Worker threads");
  bench->add_flag("--neededness", cfg.neededness, "Drop fluents and actions unreachable from init");
  add_cover_flags(bench);
  add_output(bench);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? exit_code::ok : exit_code::usage;
  }

  try {
    cfg.coverage_fraction = CoverageFraction::parse(fraction);
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_code::usage;
  }

  try {
    if (*cover) return cmd_cover(graph, cfg, std::cout);
    if (*encode) return cmd_encode(graph, cfg, std::cout);
    if (*mutexgraph) return cmd_mutexgraph(domain, problem, cfg, std::cout);
    if (*plan) return cmd_plan(domain, problem, cfg, std::cout, std::cerr);
    return cmd_bench(list, cfg, std::cout);
  } catch (...) {
    return exit_status_of(std::current_exception(), std::cerr);
  }
}
