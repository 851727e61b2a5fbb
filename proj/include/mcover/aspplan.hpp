#pragma once
// ASPPlan: program emission, external solver driver, plan extraction and
// validation.

#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <array>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "mcover/encode.hpp"
#include "mcover/error.hpp"
#include "mcover/planning.hpp"
#include "mcover/strips.hpp"

namespace mcover {

enum class ActionMutexMode {
  smart,  // used_preserved / deleted_unused cardinality rules
  pairwise,  // mutexAct facts for directly interfering action pairs
};

enum class FluentMutexMode {
  encoded,  // constraint rules supplied by the caller (multiclique encoding)
  pairwise,  // one mutex/2 fact per pair
};

struct PlanEncoding {
  ActionMutexMode actions = ActionMutexMode::smart;
  FluentMutexMode fluents = FluentMutexMode::encoded;

  static PlanEncoding naive() { return {ActionMutexMode::pairwise, FluentMutexMode::pairwise}; }
};

struct PlanProgram {
  std::string facts;
  std::string rules;
  std::string mutex_rules;
  int makespan = 0;

  std::string text() const { return facts + rules + mutex_rules + "#show happens/2.\n"; }
};

inline constexpr std::string_view kGoalRule = "holds(F,K) :- goal(F); finalStep(K).\n";
inline constexpr std::string_view kSupportRule =
    "happens(A,K-1) : add(A,F),validAct(A,K-1) :- holds(F,K); K > 0.\n";
inline constexpr std::string_view kPreconditionRule =
    "holds(F,K) :- pre(A,F); happens(A,K); validFluent(F,K).\n";
inline constexpr std::string_view kActionMutexRule = ":- mutexAct(A,B); happens(A,K); happens(B,K).\n";
inline constexpr std::string_view kFluentMutexRule = ":- mutex(F,G); holds(F,K); holds(G,K).\n";
inline constexpr std::string_view kSmartActionMutex =
    "used_preserved(F,K) :- happens(A,K); pre(A,F); not del(A,F).\n"
    "deleted_unused(F,K) :- happens(A,K); del(A,F); not pre(A,F).\n"
    ":- {used_preserved(F,K); deleted_unused(F,K);\n"
    "    happens(A,K) : pre(A,F), del(A,F)} > 1; valid_at(F,K).\n"
    "deleted(F,K) :- happens(A,K); del(A,F).\n"
    ":- holds(F,K); deleted(F,K-1).\n";

namespace detail {

inline bool shares(const std::vector<FluentId>& x, const std::vector<FluentId>& y) {
  auto i = x.begin();
  auto j = y.begin();
  while (i != x.end() && j != y.end()) {
    if (*i == *j) return true;
    *i < *j ? ++i : ++j;
  }
  return false;
}

/// Direct conflict: one action deletes a precondition or add-effect of the other.
inline bool interferes(const Action& a, const Action& b) {
  return shares(a.del, b.pre) || shares(a.del, b.add) || shares(b.del, a.pre) ||
         shares(b.del, a.add);
}

}  // namespace detail

/// Problem facts for makespan `n`: actions with pre/add/del, goals, the
/// validAct/validFluent windows from the relaxed first layers, step/1 and
/// finalStep/1.
inline std::string plan_facts(const StripsProblem& p, const FirstLayers& layers, int n) {
  std::ostringstream out;
  for (FluentId f = 0; f < p.fluent_count(); ++f) out << "fluent(" << p.fluent_name(f) << ").\n";
  for (ActionId a = 0; a < p.action_count(); ++a) {
    const Action& act = p.action(a);
    out << "action(" << act.name << ").\n";
    for (FluentId f : act.pre) out << "pre(" << act.name << "," << p.fluent_name(f) << ").\n";
    for (FluentId f : act.add) out << "add(" << act.name << "," << p.fluent_name(f) << ").\n";
    for (FluentId f : act.del) out << "del(" << act.name << "," << p.fluent_name(f) << ").\n";
  }
  for (FluentId g : p.goal()) out << "goal(" << p.fluent_name(g) << ").\n";
  for (ActionId a = 0; a < p.action_count(); ++a)
    for (int k = static_cast<int>(layers.action[a]); layers.action[a] != kUnreachable && k < n; ++k)
      out << "validAct(" << p.action(a).name << "," << k << ").\n";
  for (FluentId f = 0; f < p.fluent_count(); ++f)
    for (int k = static_cast<int>(layers.fluent[f]); layers.fluent[f] != kUnreachable && k <= n; ++k)
      out << "validFluent(" << p.fluent_name(f) << "," << k << ").\n";
  out << "valid_at(F,K) :- validFluent(F,K).\n";
  out << "step(0.." << n << ").\n";
  out << "finalStep(" << n << ").\n";
  return out.str();
}

/// Complete program for one makespan. `p` must contain preserving actions.
/// `fluent_mutexes` is used in encoded mode, `mutex_pairs` in pairwise mode.
inline PlanProgram emit_plan_program(const StripsProblem& p, const FirstLayers& layers,
                                     const AspProgram& fluent_mutexes,
                                     const std::vector<MutexPair>& mutex_pairs, int makespan,
                                     PlanEncoding enc = {}) {
  const Layer goal_layer = layers.goal_layer(p);
  if (goal_layer == kUnreachable) throw UnsolvableError("a goal fluent is unreachable");
  if (makespan < static_cast<int>(goal_layer))
    throw ContractViolation("makespan " + std::to_string(makespan) +
                            " is below the first goal layer " + std::to_string(goal_layer));
  PlanProgram prog;
  prog.makespan = makespan;
  prog.facts = plan_facts(p, layers, makespan);
  prog.rules = std::string(kGoalRule) + std::string(kSupportRule) + std::string(kPreconditionRule);
  if (enc.actions == ActionMutexMode::smart) {
    prog.rules += kSmartActionMutex;
  } else {
    std::ostringstream facts;
    for (ActionId a = 0; a < p.action_count(); ++a)
      for (ActionId b = a + 1; b < p.action_count(); ++b)
        if (detail::interferes(p.action(a), p.action(b)))
          facts << "mutexAct(" << p.action(a).name << "," << p.action(b).name << ").\n";
    prog.facts += facts.str();
    prog.rules += kActionMutexRule;
  }
  if (enc.fluents == FluentMutexMode::encoded) {
    prog.mutex_rules = fluent_mutexes.text();
  } else {
    std::ostringstream facts;
    for (const MutexPair& m : mutex_pairs)
      facts << "mutex(" << p.fluent_name(m.f) << "," << p.fluent_name(m.g) << ").\n";
    prog.facts += facts.str();
    prog.rules += kFluentMutexRule;
  }
  return prog;
}

// ---------------------------------------------------------------------------
// Solver subprocess.

struct SolverConfig {
  std::string command = "clingo";
  std::vector<int> ok_exit_codes{0, 10, 20, 30};
  std::filesystem::path work_dir = std::filesystem::temp_directory_path();
};

struct SolverOutcome {
  bool satisfiable = false;
  std::vector<std::string> atoms;                 // first model
  std::vector<std::vector<std::string>> models;  // every model printed
  int exit_code = 0;
  std::string output;
};

namespace detail {

inline std::string shell_quote(const std::string& s) {
  std::string out = "'";
  for (char c : s) {
    if (c == '\'') out += "'\\''";
    else out += c;
  }
  return out + "'";
}

/// Splits a model line into atoms at top-level whitespace.
inline std::vector<std::string> split_atoms(std::string_view line) {
  std::vector<std::string> out;
  std::string cur;
  int depth = 0;
  for (char c : line) {
    if (c == '(') ++depth;
    if (c == ')') --depth;
    if (depth == 0 && (c == ' ' || c == '\t' || c == '\r')) {
      if (!cur.empty()) out.push_back(std::move(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (!cur.empty()) out.push_back(std::move(cur));
  return out;
}

}  // namespace detail

/// Reads solver stdout: each "Answer:" line is followed by one model line,
/// and a SATISFIABLE/UNSATISFIABLE line gives the verdict.
inline SolverOutcome parse_solver_output(const std::string& text, int exit_code) {
  SolverOutcome out;
  out.exit_code = exit_code;
  out.output = text;
  std::istringstream in(text);
  std::string line;
  bool want_model = false, verdict = false;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (want_model) {
      out.models.push_back(detail::split_atoms(line));
      want_model = false;
    } else if (line.rfind("Answer:", 0) == 0) {
      want_model = true;
    } else if (line == "UNSATISFIABLE") {
      out.satisfiable = false;
      verdict = true;
    } else if (line == "SATISFIABLE" || line == "OPTIMUM FOUND") {
      out.satisfiable = true;
      verdict = true;
    }
  }
  if (!verdict) throw SolverError("solver printed neither SATISFIABLE nor UNSATISFIABLE");
  if (out.satisfiable && out.models.empty())
    throw SolverError("solver reported SATISFIABLE without a model");
  if (!out.models.empty()) out.atoms = out.models.front();
  return out;
}

/// Runs `<command> <file>` and parses its output.
inline SolverOutcome run_solver(const SolverConfig& cfg, const std::filesystem::path& program) {
  const std::string cmd = cfg.command + " " + detail::shell_quote(program.string()) + " 2>&1";
  FILE* pipe = ::popen(cmd.c_str(), "r");
  if (!pipe) throw SolverError("cannot start solver: " + cfg.command);
  std::string text;
  std::array<char, 4096> buf{};
  std::size_t got;
  while ((got = std::fread(buf.data(), 1, buf.size(), pipe)) > 0) text.append(buf.data(), got);
  const int status = ::pclose(pipe);
  if (status == -1) throw SolverError("lost track of solver process: " + cfg.command);
  if (!WIFEXITED(status)) throw SolverError("solver terminated abnormally: " + cfg.command);
  const int code = WEXITSTATUS(status);
  if (code == 127) throw SolverError("solver command not found: " + cfg.command);
  if (std::find(cfg.ok_exit_codes.begin(), cfg.ok_exit_codes.end(), code) == cfg.ok_exit_codes.end())
    throw SolverError("solver exited with status " + std::to_string(code) + ": " +
                      text.substr(0, 400));
  return parse_solver_output(text, code);
}

// ---------------------------------------------------------------------------
// Plans.

struct Plan {
  int makespan = 0;
  std::vector<std::vector<ActionId>> steps;  // regular actions per layer, sorted
};

/// Regular actions named by happens(A,K) atoms; preserving actions dropped.
inline Plan extract_plan(const StripsProblem& p, const std::vector<std::string>& atoms, int makespan) {
  Plan plan;
  plan.makespan = makespan;
  plan.steps.resize(static_cast<std::size_t>(makespan));
  for (const std::string& atom : atoms) {
    if (atom.rfind("happens(", 0) != 0 || atom.back() != ')') continue;
    const std::string inner = atom.substr(8, atom.size() - 9);
    const auto comma = inner.rfind(',');
    if (comma == std::string::npos) throw SolverError("malformed atom " + atom);
    const std::string name = inner.substr(0, comma);
    int k = -1;
    try {
      k = std::stoi(inner.substr(comma + 1));
    } catch (const std::exception&) {
      throw SolverError("malformed layer in " + atom);
    }
    const ActionId a = p.find_action(name);
    if (a == StripsProblem::npos) throw SolverError("model names unknown action " + name);
    if (k < 0 || k >= makespan) throw SolverError("model places " + name + " at layer " + std::to_string(k));
    if (!p.action(a).is_preserving) plan.steps[static_cast<std::size_t>(k)].push_back(a);
  }
  for (auto& s : plan.steps) std::sort(s.begin(), s.end());
  return plan;
}

struct PlanViolation {
  char condition = 'a';  // 'a' precondition, 'b' cardinality, 'c' frame, 'd' goal
  int layer = 0;
  std::string fluent;
  std::vector<std::string> actions;
  std::string message;
};

/// Replays `plan` layer by layer. At layer k with state S:
/// (a) every action's preconditions are in S;
/// (b) per fluent F, at most one of: some action (preserve(F) included when
///     F persists) uses F without deleting it; some action deletes F without
///     using it; each action that uses and deletes F;
/// (c) the next state is (S ∪ adds) \ dels;
/// (d) goals hold in the final state.
inline std::optional<PlanViolation> validate_plan(const StripsProblem& p, const Plan& plan) {
  std::vector<bool> state(p.fluent_count(), false);
  for (FluentId f : p.init()) state[f] = true;
  if (plan.steps.size() != static_cast<std::size_t>(plan.makespan))
    return PlanViolation{'c', 0, "", {}, "plan has " + std::to_string(plan.steps.size()) +
                                            " layers for makespan " + std::to_string(plan.makespan)};
  for (int k = 0; k < plan.makespan; ++k) {
    const auto& step = plan.steps[static_cast<std::size_t>(k)];
    for (ActionId a : step) {
      const Action& act = p.action(a);
      if (act.is_preserving)
        return PlanViolation{'a', k, "", {act.name}, "preserving actions are implicit"};
      for (FluentId f : act.pre)
        if (!state[f])
          return PlanViolation{'a', k, p.fluent_name(f), {act.name},
                               "precondition " + p.fluent_name(f) + " of " + act.name +
                                   " does not hold at layer " + std::to_string(k)};
    }
    std::vector<bool> deleted(p.fluent_count(), false), added(p.fluent_count(), false);
    for (ActionId a : step) {
      for (FluentId f : p.action(a).del) deleted[f] = true;
      for (FluentId f : p.action(a).add) added[f] = true;
    }
    for (FluentId f = 0; f < p.fluent_count(); ++f) {
      std::vector<std::string> users, deleters, both;
      for (ActionId a : step) {
        const Action& act = p.action(a);
        const bool uses = contains(act.pre, f), dels = contains(act.del, f);
        if (uses && dels) both.push_back(act.name);
        else if (uses) users.push_back(act.name);
        else if (dels) deleters.push_back(act.name);
      }
      // A fluent that persists is carried by its preserving action, a user.
      if (state[f] && !deleted[f]) users.push_back(preserve_name(p.fluent_name(f)));
      const std::size_t groups = (users.empty() ? 0 : 1) + (deleters.empty() ? 0 : 1) + both.size();
      if (groups > 1) {
        std::vector<std::string> involved = users;
        involved.insert(involved.end(), deleters.begin(), deleters.end());
        involved.insert(involved.end(), both.begin(), both.end());
        return PlanViolation{'b', k, p.fluent_name(f), involved,
                             "conflicting uses and deletions of " + p.fluent_name(f) +
                                 " at layer " + std::to_string(k)};
      }
    }
    for (FluentId f = 0; f < p.fluent_count(); ++f) state[f] = (state[f] || added[f]) && !deleted[f];
  }
  for (FluentId g : p.goal())
    if (!state[g])
      return PlanViolation{'d', plan.makespan, p.fluent_name(g), {},
                           "goal " + p.fluent_name(g) + " does not hold at layer " +
                               std::to_string(plan.makespan)};
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Makespan loop.

struct SolveOptions {
  SolverConfig solver;
  int max_makespan = 64;
  PlanEncoding encoding;
  bool keep_programs = false;
};

struct SolveAttempt {
  int makespan = 0;
  bool satisfiable = false;
  double seconds = 0;
};

struct SolveResult {
  std::optional<Plan> plan;  // empty when no plan within the cap
  std::vector<SolveAttempt> attempts;
};

/// Solves at the first makespan where every goal may hold, then at each
/// larger makespan until the solver finds a model or `max_makespan` is
/// passed. `p` must contain preserving actions. Returned plans have passed
/// validate_plan.
inline SolveResult solve_loop(const StripsProblem& p, const AspProgram& fluent_mutexes,
                              const std::vector<MutexPair>& mutex_pairs, const SolveOptions& opts) {
  const FirstLayers layers = first_appearance_layers(p);
  const Layer first = layers.goal_layer(p);
  if (first == kUnreachable) throw UnsolvableError("a goal fluent is unreachable");
  SolveResult result;
  if (std::all_of(p.goal().begin(), p.goal().end(), [&](FluentId g) { return contains(p.init(), g); })) {
    result.plan = Plan{0, {}};
    return result;
  }
  std::filesystem::create_directories(opts.solver.work_dir);
  for (int k = static_cast<int>(first); k <= opts.max_makespan; ++k) {
    const PlanProgram prog = emit_plan_program(p, layers, fluent_mutexes, mutex_pairs, k, opts.encoding);
    const auto file = opts.solver.work_dir /
                      ("mcover_plan_" + std::to_string(::getpid()) + "_" + std::to_string(k) + ".lp");
    {
      std::ofstream out(file);
      out << prog.text();
      if (!out) throw SolverError("cannot write " + file.string());
    }
    const auto start = std::chrono::steady_clock::now();
    SolverOutcome outcome;
    try {
      outcome = run_solver(opts.solver, file);
    } catch (...) {
      if (!opts.keep_programs) std::filesystem::remove(file);
      throw;
    }
    if (!opts.keep_programs) std::filesystem::remove(file);
    result.attempts.push_back(
        {k, outcome.satisfiable,
         std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count()});
    if (!outcome.satisfiable) continue;
    Plan plan = extract_plan(p, outcome.atoms, k);
    if (auto v = validate_plan(p, plan))
      throw ContractViolation("solver plan failed validation (" + std::string(1, v->condition) +
                              "): " + v->message);
    result.plan = std::move(plan);
    return result;
  }
  return result;
}

/// One line per layer: `k: a1 a2 ...`.
inline std::string plan_text(const StripsProblem& p, const Plan& plan) {
  std::string out;
  for (int k = 0; k < plan.makespan; ++k) {
    out += std::to_string(k) + ":";
    for (ActionId a : plan.steps[static_cast<std::size_t>(k)]) out += " " + p.action(a).name;
    out += '\n';
  }
  return out;
}

}  // namespace mcover
