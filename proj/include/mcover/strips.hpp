#pragma once

#include <algorithm>
#include <cstdint>
#include <limits>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "mcover/error.hpp"

namespace mcover {

using FluentId = std::uint32_t;
using ActionId = std::uint32_t;

/// Ground STRIPS action. pre/add/del are sorted and duplicate-free.
struct Action {
  std::string name;
  std::vector<FluentId> pre;
  std::vector<FluentId> add;
  std::vector<FluentId> del;
  bool is_preserving = false;
};

/// Ground STRIPS problem. Fluent names are ground terms such as
/// `car_at(island_a)`; action names are ground terms such as
/// `move(ferry,island_a,island_b)`.
class StripsProblem {
 public:
  const std::vector<std::string>& fluents() const { return fluents_; }
  const std::vector<Action>& actions() const { return actions_; }
  const std::vector<FluentId>& init() const { return init_; }
  const std::vector<FluentId>& goal() const { return goal_; }
  std::size_t fluent_count() const { return fluents_.size(); }
  std::size_t action_count() const { return actions_.size(); }
  const std::string& fluent_name(FluentId f) const { return fluents_.at(f); }
  const Action& action(ActionId a) const { return actions_.at(a); }

  static constexpr FluentId npos = std::numeric_limits<FluentId>::max();

  FluentId find_fluent(std::string_view name) const {
    auto it = fluent_index_.find(std::string(name));
    return it == fluent_index_.end() ? npos : it->second;
  }

  ActionId find_action(std::string_view name) const {
    auto it = action_index_.find(std::string(name));
    return it == action_index_.end() ? npos : it->second;
  }

  /// Returns the id of `name`, adding it if new.
  FluentId intern_fluent(std::string_view name) {
    auto [it, inserted] =
        fluent_index_.emplace(std::string(name), static_cast<FluentId>(fluents_.size()));
    if (inserted) fluents_.emplace_back(name);
    return it->second;
  }

  ActionId add_action(Action a) {
    normalize(a.pre);
    normalize(a.add);
    normalize(a.del);
    for (const auto* set : {&a.pre, &a.add, &a.del})
      for (FluentId f : *set)
        if (f >= fluents_.size())
          throw ContractViolation("action " + a.name + " refers to unknown fluent id " +
                                  std::to_string(f));
    if (a.is_preserving && (a.pre.size() != 1 || a.add != a.pre || !a.del.empty()))
      throw ContractViolation("preserving action " + a.name + " must have pre = add = {F}");
    auto [it, inserted] =
        action_index_.emplace(a.name, static_cast<ActionId>(actions_.size()));
    if (!inserted) throw InputError("duplicate action " + a.name);
    actions_.push_back(std::move(a));
    return it->second;
  }

  void set_init(std::vector<FluentId> init) { init_ = checked(std::move(init), "init"); }
  void set_goal(std::vector<FluentId> goal) { goal_ = checked(std::move(goal), "goal"); }

  std::size_t regular_action_count() const {
    return static_cast<std::size_t>(std::count_if(
        actions_.begin(), actions_.end(), [](const Action& a) { return !a.is_preserving; }));
  }

 private:
  static void normalize(std::vector<FluentId>& v) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
  }

  std::vector<FluentId> checked(std::vector<FluentId> v, const char* what) const {
    normalize(v);
    if (!v.empty() && v.back() >= fluents_.size())
      throw ContractViolation(std::string(what) + " refers to unknown fluent id " +
                              std::to_string(v.back()));
    return v;
  }

  std::vector<std::string> fluents_;
  std::unordered_map<std::string, FluentId> fluent_index_;
  std::vector<Action> actions_;
  std::unordered_map<std::string, ActionId> action_index_;
  std::vector<FluentId> init_;
  std::vector<FluentId> goal_;
};

inline std::string preserve_name(std::string_view fluent) {
  return "preserve(" + std::string(fluent) + ")";
}

/// Appends preserve(F) with pre = add = {F} for every fluent lacking one.
inline StripsProblem add_preserving_actions(StripsProblem p) {
  std::vector<bool> has(p.fluent_count(), false);
  for (const Action& a : p.actions())
    if (a.is_preserving) has[a.pre.front()] = true;
  for (FluentId f = 0; f < p.fluent_count(); ++f)
    if (!has[f]) p.add_action({preserve_name(p.fluent_name(f)), {f}, {f}, {}, true});
  return p;
}

inline bool contains(const std::vector<FluentId>& sorted, FluentId f) {
  return std::binary_search(sorted.begin(), sorted.end(), f);
}

/// Copy of `p` keeping only the given fluents and the kept actions whose
/// pre and add lie entirely inside them. Goals outside the kept set are an
/// error; init is filtered.
inline StripsProblem restrict_problem(const StripsProblem& p, const std::vector<bool>& keep_fluent,
                                      const std::vector<bool>& keep_action) {
  StripsProblem out;
  std::vector<FluentId> remap(p.fluent_count(), StripsProblem::npos);
  for (FluentId f = 0; f < p.fluent_count(); ++f)
    if (keep_fluent[f]) remap[f] = out.intern_fluent(p.fluent_name(f));
  auto map_set = [&](const std::vector<FluentId>& in, std::vector<FluentId>& to) {
    for (FluentId f : in) {
      if (remap[f] == StripsProblem::npos) return false;
      to.push_back(remap[f]);
    }
    return true;
  };
  for (ActionId a = 0; a < p.action_count(); ++a) {
    if (!keep_action[a]) continue;
    const Action& src = p.action(a);
    Action dst{src.name, {}, {}, {}, src.is_preserving};
    if (!map_set(src.pre, dst.pre) || !map_set(src.add, dst.add)) continue;
    // Deletes of dropped fluents have no observable effect.
    for (FluentId f : src.del)
      if (remap[f] != StripsProblem::npos) dst.del.push_back(remap[f]);
    out.add_action(std::move(dst));
  }
  std::vector<FluentId> init;
  for (FluentId f : p.init())
    if (remap[f] != StripsProblem::npos) init.push_back(remap[f]);
  out.set_init(std::move(init));
  std::vector<FluentId> goal;
  for (FluentId f : p.goal()) {
    if (remap[f] == StripsProblem::npos)
      throw UnsolvableError("goal " + p.fluent_name(f) + " is unreachable");
    goal.push_back(remap[f]);
  }
  out.set_goal(std::move(goal));
  return out;
}

}  // namespace mcover
