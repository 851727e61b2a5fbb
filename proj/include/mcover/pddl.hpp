#pragma once
// STRIPS-subset PDDL reader and typed grounder.
//
// Accepted requirements are :strips and :typing. Types may use `either` and
// single-inheritance hierarchies. Names are case-folded and '-' inside names
// becomes '_', so `island-a` and `ISLAND_A` denote the same object.

#include <algorithm>
#include <cctype>
#include <functional>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "mcover/error.hpp"
#include "mcover/strips.hpp"

namespace mcover {
namespace pddl {

struct SExpr {
  bool is_list = false;
  std::string atom;
  std::vector<SExpr> items;
  std::size_t line = 0;
  std::size_t column = 0;

  bool is(std::string_view a) const { return !is_list && atom == a; }
};

/// Reads exactly one top-level form. Comments run from ';' to end of line.
inline SExpr read_sexpr(std::string_view text, const std::string& source) {
  std::size_t pos = 0, line = 1, col = 1;
  auto advance = [&] {
    if (text[pos] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
    ++pos;
  };
  auto skip = [&] {
    while (pos < text.size()) {
      if (text[pos] == ';') {
        while (pos < text.size() && text[pos] != '\n') advance();
      } else if (std::isspace(static_cast<unsigned char>(text[pos]))) {
        advance();
      } else {
        break;
      }
    }
  };

  std::vector<SExpr> stack;
  SExpr result;
  bool done = false;
  for (skip(); pos < text.size(); skip()) {
    const char ch = text[pos];
    if (ch == ')' && stack.empty()) throw InputError(source, line, col, "unbalanced ')'");
    if (done) throw InputError(source, line, col, "unexpected text after the top-level form");
    if (ch == '(') {
      SExpr list;
      list.is_list = true;
      list.line = line;
      list.column = col;
      stack.push_back(std::move(list));
      advance();
    } else if (ch == ')') {
      advance();
      SExpr top = std::move(stack.back());
      stack.pop_back();
      if (stack.empty()) {
        result = std::move(top);
        done = true;
      } else {
        stack.back().items.push_back(std::move(top));
      }
    } else {
      SExpr a;
      a.line = line;
      a.column = col;
      while (pos < text.size() && text[pos] != '(' && text[pos] != ')' && text[pos] != ';' &&
             !std::isspace(static_cast<unsigned char>(text[pos]))) {
        a.atom += static_cast<char>(std::tolower(static_cast<unsigned char>(text[pos])));
        advance();
      }
      if (stack.empty()) throw InputError(source, a.line, a.column, "expected '(' before '" + a.atom + "'");
      stack.back().items.push_back(std::move(a));
    }
  }
  if (!stack.empty())
    throw InputError(source, stack.back().line, stack.back().column, "unclosed '('");
  if (!done) throw InputError(source, line, col, "empty input");
  return result;
}

inline std::string symbol(std::string_view name) {
  std::string out(name);
  std::replace(out.begin(), out.end(), '-', '_');
  return out;
}

struct TypedName {
  std::string name;
  std::vector<std::string> types;  // more than one for `either`
  std::size_t line = 0;
  std::size_t column = 0;
};

struct AtomSchema {
  std::string predicate;
  std::vector<std::string> args;  // "?x" variables or constants
  std::size_t line = 0;
  std::size_t column = 0;
};

struct ActionSchema {
  std::string name;
  std::vector<TypedName> parameters;
  std::vector<AtomSchema> pre;
  std::vector<AtomSchema> add;
  std::vector<AtomSchema> del;
  std::size_t line = 0;
};

struct Domain {
  std::string name;
  std::string source;
  std::map<std::string, std::string> parent;  // type -> supertype
  std::vector<TypedName> constants;
  std::map<std::string, std::vector<TypedName>> predicates;
  std::vector<ActionSchema> actions;
};

struct Problem {
  std::string name;
  std::string domain;
  std::string source;
  std::vector<TypedName> objects;
  std::vector<AtomSchema> init;
  std::vector<AtomSchema> goal;
};

namespace detail {

[[noreturn]] inline void fail(const std::string& source, const SExpr& at, const std::string& what) {
  throw InputError(source, at.line, at.column, what);
}

inline const std::string& atom_of(const std::string& source, const SExpr& e, const char* what) {
  if (e.is_list) fail(source, e, std::string("expected ") + what + ", found a list");
  return e.atom;
}

/// `a b - t c - (either u v) d` ; untyped names get type "object".
inline std::vector<TypedName> typed_list(const std::string& source, const SExpr& list,
                                         std::size_t from) {
  std::vector<TypedName> out;
  std::size_t pending = 0;
  for (std::size_t i = from; i < list.items.size(); ++i) {
    const SExpr& e = list.items[i];
    if (e.is("-")) {
      if (i + 1 >= list.items.size()) fail(source, e, "missing type after '-'");
      const SExpr& t = list.items[++i];
      std::vector<std::string> types;
      if (t.is_list) {
        if (t.items.empty() || !t.items[0].is("either"))
          fail(source, t, "expected a type name or (either ...)");
        for (std::size_t k = 1; k < t.items.size(); ++k)
          types.push_back(symbol(atom_of(source, t.items[k], "type name")));
        if (types.empty()) fail(source, t, "empty (either)");
      } else {
        types.push_back(symbol(t.atom));
      }
      if (pending == 0) fail(source, e, "'-' with no names before it");
      for (std::size_t k = out.size() - pending; k < out.size(); ++k) out[k].types = types;
      pending = 0;
      continue;
    }
    TypedName n{symbol(atom_of(source, e, "name")), {"object"}, e.line, e.column};
    out.push_back(std::move(n));
    ++pending;
  }
  return out;
}

inline AtomSchema atom_schema(const std::string& source, const SExpr& e) {
  if (!e.is_list || e.items.empty()) fail(source, e, "expected an atom");
  const std::string& head = atom_of(source, e.items[0], "predicate name");
  if (head == "not") fail(source, e, "negative literal; :negative-preconditions is not supported");
  if (head == "=") fail(source, e, "equality atoms are not supported (:equality)");
  if (head == "or" || head == "imply" || head == "exists" || head == "forall" || head == "when")
    fail(source, e, "'" + head + "' is outside the STRIPS subset");
  AtomSchema a{symbol(head), {}, e.line, e.column};
  for (std::size_t i = 1; i < e.items.size(); ++i) {
    const std::string& arg = atom_of(source, e.items[i], "term");
    a.args.push_back(symbol(arg));
  }
  return a;
}

/// Flattens `(and ...)`, a single atom, or `()`.
inline std::vector<const SExpr*> conjuncts(const std::string& source, const SExpr& e) {
  if (!e.is_list) fail(source, e, "expected a formula");
  if (e.items.empty()) return {};
  if (e.items[0].is("and")) {
    std::vector<const SExpr*> out;
    for (std::size_t i = 1; i < e.items.size(); ++i) {
      auto sub = conjuncts(source, e.items[i]);
      out.insert(out.end(), sub.begin(), sub.end());
    }
    return out;
  }
  return {&e};
}

inline void check_requirements(const std::string& source, const SExpr& section) {
  for (std::size_t i = 1; i < section.items.size(); ++i) {
    const std::string& r = atom_of(source, section.items[i], "requirement");
    if (r != ":strips" && r != ":typing")
      fail(source, section.items[i], "unsupported requirement " + r);
  }
}

inline std::string header_name(const std::string& source, const SExpr& e, const char* kw) {
  if (!e.is_list || e.items.size() != 2 || !e.items[0].is(kw))
    fail(source, e, std::string("expected (") + kw + " <name>)");
  return symbol(atom_of(source, e.items[1], "name"));
}

inline ActionSchema action_schema(const std::string& source, const SExpr& e) {
  if (e.items.size() < 2) fail(source, e, "action without a name");
  ActionSchema a;
  a.name = symbol(atom_of(source, e.items[1], "action name"));
  a.line = e.line;
  for (std::size_t i = 2; i < e.items.size(); i += 2) {
    const std::string& key = atom_of(source, e.items[i], "action keyword");
    if (i + 1 >= e.items.size()) fail(source, e.items[i], "missing value for " + key);
    const SExpr& v = e.items[i + 1];
    if (key == ":parameters") {
      if (!v.is_list) fail(source, v, "expected a parameter list");
      a.parameters = typed_list(source, v, 0);
      for (const auto& p : a.parameters)
        if (p.name.empty() || p.name[0] != '?')
          throw InputError(source, p.line, p.column, "parameter " + p.name + " must start with '?'");
    } else if (key == ":precondition") {
      for (const SExpr* c : conjuncts(source, v)) a.pre.push_back(atom_schema(source, *c));
    } else if (key == ":effect") {
      for (const SExpr* c : conjuncts(source, v)) {
        if (!c->items.empty() && c->items[0].is("not")) {
          if (c->items.size() != 2) fail(source, *c, "(not) takes one atom");
          a.del.push_back(atom_schema(source, c->items[1]));
        } else {
          a.add.push_back(atom_schema(source, *c));
        }
      }
    } else {
      fail(source, e.items[i], "unsupported action keyword " + key);
    }
  }
  return a;
}

}  // namespace detail

inline Domain parse_domain(std::string_view text, const std::string& source = "domain.pddl") {
  const SExpr top = read_sexpr(text, source);
  if (top.items.size() < 2 || !top.items[0].is("define"))
    detail::fail(source, top, "expected (define (domain ...) ...)");
  Domain d;
  d.source = source;
  d.name = detail::header_name(source, top.items[1], "domain");
  for (std::size_t i = 2; i < top.items.size(); ++i) {
    const SExpr& s = top.items[i];
    if (!s.is_list || s.items.empty()) detail::fail(source, s, "expected a domain section");
    const std::string& key = detail::atom_of(source, s.items[0], "section keyword");
    if (key == ":requirements") {
      detail::check_requirements(source, s);
    } else if (key == ":types") {
      for (const TypedName& t : detail::typed_list(source, s, 1)) {
        if (t.types.size() != 1)
          throw InputError(source, t.line, t.column, "type " + t.name + " has more than one supertype");
        auto [it, inserted] = d.parent.emplace(t.name, t.types[0]);
        if (!inserted && it->second != t.types[0])
          throw InputError(source, t.line, t.column, "type " + t.name + " has more than one supertype");
      }
    } else if (key == ":constants") {
      auto cs = detail::typed_list(source, s, 1);
      d.constants.insert(d.constants.end(), cs.begin(), cs.end());
    } else if (key == ":predicates") {
      for (std::size_t k = 1; k < s.items.size(); ++k) {
        const SExpr& p = s.items[k];
        if (!p.is_list || p.items.empty()) detail::fail(source, p, "expected a predicate declaration");
        d.predicates[symbol(detail::atom_of(source, p.items[0], "predicate name"))] =
            detail::typed_list(source, p, 1);
      }
    } else if (key == ":action") {
      d.actions.push_back(detail::action_schema(source, s));
    } else {
      detail::fail(source, s.items[0], "unsupported domain section " + key);
    }
  }
  return d;
}

inline Problem parse_problem(std::string_view text, const std::string& source = "problem.pddl") {
  const SExpr top = read_sexpr(text, source);
  if (top.items.size() < 2 || !top.items[0].is("define"))
    detail::fail(source, top, "expected (define (problem ...) ...)");
  Problem p;
  p.source = source;
  p.name = detail::header_name(source, top.items[1], "problem");
  for (std::size_t i = 2; i < top.items.size(); ++i) {
    const SExpr& s = top.items[i];
    if (!s.is_list || s.items.empty()) detail::fail(source, s, "expected a problem section");
    const std::string& key = detail::atom_of(source, s.items[0], "section keyword");
    if (key == ":domain") {
      if (s.items.size() != 2) detail::fail(source, s, "expected (:domain <name>)");
      p.domain = symbol(detail::atom_of(source, s.items[1], "domain name"));
    } else if (key == ":requirements") {
      detail::check_requirements(source, s);
    } else if (key == ":objects") {
      auto os = detail::typed_list(source, s, 1);
      p.objects.insert(p.objects.end(), os.begin(), os.end());
    } else if (key == ":init") {
      for (std::size_t k = 1; k < s.items.size(); ++k)
        p.init.push_back(detail::atom_schema(source, s.items[k]));
    } else if (key == ":goal") {
      if (s.items.size() != 2) detail::fail(source, s, "expected (:goal <formula>)");
      for (const SExpr* c : detail::conjuncts(source, s.items[1]))
        p.goal.push_back(detail::atom_schema(source, *c));
    } else {
      detail::fail(source, s.items[0], "unsupported problem section " + key);
    }
  }
  return p;
}

namespace detail {

inline std::string ground_term(const std::string& pred, const std::vector<std::string>& args) {
  if (args.empty()) return pred;
  std::string out = pred + "(";
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (i) out += ',';
    out += args[i];
  }
  return out + ")";
}

class Grounder {
 public:
  Grounder(const Domain& d, const Problem& p) : d_(d), p_(p) {
    if (!p.domain.empty() && p.domain != d.name)
      throw InputError(p.source, 1, 0,
                       "problem is for domain '" + p.domain + "', not '" + d.name + "'");
    for (const auto& [t, sup] : d.parent) check_type(t, d.source, 0, 0);
    add_objects(d.constants, d.source);
    add_objects(p.objects, p.source);
    for (const ActionSchema& a : d.actions)
      for (const AtomSchema& e : a.add) fluent_predicates_.insert(e.predicate);
    for (const ActionSchema& a : d.actions)
      for (const AtomSchema& e : a.del) fluent_predicates_.insert(e.predicate);
  }

  StripsProblem run() {
    StripsProblem out;
    std::vector<FluentId> init;
    for (const AtomSchema& a : p_.init) {
      const std::string term = ground_closed(a, p_.source);
      if (fluent_predicates_.count(a.predicate))
        init.push_back(out.intern_fluent(term));
      else
        static_facts_.insert(term);
    }
    std::vector<FluentId> goal;
    for (const AtomSchema& a : p_.goal) {
      const std::string term = ground_closed(a, p_.source);
      if (fluent_predicates_.count(a.predicate)) {
        goal.push_back(out.intern_fluent(term));
      } else if (!static_facts_.count(term)) {
        throw UnsolvableError("goal " + term + " is a static fact that is false in init");
      }
    }
    std::vector<Action> ground;
    for (const ActionSchema& a : d_.actions) ground_action(a, ground);

    // Fluent ids follow lexicographic order of their terms so that graph
    // vertex numbering does not depend on declaration order.
    std::set<std::string> names(out.fluents().begin(), out.fluents().end());
    for (const Action& a : ground)
      for (const auto* set : {&a.pre, &a.add, &a.del})
        for (FluentId f : *set) names.insert(pending_names_[f]);
    StripsProblem sorted;
    for (const std::string& n : names) sorted.intern_fluent(n);
    auto remap = [&](const std::vector<FluentId>& v, const std::vector<std::string>& table) {
      std::vector<FluentId> r;
      for (FluentId f : v) r.push_back(sorted.find_fluent(table[f]));
      return r;
    };
    for (Action& a : ground) {
      a.pre = remap(a.pre, pending_names_);
      a.add = remap(a.add, pending_names_);
      a.del = remap(a.del, pending_names_);
      // Delete-then-add: an atom both added and deleted holds afterwards.
      std::sort(a.add.begin(), a.add.end());
      std::erase_if(a.del, [&](FluentId f) { return contains(a.add, f); });
      sorted.add_action(std::move(a));
    }
    sorted.set_init(remap(init, out.fluents()));
    sorted.set_goal(remap(goal, out.fluents()));
    return sorted;
  }

 private:
  void check_type(const std::string& t, const std::string& source, std::size_t line,
                  std::size_t col) const {
    if (!known_type(t)) throw InputError(source, line, col, "unknown type " + t);
    std::set<std::string> seen;
    for (std::string cur = t; cur != "object";) {
      if (!seen.insert(cur).second)
        throw InputError(source, line, col, "type hierarchy cycle through " + t);
      auto it = d_.parent.find(cur);
      if (it == d_.parent.end()) break;
      cur = it->second;
    }
  }

  /// Declared in :types, or used there as a supertype.
  bool known_type(const std::string& t) const {
    if (t == "object" || d_.parent.count(t)) return true;
    for (const auto& [child, sup] : d_.parent)
      if (sup == t) return true;
    return false;
  }

  bool is_subtype(std::string t, const std::string& of) const {
    if (of == "object") return true;
    for (std::size_t guard = 0; guard <= d_.parent.size(); ++guard) {
      if (t == of) return true;
      auto it = d_.parent.find(t);
      if (it == d_.parent.end()) return false;
      t = it->second;
    }
    return false;
  }

  void add_objects(const std::vector<TypedName>& names, const std::string& source) {
    for (const TypedName& n : names) {
      for (const std::string& t : n.types)
        if (t != "object") check_type(t, source, n.line, n.column);
      auto& types = object_types_[n.name];
      if (types.empty()) objects_.push_back(n.name);
      types.insert(types.end(), n.types.begin(), n.types.end());
    }
  }

  bool fits(const std::string& object, const std::vector<std::string>& types) const {
    for (const std::string& have : object_types_.at(object))
      for (const std::string& want : types)
        if (is_subtype(have, want)) return true;
    return false;
  }

  void check_predicate(const AtomSchema& a, const std::string& source) const {
    auto it = d_.predicates.find(a.predicate);
    if (it == d_.predicates.end())
      throw InputError(source, a.line, a.column, "undeclared predicate " + a.predicate);
    if (it->second.size() != a.args.size())
      throw InputError(source, a.line, a.column,
                       "predicate " + a.predicate + " takes " + std::to_string(it->second.size()) +
                           " arguments, got " + std::to_string(a.args.size()));
  }

  std::string ground_closed(const AtomSchema& a, const std::string& source) const {
    check_predicate(a, source);
    for (const std::string& arg : a.args) {
      if (arg[0] == '?') throw InputError(source, a.line, a.column, "variable " + arg + " in a ground atom");
      if (!object_types_.count(arg)) throw InputError(source, a.line, a.column, "unknown object " + arg);
    }
    return ground_term(a.predicate, a.args);
  }

  FluentId pending(const std::string& term) {
    auto [it, inserted] = pending_index_.emplace(term, static_cast<FluentId>(pending_names_.size()));
    if (inserted) pending_names_.push_back(term);
    return it->second;
  }

  void ground_action(const ActionSchema& a, std::vector<Action>& out) {
    std::map<std::string, std::size_t> slot;
    for (std::size_t i = 0; i < a.parameters.size(); ++i) {
      const TypedName& p = a.parameters[i];
      if (!slot.emplace(p.name, i).second)
        throw InputError(d_.source, p.line, p.column, "duplicate parameter " + p.name);
      for (const std::string& t : p.types)
        if (t != "object") check_type(t, d_.source, p.line, p.column);
    }
    auto check_atoms = [&](const std::vector<AtomSchema>& atoms) {
      for (const AtomSchema& x : atoms) {
        check_predicate(x, d_.source);
        for (const std::string& arg : x.args) {
          if (arg[0] == '?' ? !slot.count(arg) : !object_types_.count(arg))
            throw InputError(d_.source, x.line, x.column,
                             (arg[0] == '?' ? "unbound variable " : "unknown constant ") + arg);
        }
      }
    };
    check_atoms(a.pre);
    check_atoms(a.add);
    check_atoms(a.del);

    // Static preconditions are checked as soon as their last variable is bound.
    std::vector<std::vector<const AtomSchema*>> checks(a.parameters.size() + 1);
    for (const AtomSchema& x : a.pre) {
      if (fluent_predicates_.count(x.predicate)) continue;
      std::size_t last = 0;
      for (const std::string& arg : x.args)
        if (arg[0] == '?') last = std::max(last, slot[arg] + 1);
      checks[last].push_back(&x);
    }

    std::vector<std::string> binding(a.parameters.size());
    auto instantiate = [&](const AtomSchema& x) {
      std::vector<std::string> args;
      for (const std::string& arg : x.args) args.push_back(arg[0] == '?' ? binding[slot[arg]] : arg);
      return ground_term(x.predicate, args);
    };
    auto statics_hold = [&](std::size_t level) {
      for (const AtomSchema* x : checks[level])
        if (!static_facts_.count(instantiate(*x))) return false;
      return true;
    };

    std::function<void(std::size_t)> rec = [&](std::size_t i) {
      if (i == a.parameters.size()) {
        Action g;
        g.name = ground_term(a.name, binding);
        for (const AtomSchema& x : a.pre)
          if (fluent_predicates_.count(x.predicate)) g.pre.push_back(pending(instantiate(x)));
        for (const AtomSchema& x : a.add) g.add.push_back(pending(instantiate(x)));
        for (const AtomSchema& x : a.del) g.del.push_back(pending(instantiate(x)));
        out.push_back(std::move(g));
        return;
      }
      for (const std::string& o : objects_) {
        if (!fits(o, a.parameters[i].types)) continue;
        binding[i] = o;
        if (statics_hold(i + 1)) rec(i + 1);
      }
    };
    if (statics_hold(0)) rec(0);
  }

  const Domain& d_;
  const Problem& p_;
  std::vector<std::string> objects_;
  std::map<std::string, std::vector<std::string>> object_types_;
  std::set<std::string> fluent_predicates_;
  std::set<std::string> static_facts_;
  std::vector<std::string> pending_names_;
  std::map<std::string, FluentId> pending_index_;
};

}  // namespace detail

/// Grounds every action schema over the typed objects. Predicates that no
/// action changes are static: they are evaluated against init, pruning
/// groundings whose static preconditions are false, and do not become
/// fluents.
inline StripsProblem ground(const Domain& d, const Problem& p) {
  return detail::Grounder(d, p).run();
}

}  // namespace pddl

inline StripsProblem parse_pddl(std::string_view domain_text, std::string_view problem_text,
                                const std::string& domain_source = "domain.pddl",
                                const std::string& problem_source = "problem.pddl") {
  const pddl::Domain d = pddl::parse_domain(domain_text, domain_source);
  const pddl::Problem p = pddl::parse_problem(problem_text, problem_source);
  return pddl::ground(d, p);
}

}  // namespace mcover
