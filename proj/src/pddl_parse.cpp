#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include "csam/errors.hpp"
#include "csam/pddl.hpp"
#include "sexpr.hpp"

namespace csam {

using sexpr::Node;

namespace {

bool is_variable(const std::string& term) { return !term.empty() && term.front() == '?'; }

bool type_matches(const std::string& actual, const std::string& expected) {
  return expected == "object" || actual == expected;
}

const Node& expect_list(const Node& node, const char* what) {
  if (!node.is_list) node.fail(std::string("expected ") + what);
  return node;
}

const std::string& expect_atom(const Node& node, const char* what) {
  if (!node.is_atom() || node.atom.empty()) node.fail(std::string("expected ") + what);
  return node.atom;
}

void reject_unsupported_head(const Node& node) {
  if (!node.is_list || node.items.empty() || !node.head().is_atom()) return;
  const auto& head = node.head().atom;
  if (head == "exists" || head == "=" || head == "imply") throw UnsupportedConstruct(head);
}

/// Parses `a b - t c - u d` into typed names, untyped entries get "object".
std::vector<TypedName> parse_typed_list(const Node& list, std::size_t start,
                                        bool variables) {
  std::vector<TypedName> out;
  std::size_t pending = 0;
  for (std::size_t i = start; i < list.items.size(); ++i) {
    const Node& item = list.items[i];
    if (item.is_list) {
      if (item.is_form("either")) throw UnsupportedConstruct("either");
      item.fail("expected name in typed list");
    }
    if (item.atom == "-") {
      if (i + 1 >= list.items.size()) item.fail("missing type after '-'");
      const Node& type_node = list.items[i + 1];
      if (type_node.is_form("either")) throw UnsupportedConstruct("either");
      const auto& type = expect_atom(type_node, "type name");
      if (pending == 0) item.fail("type without names");
      for (std::size_t k = out.size() - pending; k < out.size(); ++k) out[k].type = type;
      pending = 0;
      ++i;
      continue;
    }
    if (variables != is_variable(item.atom)) {
      item.fail(variables ? "expected ?variable" : "unexpected ?variable");
    }
    out.push_back(TypedName{item.atom, "object"});
    ++pending;
  }
  return out;
}

class Scope {
 public:
  Scope(const Domain& domain, const std::map<std::string, std::string>& objects)
      : domain_(domain), objects_(objects) {}

  void push(const std::vector<TypedName>& vars) {
    for (const auto& v : vars) vars_.emplace_back(v.name, v.type);
  }
  void pop(std::size_t count) { vars_.resize(vars_.size() - count); }

  std::optional<std::string> type_of(const std::string& term) const {
    if (is_variable(term)) {
      for (auto it = vars_.rbegin(); it != vars_.rend(); ++it) {
        if (it->first == term) return it->second;
      }
      return std::nullopt;
    }
    auto it = objects_.find(term);
    if (it == objects_.end()) return std::nullopt;
    return it->second;
  }

  const Domain& domain() const { return domain_; }

 private:
  const Domain& domain_;
  const std::map<std::string, std::string>& objects_;
  std::vector<std::pair<std::string, std::string>> vars_;
};

Fluent parse_atom(const Node& node, const Scope& scope) {
  reject_unsupported_head(node);
  expect_list(node, "atom");
  if (node.items.empty()) node.fail("empty atom");
  Fluent fluent;
  fluent.predicate = expect_atom(node.head(), "predicate name");
  const auto* signature = scope.domain().find_predicate(fluent.predicate);
  if (signature == nullptr) {
    throw UnknownFluent(std::to_string(node.line) + ":" + std::to_string(node.column) +
                        ": unknown predicate " + fluent.predicate);
  }
  if (node.items.size() - 1 != signature->params.size()) {
    throw ArityMismatch(std::to_string(node.line) + ":" + std::to_string(node.column) +
                        ": predicate " + fluent.predicate + " expects " +
                        std::to_string(signature->params.size()) + " arguments");
  }
  for (std::size_t i = 1; i < node.items.size(); ++i) {
    const auto& term = expect_atom(node.items[i], "term");
    auto type = scope.type_of(term);
    if (!type) node.items[i].fail("unknown term " + term);
    if (!type_matches(*type, signature->params[i - 1].type)) {
      throw TypeMismatch(std::to_string(node.items[i].line) + ":" +
                         std::to_string(node.items[i].column) + ": " + term + " of type " +
                         *type + " where " + signature->params[i - 1].type + " expected");
    }
    fluent.args.push_back(term);
  }
  return fluent;
}

Literal parse_literal(const Node& node, const Scope& scope) {
  reject_unsupported_head(node);
  if (node.is_form("not")) {
    if (node.items.size() != 2) node.fail("not takes one argument");
    return Literal{parse_atom(node.items[1], scope), false};
  }
  return Literal{parse_atom(node, scope), true};
}

/// Flattens `and`-nested literals (as used for antecedents, results, goals).
void collect_literals(const Node& node, const Scope& scope, std::vector<Literal>& out) {
  reject_unsupported_head(node);
  if (node.is_form("and")) {
    for (std::size_t i = 1; i < node.items.size(); ++i) collect_literals(node.items[i], scope, out);
    return;
  }
  if (node.is_form("or")) throw UnsupportedConstruct("disjunctive antecedent");
  if (node.is_form("forall") || node.is_form("when")) {
    throw UnsupportedConstruct("nested " + node.head().atom);
  }
  out.push_back(parse_literal(node, scope));
}

Formula parse_formula(const Node& node, Scope& scope) {
  reject_unsupported_head(node);
  expect_list(node, "formula");
  if (node.is_form("and") || node.is_form("or")) {
    std::vector<Formula> children;
    for (std::size_t i = 1; i < node.items.size(); ++i) {
      children.push_back(parse_formula(node.items[i], scope));
    }
    return node.is_form("and") ? Formula::conjunction(std::move(children))
                               : Formula::disjunction(std::move(children));
  }
  if (node.is_form("not")) {
    if (node.items.size() != 2) node.fail("not takes one argument");
    const Node& inner = node.items[1];
    reject_unsupported_head(inner);
    const bool compound = inner.is_form("and") || inner.is_form("or") ||
                          inner.is_form("not") || inner.is_form("forall");
    if (!compound) return Formula::literal(Literal{parse_atom(inner, scope), false});
    return Formula::negation(parse_formula(inner, scope));
  }
  if (node.is_form("forall")) {
    if (node.items.size() != 3) node.fail("forall takes a variable list and a body");
    auto vars = parse_typed_list(expect_list(node.items[1], "variable list"), 0, true);
    scope.push(vars);
    Formula body = parse_formula(node.items[2], scope);
    scope.pop(vars.size());
    return Formula::forall(std::move(vars), std::move(body));
  }
  if (node.is_form("when")) node.fail("when is not allowed in a precondition");
  return Formula::literal(Literal{parse_atom(node, scope), true});
}

void parse_effect(const Node& node, Scope& scope, std::vector<TypedName>& vars,
                  std::vector<Effect>& out) {
  reject_unsupported_head(node);
  expect_list(node, "effect");
  if (node.is_form("and")) {
    for (std::size_t i = 1; i < node.items.size(); ++i) parse_effect(node.items[i], scope, vars, out);
    return;
  }
  if (node.is_form("forall")) {
    if (node.items.size() != 3) node.fail("forall takes a variable list and a body");
    auto fresh = parse_typed_list(expect_list(node.items[1], "variable list"), 0, true);
    scope.push(fresh);
    vars.insert(vars.end(), fresh.begin(), fresh.end());
    parse_effect(node.items[2], scope, vars, out);
    vars.resize(vars.size() - fresh.size());
    scope.pop(fresh.size());
    return;
  }
  Effect effect;
  effect.variables = vars;
  if (node.is_form("when")) {
    if (node.items.size() != 3) node.fail("when takes a condition and an effect");
    collect_literals(node.items[1], scope, effect.antecedent);
    collect_literals(node.items[2], scope, effect.result);
  } else if (node.is_form("or")) {
    throw UnsupportedConstruct("or in effect");
  } else {
    effect.result.push_back(parse_literal(node, scope));
  }
  out.push_back(std::move(effect));
}

ActionSchema parse_action(const Node& node, const Domain& domain,
                          const std::map<std::string, std::string>& constants) {
  if (node.items.size() < 2) node.fail("action without name");
  ActionSchema action;
  action.name = expect_atom(node.items[1], "action name");
  action.precondition = Formula::truth();
  Scope scope(domain, constants);
  const Node* precondition = nullptr;
  const Node* effect = nullptr;
  for (std::size_t i = 2; i < node.items.size(); i += 2) {
    const auto& key = expect_atom(node.items[i], "action keyword");
    if (i + 1 >= node.items.size()) node.items[i].fail("missing value for " + key);
    const Node& value = node.items[i + 1];
    if (key == ":parameters") {
      action.params = parse_typed_list(expect_list(value, "parameter list"), 0, true);
    } else if (key == ":precondition") {
      precondition = &value;
    } else if (key == ":effect") {
      effect = &value;
    } else {
      throw UnsupportedConstruct(key);
    }
  }
  std::set<std::string> seen;
  for (const auto& p : action.params) {
    if (!seen.insert(p.name).second) node.fail("duplicate parameter " + p.name);
  }
  scope.push(action.params);
  if (precondition != nullptr) action.precondition = parse_formula(*precondition, scope);
  if (effect != nullptr) {
    std::vector<TypedName> vars;
    parse_effect(*effect, scope, vars, action.effects);
    action.effects = normalize_effects(std::move(action.effects));
  }
  return action;
}

std::string define_name(const Node& root, const char* kind) {
  if (!root.is_form("define")) root.fail("expected (define ...)");
  if (root.items.size() < 2) root.fail("missing header");
  const Node& header = root.items[1];
  if (!header.is_form(kind) || header.items.size() != 2) {
    header.fail(std::string("expected (") + kind + " <name>)");
  }
  return expect_atom(header.items[1], "name");
}

std::map<std::string, std::string> object_types(const Domain& domain,
                                                const std::vector<TypedName>& objects,
                                                const Node* where) {
  std::map<std::string, std::string> out;
  auto add = [&](const TypedName& o) {
    if (o.type != "object" &&
        std::find(domain.types.begin(), domain.types.end(), o.type) == domain.types.end()) {
      if (where != nullptr) where->fail("unknown type " + o.type);
      throw TypeMismatch("unknown type " + o.type);
    }
    auto [it, inserted] = out.emplace(o.name, o.type);
    if (!inserted && it->second != o.type) {
      throw TypeMismatch("object " + o.name + " declared with two types");
    }
  };
  for (const auto& c : domain.constants) add(c);
  for (const auto& o : objects) add(o);
  return out;
}

}  // namespace

const PredicateSignature* Domain::find_predicate(std::string_view name) const {
  for (const auto& p : predicates) {
    if (p.name == name) return &p;
  }
  return nullptr;
}

const ActionSchema* Domain::find_action(std::string_view name) const {
  for (const auto& a : actions) {
    if (a.name == name) return &a;
  }
  return nullptr;
}

std::string to_string(const GroundAction& action) {
  std::string out = "(" + action.name;
  for (const auto& a : action.args) out += " " + a;
  return out + ")";
}

std::vector<Effect> normalize_effects(std::vector<Effect> effects) {
  std::map<std::pair<std::vector<TypedName>, std::vector<Literal>>, std::vector<Literal>> merged;
  for (auto& e : effects) {
    std::sort(e.antecedent.begin(), e.antecedent.end());
    e.antecedent.erase(std::unique(e.antecedent.begin(), e.antecedent.end()), e.antecedent.end());
    auto& results = merged[{e.variables, e.antecedent}];
    results.insert(results.end(), e.result.begin(), e.result.end());
  }
  std::vector<Effect> out;
  for (auto& [key, results] : merged) {
    std::sort(results.begin(), results.end());
    results.erase(std::unique(results.begin(), results.end()), results.end());
    if (results.empty()) continue;
    out.push_back(Effect{key.first, key.second, std::move(results)});
  }
  std::sort(out.begin(), out.end());
  return out;
}

Domain parse_domain(std::string_view text) {
  const Node root = sexpr::read_one(text);
  Domain domain;
  domain.name = define_name(root, "domain");
  std::set<std::string> action_names;
  std::map<std::string, std::string> constants;
  for (std::size_t i = 2; i < root.items.size(); ++i) {
    const Node& section = expect_list(root.items[i], "domain section");
    if (section.items.empty()) section.fail("empty section");
    const auto& key = expect_atom(section.head(), "section keyword");
    if (key == ":requirements") {
      for (std::size_t k = 1; k < section.items.size(); ++k) {
        domain.requirements.push_back(expect_atom(section.items[k], "requirement"));
      }
    } else if (key == ":types") {
      for (const auto& t : parse_typed_list(section, 1, false)) {
        if (t.type != "object") throw UnsupportedConstruct("type hierarchy");
        if (t.name != "object") domain.types.push_back(t.name);
      }
    } else if (key == ":constants") {
      domain.constants = parse_typed_list(section, 1, false);
      constants = object_types(domain, {}, &section);
    } else if (key == ":predicates") {
      for (std::size_t k = 1; k < section.items.size(); ++k) {
        const Node& p = expect_list(section.items[k], "predicate declaration");
        if (p.items.empty()) p.fail("empty predicate declaration");
        PredicateSignature sig{expect_atom(p.head(), "predicate name"),
                               parse_typed_list(p, 1, true)};
        if (domain.find_predicate(sig.name) != nullptr) p.fail("duplicate predicate " + sig.name);
        for (const auto& param : sig.params) {
          if (param.type != "object" && std::find(domain.types.begin(), domain.types.end(),
                                                  param.type) == domain.types.end()) {
            p.fail("unknown type " + param.type);
          }
        }
        domain.predicates.push_back(std::move(sig));
      }
    } else if (key == ":action") {
      auto action = parse_action(section, domain, constants);
      if (!action_names.insert(action.name).second) section.fail("duplicate action " + action.name);
      domain.actions.push_back(std::move(action));
    } else {
      throw UnsupportedConstruct(key);
    }
  }
  return domain;
}

Problem parse_problem(std::string_view text, const Domain& domain) {
  const Node root = sexpr::read_one(text);
  Problem problem;
  problem.name = define_name(root, "problem");
  std::map<std::string, std::string> objects = object_types(domain, {}, nullptr);
  for (std::size_t i = 2; i < root.items.size(); ++i) {
    const Node& section = expect_list(root.items[i], "problem section");
    if (section.items.empty()) section.fail("empty section");
    const auto& key = expect_atom(section.head(), "section keyword");
    if (key == ":domain") {
      if (section.items.size() != 2) section.fail("expected (:domain <name>)");
      problem.domain_name = expect_atom(section.items[1], "domain name");
    } else if (key == ":objects") {
      problem.objects = parse_typed_list(section, 1, false);
      objects = object_types(domain, problem.objects, &section);
    } else if (key == ":init") {
      Scope scope(domain, objects);
      for (std::size_t k = 1; k < section.items.size(); ++k) {
        reject_unsupported_head(section.items[k]);
        if (section.items[k].is_form("not")) section.items[k].fail("negative literal in :init");
        problem.init.push_back(parse_atom(section.items[k], scope));
      }
    } else if (key == ":goal") {
      if (section.items.size() != 2) section.fail("expected (:goal <formula>)");
      Scope scope(domain, objects);
      collect_literals(section.items[1], scope, problem.goal);
    } else {
      throw UnsupportedConstruct(key);
    }
  }
  return problem;
}

namespace {

State parse_state(const Node& node, const Domain& domain, const UniversePtr& universe,
                  const std::map<std::string, std::string>& objects) {
  if (node.items.size() != 2) node.fail("expected a single (and ...) state body");
  Scope scope(domain, objects);
  std::vector<Literal> literals;
  collect_literals(node.items[1], scope, literals);
  State state(universe);
  std::vector<char> assigned(universe->size(), 0);
  for (const auto& l : literals) {
    const std::size_t index = universe->index_of(l.fluent);
    if (assigned[index] != 0) {
      if (state.test(index) != l.positive) node.fail("contradictory state: " + to_string(l));
      continue;
    }
    assigned[index] = 1;
    state.set(index, l.positive);
  }
  for (std::size_t i = 0; i < universe->size(); ++i) {
    if (assigned[i] == 0) {
      throw IncompleteState(std::to_string(node.line) + ":" + std::to_string(node.column) +
                            ": state omits " + to_string(universe->fluent(i)));
    }
  }
  return state;
}

GroundAction parse_ground_action(const Node& node, const Domain& domain,
                                 const std::map<std::string, std::string>& objects) {
  expect_list(node, "grounded action");
  if (node.items.empty()) node.fail("empty action");
  GroundAction action;
  action.name = expect_atom(node.head(), "action name");
  for (std::size_t i = 1; i < node.items.size(); ++i) {
    action.args.push_back(expect_atom(node.items[i], "object"));
  }
  const auto* schema = domain.find_action(action.name);
  if (schema == nullptr) {
    throw UnknownAction(std::to_string(node.line) + ":" + std::to_string(node.column) +
                        ": unknown action " + action.name);
  }
  if (schema->params.size() != action.args.size()) {
    throw ArityMismatch(std::to_string(node.line) + ":" + std::to_string(node.column) +
                        ": action " + action.name + " expects " +
                        std::to_string(schema->params.size()) + " arguments");
  }
  for (std::size_t i = 0; i < action.args.size(); ++i) {
    auto it = objects.find(action.args[i]);
    if (it == objects.end()) node.items[i + 1].fail("unknown object " + action.args[i]);
    if (!type_matches(it->second, schema->params[i].type)) {
      throw TypeMismatch(std::to_string(node.line) + ":" + std::to_string(node.column) + ": " +
                         action.args[i] + " is not a " + schema->params[i].type);
    }
  }
  return action;
}

}  // namespace

Trajectory parse_trajectory(std::string_view text, const Domain& domain) {
  const auto nodes = sexpr::read_all(text);
  Trajectory trajectory;
  std::size_t i = 0;
  if (i < nodes.size() && nodes[i].is_form(":objects")) {
    trajectory.objects = parse_typed_list(nodes[i], 1, false);
    ++i;
  }
  const auto objects = object_types(domain, trajectory.objects, i > 0 ? &nodes[0] : nullptr);
  const UniversePtr universe = make_universe(domain, trajectory.objects);

  if (i >= nodes.size() || !nodes[i].is_form(":init")) {
    if (i < nodes.size()) nodes[i].fail("expected (:init ...)");
    throw SyntaxError("missing (:init ...)", 1, 1);
  }
  trajectory.states.push_back(parse_state(nodes[i], domain, universe, objects));
  ++i;
  while (i < nodes.size()) {
    const Node& op = nodes[i];
    if (!op.is_form("operator:") || op.items.size() != 2) op.fail("expected (operator: (...))");
    trajectory.actions.push_back(parse_ground_action(op.items[1], domain, objects));
    ++i;
    if (i >= nodes.size() || !nodes[i].is_form(":state")) {
      op.fail("operator without following (:state ...)");
    }
    trajectory.states.push_back(parse_state(nodes[i], domain, universe, objects));
    ++i;
  }
  return trajectory;
}

std::vector<GroundAction> parse_plan(std::string_view text) {
  std::vector<GroundAction> plan;
  for (const Node& node : sexpr::read_all(text)) {
    expect_list(node, "plan step");
    if (node.items.empty()) node.fail("empty plan step");
    GroundAction action;
    action.name = expect_atom(node.head(), "action name");
    for (std::size_t i = 1; i < node.items.size(); ++i) {
      action.args.push_back(expect_atom(node.items[i], "object"));
    }
    plan.push_back(std::move(action));
  }
  return plan;
}

ObjectsByType objects_by_type(const Domain& domain, const std::vector<TypedName>& objects) {
  ObjectsByType out;
  for (const auto& t : domain.types) out[t];
  std::set<std::string> seen;
  auto add = [&](const TypedName& o) {
    if (!seen.insert(o.name).second) return;
    out[o.type].push_back(o.name);
    if (o.type != "object") out["object"].push_back(o.name);
  };
  for (const auto& c : domain.constants) add(c);
  for (const auto& o : objects) add(o);
  for (auto& [type, names] : out) std::sort(names.begin(), names.end());
  return out;
}

UniversePtr make_universe(const Domain& domain, const std::vector<TypedName>& objects) {
  const auto by_type = objects_by_type(domain, objects);
  std::vector<Fluent> fluents;
  for (const auto& p : domain.predicates) {
    std::vector<const std::vector<std::string>*> pools;
    bool empty = false;
    for (const auto& param : p.params) {
      auto it = by_type.find(param.type);
      if (it == by_type.end() || it->second.empty()) {
        empty = true;
        break;
      }
      pools.push_back(&it->second);
    }
    if (empty) continue;
    std::vector<std::size_t> idx(pools.size(), 0);
    while (true) {
      Fluent f{p.name, {}};
      for (std::size_t k = 0; k < pools.size(); ++k) f.args.push_back((*pools[k])[idx[k]]);
      fluents.push_back(std::move(f));
      std::size_t k = 0;
      for (; k < idx.size(); ++k) {
        if (++idx[k] < pools[k]->size()) break;
        idx[k] = 0;
      }
      if (k == idx.size()) break;
    }
  }
  return std::make_shared<const Universe>(std::move(fluents));
}

State initial_state(const Domain& domain, const Problem& problem) {
  return State(make_universe(domain, problem.objects), problem.init);
}

void require_conjunctive_preconditions(const Domain& domain) {
  for (const auto& a : domain.actions) {
    if (!a.precondition.is_literal_conjunction()) {
      throw UnsupportedConstruct("non-conjunctive precondition in action " + a.name);
    }
  }
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void write_file(const std::string& path, std::string_view contents) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path);
  out << contents;
}

}  // namespace csam
