#pragma once

// Domain/problem/trajectory descriptions and their text formats.
//
// Supported PDDL fragment: flat types, typed parameters and constants,
// preconditions built from and/or/not/forall over literals, effects built
// from and/forall/when over literal conjunctions. `exists`, `=`, `imply`,
// nested types and numeric constructs are rejected.
//
// Trajectory files hold one S-expression per line:
//
//   (:objects p1 p2 - passenger f1 f2 - floor)
//   (:init (and (lift-at f1) (not (lift-at f2)) ...))
//   (operator: (up f1 f2))
//   (:state (and ...))
//   ...
//
// Every state lists every fluent of the universe, negatives with `not`.

#include <cstddef>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "csam/formula.hpp"
#include "csam/logic.hpp"

namespace csam {

struct PredicateSignature {
  std::string name;
  std::vector<TypedName> params;

  bool operator==(const PredicateSignature&) const = default;
};

/// One (possibly universally quantified) conditional effect. An empty
/// antecedent is `true`. Literal arguments are action parameters, effect
/// variables or constants.
struct Effect {
  std::vector<TypedName> variables;
  std::vector<Literal> antecedent;
  std::vector<Literal> result;

  auto operator<=>(const Effect&) const = default;
  bool operator==(const Effect&) const = default;
};

struct ActionSchema {
  std::string name;
  std::vector<TypedName> params;
  Formula precondition;
  std::vector<Effect> effects;

  bool operator==(const ActionSchema&) const = default;
};

struct Domain {
  std::string name;
  std::vector<std::string> requirements;
  std::vector<std::string> types;
  std::vector<TypedName> constants;
  std::vector<PredicateSignature> predicates;
  std::vector<ActionSchema> actions;

  const PredicateSignature* find_predicate(std::string_view name) const;
  const ActionSchema* find_action(std::string_view name) const;

  bool operator==(const Domain&) const = default;
};

struct Problem {
  std::string name;
  std::string domain_name;
  std::vector<TypedName> objects;
  std::vector<Fluent> init;
  std::vector<Literal> goal;

  bool operator==(const Problem&) const = default;
};

/// A grounded action: schema name plus one object per parameter.
struct GroundAction {
  std::string name;
  std::vector<std::string> args;

  auto operator<=>(const GroundAction&) const = default;
  bool operator==(const GroundAction&) const = default;
};

std::string to_string(const GroundAction& action);

struct Trajectory {
  std::vector<TypedName> objects;
  std::vector<State> states;
  std::vector<GroundAction> actions;

  std::size_t size() const { return actions.size(); }
  bool operator==(const Trajectory&) const = default;
};

/// Merges effects with identical variables and antecedent, sorts antecedent
/// and result literals, and orders effects canonically.
std::vector<Effect> normalize_effects(std::vector<Effect> effects);

/// Objects grouped by type; includes domain constants.
using ObjectsByType = std::map<std::string, std::vector<std::string>>;
ObjectsByType objects_by_type(const Domain& domain, const std::vector<TypedName>& objects);

/// All type-consistent groundings of the domain predicates.
UniversePtr make_universe(const Domain& domain, const std::vector<TypedName>& objects);

State initial_state(const Domain& domain, const Problem& problem);

// --- text formats ------------------------------------------------------------

Domain parse_domain(std::string_view text);
Problem parse_problem(std::string_view text, const Domain& domain);
Trajectory parse_trajectory(std::string_view text, const Domain& domain);
std::vector<GroundAction> parse_plan(std::string_view text);

std::string serialize_domain(const Domain& domain);
std::string serialize_problem(const Problem& problem);
std::string serialize_trajectory(const Trajectory& trajectory);
std::string serialize_plan(const std::vector<GroundAction>& plan);

/// Throws UnsupportedConstruct unless every precondition is a conjunction
/// of literals, as required of ground-truth input models.
void require_conjunctive_preconditions(const Domain& domain);

std::string read_file(const std::string& path);
void write_file(const std::string& path, std::string_view contents);

}  // namespace csam
