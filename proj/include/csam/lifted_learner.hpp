#pragma once

// Lifted Conditional-SAM over parameter-bound literals. Each predicate slot
// is bound to an action parameter or to a universally quantified variable
// (UQV). An action owns at most k UQVs, one per type that is not the type of
// any of its parameters, named ?v1, ?v2, ... in type-name order.

#include <compare>
#include <cstddef>
#include <limits>
#include <map>
#include <string>
#include <vector>

#include "csam/learner_core.hpp"
#include "csam/pddl.hpp"

namespace csam {

struct SlotTerm {
  bool is_uqv = false;
  /// Parameter index, or UQV index when is_uqv.
  std::size_t index = 0;

  auto operator<=>(const SlotTerm&) const = default;
  bool operator==(const SlotTerm&) const = default;
};

struct BoundAtom {
  std::string predicate;
  std::vector<SlotTerm> slots;

  bool operator==(const BoundAtom&) const = default;
};

class BindingSpace {
 public:
  BindingSpace() = default;
  BindingSpace(std::string action, std::vector<TypedName> params, std::vector<TypedName> uqvs,
               std::vector<BoundAtom> atoms);

  const std::string& action() const { return action_; }
  const std::vector<TypedName>& params() const { return params_; }
  const std::vector<TypedName>& uqvs() const { return uqvs_; }
  const std::vector<BoundAtom>& atoms() const { return atoms_; }
  std::size_t size() const { return atoms_.size(); }

  /// The atom with parameter and UQV names as arguments.
  Fluent lifted(std::size_t atom) const;
  Literal literal(LitId id) const;
  /// Throws UnknownFluent.
  LitId literal_id(const Literal& lifted) const;
  /// UQV indices used by an atom, ascending.
  const std::vector<std::size_t>& atom_uqvs(std::size_t atom) const { return atom_uqvs_[atom]; }

  /// Every parameter-bound literal, both polarities, in canonical order.
  std::vector<Literal> literals() const;

  bool operator==(const BindingSpace& other) const {
    return action_ == other.action_ && params_ == other.params_ && uqvs_ == other.uqvs_ &&
           atoms_ == other.atoms_;
  }

 private:
  std::string action_;
  std::vector<TypedName> params_;
  std::vector<TypedName> uqvs_;
  std::vector<BoundAtom> atoms_;
  std::vector<Fluent> lifted_;
  std::vector<std::vector<std::size_t>> atom_uqvs_;
};

/// All type-consistent bindings of the predicates to the schema parameters
/// and up to `max_uqvs` UQVs. Atoms come out sorted by their lifted form.
BindingSpace enumerate_bindings(const ActionSchema& schema,
                                const std::vector<PredicateSignature>& predicates,
                                std::size_t max_uqvs);

/// Groundings of a binding space for one grounded action over a universe.
/// UQV substitutions range over every object of the UQV's type; atoms whose
/// UQVs have no objects are inactive and have no groundings.
class BindingGrounding {
 public:
  static constexpr std::size_t kInactive = std::numeric_limits<std::size_t>::max();

  /// Throws ArityMismatch or UnknownFluent.
  BindingGrounding(const BindingSpace& space, const GroundAction& action,
                   const ObjectsByType& objects, const Universe& universe);

  /// UQV substitutions, each one object per UQV (inactive UQVs get "").
  const std::vector<std::vector<std::string>>& substitutions() const { return substitutions_; }
  /// Universe index of atom under substitution, or kInactive.
  std::size_t fluent(std::size_t substitution, std::size_t atom) const {
    return table_[substitution * atom_count_ + atom];
  }
  bool active(std::size_t atom) const { return active_[atom] != 0; }

  /// Atoms with some grounding equal to the universe fluent.
  std::vector<std::size_t> atoms_for(std::size_t fluent) const;

 private:
  std::size_t atom_count_ = 0;
  std::vector<std::vector<std::string>> substitutions_;
  std::vector<std::size_t> table_;
  std::vector<char> active_;
  std::multimap<std::size_t, std::size_t> by_fluent_;
};

/// g(a_G, l): one grounded literal per UQV substitution.
std::vector<Literal> ground(const BindingSpace& space, const GroundAction& action,
                            const Literal& lifted, const ObjectsByType& objects);

/// The unique parameter-bound literal whose groundings under `action`
/// contain `grounded`. Throws AmbiguousBinding or NoBinding.
Literal resolve_binding(const BindingSpace& space, const GroundAction& action,
                        const Literal& grounded, const ObjectsByType& objects);

class LiftedLearner {
 public:
  struct Entry {
    BindingSpace space;
    ActionKnowledge knowledge;

    bool operator==(const Entry&) const = default;
  };

  /// Throws std::invalid_argument if max_antecedent == 0.
  LiftedLearner(Domain domain, std::size_t max_antecedent, std::size_t max_uqvs);

  /// Registers a schema up front; otherwise it is added on first sight.
  /// Throws UnknownAction.
  void add_action(const std::string& action) { entry(action); }

  /// Throws UnknownAction, AmbiguousBinding, NoBinding, UniverseMismatch.
  void observe(const State& before, const GroundAction& action, const State& after,
               const std::vector<TypedName>& objects);
  /// Errors are rethrown with the failing step in the message.
  void observe(const Trajectory& trajectory);

  void merge(const LiftedLearner& other);

  const Domain& domain() const { return domain_; }
  std::size_t max_antecedent() const { return max_antecedent_; }
  std::size_t max_uqvs() const { return max_uqvs_; }
  const std::map<std::string, Entry>& entries() const { return entries_; }
  const ActionKnowledge* knowledge(const std::string& action) const;

  /// Learned lifted domain. Only registered or observed actions are
  /// included, in the order of the input domain.
  Domain build() const;

  bool operator==(const LiftedLearner& other) const { return entries_ == other.entries_; }

 private:
  Entry& entry(const std::string& action);

  Domain domain_;
  std::size_t max_antecedent_;
  std::size_t max_uqvs_;
  std::map<std::string, Entry> entries_;
};

/// Learned precondition and effects of one schema.
ActionSchema build_lifted_action(const LiftedLearner::Entry& entry, const ActionSchema& schema);

struct LiftedRun {
  Domain domain;
  /// Indices of trajectories dropped for violating the binding assumption.
  std::vector<std::size_t> skipped;
};

LiftedRun learn_lifted(const Domain& base, const std::vector<Trajectory>& trajectories,
                       std::size_t max_antecedent, std::size_t max_uqvs,
                       bool skip_ambiguous = false);

}  // namespace csam
