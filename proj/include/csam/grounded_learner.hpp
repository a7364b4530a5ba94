#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include "csam/learner_core.hpp"
#include "csam/pddl.hpp"

namespace csam {

/// Learned precondition and effects for one grounded action.
struct SafeGroundAction {
  GroundAction action;
  Formula precondition;
  std::vector<Effect> effects;
};

struct SafeActionModel {
  std::vector<SafeGroundAction> actions;
};

/// Grounded Conditional-SAM. Every action grounding is learned as a separate
/// action over the literals of one fixed fluent universe.
class GroundedLearner {
 public:
  struct Entry {
    GroundAction action;
    ActionKnowledge knowledge;

    bool operator==(const Entry&) const = default;
  };

  /// Throws std::invalid_argument if max_antecedent == 0.
  GroundedLearner(UniversePtr universe, std::size_t max_antecedent);

  /// Registers actions up front; otherwise they are added on first sight.
  void add_action(const GroundAction& action);

  /// Applies the four inductive rules to one triplet. Throws UnknownFluent
  /// or UniverseMismatch if a state is over a different universe.
  void observe(const State& before, const GroundAction& action, const State& after);
  void observe(const Trajectory& trajectory);

  /// Intersects/unions with a learner that saw a disjoint set of triplets.
  void merge(const GroundedLearner& other);

  const UniversePtr& universe() const { return universe_; }
  std::size_t max_antecedent() const { return max_antecedent_; }
  const std::map<std::string, Entry>& entries() const { return entries_; }
  const ActionKnowledge* knowledge(const GroundAction& action) const;

  Literal literal(LitId id) const;
  LitId literal_id(const Literal& literal) const;

  bool operator==(const GroundedLearner& other) const {
    return *universe_ == *other.universe_ && entries_ == other.entries_;
  }

 private:
  Entry& entry(const GroundAction& action);
  void check_universe(const State& state) const;

  UniversePtr universe_;
  std::size_t max_antecedent_;
  std::map<std::string, Entry> entries_;
};

SafeActionModel build_action_model(const GroundedLearner& learner);

/// Renders a grounded model as a PDDL domain: one parameterless action per
/// grounding, named by action_key(), with the objects as constants.
Domain to_domain(const SafeActionModel& model, const Domain& base,
                 const std::vector<TypedName>& objects);

/// Convenience wrapper: learn from trajectories and render as a domain.
Domain learn_grounded(const Domain& base, const std::vector<Trajectory>& trajectories,
                      std::size_t max_antecedent);

}  // namespace csam
