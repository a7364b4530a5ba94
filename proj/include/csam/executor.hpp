#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "csam/pddl.hpp"

namespace csam {

/// Identifier used to match grounded actions across models: the schema
/// name, followed by `_<object>` per argument. A parameterless action named
/// `stop_f1` therefore matches `(stop f1)`.
std::string action_key(const GroundAction& action);

struct GroundLiteralRef {
  std::size_t fluent = 0;
  bool positive = true;
};

/// Precondition compiled against a universe; `forall` is expanded.
struct CompiledFormula {
  enum class Kind { kLiteral, kAnd, kOr, kNot };
  Kind kind = Kind::kAnd;
  GroundLiteralRef literal;
  std::vector<CompiledFormula> children;

  bool evaluate(const State& state) const;
};

struct GroundEffect {
  std::vector<GroundLiteralRef> antecedent;
  std::vector<GroundLiteralRef> result;
};

struct GroundOperator {
  GroundAction action;
  std::string key;
  CompiledFormula precondition;
  std::vector<GroundEffect> effects;
};

/// An action model grounded over a fixed object set. Universal effects are
/// expanded over every object of the quantified type.
class GroundModel {
 public:
  GroundModel(const Domain& domain, const std::vector<TypedName>& objects);

  const UniversePtr& universe() const { return universe_; }
  const std::vector<GroundOperator>& operators() const { return operators_; }

  const GroundOperator* find(std::string_view key) const;
  /// Throws UnknownAction.
  const GroundOperator& get(const GroundAction& action) const;

  bool applicable(const GroundOperator& op, const State& state) const;
  /// Throws PreconditionViolated (step 0) or ConflictingEffects.
  State apply(const GroundOperator& op, const State& state,
              std::vector<std::size_t>* fired = nullptr) const;

  bool applicable(const GroundAction& action, const State& state) const;
  State apply(const GroundAction& action, const State& state) const;

  /// Applicable operators in key order.
  std::vector<const GroundOperator*> applicable_operators(const State& state) const;

 private:
  UniversePtr universe_;
  std::vector<GroundOperator> operators_;
  std::map<std::string, std::size_t, std::less<>> by_key_;
};

struct ExecutionTrace {
  Trajectory trajectory;
  /// Indices into the operator's effect list that fired at each step.
  std::vector<std::vector<std::size_t>> fired;
};

struct PlanVerdict {
  bool valid = true;
  /// 0-based step that failed; equals the plan length for a goal failure.
  std::optional<std::size_t> failed_step;
  std::string reason;
};

PlanVerdict validate_plan(const GroundModel& model, const Problem& problem,
                          const std::vector<GroundAction>& plan);
PlanVerdict validate_plan(const Domain& domain, const Problem& problem,
                          const std::vector<GroundAction>& plan);

/// Throws PreconditionViolated carrying the failing step index.
ExecutionTrace execute_plan(const GroundModel& model, const Problem& problem,
                            const std::vector<GroundAction>& plan);
Trajectory generate_trajectory(const Domain& domain, const Problem& problem,
                               const std::vector<GroundAction>& plan);

/// Uniformly samples an applicable action at each step; stops early at a
/// dead end. Deterministic for a given seed.
Trajectory random_walk(const GroundModel& model, const Problem& problem,
                       std::size_t length, std::uint64_t seed);
Trajectory random_walk(const Domain& domain, const Problem& problem,
                       std::size_t length, std::uint64_t seed);

/// Throws DisjunctiveAntecedent if an action has two effects sharing a
/// result literal.
void require_single_effect_per_result(const Domain& domain);

}  // namespace csam
