#include "csam/executor.hpp"

#include <algorithm>
#include <random>
#include <set>

#include "csam/errors.hpp"

namespace csam {

std::string action_key(const GroundAction& action) {
  std::string key = action.name;
  for (const auto& a : action.args) key += "_" + a;
  return key;
}

bool CompiledFormula::evaluate(const State& state) const {
  switch (kind) {
    case Kind::kLiteral:
      return state.test(literal.fluent) == literal.positive;
    case Kind::kAnd:
      return std::all_of(children.begin(), children.end(),
                         [&](const CompiledFormula& c) { return c.evaluate(state); });
    case Kind::kOr:
      return std::any_of(children.begin(), children.end(),
                         [&](const CompiledFormula& c) { return c.evaluate(state); });
    case Kind::kNot:
      return !children.front().evaluate(state);
  }
  return false;
}

namespace {

using Substitution = std::map<std::string, std::string>;

class Grounder {
 public:
  Grounder(const UniversePtr& universe, const ObjectsByType& objects)
      : universe_(universe), objects_(objects) {}

  GroundLiteralRef literal(const Literal& l, const Substitution& sub) const {
    Fluent f{l.fluent.predicate, {}};
    for (const auto& arg : l.fluent.args) {
      auto it = sub.find(arg);
      f.args.push_back(it == sub.end() ? arg : it->second);
    }
    return GroundLiteralRef{universe_->index_of(f), l.positive};
  }

  CompiledFormula formula(const Formula& f, Substitution& sub) const {
    CompiledFormula out;
    switch (f.kind()) {
      case Formula::Kind::kLiteral:
        out.kind = CompiledFormula::Kind::kLiteral;
        out.literal = literal(f.lit(), sub);
        return out;
      case Formula::Kind::kAnd:
      case Formula::Kind::kOr:
        out.kind = f.kind() == Formula::Kind::kAnd ? CompiledFormula::Kind::kAnd
                                                   : CompiledFormula::Kind::kOr;
        for (const auto& c : f.children()) out.children.push_back(formula(c, sub));
        return out;
      case Formula::Kind::kNot:
        out.kind = CompiledFormula::Kind::kNot;
        out.children.push_back(formula(f.children().front(), sub));
        return out;
      case Formula::Kind::kForall:
        out.kind = CompiledFormula::Kind::kAnd;
        for_each_substitution(f.variables(), sub, [&](Substitution& inner) {
          out.children.push_back(formula(f.children().front(), inner));
        });
        return out;
    }
    return out;
  }

  /// Calls fn once per assignment of `vars` to objects of their types,
  /// extending `sub` in place.
  template <typename Fn>
  void for_each_substitution(const std::vector<TypedName>& vars, Substitution& sub,
                             Fn&& fn) const {
    auto recurse = [&](auto&& self, std::size_t i) -> void {
      if (i == vars.size()) {
        fn(sub);
        return;
      }
      auto it = objects_.find(vars[i].type);
      if (it == objects_.end()) return;
      const auto saved = sub.find(vars[i].name) == sub.end()
                             ? std::optional<std::string>{}
                             : std::optional<std::string>{sub[vars[i].name]};
      for (const auto& obj : it->second) {
        sub[vars[i].name] = obj;
        self(self, i + 1);
      }
      if (saved) {
        sub[vars[i].name] = *saved;
      } else {
        sub.erase(vars[i].name);
      }
    };
    recurse(recurse, 0);
  }

 private:
  const UniversePtr& universe_;
  const ObjectsByType& objects_;
};

}  // namespace

GroundModel::GroundModel(const Domain& domain, const std::vector<TypedName>& objects)
    : universe_(make_universe(domain, objects)) {
  const auto by_type = objects_by_type(domain, objects);
  Grounder grounder(universe_, by_type);
  for (const auto& schema : domain.actions) {
    Substitution sub;
    grounder.for_each_substitution(schema.params, sub, [&](Substitution& binding) {
      GroundOperator op;
      op.action.name = schema.name;
      for (const auto& p : schema.params) op.action.args.push_back(binding.at(p.name));
      op.key = action_key(op.action);
      op.precondition = grounder.formula(schema.precondition, binding);
      for (const auto& effect : schema.effects) {
        grounder.for_each_substitution(effect.variables, binding, [&](Substitution& full) {
          GroundEffect ground;
          for (const auto& l : effect.antecedent) ground.antecedent.push_back(grounder.literal(l, full));
          for (const auto& l : effect.result) ground.result.push_back(grounder.literal(l, full));
          op.effects.push_back(std::move(ground));
        });
      }
      operators_.push_back(std::move(op));
    });
  }
  std::sort(operators_.begin(), operators_.end(),
            [](const GroundOperator& a, const GroundOperator& b) { return a.action < b.action; });
  for (std::size_t i = 0; i < operators_.size(); ++i) by_key_.emplace(operators_[i].key, i);
}

const GroundOperator* GroundModel::find(std::string_view key) const {
  auto it = by_key_.find(key);
  return it == by_key_.end() ? nullptr : &operators_[it->second];
}

const GroundOperator& GroundModel::get(const GroundAction& action) const {
  const auto* op = find(action_key(action));
  if (op == nullptr) throw UnknownAction("unknown grounded action " + to_string(action));
  return *op;
}

bool GroundModel::applicable(const GroundOperator& op, const State& state) const {
  return op.precondition.evaluate(state);
}

State GroundModel::apply(const GroundOperator& op, const State& state,
                         std::vector<std::size_t>* fired) const {
  if (!applicable(op, state)) {
    throw PreconditionViolated("precondition of " + to_string(op.action) + " violated", 0);
  }
  State next = state;
  // fluent -> polarity assigned this step
  std::map<std::size_t, bool> assigned;
  for (std::size_t e = 0; e < op.effects.size(); ++e) {
    const auto& effect = op.effects[e];
    const bool fires = std::all_of(
        effect.antecedent.begin(), effect.antecedent.end(),
        [&](const GroundLiteralRef& l) { return state.test(l.fluent) == l.positive; });
    if (!fires) continue;
    if (fired != nullptr) fired->push_back(e);
    for (const auto& r : effect.result) {
      auto [it, inserted] = assigned.emplace(r.fluent, r.positive);
      if (!inserted && it->second != r.positive) {
        throw ConflictingEffects(to_string(op.action) + " assigns both polarities to " +
                                 to_string(universe_->fluent(r.fluent)));
      }
      next.set(r.fluent, r.positive);
    }
  }
  return next;
}

bool GroundModel::applicable(const GroundAction& action, const State& state) const {
  return applicable(get(action), state);
}

State GroundModel::apply(const GroundAction& action, const State& state) const {
  return apply(get(action), state);
}

std::vector<const GroundOperator*> GroundModel::applicable_operators(const State& state) const {
  std::vector<const GroundOperator*> out;
  for (const auto& op : operators_) {
    if (applicable(op, state)) out.push_back(&op);
  }
  return out;
}

namespace {

bool goal_holds(const State& state, const std::vector<Literal>& goal) {
  return std::all_of(goal.begin(), goal.end(), [&](const Literal& l) { return state.holds(l); });
}

State problem_init(const GroundModel& model, const Problem& problem) {
  return State(model.universe(), problem.init);
}

}  // namespace

PlanVerdict validate_plan(const GroundModel& model, const Problem& problem,
                          const std::vector<GroundAction>& plan) {
  State state = problem_init(model, problem);
  for (std::size_t i = 0; i < plan.size(); ++i) {
    const auto* op = model.find(action_key(plan[i]));
    if (op == nullptr) return {false, i, "unknown action " + to_string(plan[i])};
    if (!model.applicable(*op, state)) {
      return {false, i, "precondition of " + to_string(plan[i]) + " not satisfied"};
    }
    try {
      state = model.apply(*op, state);
    } catch (const ConflictingEffects& e) {
      return {false, i, e.what()};
    }
  }
  if (!goal_holds(state, problem.goal)) return {false, plan.size(), "goal not satisfied"};
  return {};
}

PlanVerdict validate_plan(const Domain& domain, const Problem& problem,
                          const std::vector<GroundAction>& plan) {
  return validate_plan(GroundModel(domain, problem.objects), problem, plan);
}

ExecutionTrace execute_plan(const GroundModel& model, const Problem& problem,
                            const std::vector<GroundAction>& plan) {
  ExecutionTrace trace;
  trace.trajectory.objects = problem.objects;
  trace.trajectory.states.push_back(problem_init(model, problem));
  for (std::size_t i = 0; i < plan.size(); ++i) {
    const auto* op = model.find(action_key(plan[i]));
    if (op == nullptr) throw UnknownAction("step " + std::to_string(i) + ": " + to_string(plan[i]));
    const State& current = trace.trajectory.states.back();
    if (!model.applicable(*op, current)) {
      throw PreconditionViolated(
          "step " + std::to_string(i) + ": precondition of " + to_string(plan[i]) + " violated",
          i);
    }
    std::vector<std::size_t> fired;
    State next = model.apply(*op, current, &fired);
    trace.trajectory.actions.push_back(op->action);
    trace.trajectory.states.push_back(std::move(next));
    trace.fired.push_back(std::move(fired));
  }
  return trace;
}

Trajectory generate_trajectory(const Domain& domain, const Problem& problem,
                               const std::vector<GroundAction>& plan) {
  return execute_plan(GroundModel(domain, problem.objects), problem, plan).trajectory;
}

Trajectory random_walk(const GroundModel& model, const Problem& problem, std::size_t length,
                       std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  Trajectory trajectory;
  trajectory.objects = problem.objects;
  trajectory.states.push_back(problem_init(model, problem));
  for (std::size_t step = 0; step < length; ++step) {
    const auto options = model.applicable_operators(trajectory.states.back());
    if (options.empty()) break;
    std::uniform_int_distribution<std::size_t> pick(0, options.size() - 1);
    const GroundOperator& op = *options[pick(rng)];
    State next = model.apply(op, trajectory.states.back());
    trajectory.actions.push_back(op.action);
    trajectory.states.push_back(std::move(next));
  }
  return trajectory;
}

Trajectory random_walk(const Domain& domain, const Problem& problem, std::size_t length,
                       std::uint64_t seed) {
  return random_walk(GroundModel(domain, problem.objects), problem, length, seed);
}

void require_single_effect_per_result(const Domain& domain) {
  for (const auto& action : domain.actions) {
    std::set<Literal> results;
    for (const auto& effect : action.effects) {
      for (const auto& r : effect.result) {
        if (!results.insert(r).second) {
          throw DisjunctiveAntecedent("action " + action.name + " has several effects with result " +
                                      to_string(r));
        }
      }
    }
  }
}

}  // namespace csam
