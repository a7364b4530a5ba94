#include "csam/grounded_learner.hpp"

#include <algorithm>
#include <stdexcept>

#include "csam/errors.hpp"
#include "csam/executor.hpp"

namespace csam {

GroundedLearner::GroundedLearner(UniversePtr universe, std::size_t max_antecedent)
    : universe_(std::move(universe)), max_antecedent_(max_antecedent) {
  if (max_antecedent_ == 0) throw std::invalid_argument("antecedent size bound must be >= 1");
}

void GroundedLearner::add_action(const GroundAction& action) { entry(action); }

GroundedLearner::Entry& GroundedLearner::entry(const GroundAction& action) {
  const std::string key = action_key(action);
  auto it = entries_.find(key);
  if (it == entries_.end()) {
    it = entries_
             .emplace(key, Entry{action, ActionKnowledge::initial(universe_->size(), max_antecedent_)})
             .first;
  }
  return it->second;
}

const ActionKnowledge* GroundedLearner::knowledge(const GroundAction& action) const {
  auto it = entries_.find(action_key(action));
  return it == entries_.end() ? nullptr : &it->second.knowledge;
}

Literal GroundedLearner::literal(LitId id) const {
  return Literal{universe_->fluent(atom_of(id)), is_positive(id)};
}

LitId GroundedLearner::literal_id(const Literal& literal) const {
  return make_lit(universe_->index_of(literal.fluent), literal.positive);
}

void GroundedLearner::check_universe(const State& state) const {
  if (state.universe() == universe_ || *state.universe() == *universe_) return;
  for (const auto& f : state.universe()->fluents()) {
    if (!universe_->find(f)) throw UnknownFluent("triplet references unknown fluent " + to_string(f));
  }
  throw UniverseMismatch("state does not assign every fluent of the learner universe");
}

namespace {

bool holds_in(const State& state, const IdConjunction& c) {
  return std::all_of(c.begin(), c.end(),
                     [&](LitId l) { return state.test(atom_of(l)) == is_positive(l); });
}

}  // namespace

void GroundedLearner::observe(const State& before, const GroundAction& action,
                              const State& after) {
  check_universe(before);
  check_universe(after);
  ActionKnowledge& k = entry(action).knowledge;
  const std::size_t atoms = universe_->size();

  for (std::size_t i = 0; i < atoms; ++i) {
    const bool was = before.test(i);
    const bool now = after.test(i);
    // Rule 1: the literal false in s is not a precondition
    k.pre[make_lit(i, !was)] = 0;
    // Rule 3: a literal that became true must be a result
    if (was != now) k.must_be_result[make_lit(i, now)] = 1;
  }
  for (std::size_t i = 0; i < atoms; ++i) {
    const bool was = before.test(i);
    const bool now = after.test(i);
    // Rule 2: the literal false in s' has no antecedent that held in s
    std::erase_if(k.pos_ante[make_lit(i, !now)],
                  [&](const IdConjunction& c) { return holds_in(before, c); });
    // Rule 4: a literal in s' \ s keeps only antecedents that held in s
    if (was != now) {
      std::erase_if(k.pos_ante[make_lit(i, now)],
                    [&](const IdConjunction& c) { return !holds_in(before, c); });
    }
  }
  k.check_size_bound();
}

void GroundedLearner::observe(const Trajectory& trajectory) {
  for (std::size_t i = 0; i < trajectory.actions.size(); ++i) {
    observe(trajectory.states[i], trajectory.actions[i], trajectory.states[i + 1]);
  }
}

void GroundedLearner::merge(const GroundedLearner& other) {
  if (!(*universe_ == *other.universe_) || max_antecedent_ != other.max_antecedent_) {
    throw UniverseMismatch("cannot merge learners over different universes");
  }
  for (const auto& [key, theirs] : other.entries_) {
    auto it = entries_.find(key);
    if (it == entries_.end()) {
      entries_.emplace(key, theirs);
    } else {
      it->second.knowledge.merge(theirs.knowledge);
    }
  }
}

SafeActionModel build_action_model(const GroundedLearner& learner) {
  SafeActionModel model;
  auto name = [&](LitId id) { return learner.literal(id); };
  for (const auto& [key, entry] : learner.entries()) {
    const IdSafeAction built = build_safe_action(entry.knowledge, more_than_one_candidate);
    std::vector<Formula> conjuncts;
    for (LitId l : built.pre_literals) conjuncts.push_back(Formula::literal(name(l)));
    for (const auto& clause : built.clauses) {
      if (auto f = clause_formula(clause, name)) conjuncts.push_back(std::move(*f));
    }
    std::vector<Effect> effects;
    for (const auto& e : built.effects) {
      Effect effect;
      for (LitId l : e.antecedent) effect.antecedent.push_back(name(l));
      effect.result.push_back(name(e.result));
      effects.push_back(std::move(effect));
    }
    model.actions.push_back(SafeGroundAction{entry.action, Formula::conjunction(std::move(conjuncts)),
                                             normalize_effects(std::move(effects))});
  }
  return model;
}

Domain to_domain(const SafeActionModel& model, const Domain& base,
                 const std::vector<TypedName>& objects) {
  Domain out;
  out.name = base.name;
  out.requirements = learned_requirements();
  out.types = base.types;
  out.constants = base.constants;
  for (const auto& o : objects) {
    const bool known = std::any_of(out.constants.begin(), out.constants.end(),
                                   [&](const TypedName& c) { return c.name == o.name; });
    if (!known) out.constants.push_back(o);
  }
  std::stable_sort(out.constants.begin(), out.constants.end(),
                   [](const TypedName& a, const TypedName& b) {
                     return std::tie(a.type, a.name) < std::tie(b.type, b.name);
                   });
  out.predicates = base.predicates;
  for (const auto& a : model.actions) {
    out.actions.push_back(ActionSchema{action_key(a.action), {}, a.precondition, a.effects});
  }
  return out;
}

Domain learn_grounded(const Domain& base, const std::vector<Trajectory>& trajectories,
                      std::size_t max_antecedent) {
  if (trajectories.empty()) return to_domain(SafeActionModel{}, base, {});
  const UniversePtr universe = make_universe(base, trajectories.front().objects);
  GroundedLearner learner(universe, max_antecedent);
  for (const auto& t : trajectories) learner.observe(t);
  return to_domain(build_action_model(learner), base, trajectories.front().objects);
}

}  // namespace csam
