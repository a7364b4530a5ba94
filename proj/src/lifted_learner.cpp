#include "csam/lifted_learner.hpp"

#include <algorithm>
#include <numeric>
#include <optional>
#include <set>
#include <stdexcept>

#include "csam/errors.hpp"

namespace csam {

BindingSpace::BindingSpace(std::string action, std::vector<TypedName> params,
                           std::vector<TypedName> uqvs, std::vector<BoundAtom> atoms)
    : action_(std::move(action)),
      params_(std::move(params)),
      uqvs_(std::move(uqvs)),
      atoms_(std::move(atoms)) {
  for (const auto& atom : atoms_) {
    Fluent f{atom.predicate, {}};
    std::set<std::size_t> used;
    for (const auto& slot : atom.slots) {
      if (slot.is_uqv) {
        f.args.push_back(uqvs_.at(slot.index).name);
        used.insert(slot.index);
      } else {
        f.args.push_back(params_.at(slot.index).name);
      }
    }
    lifted_.push_back(std::move(f));
    atom_uqvs_.emplace_back(used.begin(), used.end());
  }
}

Fluent BindingSpace::lifted(std::size_t atom) const { return lifted_.at(atom); }

Literal BindingSpace::literal(LitId id) const {
  return Literal{lifted_.at(atom_of(id)), is_positive(id)};
}

LitId BindingSpace::literal_id(const Literal& lifted) const {
  auto it = std::lower_bound(lifted_.begin(), lifted_.end(), lifted.fluent);
  if (it == lifted_.end() || *it != lifted.fluent) {
    throw UnknownFluent("no parameter-bound literal " + to_string(lifted.fluent) + " in " +
                        action_);
  }
  return make_lit(static_cast<std::size_t>(it - lifted_.begin()), lifted.positive);
}

std::vector<Literal> BindingSpace::literals() const {
  std::vector<Literal> out;
  for (LitId id = 0; id < 2 * atoms_.size(); ++id) out.push_back(literal(id));
  return out;
}

BindingSpace enumerate_bindings(const ActionSchema& schema,
                                const std::vector<PredicateSignature>& predicates,
                                std::size_t max_uqvs) {
  std::set<std::string> param_types;
  std::set<std::string> param_names;
  for (const auto& p : schema.params) {
    param_types.insert(p.type);
    param_names.insert(p.name);
  }
  std::set<std::string> slot_types;
  for (const auto& pred : predicates) {
    for (const auto& slot : pred.params) {
      if (slot.type != "object" && param_types.count(slot.type) == 0) slot_types.insert(slot.type);
    }
  }
  std::vector<TypedName> uqvs;
  std::size_t counter = 1;
  for (const auto& type : slot_types) {
    if (uqvs.size() == max_uqvs) break;
    std::string name;
    do {
      name = "?v" + std::to_string(counter++);
    } while (param_names.count(name) != 0);
    uqvs.push_back(TypedName{name, type});
  }

  std::vector<BoundAtom> atoms;
  for (const auto& pred : predicates) {
    std::vector<std::vector<SlotTerm>> options;
    for (const auto& slot : pred.params) {
      std::vector<SlotTerm> terms;
      for (std::size_t i = 0; i < schema.params.size(); ++i) {
        if (slot.type == "object" || schema.params[i].type == slot.type) {
          terms.push_back(SlotTerm{false, i});
        }
      }
      for (std::size_t u = 0; u < uqvs.size(); ++u) {
        if (slot.type == "object" || uqvs[u].type == slot.type) terms.push_back(SlotTerm{true, u});
      }
      options.push_back(std::move(terms));
    }
    if (std::any_of(options.begin(), options.end(), [](const auto& o) { return o.empty(); })) {
      continue;
    }
    std::vector<std::size_t> idx(options.size(), 0);
    while (true) {
      BoundAtom atom{pred.name, {}};
      for (std::size_t s = 0; s < options.size(); ++s) atom.slots.push_back(options[s][idx[s]]);
      atoms.push_back(std::move(atom));
      std::size_t s = 0;
      for (; s < idx.size(); ++s) {
        if (++idx[s] < options[s].size()) break;
        idx[s] = 0;
      }
      if (s == idx.size()) break;
    }
  }

  // order atoms by their lifted rendering
  BindingSpace unsorted(schema.name, schema.params, uqvs, atoms);
  std::vector<std::size_t> order(atoms.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return unsorted.lifted(a) < unsorted.lifted(b);
  });
  std::vector<BoundAtom> sorted;
  for (std::size_t i : order) sorted.push_back(atoms[i]);
  return BindingSpace(schema.name, schema.params, std::move(uqvs), std::move(sorted));
}

namespace {

std::vector<std::vector<std::string>> uqv_substitutions(const BindingSpace& space,
                                                        const ObjectsByType& objects) {
  std::vector<const std::vector<std::string>*> pools;
  for (const auto& u : space.uqvs()) {
    auto it = objects.find(u.type);
    pools.push_back(it == objects.end() || it->second.empty() ? nullptr : &it->second);
  }
  std::vector<std::vector<std::string>> out;
  std::vector<std::size_t> idx(pools.size(), 0);
  while (true) {
    std::vector<std::string> sub;
    for (std::size_t u = 0; u < pools.size(); ++u) {
      sub.push_back(pools[u] ? (*pools[u])[idx[u]] : std::string());
    }
    out.push_back(std::move(sub));
    std::size_t u = 0;
    for (; u < idx.size(); ++u) {
      if (!pools[u]) continue;
      if (++idx[u] < pools[u]->size()) break;
      idx[u] = 0;
    }
    if (u == idx.size()) break;
  }
  return out;
}

void check_arity(const BindingSpace& space, const GroundAction& action) {
  if (action.args.size() != space.params().size()) {
    throw ArityMismatch(to_string(action) + " expects " + std::to_string(space.params().size()) +
                        " arguments");
  }
}

std::optional<Fluent> ground_atom(const BindingSpace& space, std::size_t atom,
                                  const GroundAction& action,
                                  const std::vector<std::string>& substitution) {
  const BoundAtom& a = space.atoms()[atom];
  Fluent f{a.predicate, {}};
  for (const auto& slot : a.slots) {
    if (slot.is_uqv) {
      if (substitution[slot.index].empty()) return std::nullopt;
      f.args.push_back(substitution[slot.index]);
    } else {
      f.args.push_back(action.args[slot.index]);
    }
  }
  return f;
}

}  // namespace

BindingGrounding::BindingGrounding(const BindingSpace& space, const GroundAction& action,
                                   const ObjectsByType& objects, const Universe& universe)
    : atom_count_(space.size()), active_(space.size(), 1) {
  check_arity(space, action);
  substitutions_ = uqv_substitutions(space, objects);
  table_.assign(substitutions_.size() * atom_count_, kInactive);
  for (std::size_t s = 0; s < substitutions_.size(); ++s) {
    for (std::size_t j = 0; j < atom_count_; ++j) {
      auto f = ground_atom(space, j, action, substitutions_[s]);
      if (!f) {
        active_[j] = 0;
        continue;
      }
      auto index = universe.find(*f);
      if (!index) throw UnknownFluent("grounding " + to_string(*f) + " is not in the universe");
      table_[s * atom_count_ + j] = *index;
      by_fluent_.emplace(*index, j);
    }
  }
}

std::vector<std::size_t> BindingGrounding::atoms_for(std::size_t fluent) const {
  std::set<std::size_t> atoms;
  auto [lo, hi] = by_fluent_.equal_range(fluent);
  for (auto it = lo; it != hi; ++it) atoms.insert(it->second);
  return {atoms.begin(), atoms.end()};
}

std::vector<Literal> ground(const BindingSpace& space, const GroundAction& action,
                            const Literal& lifted, const ObjectsByType& objects) {
  check_arity(space, action);
  const std::size_t atom = atom_of(space.literal_id(lifted));
  std::set<Literal> out;
  for (const auto& sub : uqv_substitutions(space, objects)) {
    if (auto f = ground_atom(space, atom, action, sub)) out.insert(Literal{*f, lifted.positive});
  }
  return {out.begin(), out.end()};
}

Literal resolve_binding(const BindingSpace& space, const GroundAction& action,
                        const Literal& grounded, const ObjectsByType& objects) {
  check_arity(space, action);
  std::set<std::size_t> candidates;
  for (const auto& sub : uqv_substitutions(space, objects)) {
    for (std::size_t j = 0; j < space.size(); ++j) {
      auto f = ground_atom(space, j, action, sub);
      if (f && *f == grounded.fluent) candidates.insert(j);
    }
  }
  if (candidates.empty()) {
    throw NoBinding("no parameter-bound literal of " + to_string(action) + " grounds to " +
                    to_string(grounded));
  }
  if (candidates.size() > 1) {
    std::string names;
    for (std::size_t j : candidates) names += " " + to_string(space.lifted(j));
    throw AmbiguousBinding(to_string(grounded) + " under " + to_string(action) +
                           " binds to several literals:" + names);
  }
  return Literal{space.lifted(*candidates.begin()), grounded.positive};
}

LiftedLearner::LiftedLearner(Domain domain, std::size_t max_antecedent, std::size_t max_uqvs)
    : domain_(std::move(domain)), max_antecedent_(max_antecedent), max_uqvs_(max_uqvs) {
  if (max_antecedent_ == 0) throw std::invalid_argument("antecedent size bound must be >= 1");
}

LiftedLearner::Entry& LiftedLearner::entry(const std::string& action) {
  auto it = entries_.find(action);
  if (it != entries_.end()) return it->second;
  const ActionSchema* schema = domain_.find_action(action);
  if (!schema) throw UnknownAction("unknown action " + action);
  BindingSpace space = enumerate_bindings(*schema, domain_.predicates, max_uqvs_);
  ActionKnowledge knowledge = ActionKnowledge::initial(space.size(), max_antecedent_);
  return entries_.emplace(action, Entry{std::move(space), std::move(knowledge)}).first->second;
}

const ActionKnowledge* LiftedLearner::knowledge(const std::string& action) const {
  auto it = entries_.find(action);
  return it == entries_.end() ? nullptr : &it->second.knowledge;
}

namespace {

// -1 when c has an atom without groundings, otherwise its truth value.
int evaluate(const IdConjunction& c, const std::vector<signed char>& values) {
  for (LitId x : c) {
    const signed char v = values[atom_of(x)];
    if (v < 0) return -1;
  }
  for (LitId x : c) {
    if ((values[atom_of(x)] != 0) != is_positive(x)) return 0;
  }
  return 1;
}

}  // namespace

void LiftedLearner::observe(const State& before, const GroundAction& action, const State& after,
                            const std::vector<TypedName>& objects) {
  if (!(*before.universe() == *after.universe())) {
    throw UniverseMismatch("triplet states are over different universes");
  }
  const Universe& universe = *before.universe();
  const ObjectsByType by_type = objects_by_type(domain_, objects);
  if (!domain_.find_action(action.name)) throw UnknownAction("unknown action " + action.name);

  // resolve every changed fluent before touching the knowledge
  const auto existing = entries_.find(action.name);
  const BindingSpace space = existing != entries_.end()
                                 ? existing->second.space
                                 : enumerate_bindings(*domain_.find_action(action.name),
                                                      domain_.predicates, max_uqvs_);
  const BindingGrounding grounding(space, action, by_type, universe);
  std::vector<LitId> results;
  for (std::size_t i = 0; i < universe.size(); ++i) {
    if (before.test(i) == after.test(i)) continue;
    const auto atoms = grounding.atoms_for(i);
    const Literal changed{universe.fluent(i), after.test(i)};
    if (atoms.empty()) {
      throw NoBinding("no parameter-bound literal of " + to_string(action) + " grounds to " +
                      to_string(changed));
    }
    if (atoms.size() > 1) {
      std::string names;
      for (std::size_t j : atoms) names += " " + to_string(space.lifted(j));
      throw AmbiguousBinding(to_string(changed) + " under " + to_string(action) +
                             " binds to several literals:" + names);
    }
    results.push_back(make_lit(atoms.front(), after.test(i)));
  }

  ActionKnowledge& k = entry(action.name).knowledge;
  // Rule 3
  for (LitId l : results) k.must_be_result[l] = 1;

  const std::size_t atom_count = space.size();
  std::vector<signed char> was(atom_count);
  std::vector<signed char> now(atom_count);
  for (std::size_t s = 0; s < grounding.substitutions().size(); ++s) {
    for (std::size_t j = 0; j < atom_count; ++j) {
      const std::size_t f = grounding.fluent(s, j);
      was[j] = f == BindingGrounding::kInactive ? -1 : static_cast<signed char>(before.test(f));
      now[j] = f == BindingGrounding::kInactive ? -1 : static_cast<signed char>(after.test(f));
    }
    for (std::size_t j = 0; j < atom_count; ++j) {
      if (was[j] < 0) continue;
      // Rule 1: some grounding of the literal is false in s
      k.pre[make_lit(j, was[j] == 0)] = 0;
      // Rule 2
      std::erase_if(k.pos_ante[make_lit(j, now[j] == 0)],
                    [&](const IdConjunction& c) { return evaluate(c, was) == 1; });
      // Rule 4
      if (was[j] != now[j]) {
        std::erase_if(k.pos_ante[make_lit(j, now[j] != 0)],
                      [&](const IdConjunction& c) { return evaluate(c, was) == 0; });
      }
    }
  }
  k.check_size_bound();
}

void LiftedLearner::observe(const Trajectory& trajectory) {
  for (std::size_t i = 0; i < trajectory.actions.size(); ++i) {
    const std::string where = "step " + std::to_string(i) + " " +
                              to_string(trajectory.actions[i]) + ": ";
    try {
      observe(trajectory.states[i], trajectory.actions[i], trajectory.states[i + 1],
              trajectory.objects);
    } catch (const AmbiguousBinding& e) {
      throw AmbiguousBinding(where + e.what());
    } catch (const NoBinding& e) {
      throw NoBinding(where + e.what());
    }
  }
}

void LiftedLearner::merge(const LiftedLearner& other) {
  if (max_antecedent_ != other.max_antecedent_ || max_uqvs_ != other.max_uqvs_) {
    throw std::invalid_argument("cannot merge learners with different bounds");
  }
  for (const auto& [name, theirs] : other.entries_) {
    auto it = entries_.find(name);
    if (it == entries_.end()) {
      entries_.emplace(name, theirs);
    } else {
      it->second.knowledge.merge(theirs.knowledge);
    }
  }
}

namespace {

std::vector<TypedName> variables_of(const BindingSpace& space, const std::vector<LitId>& lits) {
  std::set<std::size_t> used;
  for (LitId l : lits) {
    for (std::size_t u : space.atom_uqvs(atom_of(l))) used.insert(u);
  }
  std::vector<TypedName> out;
  for (std::size_t u : used) out.push_back(space.uqvs()[u]);
  return out;
}

Formula quantify(std::vector<TypedName> variables, Formula body) {
  if (variables.empty()) return body;
  return Formula::forall(std::move(variables), std::move(body));
}

}  // namespace

ActionSchema build_lifted_action(const LiftedLearner::Entry& entry, const ActionSchema& schema) {
  const BindingSpace& space = entry.space;
  const IdSafeAction built = build_safe_action(entry.knowledge, more_than_one_candidate);
  auto name = [&](LitId id) { return space.literal(id); };

  std::vector<Formula> conjuncts;
  for (LitId l : built.pre_literals) {
    conjuncts.push_back(quantify(variables_of(space, {l}), Formula::literal(name(l))));
  }
  for (const auto& clause : built.clauses) {
    auto f = clause_formula(clause, name);
    if (!f) continue;
    std::vector<LitId> mentioned{clause.result};
    for (const auto& c : clause.not_ante) mentioned.insert(mentioned.end(), c.begin(), c.end());
    if (clause.ante) mentioned.insert(mentioned.end(), clause.ante->begin(), clause.ante->end());
    conjuncts.push_back(quantify(variables_of(space, mentioned), std::move(*f)));
  }

  std::vector<Effect> effects;
  for (const auto& e : built.effects) {
    Effect effect;
    std::vector<LitId> mentioned = e.antecedent;
    mentioned.push_back(e.result);
    effect.variables = variables_of(space, mentioned);
    for (LitId l : e.antecedent) effect.antecedent.push_back(name(l));
    effect.result.push_back(name(e.result));
    effects.push_back(std::move(effect));
  }
  return ActionSchema{schema.name, schema.params, Formula::conjunction(std::move(conjuncts)),
                      normalize_effects(std::move(effects))};
}

Domain LiftedLearner::build() const {
  Domain out;
  out.name = domain_.name;
  out.requirements = learned_requirements();
  out.types = domain_.types;
  out.constants = domain_.constants;
  out.predicates = domain_.predicates;
  for (const auto& schema : domain_.actions) {
    auto it = entries_.find(schema.name);
    if (it != entries_.end()) out.actions.push_back(build_lifted_action(it->second, schema));
  }
  return out;
}

LiftedRun learn_lifted(const Domain& base, const std::vector<Trajectory>& trajectories,
                       std::size_t max_antecedent, std::size_t max_uqvs, bool skip_ambiguous) {
  LiftedLearner learner(base, max_antecedent, max_uqvs);
  LiftedRun run;
  for (std::size_t i = 0; i < trajectories.size(); ++i) {
    if (!skip_ambiguous) {
      learner.observe(trajectories[i]);
      continue;
    }
    LiftedLearner attempt = learner;
    try {
      attempt.observe(trajectories[i]);
    } catch (const AmbiguousBinding&) {
      run.skipped.push_back(i);
      continue;
    }
    learner = std::move(attempt);
  }
  run.domain = learner.build();
  return run;
}

}  // namespace csam
