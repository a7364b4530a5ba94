#include "csam/learner_core.hpp"

#include <algorithm>

#include "csam/errors.hpp"

namespace csam {

ActionKnowledge ActionKnowledge::initial(std::size_t atom_count, std::size_t max_antecedent) {
  ActionKnowledge k;
  k.atom_count = atom_count;
  k.max_antecedent = max_antecedent;
  k.pre.assign(2 * atom_count, 1);
  k.must_be_result.assign(2 * atom_count, 0);
  const auto candidates = enumerate_id_antecedents(atom_count, max_antecedent);
  k.pos_ante.assign(2 * atom_count, candidates);
  return k;
}

std::size_t ActionKnowledge::pre_size() const {
  return static_cast<std::size_t>(std::count(pre.begin(), pre.end(), 1));
}

std::size_t ActionKnowledge::must_be_result_size() const {
  return static_cast<std::size_t>(std::count(must_be_result.begin(), must_be_result.end(), 1));
}

std::size_t ActionKnowledge::pos_ante_total() const {
  std::size_t total = 0;
  for (const auto& p : pos_ante) total += p.size();
  return total;
}

std::size_t ActionKnowledge::pos_ante_max() const {
  std::size_t best = 0;
  for (const auto& p : pos_ante) best = std::max(best, p.size());
  return best;
}

void ActionKnowledge::check_size_bound() const {
  const std::size_t bound = pos_ante_bound();
  for (std::size_t l = 0; l < pos_ante.size(); ++l) {
    if (pos_ante[l].size() > bound) {
      throw SizeBoundViolation("PosAnte of literal " + std::to_string(l) + " holds " +
                               std::to_string(pos_ante[l].size()) + " > " + std::to_string(bound));
    }
  }
}

void ActionKnowledge::merge(const ActionKnowledge& other) {
  if (other.atom_count != atom_count || other.max_antecedent != max_antecedent) {
    throw UniverseMismatch("cannot merge knowledge over different literal sets");
  }
  for (std::size_t l = 0; l < pre.size(); ++l) {
    pre[l] = static_cast<char>(pre[l] != 0 && other.pre[l] != 0);
    must_be_result[l] = static_cast<char>(must_be_result[l] != 0 || other.must_be_result[l] != 0);
    std::vector<IdConjunction> both;
    std::set_intersection(pos_ante[l].begin(), pos_ante[l].end(), other.pos_ante[l].begin(),
                          other.pos_ante[l].end(), std::back_inserter(both));
    pos_ante[l] = std::move(both);
  }
}

const std::vector<std::string>& learned_requirements() {
  static const std::vector<std::string> requirements = {
      ":strips",
      ":typing",
      ":negative-preconditions",
      ":disjunctive-preconditions",
      ":universal-preconditions",
      ":conditional-effects"};
  return requirements;
}

bool more_than_one_candidate(const std::vector<IdConjunction>& pa) { return pa.size() > 1; }

IdSafeAction build_safe_action(
    const ActionKnowledge& knowledge,
    const std::function<bool(const std::vector<IdConjunction>& pa)>& ambiguity_guard) {
  IdSafeAction out;
  for (LitId l = 0; l < knowledge.literal_count(); ++l) {
    if (knowledge.pre[l] != 0) out.pre_literals.push_back(l);
  }
  for (LitId l = 0; l < knowledge.literal_count(); ++l) {
    if (knowledge.pre[l] != 0 || knowledge.pos_ante[l].empty()) continue;

    std::vector<IdConjunction> pa;
    for (const auto& c : knowledge.pos_ante[l]) {
      const bool touches_pre =
          std::any_of(c.begin(), c.end(), [&](LitId x) { return knowledge.pre[x] != 0; });
      if (!touches_pre) pa.push_back(c);
    }

    Cnf not_ante;
    Cnf ante;
    for (const auto& c : pa) {
      Clause negated;
      for (LitId x : c) {
        negated.push_back(negation(x));
        ante.push_back(Clause{x});
      }
      not_ante.push_back(std::move(negated));
    }
    not_ante = unit_propagate(std::move(not_ante));
    ante = unit_propagate(std::move(ante));
    const bool ante_false = is_contradiction(ante);
    std::vector<LitId> ante_literals;
    if (!ante_false) {
      for (const auto& unit : ante) ante_literals.push_back(unit.front());
    }

    if (knowledge.must_be_result[l] != 0) {
      // an unsatisfiable Ante never fires, so the effect is omitted
      if (!ante_false) out.effects.push_back(LearnedEffect{ante_literals, l});
      if (ambiguity_guard(pa)) {
        LearnedClause clause{l, not_ante, std::nullopt};
        if (!ante_false) clause.ante = ante_literals;
        out.clauses.push_back(std::move(clause));
      }
    } else {
      out.clauses.push_back(LearnedClause{l, not_ante, std::nullopt});
    }
  }
  return out;
}

std::optional<Formula> clause_formula(const LearnedClause& clause,
                                      const std::function<Literal(LitId)>& name) {
  std::vector<Formula> disjuncts{Formula::literal(name(clause.result))};
  if (!is_contradiction(clause.not_ante)) {
    if (clause.not_ante.empty()) return std::nullopt;
    auto clause_to_formula = [&](const Clause& c) {
      if (c.size() == 1) return Formula::literal(name(c.front()));
      std::vector<Formula> lits;
      for (LitId x : c) lits.push_back(Formula::literal(name(x)));
      return Formula::disjunction(std::move(lits));
    };
    if (clause.not_ante.size() == 1) {
      // a single clause flattens into the outer disjunction
      for (LitId x : clause.not_ante.front()) disjuncts.push_back(Formula::literal(name(x)));
    } else {
      std::vector<Formula> conjuncts;
      for (const auto& c : clause.not_ante) conjuncts.push_back(clause_to_formula(c));
      disjuncts.push_back(Formula::conjunction(std::move(conjuncts)));
    }
  }
  if (clause.ante) {
    if (clause.ante->empty()) return std::nullopt;
    if (clause.ante->size() == 1) {
      disjuncts.push_back(Formula::literal(name(clause.ante->front())));
    } else {
      std::vector<Formula> lits;
      for (LitId x : *clause.ante) lits.push_back(Formula::literal(name(x)));
      disjuncts.push_back(Formula::conjunction(std::move(lits)));
    }
  }
  if (disjuncts.size() == 1) return disjuncts.front();
  return Formula::disjunction(std::move(disjuncts));
}

}  // namespace csam
