#pragma once

// Per-action learning state shared by the grounded and lifted learners,
// expressed over dense literal ids (see logic.hpp), and the compilation of
// that state into a safe precondition and effect set.

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "csam/formula.hpp"
#include "csam/unit_propagation.hpp"

namespace csam {

/// pre(a), MustBeResult(a) and PosAnte(., a) for one action. Indexed by
/// LitId over 2 * atom_count literals.
struct ActionKnowledge {
  std::size_t atom_count = 0;
  std::size_t max_antecedent = 1;
  std::vector<char> pre;
  std::vector<char> must_be_result;
  std::vector<std::vector<IdConjunction>> pos_ante;

  /// pre = every literal, MustBeResult = {}, PosAnte(l) = every consistent
  /// conjunction of at most `max_antecedent` literals plus `true`.
  static ActionKnowledge initial(std::size_t atom_count, std::size_t max_antecedent);

  std::size_t literal_count() const { return 2 * atom_count; }
  std::size_t pre_size() const;
  std::size_t must_be_result_size() const;
  std::size_t pos_ante_total() const;
  std::size_t pos_ante_max() const;
  /// Upper bound on any single PosAnte set: sum of C(2|F|, i) for i <= n.
  std::size_t pos_ante_bound() const { return antecedent_bound(literal_count(), max_antecedent); }
  /// Throws SizeBoundViolation.
  void check_size_bound() const;

  /// Combines knowledge learned from disjoint triplet sets.
  void merge(const ActionKnowledge& other);

  bool operator==(const ActionKnowledge&) const = default;
};

/// `result or NotAnte [or Ante]` added to pre*.
struct LearnedClause {
  LitId result = 0;
  /// Minimized NotAnte; contradiction() when it is `false`.
  Cnf not_ante;
  /// Minimized Ante when the ambiguity disjunct is present; nullopt if the
  /// disjunct is absent or `false`.
  std::optional<std::vector<LitId>> ante;
};

struct LearnedEffect {
  std::vector<LitId> antecedent;
  LitId result = 0;
};

struct IdSafeAction {
  std::vector<LitId> pre_literals;
  std::vector<LearnedClause> clauses;
  std::vector<LearnedEffect> effects;
};

/// Compiles pre/MustBeResult/PosAnte into pre* and effects. `ambiguity_guard`
/// decides whether a MustBeResult literal with candidate set PA gets the
/// `l or NotAnte or Ante` clause.
IdSafeAction build_safe_action(
    const ActionKnowledge& knowledge,
    const std::function<bool(const std::vector<IdConjunction>& pa)>& ambiguity_guard);

/// The grounded guard: PA is not a single clause.
bool more_than_one_candidate(const std::vector<IdConjunction>& pa);

/// Requirements declared by every learned domain.
const std::vector<std::string>& learned_requirements();

/// Formula for one learned clause, or nullopt when it is trivially true.
std::optional<Formula> clause_formula(const LearnedClause& clause,
                                      const std::function<Literal(LitId)>& name);

}  // namespace csam
