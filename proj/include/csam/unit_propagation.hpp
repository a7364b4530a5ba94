#pragma once

#include <vector>

#include "csam/logic.hpp"

namespace csam {

/// Disjunction of literal ids. The empty clause is `false`.
using Clause = std::vector<LitId>;
/// Conjunction of clauses. The empty CNF is `true`.
using Cnf = std::vector<Clause>;

/// The canonical contradiction marker: a CNF holding one empty clause.
inline Cnf contradiction() { return Cnf{Clause{}}; }
bool is_contradiction(const Cnf& cnf);

/// Simplifies a CNF to a fixed point: unit clauses fix their literal,
/// satisfied clauses are dropped, falsified literals are removed, subsumed
/// clauses and tautologies are dropped. A derived empty clause yields
/// contradiction(). The result is sorted and independent of input order.
Cnf unit_propagate(Cnf cnf);

}  // namespace csam
