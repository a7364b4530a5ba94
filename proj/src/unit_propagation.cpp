#include "csam/unit_propagation.hpp"

#include <algorithm>
#include <set>

namespace csam {

bool is_contradiction(const Cnf& cnf) {
  return std::any_of(cnf.begin(), cnf.end(), [](const Clause& c) { return c.empty(); });
}

namespace {

bool clause_less(const Clause& a, const Clause& b) {
  if (a.size() != b.size()) return a.size() < b.size();
  return a < b;
}

}  // namespace

Cnf unit_propagate(Cnf cnf) {
  for (auto& clause : cnf) {
    std::sort(clause.begin(), clause.end());
    clause.erase(std::unique(clause.begin(), clause.end()), clause.end());
  }
  // tautologies (x or not x) are always satisfied
  std::erase_if(cnf, [](const Clause& c) {
    for (std::size_t i = 1; i < c.size(); ++i) {
      if (atom_of(c[i - 1]) == atom_of(c[i])) return true;
    }
    return false;
  });
  if (is_contradiction(cnf)) return contradiction();

  bool changed = true;
  while (changed) {
    changed = false;
    std::set<LitId> units;
    for (const auto& c : cnf) {
      if (c.size() == 1) units.insert(c.front());
    }
    for (LitId u : units) {
      if (units.count(negation(u)) != 0) return contradiction();
    }

    Cnf next;
    for (auto& c : cnf) {
      if (c.size() == 1) {
        next.push_back(c);
        continue;
      }
      const bool satisfied =
          std::any_of(c.begin(), c.end(), [&](LitId l) { return units.count(l) != 0; });
      if (satisfied) {
        changed = true;
        continue;
      }
      const auto before = c.size();
      std::erase_if(c, [&](LitId l) { return units.count(negation(l)) != 0; });
      if (c.empty()) return contradiction();
      if (c.size() != before) changed = true;
      next.push_back(c);
    }

    std::sort(next.begin(), next.end(), clause_less);
    next.erase(std::unique(next.begin(), next.end()), next.end());
    Cnf kept;
    for (const auto& c : next) {
      // shorter clauses come first, so only earlier ones can subsume c
      const bool subsumed = std::any_of(kept.begin(), kept.end(), [&](const Clause& d) {
        return std::includes(c.begin(), c.end(), d.begin(), d.end());
      });
      if (subsumed) {
        changed = true;
      } else {
        kept.push_back(c);
      }
    }
    if (kept.size() != cnf.size()) changed = true;
    cnf = std::move(kept);
  }
  std::sort(cnf.begin(), cnf.end(), clause_less);
  return cnf;
}

}  // namespace csam
