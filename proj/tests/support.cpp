#include "support.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

#ifndef CSAM_FIXTURE_DIR
#error "CSAM_FIXTURE_DIR must be defined"
#endif

namespace csam::testing {

std::string fixture(const std::string& relative) {
  return std::string(CSAM_FIXTURE_DIR) + "/" + relative;
}

Domain load_domain_fixture(const std::string& relative) {
  return parse_domain(read_file(fixture(relative)));
}

Problem load_problem_fixture(const std::string& relative, const Domain& domain) {
  return parse_problem(read_file(fixture(relative)), domain);
}

bool eval(const Formula& formula, const std::function<bool(const Fluent&)>& value) {
  switch (formula.kind()) {
    case Formula::Kind::kLiteral:
      return value(formula.lit().fluent) == formula.lit().positive;
    case Formula::Kind::kNot:
      return !eval(formula.children().front(), value);
    case Formula::Kind::kAnd:
      for (const auto& c : formula.children()) {
        if (!eval(c, value)) return false;
      }
      return true;
    case Formula::Kind::kOr:
      for (const auto& c : formula.children()) {
        if (eval(c, value)) return true;
      }
      return false;
    case Formula::Kind::kForall:
      throw std::logic_error("eval does not expand quantifiers");
  }
  return false;
}

namespace {

std::size_t pick(std::mt19937_64& rng, std::size_t bound) {
  return std::uniform_int_distribution<std::size_t>(0, bound - 1)(rng);
}

bool coin(std::mt19937_64& rng) { return pick(rng, 2) == 1; }

Literal prop(std::size_t index, bool positive) {
  return Literal{Fluent{"p" + std::to_string(index), {}}, positive};
}

// k distinct fluent indices out of f
std::vector<std::size_t> sample_indices(std::mt19937_64& rng, std::size_t f, std::size_t k) {
  std::vector<std::size_t> all(f);
  for (std::size_t i = 0; i < f; ++i) all[i] = i;
  std::shuffle(all.begin(), all.end(), rng);
  all.resize(std::min(k, f));
  return all;
}

}  // namespace

Domain random_propositional_domain(std::mt19937_64& rng, std::size_t fluents, std::size_t actions,
                                   std::size_t n) {
  Domain d;
  d.name = "random";
  d.requirements = {":strips", ":negative-preconditions", ":conditional-effects"};
  for (std::size_t i = 0; i < fluents; ++i) d.predicates.push_back({"p" + std::to_string(i), {}});
  for (std::size_t a = 0; a < actions; ++a) {
    ActionSchema schema;
    schema.name = "a" + std::to_string(a);
    std::vector<Formula> pre;
    for (std::size_t i : sample_indices(rng, fluents, pick(rng, 3))) {
      pre.push_back(Formula::literal(prop(i, coin(rng))));
    }
    schema.precondition = Formula::conjunction(std::move(pre));
    std::vector<Effect> effects;
    for (std::size_t target : sample_indices(rng, fluents, 1 + pick(rng, fluents))) {
      Effect e;
      for (std::size_t i : sample_indices(rng, fluents, pick(rng, n + 1))) {
        e.antecedent.push_back(prop(i, coin(rng)));
      }
      e.result.push_back(prop(target, coin(rng)));
      effects.push_back(std::move(e));
    }
    schema.effects = normalize_effects(std::move(effects));
    d.actions.push_back(std::move(schema));
  }
  return d;
}

State random_state(std::mt19937_64& rng, const UniversePtr& universe) {
  State s(universe);
  for (std::size_t i = 0; i < universe->size(); ++i) s.set(i, coin(rng));
  return s;
}

std::vector<Trajectory> random_trajectories(const Domain& domain, std::size_t count,
                                            std::size_t length, std::uint64_t seed) {
  const GroundModel model(domain, {});
  std::mt19937_64 rng(seed);
  std::vector<Trajectory> out;
  for (std::size_t i = 0; i < count; ++i) {
    Problem problem;
    problem.name = "walk";
    problem.init = random_state(rng, model.universe()).true_fluents();
    out.push_back(random_walk(model, problem, length, rng()));
  }
  return out;
}

std::vector<Problem> miconic_problems(const Domain& domain) {
  std::vector<Problem> out;
  for (int i = 1; i <= 4; ++i) {
    out.push_back(load_problem_fixture("miconic/p0" + std::to_string(i) + ".pddl", domain));
  }
  return out;
}

std::vector<Trajectory> miconic_trajectories(const Domain& domain, std::size_t count,
                                             std::size_t length, std::uint64_t seed) {
  const auto problems = miconic_problems(domain);
  const GroundModel model(domain, problems.front().objects);
  std::vector<Trajectory> out;
  for (std::size_t i = 0; i < count; ++i) {
    out.push_back(random_walk(model, problems[i % problems.size()], length, seed + i));
  }
  return out;
}

std::vector<Trajectory> split_triplets(const std::vector<Trajectory>& trajectories) {
  std::vector<Trajectory> out;
  for (const auto& t : trajectories) {
    for (std::size_t i = 0; i < t.actions.size(); ++i) {
      out.push_back(Trajectory{t.objects, {t.states[i], t.states[i + 1]}, {t.actions[i]}});
    }
  }
  return out;
}

// --- random typed fixtures ----------------------------------------------------

namespace {

struct Term {
  std::string name;
  std::string type;
};

std::vector<std::string> type_pool(const Domain& d) {
  std::vector<std::string> pool = d.types;
  pool.push_back("object");
  return pool;
}

std::optional<Literal> random_literal(std::mt19937_64& rng, const Domain& d,
                                      const std::vector<Term>& scope) {
  const auto& pred = d.predicates[pick(rng, d.predicates.size())];
  Fluent f{pred.name, {}};
  for (const auto& slot : pred.params) {
    std::vector<const Term*> fits;
    for (const auto& t : scope) {
      if (slot.type == "object" || t.type == slot.type) fits.push_back(&t);
    }
    if (fits.empty()) return std::nullopt;
    f.args.push_back(fits[pick(rng, fits.size())]->name);
  }
  return Literal{f, coin(rng)};
}

Formula random_formula(std::mt19937_64& rng, const Domain& d, std::vector<Term>& scope,
                       int depth, std::size_t& fresh) {
  const std::size_t kind = depth <= 0 ? 0 : pick(rng, 5);
  if (kind == 0) {
    if (auto l = random_literal(rng, d, scope)) return Formula::literal(*l);
    return Formula::truth();
  }
  if (kind == 1 || kind == 2) {
    std::vector<Formula> children;
    for (std::size_t i = pick(rng, 4); i > 0; --i) {
      children.push_back(random_formula(rng, d, scope, depth - 1, fresh));
    }
    return kind == 1 ? Formula::conjunction(std::move(children))
                     : Formula::disjunction(std::move(children));
  }
  if (kind == 3) {
    // a negated literal would read back as a literal, so negate a compound
    std::vector<Formula> children{random_formula(rng, d, scope, depth - 1, fresh)};
    return Formula::negation(coin(rng) ? Formula::conjunction(std::move(children))
                                       : Formula::disjunction(std::move(children)));
  }
  const auto pool = type_pool(d);
  std::vector<TypedName> vars;
  for (std::size_t i = 1 + pick(rng, 2); i > 0; --i) {
    vars.push_back(TypedName{"?y" + std::to_string(fresh++), pool[pick(rng, pool.size())]});
  }
  for (const auto& v : vars) scope.push_back(Term{v.name, v.type});
  Formula body = random_formula(rng, d, scope, depth - 1, fresh);
  scope.resize(scope.size() - vars.size());
  return Formula::forall(std::move(vars), std::move(body));
}

std::vector<Literal> random_literals(std::mt19937_64& rng, const Domain& d,
                                     const std::vector<Term>& scope, std::size_t count) {
  std::vector<Literal> out;
  for (std::size_t i = 0; i < count; ++i) {
    if (auto l = random_literal(rng, d, scope)) out.push_back(*l);
  }
  return out;
}

}  // namespace

Domain random_domain(std::mt19937_64& rng) {
  Domain d;
  d.name = "d" + std::to_string(pick(rng, 1000));
  d.requirements = {":strips", ":typing", ":conditional-effects"};
  for (std::size_t i = pick(rng, 4); i > 0; --i) d.types.push_back("t" + std::to_string(i));
  const auto pool = type_pool(d);
  for (std::size_t i = pick(rng, 3); i > 0; --i) {
    d.constants.push_back(TypedName{"c" + std::to_string(i), pool[pick(rng, pool.size())]});
  }
  for (std::size_t p = 0, count = 1 + pick(rng, 4); p < count; ++p) {
    PredicateSignature sig{"q" + std::to_string(p), {}};
    for (std::size_t a = pick(rng, 3); a > 0; --a) {
      sig.params.push_back(TypedName{"?a" + std::to_string(a), pool[pick(rng, pool.size())]});
    }
    d.predicates.push_back(std::move(sig));
  }
  for (std::size_t a = 0, count = 1 + pick(rng, 3); a < count; ++a) {
    ActionSchema schema;
    schema.name = "act" + std::to_string(a);
    std::vector<Term> scope;
    for (const auto& c : d.constants) scope.push_back(Term{c.name, c.type});
    for (std::size_t i = 0, np = pick(rng, 4); i < np; ++i) {
      TypedName p{"?x" + std::to_string(i), pool[pick(rng, pool.size())]};
      schema.params.push_back(p);
      scope.push_back(Term{p.name, p.type});
    }
    std::size_t fresh = 0;
    schema.precondition = random_formula(rng, d, scope, 3, fresh);
    std::vector<Effect> effects;
    for (std::size_t e = pick(rng, 4); e > 0; --e) {
      Effect effect;
      for (std::size_t v = pick(rng, 2); v > 0; --v) {
        effect.variables.push_back(
            TypedName{"?z" + std::to_string(fresh++), pool[pick(rng, pool.size())]});
      }
      std::vector<Term> inner = scope;
      for (const auto& v : effect.variables) inner.push_back(Term{v.name, v.type});
      effect.antecedent = random_literals(rng, d, inner, pick(rng, 3));
      effect.result = random_literals(rng, d, inner, 1 + pick(rng, 2));
      effects.push_back(std::move(effect));
    }
    schema.effects = normalize_effects(std::move(effects));
    d.actions.push_back(std::move(schema));
  }
  return d;
}

Problem random_problem(std::mt19937_64& rng, const Domain& domain) {
  Problem p;
  p.name = "p" + std::to_string(pick(rng, 1000));
  p.domain_name = domain.name;
  const auto pool = type_pool(domain);
  for (std::size_t i = 0, count = pick(rng, 5); i < count; ++i) {
    p.objects.push_back(TypedName{"o" + std::to_string(i), pool[pick(rng, pool.size())]});
  }
  const UniversePtr universe = make_universe(domain, p.objects);
  for (const auto& f : universe->fluents()) {
    if (coin(rng)) p.init.push_back(f);
  }
  for (std::size_t i = pick(rng, 3); i > 0 && universe->size() > 0; --i) {
    p.goal.push_back(Literal{universe->fluent(pick(rng, universe->size())), coin(rng)});
  }
  return p;
}

Trajectory random_trajectory(std::mt19937_64& rng, const Domain& domain, const Problem& problem) {
  Trajectory t;
  t.objects = problem.objects;
  const UniversePtr universe = make_universe(domain, problem.objects);
  const ObjectsByType by_type = objects_by_type(domain, problem.objects);
  std::vector<GroundAction> candidates;
  for (const auto& schema : domain.actions) {
    GroundAction a{schema.name, {}};
    bool ok = true;
    for (const auto& param : schema.params) {
      auto it = by_type.find(param.type);
      if (it == by_type.end() || it->second.empty()) {
        ok = false;
        break;
      }
      a.args.push_back(it->second[pick(rng, it->second.size())]);
    }
    if (ok) candidates.push_back(std::move(a));
  }
  t.states.push_back(random_state(rng, universe));
  for (std::size_t i = candidates.empty() ? 0 : pick(rng, 5); i > 0; --i) {
    t.actions.push_back(candidates[pick(rng, candidates.size())]);
    t.states.push_back(random_state(rng, universe));
  }
  return t;
}

}  // namespace csam::testing
