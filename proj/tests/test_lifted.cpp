#include <algorithm>
#include <random>
#include <set>

#include "csam/errors.hpp"
#include "csam/evaluation.hpp"
#include "csam/grounded_learner.hpp"
#include "csam/lifted_learner.hpp"
#include "doctest.h"
#include "support.hpp"

using namespace csam;
using csam::testing::load_domain_fixture;
using csam::testing::load_problem_fixture;

namespace {

Literal lit(const std::string& p, std::vector<std::string> args, bool positive = true) {
  return Literal{Fluent{p, std::move(args)}, positive};
}

std::vector<PredicateSignature> only(const Domain& d, const std::string& name) {
  return {*d.find_predicate(name)};
}

std::set<Literal> literal_set(const std::vector<Literal>& v) { return {v.begin(), v.end()}; }

struct Miconic {
  Domain domain = load_domain_fixture("miconic/domain.pddl");
  Problem problem = load_problem_fixture("miconic/p01.pddl", domain);
  ObjectsByType objects = objects_by_type(domain, problem.objects);
  const ActionSchema& stop = *domain.find_action("stop");
};

}  // namespace

TEST_CASE("binding enumeration") {
  const Miconic m;
  const auto lift_at = enumerate_bindings(m.stop, only(m.domain, "lift-at"), 0);
  CHECK(literal_set(lift_at.literals()) ==
        std::set<Literal>{lit("lift-at", {"?f"}), lit("lift-at", {"?f"}, false)});
  CHECK(lift_at.uqvs().empty());

  const auto boarded = enumerate_bindings(m.stop, only(m.domain, "boarded"), 1);
  REQUIRE(boarded.uqvs() == std::vector<TypedName>{{"?v1", "passenger"}});
  CHECK(literal_set(boarded.literals()) ==
        std::set<Literal>{lit("boarded", {"?v1"}), lit("boarded", {"?v1"}, false)});

  const auto destin = enumerate_bindings(m.stop, only(m.domain, "destin"), 1);
  CHECK(literal_set(destin.literals()) ==
        std::set<Literal>{lit("destin", {"?v1", "?f"}), lit("destin", {"?v1", "?f"}, false)});

  CHECK(enumerate_bindings(m.stop, only(m.domain, "boarded"), 0).size() == 0);

  // up(?f1 ?f2): above binds each slot to either parameter
  const auto above = enumerate_bindings(*m.domain.find_action("up"), only(m.domain, "above"), 1);
  CHECK(above.size() == 4);

  const auto all = enumerate_bindings(m.stop, m.domain.predicates, 1);
  for (std::size_t i = 0; i < all.size(); ++i) {
    CHECK(all.literal_id(Literal{all.lifted(i), true}) == make_lit(i, true));
  }
  CHECK_THROWS_AS(all.literal_id(lit("served", {"?f"})), UnknownFluent);
}

TEST_CASE("grounding parameter-bound literals") {
  const Miconic m;
  const auto space = enumerate_bindings(m.stop, m.domain.predicates, 1);
  const GroundAction stop{"stop", {"f1"}};
  CHECK(ground(space, stop, lit("lift-at", {"?f"}), m.objects) ==
        std::vector<Literal>{lit("lift-at", {"f1"})});
  CHECK(literal_set(ground(space, stop, lit("boarded", {"?v1"}), m.objects)) ==
        std::set<Literal>{lit("boarded", {"p1"}), lit("boarded", {"p2"})});
  CHECK(literal_set(ground(space, stop, lit("destin", {"?v1", "?f"}, false), m.objects)) ==
        std::set<Literal>{lit("destin", {"p1", "f1"}, false), lit("destin", {"p2", "f1"}, false)});
}

TEST_CASE("binding grounding table") {
  const Miconic m;
  const auto space = enumerate_bindings(m.stop, m.domain.predicates, 1);
  const UniversePtr u = make_universe(m.domain, m.problem.objects);
  const BindingGrounding g(space, GroundAction{"stop", {"f2"}}, m.objects, *u);
  CHECK(g.substitutions().size() == 2);
  const std::size_t atom = atom_of(space.literal_id(lit("served", {"?v1"})));
  for (std::size_t s = 0; s < 2; ++s) {
    CHECK(u->fluent(g.fluent(s, atom)) == Fluent{"served", {g.substitutions()[s][0]}});
  }
  CHECK(g.atoms_for(u->index_of(Fluent{"served", {"p2"}})) == std::vector<std::size_t>{atom});
  CHECK_THROWS_AS(BindingGrounding(space, GroundAction{"stop", {}}, m.objects, *u), ArityMismatch);
}

TEST_CASE("binding resolution") {
  const Miconic m;
  const auto space = enumerate_bindings(m.stop, m.domain.predicates, 1);
  CHECK(resolve_binding(space, GroundAction{"stop", {"f1"}}, lit("served", {"p1"}), m.objects) ==
        lit("served", {"?v1"}));
  CHECK(resolve_binding(space, GroundAction{"stop", {"f1"}}, lit("lift-at", {"f1"}, false),
                        m.objects) == lit("lift-at", {"?f"}, false));

  const auto no_uqv = enumerate_bindings(m.stop, m.domain.predicates, 0);
  CHECK_THROWS_AS(
      resolve_binding(no_uqv, GroundAction{"stop", {"f1"}}, lit("served", {"p1"}), m.objects),
      NoBinding);

  const Domain d = parse_domain(
      "(define (domain g) (:requirements :typing) (:types loc) (:predicates (at ?l - loc))"
      " (:action move :parameters (?from - loc ?to - loc) :precondition (at ?from)"
      " :effect (and (not (at ?from)) (at ?to))))");
  const std::vector<TypedName> objs{{"a", "loc"}, {"b", "loc"}};
  const auto move = enumerate_bindings(d.actions[0], d.predicates, 1);
  CHECK_THROWS_AS(resolve_binding(move, GroundAction{"move", {"a", "a"}}, lit("at", {"a"}),
                                  objects_by_type(d, objs)),
                  AmbiguousBinding);

  LiftedLearner learner(d, 1, 1);
  const UniversePtr u = make_universe(d, objs);
  State s(u);
  s.set(u->index_of(Fluent{"at", {"a"}}), true);
  State t(u);
  t.set(u->index_of(Fluent{"at", {"b"}}), true);
  CHECK_NOTHROW(learner.observe(s, GroundAction{"move", {"a", "b"}}, t, objs));
  const LiftedLearner before = learner;
  CHECK_THROWS_AS(learner.observe(t, GroundAction{"move", {"b", "b"}}, State(u), objs),
                  AmbiguousBinding);
  CHECK_THROWS_AS(learner.observe(t, GroundAction{"move", {"b", "b"}}, s, objs), NoBinding);
  CHECK(learner == before);
}

TEST_CASE("miconic stop hand trace") {
  const Miconic m;
  const GroundModel model(m.domain, m.problem.objects);
  State s(model.universe());
  for (const Fluent& f : {Fluent{"lift-at", {"f1"}}, Fluent{"above", {"f1", "f2"}},
                          Fluent{"boarded", {"p1"}}, Fluent{"boarded", {"p2"}},
                          Fluent{"destin", {"p1", "f1"}}, Fluent{"destin", {"p2", "f2"}}}) {
    s.set(model.universe()->index_of(f), true);
  }
  const GroundAction stop{"stop", {"f1"}};
  const State t = model.apply(stop, s);
  REQUIRE(t.holds(lit("served", {"p1"})));
  REQUIRE(t.holds(lit("boarded", {"p2"})));

  LiftedLearner learner(m.domain, 2, 1);
  learner.observe(s, stop, t, m.problem.objects);
  const auto& entry = learner.entries().at("stop");
  const BindingSpace& space = entry.space;
  const ActionKnowledge& k = entry.knowledge;

  std::set<Literal> must;
  for (LitId id = 0; id < k.literal_count(); ++id) {
    if (k.must_be_result[id]) must.insert(space.literal(id));
  }
  CHECK(must == std::set<Literal>{lit("boarded", {"?v1"}, false), lit("served", {"?v1"})});

  const LitId served = space.literal_id(lit("served", {"?v1"}));
  const LitId boarded = space.literal_id(lit("boarded", {"?v1"}));
  const LitId destin = space.literal_id(lit("destin", {"?v1", "?f"}));
  const auto& pa = k.pos_ante[served];
  IdConjunction good{boarded, destin};
  std::sort(good.begin(), good.end());
  CHECK(std::find(pa.begin(), pa.end(), good) != pa.end());
  // boarded(v1) alone holds for p2, whose served stayed false
  CHECK(std::find(pa.begin(), pa.end(), IdConjunction{boarded}) == pa.end());
  CHECK(std::find(pa.begin(), pa.end(), IdConjunction{}) == pa.end());

  // universal precondition candidates
  CHECK(k.pre[boarded]);
  CHECK_FALSE(k.pre[space.literal_id(lit("destin", {"?v1", "?f"}))]);
  CHECK(k.pre[space.literal_id(lit("lift-at", {"?f"}))]);

  LiftedLearner same(m.domain, 2, 1);
  same.observe(s, stop, s, m.problem.objects);
  CHECK(same.knowledge("stop")->must_be_result_size() == 0);
  CHECK(same.build().actions.at(0).effects.empty());
}

TEST_CASE("miconic convergence") {
  const Miconic m;
  const auto trajs = csam::testing::miconic_trajectories(m.domain, 24, 30, 7);
  const LiftedRun run = learn_lifted(m.domain, trajs, 2, 1);
  CHECK(run.skipped.empty());
  REQUIRE(run.domain.actions.size() == 3);
  CHECK(parse_domain(serialize_domain(run.domain)) == run.domain);

  const GroundModel learned(run.domain, m.problem.objects);
  const GroundModel real(m.domain, m.problem.objects);
  CHECK_FALSE(training_inconsistency(learned, trajs).has_value());
  CHECK_FALSE(safety_check(learned, real).has_value());
  for (const auto& p : csam::testing::miconic_problems(m.domain)) {
    const auto states = reachable_states(real, {initial_state(m.domain, p)});
    const auto diff = transition_difference(learned, real, states);
    CHECK_MESSAGE(!diff.has_value(), (diff ? describe(*diff) : ""));
  }

  const ActionSchema& stop = *run.domain.find_action("stop");
  bool serves = false;
  for (const auto& e : stop.effects) {
    if (e.variables == std::vector<TypedName>{{"?v1", "passenger"}} &&
        std::count(e.result.begin(), e.result.end(), lit("served", {"?v1"})) == 1) {
      serves = std::count(e.antecedent.begin(), e.antecedent.end(), lit("boarded", {"?v1"})) == 1 &&
               std::count(e.antecedent.begin(), e.antecedent.end(),
                          lit("destin", {"?v1", "?f"})) == 1;
    }
  }
  CHECK(serves);
}

TEST_CASE("merge equals sequential observation") {
  const Miconic m;
  const auto trajs = csam::testing::miconic_trajectories(m.domain, 6, 15, 3);
  LiftedLearner all(m.domain, 2, 1);
  LiftedLearner odd(m.domain, 2, 1);
  LiftedLearner even(m.domain, 2, 1);
  for (std::size_t i = 0; i < trajs.size(); ++i) {
    all.observe(trajs[i]);
    (i % 2 ? odd : even).observe(trajs[i]);
  }
  even.merge(odd);
  CHECK(even == all);
  CHECK(serialize_domain(even.build()) == serialize_domain(all.build()));
}

TEST_CASE("k = 0 reduces to the grounded learner") {
  std::mt19937_64 rng(23);
  for (int round = 0; round < 20; ++round) {
    const Domain d = csam::testing::random_propositional_domain(rng, 4, 2, 1 + round % 2);
    const auto trajs = csam::testing::random_trajectories(d, 4, 6, rng());
    const std::size_t n = 1 + round % 2;
    LiftedLearner lifted(d, n, 0);
    GroundedLearner grounded(GroundModel(d, {}).universe(), n);
    for (const auto& t : trajs) {
      lifted.observe(t);
      grounded.observe(t);
    }
    for (const auto& [key, entry] : grounded.entries()) {
      const ActionKnowledge* k = lifted.knowledge(entry.action.name);
      REQUIRE(k != nullptr);
      CHECK(*k == entry.knowledge);
    }
    const GroundModel a(lifted.build(), {});
    const GroundModel b(learn_grounded(d, trajs, n), {});
    CHECK_FALSE(transition_difference(a, b, all_states(a.universe())).has_value());
  }
}

TEST_CASE("skipping trajectories that break the binding assumption") {
  const Domain d = parse_domain(
      "(define (domain g) (:requirements :typing) (:types loc) (:predicates (at ?l - loc))"
      " (:action move :parameters (?from - loc ?to - loc) :precondition (and)"
      " :effect (and (not (at ?from)) (at ?to))))");
  const std::string bad =
      "(:objects a b - loc)\n(:init (and (not (at a)) (not (at b))))\n(operator: (move a a))\n"
      "(:state (and (at a) (not (at b))))\n";
  const std::string good =
      "(:objects a b - loc)\n(:init (and (at a) (not (at b))))\n(operator: (move a b))\n"
      "(:state (and (not (at a)) (at b)))\n";
  const std::vector<Trajectory> trajs{parse_trajectory(good, d), parse_trajectory(bad, d)};
  CHECK_THROWS_AS(learn_lifted(d, trajs, 1, 1), AmbiguousBinding);
  const LiftedRun run = learn_lifted(d, trajs, 1, 1, true);
  CHECK(run.skipped == std::vector<std::size_t>{1});
  CHECK(run.domain.actions.size() == 1);
  try {
    LiftedLearner(d, 1, 1).observe(trajs[1]);
  } catch (const AmbiguousBinding& e) {
    CHECK(std::string(e.what()).find("step 0") != std::string::npos);
  }
}

TEST_CASE("maintenance learns the universal effect from one trajectory") {
  const Domain d = load_domain_fixture("maintenance/domain.pddl");
  const Problem p = load_problem_fixture("maintenance/p01.pddl", d);
  const std::vector<GroundAction> plan{
      {"workat", {"d1", "ap1"}}, {"workat", {"d2", "ap2"}}, {"workat", {"d3", "ap1"}}};
  const Trajectory t = generate_trajectory(d, p, plan);
  const LiftedRun run = learn_lifted(d, {t}, 1, 1);
  const GroundModel learned(run.domain, p.objects);
  const GroundModel real(d, p.objects);
  const auto states = reachable_states(real, {initial_state(d, p)});
  CHECK_FALSE(safety_check(learned, real, states).has_value());
  CHECK_FALSE(training_inconsistency(learned, {t}).has_value());
}

TEST_CASE("unknown actions") {
  const Miconic m;
  LiftedLearner learner(m.domain, 1, 1);
  CHECK_THROWS_AS(learner.add_action("fly"), UnknownAction);
  CHECK_THROWS_AS(LiftedLearner(m.domain, 0, 1), std::invalid_argument);
  CHECK(learner.build().actions.empty());
  learner.add_action("up");
  const Domain built = learner.build();
  REQUIRE(built.actions.size() == 1);
  const GroundModel model(built, m.problem.objects);
  for (const auto& s : all_states(model.universe())) {
    CHECK(model.applicable_operators(s).empty());
  }
}
