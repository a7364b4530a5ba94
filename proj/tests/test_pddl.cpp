#include <random>

#include "csam/errors.hpp"
#include "csam/executor.hpp"
#include "csam/pddl.hpp"
#include "doctest.h"
#include "support.hpp"

using namespace csam;
using csam::testing::load_domain_fixture;
using csam::testing::load_problem_fixture;

namespace {

Literal lit(const std::string& p, std::vector<std::string> args, bool positive = true) {
  return Literal{Fluent{p, std::move(args)}, positive};
}

}  // namespace

TEST_CASE("miconic stop schema") {
  const Domain d = load_domain_fixture("miconic/domain.pddl");
  CHECK(d.name == "miconic");
  CHECK(d.types == std::vector<std::string>{"passenger", "floor"});
  const ActionSchema* stop = d.find_action("stop");
  REQUIRE(stop != nullptr);
  CHECK(stop->params == std::vector<TypedName>{{"?f", "floor"}});
  CHECK(stop->precondition.conjunct_literals() ==
        std::vector<Literal>{lit("lift-at", {"?f"})});
  REQUIRE(stop->effects.size() == 2);
  const Effect* serve = nullptr;
  for (const auto& e : stop->effects) {
    if (e.result.size() == 2) serve = &e;
  }
  REQUIRE(serve != nullptr);
  CHECK(serve->variables == std::vector<TypedName>{{"?p", "passenger"}});
  CHECK(serve->antecedent ==
        std::vector<Literal>{lit("boarded", {"?p"}), lit("destin", {"?p", "?f"})});
  CHECK(serve->result ==
        std::vector<Literal>{lit("boarded", {"?p"}, false), lit("served", {"?p"})});
}

TEST_CASE("empty domain") {
  const Domain d = parse_domain(
      "(define (domain d) (:predicates) (:action noop :parameters () :precondition (and) "
      ":effect (and)))");
  REQUIRE(d.actions.size() == 1);
  CHECK(d.actions[0].effects.empty());
  CHECK(d.actions[0].precondition == Formula::truth());
  CHECK(serialize_domain(d).find(":effect (and)") != std::string::npos);
}

TEST_CASE("rejected constructs") {
  const std::string head = "(define (domain d) (:predicates (p ?x)) (:action a :parameters (?x) ";
  CHECK_THROWS_AS(parse_domain(head + ":precondition (exists (?y) (p ?y)) :effect (and)))"),
                  UnsupportedConstruct);
  CHECK_THROWS_AS(parse_domain(head + ":precondition (= ?x ?x) :effect (and)))"),
                  UnsupportedConstruct);
  CHECK_THROWS_AS(parse_domain("(define (domain d) (:types a - b))"), UnsupportedConstruct);
  try {
    parse_domain(head + ":precondition (exists (?y) (p ?y)) :effect (and)))");
  } catch (const UnsupportedConstruct& e) {
    CHECK(e.construct() == "exists");
  }
}

TEST_CASE("syntax errors carry a position") {
  CHECK_THROWS_AS(parse_domain("(define (domain d)"), SyntaxError);
  try {
    parse_domain("(define (domain d)\n  (:predicates (p)))\n)");
    FAIL("expected a syntax error");
  } catch (const SyntaxError& e) {
    CHECK(e.line() == 3);
  }
  CHECK_THROWS_AS(parse_domain("(define (domain d) (:predicates (p)) (:action a :parameters () "
                               ":precondition (q) :effect (and)))"),
                  Error);
}

TEST_CASE("identifiers are lower-cased and comments skipped") {
  const Domain d = parse_domain("; header\n(DEFINE (DOMAIN D) (:PREDICATES (P)) ; trailing\n)");
  CHECK(d.name == "d");
  CHECK(d.predicates.at(0).name == "p");
}

TEST_CASE("domain round trips") {
  for (const char* path : {"miconic/domain.pddl", "maintenance/domain.pddl", "toggle/domain.pddl"}) {
    const Domain d = load_domain_fixture(path);
    CHECK(parse_domain(serialize_domain(d)) == d);
  }
}

TEST_CASE("disjunctive preconditions are written as nested or/and/not") {
  Domain d;
  d.name = "learned";
  for (const char* p : {"l1", "l2", "l3"}) d.predicates.push_back({p, {}});
  auto l = [](const char* p, bool v) { return Formula::literal(Literal{Fluent{p, {}}, v}); };
  ActionSchema a;
  a.name = "a";
  a.precondition = Formula::disjunction(
      {l("l1", true), Formula::conjunction({l("l2", false), l("l3", false)}),
       Formula::conjunction({l("l2", true), l("l3", true)})});
  d.actions.push_back(a);
  const std::string text = serialize_domain(d);
  CHECK(text.find("(or (l1) (and (not (l2)) (not (l3))) (and (l2) (l3)))") != std::string::npos);
  CHECK(parse_domain(text) == d);
}

TEST_CASE("problem parsing") {
  const Domain d = load_domain_fixture("miconic/domain.pddl");
  const Problem p = load_problem_fixture("miconic/p01.pddl", d);
  CHECK(p.objects.size() == 4);
  CHECK(p.goal.size() == 2);
  CHECK(parse_problem(serialize_problem(p), d) == p);
  CHECK_THROWS_AS(parse_problem("(define (problem x) (:domain miconic) (:objects p1 - passenger) "
                                "(:init (boarded p1 p1)) (:goal (and)))",
                                d),
                  ArityMismatch);
}

TEST_CASE("trajectory parsing") {
  const Domain d = load_domain_fixture("toggle/domain.pddl");
  const Trajectory t = parse_trajectory(read_file(csam::testing::fixture("toggle/t1.traj")), d);
  CHECK(t.size() == 1);
  CHECK(t.states.size() == 2);

  const std::string two_steps =
      "(:objects)\n(:init (and (f1) (f2) (not (f3))))\n(operator: (a))\n"
      "(:state (and (not (f1)) (f2) (not (f3))))\n(operator: (a))\n"
      "(:state (and (not (f1)) (f2) (not (f3))))\n";
  CHECK(parse_trajectory(two_steps, d).size() == 2);

  const std::string incomplete =
      "(:objects)\n(:init (and (f1) (f2) (not (f3))))\n(operator: (a))\n"
      "(:state (and (not (f1)) (f2)))\n(operator: (a))\n"
      "(:state (and (not (f1)) (f2) (not (f3))))\n";
  CHECK_THROWS_AS(parse_trajectory(incomplete, d), IncompleteState);

  const std::string unknown =
      "(:objects)\n(:init (and (f1) (f2) (not (f3))))\n(operator: (b))\n"
      "(:state (and (not (f1)) (f2) (not (f3))))\n";
  CHECK_THROWS_AS(parse_trajectory(unknown, d), UnknownAction);

  const std::string arity =
      "(:objects)\n(:init (and (f1) (f2) (not (f3))))\n(operator: (a x))\n"
      "(:state (and (not (f1)) (f2) (not (f3))))\n";
  CHECK_THROWS_AS(parse_trajectory(arity, d), ArityMismatch);
}

TEST_CASE("generated trajectory parses back equal") {
  const Domain d = load_domain_fixture("miconic/domain.pddl");
  const Problem p = load_problem_fixture("miconic/p01.pddl", d);
  const auto plan = parse_plan(read_file(csam::testing::fixture("miconic/p01.plan")));
  const Trajectory t = generate_trajectory(d, p, plan);
  CHECK(parse_trajectory(serialize_trajectory(t), d) == t);
  CHECK(parse_plan(serialize_plan(plan)) == plan);
}

TEST_CASE("random round trips") {
  std::mt19937_64 rng(11);
  for (int i = 0; i < 100; ++i) {
    const Domain d = csam::testing::random_domain(rng);
    const Domain d2 = parse_domain(serialize_domain(d));
    REQUIRE(d2 == d);
    const Problem p = csam::testing::random_problem(rng, d);
    CHECK(parse_problem(serialize_problem(p), d) == p);
    const Trajectory t = csam::testing::random_trajectory(rng, d, p);
    CHECK(parse_trajectory(serialize_trajectory(t), d) == t);
  }
}

TEST_CASE("parser is total on truncated input") {
  const std::string text = serialize_domain(load_domain_fixture("miconic/domain.pddl"));
  for (std::size_t cut = 0; cut < text.size(); cut += 7) {
    try {
      parse_domain(text.substr(0, cut));
    } catch (const Error&) {
    }
  }
}

TEST_CASE("normalize_effects merges by variables and antecedent") {
  Effect a{{}, {lit("p", {})}, {lit("q", {})}};
  Effect b{{}, {lit("p", {})}, {lit("r", {}, false)}};
  Effect c{{}, {}, {lit("s", {})}};
  const auto out = normalize_effects({a, b, c, a});
  REQUIRE(out.size() == 2);
  CHECK(out[0].antecedent.empty());
  CHECK(out[1].result == std::vector<Literal>{lit("q", {}), lit("r", {}, false)});
}

TEST_CASE("universe of the miconic problem") {
  const Domain d = load_domain_fixture("miconic/domain.pddl");
  const Problem p = load_problem_fixture("miconic/p01.pddl", d);
  // origin, destin, above: 4 each; boarded, served: 2; lift-at: 2
  CHECK(make_universe(d, p.objects)->size() == 18);
  const auto by_type = objects_by_type(d, p.objects);
  CHECK(by_type.at("floor") == std::vector<std::string>{"f1", "f2"});
}

TEST_CASE("ground-truth preconditions must be conjunctive") {
  CHECK_NOTHROW(require_conjunctive_preconditions(load_domain_fixture("miconic/domain.pddl")));
  const Domain d = parse_domain(
      "(define (domain d) (:predicates (p) (q)) (:action a :parameters () "
      ":precondition (or (p) (q)) :effect (and)))");
  CHECK_THROWS_AS(require_conjunctive_preconditions(d), UnsupportedConstruct);
}
