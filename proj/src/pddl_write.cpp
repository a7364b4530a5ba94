#include <sstream>

#include "csam/pddl.hpp"

namespace csam {

namespace {

std::string typed_list(const std::vector<TypedName>& names) {
  std::string out;
  for (std::size_t i = 0; i < names.size(); ++i) {
    if (i > 0) out += " ";
    out += names[i].name;
    const bool last_of_group = i + 1 == names.size() || names[i + 1].type != names[i].type;
    if (last_of_group) out += " - " + names[i].type;
  }
  return out;
}

std::string literal_conjunction(const std::vector<Literal>& literals) {
  std::string out = "(and";
  for (const auto& l : literals) out += " " + to_string(l);
  return out + ")";
}

std::string effect_text(const Effect& effect) {
  std::string body = literal_conjunction(effect.result);
  if (!effect.antecedent.empty()) {
    body = "(when " + literal_conjunction(effect.antecedent) + " " + body + ")";
  } else if (effect.result.size() == 1 && effect.variables.empty()) {
    body = to_string(effect.result.front());
  }
  if (!effect.variables.empty()) {
    body = "(forall (" + typed_list(effect.variables) + ") " + body + ")";
  }
  return body;
}

}  // namespace

std::string serialize_domain(const Domain& domain) {
  std::ostringstream out;
  out << "(define (domain " << domain.name << ")\n";
  if (!domain.requirements.empty()) {
    out << "  (:requirements";
    for (const auto& r : domain.requirements) out << " " << r;
    out << ")\n";
  }
  if (!domain.types.empty()) {
    out << "  (:types";
    for (const auto& t : domain.types) out << " " << t;
    out << ")\n";
  }
  if (!domain.constants.empty()) {
    out << "  (:constants " << typed_list(domain.constants) << ")\n";
  }
  out << "  (:predicates";
  for (const auto& p : domain.predicates) {
    out << "\n    (" << p.name;
    if (!p.params.empty()) out << " " << typed_list(p.params);
    out << ")";
  }
  out << ")\n";
  for (const auto& a : domain.actions) {
    out << "  (:action " << a.name << "\n";
    out << "    :parameters (" << typed_list(a.params) << ")\n";
    out << "    :precondition " << to_string(a.precondition) << "\n";
    out << "    :effect (and";
    for (const auto& e : a.effects) out << "\n      " << effect_text(e);
    out << "))\n";
  }
  out << ")\n";
  return out.str();
}

std::string serialize_problem(const Problem& problem) {
  std::ostringstream out;
  out << "(define (problem " << problem.name << ")\n";
  if (!problem.domain_name.empty()) out << "  (:domain " << problem.domain_name << ")\n";
  out << "  (:objects " << typed_list(problem.objects) << ")\n";
  out << "  (:init";
  for (const auto& f : problem.init) out << "\n    " << to_string(f);
  out << ")\n";
  out << "  (:goal " << literal_conjunction(problem.goal) << "))\n";
  return out.str();
}

std::string serialize_trajectory(const Trajectory& trajectory) {
  std::ostringstream out;
  out << "(:objects " << typed_list(trajectory.objects) << ")\n";
  for (std::size_t i = 0; i < trajectory.states.size(); ++i) {
    if (i > 0) out << "(operator: " << to_string(trajectory.actions[i - 1]) << ")\n";
    out << (i == 0 ? "(:init " : "(:state ") << literal_conjunction(trajectory.states[i].literals())
        << ")\n";
  }
  return out.str();
}

std::string serialize_plan(const std::vector<GroundAction>& plan) {
  std::string out;
  for (const auto& a : plan) out += to_string(a) + "\n";
  return out;
}

}  // namespace csam
