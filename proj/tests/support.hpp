#pragma once

// Helpers shared by the unit tests and the acceptance binary.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "csam/executor.hpp"
#include "csam/pddl.hpp"

namespace csam::testing {

std::string fixture(const std::string& relative);

Domain load_domain_fixture(const std::string& relative);
Problem load_problem_fixture(const std::string& relative, const Domain& domain);

/// Straightforward recursive evaluation, independent of the executor.
/// Quantifiers are not supported.
bool eval(const Formula& formula, const std::function<bool(const Fluent&)>& value);

/// Propositional domain with fluents p0..p{f-1} and 0-ary actions. Every
/// fluent is the result of at most one effect per action; antecedents hold
/// at most `n` literals and preconditions 0 to 2 literals.
Domain random_propositional_domain(std::mt19937_64& rng, std::size_t fluents, std::size_t actions,
                                   std::size_t n);

State random_state(std::mt19937_64& rng, const UniversePtr& universe);

/// Random walks of the real model from random initial states.
std::vector<Trajectory> random_trajectories(const Domain& domain, std::size_t count,
                                            std::size_t length, std::uint64_t seed);

/// The Miconic fixture problems p01..p04.
std::vector<Problem> miconic_problems(const Domain& domain);

/// Random walks spread round-robin over the Miconic problems.
std::vector<Trajectory> miconic_trajectories(const Domain& domain, std::size_t count,
                                             std::size_t length, std::uint64_t seed);

/// Every triplet of the trajectories, each as a one-step trajectory.
std::vector<Trajectory> split_triplets(const std::vector<Trajectory>& trajectories);

/// Random typed domain exercising every construct the parser accepts.
Domain random_domain(std::mt19937_64& rng);
Problem random_problem(std::mt19937_64& rng, const Domain& domain);
Trajectory random_trajectory(std::mt19937_64& rng, const Domain& domain, const Problem& problem);

}  // namespace csam::testing
