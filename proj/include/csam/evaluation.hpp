#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "csam/executor.hpp"

namespace csam {

inline constexpr std::size_t kMaxEnumeratedStates = std::size_t{1} << 20;

/// Every assignment of the universe, in increasing bit order. Throws
/// UniverseTooLarge above `limit` states.
std::vector<State> all_states(const UniversePtr& universe,
                              std::size_t limit = kMaxEnumeratedStates);

/// States reachable from the given ones under `model`, sorted. Throws
/// UniverseTooLarge if more than `limit` are found.
std::vector<State> reachable_states(const GroundModel& model, const std::vector<State>& initial,
                                    std::size_t limit = kMaxEnumeratedStates);

/// Distinct states appearing in the trajectories, sorted.
std::vector<State> trajectory_states(const std::vector<Trajectory>& trajectories);

struct ActionMetrics {
  std::string action;
  std::size_t app_learned = 0;
  std::size_t app_real = 0;
  std::size_t intersection = 0;
  /// 1 when app_learned is 0.
  double precision = 1.0;
  /// 1 when app_real is 0.
  double recall = 1.0;
};

struct MetricsReport {
  std::vector<ActionMetrics> actions;
  double mean_precision = 1.0;
  double mean_recall = 1.0;
};

/// Applicability agreement per real schema, counted over (state, grounding)
/// pairs. Operators are matched by action_key(). Throws UniverseMismatch.
MetricsReport semantic_metrics(const GroundModel& learned, const GroundModel& real,
                               const std::vector<State>& states);

std::string metrics_csv(const MetricsReport& report);
std::string metrics_table(const MetricsReport& report);

struct Counterexample {
  State state;
  std::string action;
  std::string reason;
};

/// Empty when every learned-applicable (state, action) is applicable in the
/// real model with the same successor; otherwise the first violation in
/// state order, then key order. Throws UniverseMismatch.
std::optional<Counterexample> safety_check(const GroundModel& learned, const GroundModel& real,
                                           const std::vector<State>& states);

/// Exhaustive safety check over all 2^|F| states.
std::optional<Counterexample> safety_check(const GroundModel& learned, const GroundModel& real);

/// Empty when both models agree on applicability and successors for every
/// state and action key.
std::optional<Counterexample> transition_difference(const GroundModel& a, const GroundModel& b,
                                                    const std::vector<State>& states);

/// Random walks under the learned model, each step executed under the real
/// model as well. Returns the first divergence.
std::optional<Counterexample> replay_safety(const GroundModel& learned, const GroundModel& real,
                                            const std::vector<State>& starts, std::size_t walks,
                                            std::size_t length, std::uint64_t seed);

/// Empty when every training triplet is permitted by the learned model and
/// reproduces the observed successor.
std::optional<Counterexample> training_inconsistency(const GroundModel& learned,
                                                     const std::vector<Trajectory>& trajectories);

std::string describe(const Counterexample& counterexample);

}  // namespace csam
