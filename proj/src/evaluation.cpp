#include "csam/evaluation.hpp"

#include <algorithm>
#include <cstdio>
#include <deque>
#include <map>
#include <random>
#include <set>
#include <sstream>

#include "csam/errors.hpp"

namespace csam {

std::vector<State> all_states(const UniversePtr& universe, std::size_t limit) {
  const std::size_t n = universe->size();
  if (n >= 63 || (std::size_t{1} << n) > limit) {
    throw UniverseTooLarge(std::to_string(n) + " fluents exceed the enumeration limit of " +
                           std::to_string(limit) + " states");
  }
  std::vector<State> out;
  out.reserve(std::size_t{1} << n);
  for (std::uint64_t m = 0; m < (std::uint64_t{1} << n); ++m) {
    State s(universe);
    for (std::size_t i = 0; i < n; ++i) {
      if ((m >> i) & 1U) s.set(i, true);
    }
    out.push_back(std::move(s));
  }
  return out;
}

std::vector<State> reachable_states(const GroundModel& model, const std::vector<State>& initial,
                                    std::size_t limit) {
  std::set<State> seen;
  std::deque<State> frontier;
  for (const auto& s : initial) {
    if (seen.insert(s).second) frontier.push_back(s);
  }
  while (!frontier.empty()) {
    State s = std::move(frontier.front());
    frontier.pop_front();
    for (const auto* op : model.applicable_operators(s)) {
      State next = model.apply(*op, s);
      if (seen.insert(next).second) {
        if (seen.size() > limit) {
          throw UniverseTooLarge("more than " + std::to_string(limit) + " reachable states");
        }
        frontier.push_back(std::move(next));
      }
    }
  }
  return {seen.begin(), seen.end()};
}

std::vector<State> trajectory_states(const std::vector<Trajectory>& trajectories) {
  std::set<State> seen;
  for (const auto& t : trajectories) seen.insert(t.states.begin(), t.states.end());
  return {seen.begin(), seen.end()};
}

namespace {

void require_same_universe(const GroundModel& a, const GroundModel& b) {
  if (!(*a.universe() == *b.universe())) {
    throw UniverseMismatch("models are grounded over different fluent universes");
  }
}

void require_state_universe(const GroundModel& model, const std::vector<State>& states) {
  const Universe* checked = nullptr;
  for (const auto& s : states) {
    if (s.universe().get() == checked || s.universe() == model.universe()) continue;
    if (!(*s.universe() == *model.universe())) {
      throw UniverseMismatch("state sample is over a different fluent universe");
    }
    checked = s.universe().get();
  }
}

std::vector<std::string> union_keys(const GroundModel& a, const GroundModel& b) {
  std::set<std::string> keys;
  for (const auto& op : a.operators()) keys.insert(op.key);
  for (const auto& op : b.operators()) keys.insert(op.key);
  return {keys.begin(), keys.end()};
}

// Successor or the reason the action cannot be taken.
struct Outcome {
  bool applicable = false;
  std::optional<State> next;
  std::string error;
};

Outcome outcome(const GroundModel& model, const GroundOperator* op, const State& s) {
  Outcome out;
  if (op == nullptr || !model.applicable(*op, s)) return out;
  out.applicable = true;
  try {
    out.next = model.apply(*op, s);
  } catch (const ConflictingEffects& e) {
    out.error = e.what();
  }
  return out;
}

std::string state_text(const State& s) {
  std::string out = "{";
  bool first = true;
  for (const auto& f : s.true_fluents()) {
    if (!first) out += " ";
    out += to_string(f);
    first = false;
  }
  return out + "}";
}

}  // namespace

MetricsReport semantic_metrics(const GroundModel& learned, const GroundModel& real,
                               const std::vector<State>& states) {
  require_same_universe(learned, real);
  require_state_universe(real, states);
  std::map<std::string, ActionMetrics> by_schema;
  for (const auto& key : union_keys(learned, real)) {
    const auto* lop = learned.find(key);
    const auto* rop = real.find(key);
    const std::string schema = rop ? rop->action.name : lop->action.name;
    ActionMetrics& m = by_schema[schema];
    m.action = schema;
    for (const auto& s : states) {
      const bool l = lop && learned.applicable(*lop, s);
      const bool r = rop && real.applicable(*rop, s);
      m.app_learned += l;
      m.app_real += r;
      m.intersection += l && r;
    }
  }
  MetricsReport report;
  double p = 0;
  double r = 0;
  for (auto& [name, m] : by_schema) {
    m.precision = m.app_learned == 0 ? 1.0 : double(m.intersection) / double(m.app_learned);
    m.recall = m.app_real == 0 ? 1.0 : double(m.intersection) / double(m.app_real);
    p += m.precision;
    r += m.recall;
    report.actions.push_back(m);
  }
  if (!report.actions.empty()) {
    report.mean_precision = p / double(report.actions.size());
    report.mean_recall = r / double(report.actions.size());
  }
  return report;
}

namespace {

std::string fixed(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4f", v);
  return buf;
}

}  // namespace

std::string metrics_csv(const MetricsReport& report) {
  std::string out = "action,precision,recall,app_learned,app_real,intersection\n";
  for (const auto& m : report.actions) {
    out += m.action + "," + fixed(m.precision) + "," + fixed(m.recall) + "," +
           std::to_string(m.app_learned) + "," + std::to_string(m.app_real) + "," +
           std::to_string(m.intersection) + "\n";
  }
  return out;
}

std::string metrics_table(const MetricsReport& report) {
  std::size_t width = 6;
  for (const auto& m : report.actions) width = std::max(width, m.action.size());
  std::ostringstream os;
  auto pad = [&](const std::string& s, std::size_t w) {
    return s + std::string(w > s.size() ? w - s.size() : 0, ' ');
  };
  os << pad("action", width) << "  precision  recall  app_learned  app_real  intersection\n";
  for (const auto& m : report.actions) {
    os << pad(m.action, width) << "  " << pad(fixed(m.precision), 9) << "  "
       << pad(fixed(m.recall), 6) << "  " << pad(std::to_string(m.app_learned), 11) << "  "
       << pad(std::to_string(m.app_real), 8) << "  " << m.intersection << "\n";
  }
  os << pad("mean", width) << "  " << pad(fixed(report.mean_precision), 9) << "  "
     << fixed(report.mean_recall) << "\n";
  return os.str();
}

std::optional<Counterexample> safety_check(const GroundModel& learned, const GroundModel& real,
                                           const std::vector<State>& states) {
  require_same_universe(learned, real);
  require_state_universe(real, states);
  for (const auto& s : states) {
    for (const auto& lop : learned.operators()) {
      const Outcome l = outcome(learned, &lop, s);
      if (!l.applicable) continue;
      const Outcome r = outcome(real, real.find(lop.key), s);
      if (!r.applicable) return Counterexample{s, lop.key, "not applicable in the real model"};
      if (!l.next) return Counterexample{s, lop.key, "learned model: " + l.error};
      if (!r.next) return Counterexample{s, lop.key, "real model: " + r.error};
      if (!(*l.next == *r.next)) {
        return Counterexample{s, lop.key,
                              "successor differs: learned " + state_text(*l.next) + ", real " +
                                  state_text(*r.next)};
      }
    }
  }
  return std::nullopt;
}

std::optional<Counterexample> safety_check(const GroundModel& learned, const GroundModel& real) {
  return safety_check(learned, real, all_states(real.universe()));
}

std::optional<Counterexample> transition_difference(const GroundModel& a, const GroundModel& b,
                                                    const std::vector<State>& states) {
  require_same_universe(a, b);
  require_state_universe(a, states);
  const auto keys = union_keys(a, b);
  for (const auto& s : states) {
    for (const auto& key : keys) {
      const Outcome x = outcome(a, a.find(key), s);
      const Outcome y = outcome(b, b.find(key), s);
      if (x.applicable != y.applicable) {
        return Counterexample{s, key,
                              std::string("applicable only in the ") +
                                  (x.applicable ? "first" : "second") + " model"};
      }
      if (!x.applicable) continue;
      if (x.next.has_value() != y.next.has_value() || (x.next && !(*x.next == *y.next))) {
        return Counterexample{s, key, "successors differ"};
      }
    }
  }
  return std::nullopt;
}

std::optional<Counterexample> replay_safety(const GroundModel& learned, const GroundModel& real,
                                            const std::vector<State>& starts, std::size_t walks,
                                            std::size_t length, std::uint64_t seed) {
  require_same_universe(learned, real);
  require_state_universe(real, starts);
  if (starts.empty()) return std::nullopt;
  std::mt19937_64 rng(seed);
  for (std::size_t w = 0; w < walks; ++w) {
    State s = starts[w % starts.size()];
    for (std::size_t step = 0; step < length; ++step) {
      const auto options = learned.applicable_operators(s);
      if (options.empty()) break;
      std::uniform_int_distribution<std::size_t> pick(0, options.size() - 1);
      const GroundOperator& lop = *options[pick(rng)];
      const Outcome l = outcome(learned, &lop, s);
      const Outcome r = outcome(real, real.find(lop.key), s);
      if (!r.applicable) return Counterexample{s, lop.key, "not applicable in the real model"};
      if (!l.next || !r.next || !(*l.next == *r.next)) {
        return Counterexample{s, lop.key, "successor differs"};
      }
      s = std::move(*l.next);
    }
  }
  return std::nullopt;
}

std::optional<Counterexample> training_inconsistency(const GroundModel& learned,
                                                     const std::vector<Trajectory>& trajectories) {
  for (const auto& t : trajectories) {
    require_state_universe(learned, t.states);
    for (std::size_t i = 0; i < t.actions.size(); ++i) {
      const std::string key = action_key(t.actions[i]);
      const Outcome o = outcome(learned, learned.find(key), t.states[i]);
      if (!o.applicable) return Counterexample{t.states[i], key, "training step not permitted"};
      if (!o.next) return Counterexample{t.states[i], key, o.error};
      if (!(*o.next == t.states[i + 1])) {
        return Counterexample{t.states[i], key, "training successor not reproduced"};
      }
    }
  }
  return std::nullopt;
}

std::string describe(const Counterexample& c) {
  return c.action + " in " + state_text(c.state) + ": " + c.reason;
}

}  // namespace csam
