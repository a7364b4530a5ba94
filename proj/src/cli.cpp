#include "csam/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <ostream>
#include <random>

#include "csam/errors.hpp"
#include "csam/evaluation.hpp"
#include "csam/executor.hpp"
#include "csam/grounded_learner.hpp"
#include "csam/lifted_learner.hpp"
#include "csam/pddl.hpp"

namespace csam::cli {

namespace {

namespace fs = std::filesystem;

struct LearnConfig {
  std::string domain;
  std::vector<std::string> trajectories;
  std::string mode = "lifted";
  std::size_t n = 1;
  std::size_t k = 1;
  bool skip_ambiguous = false;
  std::string out;
  std::string log;
};

struct GenerateConfig {
  std::string domain;
  std::vector<std::string> problems;
  std::string plan;
  std::size_t count = 10;
  std::size_t length = 20;
  std::uint64_t seed = 0;
  std::string out_dir = ".";
};

struct EvaluateConfig {
  std::string learned;
  std::string real;
  std::string problem;
  std::vector<std::string> trajectories;
  bool exhaustive = false;
  std::string csv;
};

struct ValidateConfig {
  std::string domain;
  std::string problem;
  std::string plan;
};

// Parse errors carry the file they came from.
template <typename F>
auto with_file(const std::string& path, F&& parse) {
  try {
    return parse(read_file(path));
  } catch (const SyntaxError& e) {
    throw SyntaxError(path + ": " + e.what(), e.line(), e.column());
  } catch (const AmbiguousBinding& e) {
    throw AmbiguousBinding(path + ": " + e.what());
  } catch (const NoBinding& e) {
    throw NoBinding(path + ": " + e.what());
  } catch (const Error& e) {
    throw Error(path + ": " + e.what());
  }
}

Domain load_domain(const std::string& path) {
  return with_file(path, [](const std::string& text) { return parse_domain(text); });
}

Problem load_problem(const std::string& path, const Domain& domain) {
  return with_file(path, [&](const std::string& text) { return parse_problem(text, domain); });
}

Trajectory load_trajectory(const std::string& path, const Domain& domain) {
  return with_file(path, [&](const std::string& text) { return parse_trajectory(text, domain); });
}

void log_knowledge(std::ostream& log, const std::string& batch, const std::string& action,
                   const ActionKnowledge& k) {
  k.check_size_bound();
  log << "batch " << batch << " action " << action << ": |pre|=" << k.pre_size()
      << " |MustBeResult|=" << k.must_be_result_size() << " sum|PosAnte|=" << k.pos_ante_total()
      << " max|PosAnte|=" << k.pos_ante_max() << " bound=" << k.pos_ante_bound() << " ok\n";
}

void warn_unobserved(std::ostream& err, const Domain& domain, const Domain& learned) {
  for (const auto& a : domain.actions) {
    const bool seen = std::any_of(learned.actions.begin(), learned.actions.end(),
                                  [&](const ActionSchema& s) {
                                    return s.name == a.name || s.name.rfind(a.name + "_", 0) == 0;
                                  });
    if (!seen) err << "warning: action " << a.name << " never observed; omitted from the model\n";
  }
}

int cmd_learn(const LearnConfig& cfg, std::ostream& out, std::ostream& err) {
  const Domain domain = load_domain(cfg.domain);
  std::vector<Trajectory> trajectories;
  for (const auto& path : cfg.trajectories) trajectories.push_back(load_trajectory(path, domain));

  std::ofstream log_file;
  if (!cfg.log.empty()) {
    log_file.open(cfg.log);
    if (!log_file) throw Error("cannot write " + cfg.log);
  }
  std::ostream& log = cfg.log.empty() ? out : log_file;

  if (trajectories.empty()) err << "warning: no trajectories given; the learned model is empty\n";

  Domain learned;
  if (cfg.mode == "grounded") {
    if (trajectories.empty()) {
      learned = to_domain(SafeActionModel{}, domain, {});
    } else {
      const UniversePtr universe = make_universe(domain, trajectories.front().objects);
      GroundedLearner learner(universe, cfg.n);
      for (std::size_t t = 0; t < trajectories.size(); ++t) {
        if (!(*make_universe(domain, trajectories[t].objects) == *universe)) {
          throw UniverseMismatch(cfg.trajectories[t] +
                                 ": grounded learning needs one object set for all trajectories");
        }
        for (const auto& a : trajectories[t].actions) learner.add_action(a);
      }
      auto log_all = [&](const std::string& batch) {
        for (const auto& [key, e] : learner.entries()) log_knowledge(log, batch, key, e.knowledge);
      };
      log_all("0");
      for (std::size_t t = 0; t < trajectories.size(); ++t) {
        try {
          learner.observe(trajectories[t]);
        } catch (const Error& e) {
          throw Error(cfg.trajectories[t] + ": " + e.what());
        }
        log_all(std::to_string(t + 1));
      }
      learned = to_domain(build_action_model(learner), domain, trajectories.front().objects);
    }
  } else if (cfg.mode == "lifted") {
    LiftedLearner learner(domain, cfg.n, cfg.k);
    for (const auto& t : trajectories) {
      for (const auto& a : t.actions) learner.add_action(a.name);
    }
    auto log_all = [&](const std::string& batch) {
      for (const auto& [name, e] : learner.entries()) log_knowledge(log, batch, name, e.knowledge);
    };
    log_all("0");
    for (std::size_t t = 0; t < trajectories.size(); ++t) {
      LiftedLearner attempt = learner;
      try {
        attempt.observe(trajectories[t]);
      } catch (const AmbiguousBinding& e) {
        if (!cfg.skip_ambiguous) throw AmbiguousBinding(cfg.trajectories[t] + ": " + e.what());
        err << "warning: skipping " << cfg.trajectories[t] << ": " << e.what() << "\n";
        continue;
      } catch (const NoBinding& e) {
        throw NoBinding(cfg.trajectories[t] + ": " + e.what());
      }
      learner = std::move(attempt);
      log_all(std::to_string(t + 1));
    }
    learned = learner.build();
  } else {
    throw CLI::ValidationError("--mode", "must be grounded or lifted");
  }
  warn_unobserved(err, domain, learned);
  write_file(cfg.out, serialize_domain(learned));
  out << "wrote " << cfg.out << " (" << learned.actions.size() << " actions)\n";
  return kOk;
}

std::uint64_t trajectory_seed(std::uint64_t seed, std::size_t problem, std::size_t index) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(problem), static_cast<std::uint32_t>(index)};
  std::uint32_t words[2];
  seq.generate(words, words + 2);
  return (std::uint64_t{words[0]} << 32) | words[1];
}

int cmd_generate(const GenerateConfig& cfg, std::ostream& out, std::ostream& err) {
  const Domain domain = load_domain(cfg.domain);
  require_single_effect_per_result(domain);
  fs::create_directories(cfg.out_dir);

  if (!cfg.plan.empty()) {
    if (cfg.problems.size() != 1) throw CLI::ValidationError("--plan", "needs exactly one --problem");
    const Problem problem = load_problem(cfg.problems.front(), domain);
    const auto plan = with_file(cfg.plan, [](const std::string& text) { return parse_plan(text); });
    const GroundModel model(domain, problem.objects);
    const PlanVerdict verdict = validate_plan(model, problem, plan);
    if (!verdict.valid && verdict.failed_step && *verdict.failed_step < plan.size()) {
      err << "invalid plan at step " << *verdict.failed_step << ": " << verdict.reason << "\n";
      return kUnsafeOrInvalid;
    }
    const Trajectory t = execute_plan(model, problem, plan).trajectory;
    const fs::path path = fs::path(cfg.out_dir) / (fs::path(cfg.plan).stem().string() + ".traj");
    write_file(path.string(), serialize_trajectory(t));
    out << "wrote " << path.string() << "\n";
    return kOk;
  }

  for (std::size_t p = 0; p < cfg.problems.size(); ++p) {
    const Problem problem = load_problem(cfg.problems[p], domain);
    const GroundModel model(domain, problem.objects);
    const std::string stem = fs::path(cfg.problems[p]).stem().string();
    for (std::size_t i = 0; i < cfg.count; ++i) {
      const Trajectory t = random_walk(model, problem, cfg.length, trajectory_seed(cfg.seed, p, i));
      char suffix[32];
      std::snprintf(suffix, sizeof suffix, "_%03zu.traj", i);
      const fs::path path = fs::path(cfg.out_dir) / (stem + suffix);
      write_file(path.string(), serialize_trajectory(t));
      out << "wrote " << path.string() << " (" << t.size() << " steps)\n";
    }
  }
  return kOk;
}

int cmd_evaluate(const EvaluateConfig& cfg, std::ostream& out, std::ostream& err) {
  const Domain real_domain = load_domain(cfg.real);
  require_single_effect_per_result(real_domain);
  const Domain learned_domain = load_domain(cfg.learned);
  const Problem problem = load_problem(cfg.problem, real_domain);
  const GroundModel real(real_domain, problem.objects);
  const GroundModel learned(learned_domain, problem.objects);

  std::vector<State> sample;
  std::string sample_name;
  if (cfg.exhaustive) {
    sample = all_states(real.universe());
    sample_name = "all states";
  } else if (!cfg.trajectories.empty()) {
    std::vector<Trajectory> held_out;
    for (const auto& path : cfg.trajectories) held_out.push_back(load_trajectory(path, real_domain));
    sample = trajectory_states(held_out);
    sample_name = "trajectory states";
  } else {
    sample = reachable_states(real, {initial_state(real_domain, problem)});
    sample_name = "reachable states";
  }
  if (sample.empty()) throw Error("empty state sample");

  const MetricsReport report = semantic_metrics(learned, real, sample);
  out << "metrics over " << sample.size() << " " << sample_name << "\n" << metrics_table(report);
  if (!cfg.csv.empty()) write_file(cfg.csv, metrics_csv(report));

  std::optional<Counterexample> cex;
  const std::size_t fluents = real.universe()->size();
  if (fluents < 63 && (std::size_t{1} << fluents) <= kMaxEnumeratedStates) {
    cex = safety_check(learned, real);
    out << "safety checked over all " << (std::size_t{1} << fluents) << " states\n";
  } else {
    cex = safety_check(learned, real, sample);
    out << "safety checked over the " << sample_name << " only (universe too large)\n";
  }
  if (cex) {
    out << "UNSAFE: " << describe(*cex) << "\n";
    err << "safety counterexample found\n";
    return kUnsafeOrInvalid;
  }
  out << "safe\n";
  return kOk;
}

int cmd_validate(const ValidateConfig& cfg, std::ostream& out, std::ostream&) {
  const Domain domain = load_domain(cfg.domain);
  const Problem problem = load_problem(cfg.problem, domain);
  const auto plan = with_file(cfg.plan, [](const std::string& text) { return parse_plan(text); });
  const PlanVerdict verdict = validate_plan(domain, problem, plan);
  if (verdict.valid) {
    out << "valid\n";
    return kOk;
  }
  out << "invalid at step " << verdict.failed_step.value_or(plan.size()) << ": " << verdict.reason
      << "\n";
  return kUnsafeOrInvalid;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Learn safe action models with conditional and universal effects", "csam"};
  app.require_subcommand(1);

  LearnConfig learn;
  auto* learn_cmd = app.add_subcommand("learn", "learn a domain from trajectories");
  learn_cmd->add_option("-d,--domain", learn.domain, "domain with predicates and action signatures")
      ->required();
  learn_cmd->add_option("-t,--trajectories", learn.trajectories, "trajectory files");
  learn_cmd->add_option("-m,--mode", learn.mode, "grounded or lifted")
      ->check(CLI::IsMember({"grounded", "lifted"}));
  learn_cmd->add_option("-n", learn.n, "antecedent size bound")->check(CLI::PositiveNumber);
  learn_cmd->add_option("-k", learn.k, "UQVs per action")->check(CLI::NonNegativeNumber);
  learn_cmd->add_flag("--skip-ambiguous", learn.skip_ambiguous,
                      "drop trajectories that break the binding assumption");
  learn_cmd->add_option("-o,--out", learn.out, "learned domain file")->required();
  learn_cmd->add_option("--log", learn.log, "learning log file (default stdout)");

  GenerateConfig gen;
  auto* gen_cmd = app.add_subcommand("generate", "generate trajectories from a real model");
  gen_cmd->add_option("-d,--domain", gen.domain, "real domain")->required();
  gen_cmd->add_option("-p,--problem", gen.problems, "problem files")->required();
  gen_cmd->add_option("--plan", gen.plan, "plan file to execute instead of random walks");
  gen_cmd->add_option("-c,--count", gen.count, "random walks per problem");
  gen_cmd->add_option("-l,--length", gen.length, "steps per random walk");
  gen_cmd->add_option("-s,--seed", gen.seed, "random seed");
  gen_cmd->add_option("-o,--out-dir", gen.out_dir, "output directory");

  EvaluateConfig eval;
  auto* eval_cmd = app.add_subcommand("evaluate", "compare a learned model with the real one");
  eval_cmd->add_option("--learned", eval.learned, "learned domain")->required();
  eval_cmd->add_option("--real", eval.real, "real domain")->required();
  eval_cmd->add_option("-p,--problem", eval.problem, "problem giving objects and init")->required();
  eval_cmd->add_option("-t,--trajectories", eval.trajectories, "held-out trajectories");
  eval_cmd->add_flag("--exhaustive,--exhaustive-metrics", eval.exhaustive,
                     "measure over every state of the universe");
  eval_cmd->add_option("--csv", eval.csv, "metrics CSV output");

  ValidateConfig val;
  auto* val_cmd = app.add_subcommand("validate", "check a plan against a domain and problem");
  val_cmd->add_option("-d,--domain", val.domain, "domain")->required();
  val_cmd->add_option("-p,--problem", val.problem, "problem")->required();
  val_cmd->add_option("--plan", val.plan, "plan file")->required();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsageOrParse;
  }

  try {
    if (learn_cmd->parsed()) return cmd_learn(learn, out, err);
    if (gen_cmd->parsed()) return cmd_generate(gen, out, err);
    if (eval_cmd->parsed()) return cmd_evaluate(eval, out, err);
    return cmd_validate(val, out, err);
  } catch (const AmbiguousBinding& e) {
    err << "error: ambiguous binding: " << e.what() << "\n";
    return kAssumptionViolated;
  } catch (const NoBinding& e) {
    err << "error: no binding: " << e.what() << "\n";
    return kAssumptionViolated;
  } catch (const DisjunctiveAntecedent& e) {
    err << "error: disjunctive antecedent: " << e.what() << "\n";
    return kAssumptionViolated;
  } catch (const PreconditionViolated& e) {
    err << "error: " << e.what() << "\n";
    return kUnsafeOrInvalid;
  } catch (const CLI::Error& e) {
    err << "error: " << e.what() << "\n";
    return kUsageOrParse;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kUsageOrParse;
  }
}

}  // namespace csam::cli
