// infoplan: translate scLTL formulas, plan single instances and run Monte
// Carlo studies. Talks to the library through the C interface only.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "infoplan/infoplan.h"

namespace fs = std::filesystem;

namespace {

constexpr int kUsage = 2;

struct Overrides {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> horizon;
  std::optional<std::string> mode;
  std::optional<std::size_t> jobs;
  std::optional<std::size_t> trials;
  std::string out;
};

int fail(int status) {
  std::cerr << "infoplan: " << infoplan_last_error() << "\n";
  return status;
}

bool write_file(const fs::path& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  f << text;
  if (!f) {
    std::cerr << "infoplan: cannot write " << path << "\n";
    return false;
  }
  return true;
}

bool prepare_out(const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) {
    std::cerr << "infoplan: cannot create " << dir << ": " << ec.message() << "\n";
    return false;
  }
  return true;
}

using Experiment = std::unique_ptr<infoplan_experiment, decltype(&infoplan_experiment_free)>;

int load_experiment(const Overrides& o, Experiment& out) {
  std::string text;
  if (!o.config.empty()) {
    std::ifstream f(o.config, std::ios::binary);
    if (!f) {
      std::cerr << "infoplan: cannot read config " << o.config << "\n";
      return kUsage;
    }
    std::ostringstream ss;
    ss << f.rdbuf();
    text = ss.str();
  }
  infoplan_experiment* e = nullptr;
  if (int rc = infoplan_experiment_load(text.c_str(), &e)) return fail(rc);
  out.reset(e);
  if (o.seed && infoplan_experiment_set_seed(e, *o.seed)) return fail(kUsage);
  if (o.horizon && infoplan_experiment_set_horizon(e, *o.horizon)) return fail(kUsage);
  if (o.mode && infoplan_experiment_set_mode(e, o.mode->c_str())) return fail(kUsage);
  if (o.jobs && infoplan_experiment_set_jobs(e, *o.jobs)) return fail(kUsage);
  if (o.trials && infoplan_experiment_set_trials(e, *o.trials)) return fail(kUsage);
  return 0;
}

int cmd_translate(const std::string& formula, const std::vector<std::string>& ap, const std::string& out) {
  std::vector<const char*> names;
  for (const auto& a : ap) names.push_back(a.c_str());
  infoplan_automaton* raw = nullptr;
  if (int rc = infoplan_automaton_translate(formula.c_str(), names.data(), names.size(), &raw)) return fail(rc);
  std::unique_ptr<infoplan_automaton, decltype(&infoplan_automaton_free)> a(raw, infoplan_automaton_free);
  if (out.empty()) {
    std::cout << infoplan_automaton_dot(a.get());
    return 0;
  }
  if (!prepare_out(out)) return kUsage;
  if (!write_file(fs::path(out) / "automaton.dot", infoplan_automaton_dot(a.get())) ||
      !write_file(fs::path(out) / "automaton.json", infoplan_automaton_json(a.get()))) {
    return kUsage;
  }
  std::cout << "states: " << infoplan_automaton_state_count(a.get()) << "\n"
            << "wrote " << (fs::path(out) / "automaton.dot").string() << " and automaton.json\n";
  return 0;
}

int cmd_plan(const Overrides& o) {
  Experiment e(nullptr, infoplan_experiment_free);
  if (int rc = load_experiment(o, e)) return rc;
  infoplan_plan* raw = nullptr;
  if (int rc = infoplan_plan_run(e.get(), &raw)) return fail(rc);
  std::unique_ptr<infoplan_plan, decltype(&infoplan_plan_free)> p(raw, infoplan_plan_free);
  if (!prepare_out(o.out)) return kUsage;
  if (!write_file(fs::path(o.out) / "trace.json", infoplan_plan_json(p.get())) ||
      !write_file(fs::path(o.out) / "product.dot", infoplan_plan_product_dot(p.get()))) {
    return kUsage;
  }
  std::printf("initial_entropy_bits: %.6f\n", infoplan_plan_initial_entropy(p.get()));
  std::printf("terminal_entropy_bits: %.6f\n", infoplan_plan_terminal_entropy(p.get()));
  std::printf("steps: %zu\n", infoplan_plan_steps(p.get()));
  std::printf("satisfied: %s\n", infoplan_plan_satisfied(p.get()) ? "true" : "false");
  return 0;
}

int cmd_montecarlo(const Overrides& o) {
  Experiment e(nullptr, infoplan_experiment_free);
  if (int rc = load_experiment(o, e)) return rc;
  infoplan_study* raw = nullptr;
  if (int rc = infoplan_study_run(e.get(), &raw)) return fail(rc);
  std::unique_ptr<infoplan_study, decltype(&infoplan_study_free)> s(raw, infoplan_study_free);
  if (!prepare_out(o.out)) return kUsage;
  const fs::path dir(o.out);
  if (!write_file(dir / "trials.csv", infoplan_study_trials_csv(s.get())) ||
      !write_file(dir / "histogram.csv", infoplan_study_histogram_csv(s.get())) ||
      !write_file(dir / "study.json", infoplan_study_json(s.get())) ||
      !write_file(dir / "config.json", infoplan_experiment_json(e.get()))) {
    return kUsage;
  }
  std::printf("trials: %zu\n", infoplan_study_trials(s.get()));
  std::printf("mean_bits: %.6f\n", infoplan_study_mean(s.get()));
  std::printf("median_bits: %.6f\n", infoplan_study_median(s.get()));
  std::printf("variance_bits2: %.6f\n", infoplan_study_variance(s.get()));
  std::printf("satisfaction_rate: %.6f\n", infoplan_study_satisfaction_rate(s.get()));
  std::printf("rejected_instances: %zu\n", infoplan_study_rejected_instances(s.get()));
  return 0;
}

void add_experiment_flags(CLI::App* cmd, Overrides& o) {
  cmd->add_option("--config", o.config, "JSON experiment configuration")->check(CLI::ExistingFile);
  cmd->add_option("--seed", o.seed, "Seed for every random draw");
  cmd->add_option("--horizon", o.horizon, "Receding horizon length b")->check(CLI::PositiveNumber);
  cmd->add_option("--mode", o.mode, "Planner")->check(CLI::IsMember({"exhaustive", "rhc"}));
  cmd->add_option("--jobs", o.jobs, "Worker threads")->check(CLI::PositiveNumber);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Informative path planning under co-safe temporal logic constraints"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(infoplan_version()));

  std::string formula;
  std::vector<std::string> ap;
  std::string translate_out;
  auto* translate = app.add_subcommand("translate", "Build the automaton of a formula");
  translate->add_option("--formula", formula, "scLTL formula")->required();
  translate->add_option("--ap", ap, "Atomic propositions in bit order")->delimiter(',');
  translate->add_option("--out", translate_out, "Directory for automaton.dot and automaton.json");

  Overrides plan_opts;
  plan_opts.out = "out";
  auto* plan = app.add_subcommand("plan", "Run one planning instance end to end");
  add_experiment_flags(plan, plan_opts);
  plan->add_option("--out", plan_opts.out, "Output directory")->capture_default_str();

  Overrides mc_opts;
  mc_opts.out = "out";
  auto* mc = app.add_subcommand("montecarlo", "Run a seeded Monte Carlo study");
  add_experiment_flags(mc, mc_opts);
  mc->add_option("--trials", mc_opts.trials, "Trial count");
  mc->add_option("--out", mc_opts.out, "Output directory")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kUsage;
  }

  if (translate->parsed()) return cmd_translate(formula, ap, translate_out);
  if (plan->parsed()) return cmd_plan(plan_opts);
  return cmd_montecarlo(mc_opts);
}
