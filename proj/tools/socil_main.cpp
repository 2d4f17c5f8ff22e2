#include <CLI11.hpp>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "socil/harness.hpp"

namespace {

using socil::RunConfig;

// --config supplies base values, explicitly passed flags override them.
RunConfig load_config_file(int argc, char** argv) {
  RunConfig config;
  for (int i = 1; i + 1 < argc; ++i) {
    if (std::string(argv[i]) == "--config") {
      std::ifstream f(argv[i + 1]);
      if (!f) throw socil::IoError(std::string("cannot read ") + argv[i + 1]);
      nlohmann::json j = nlohmann::json::parse(f);
      // A manifest is accepted directly: its config object is the run config.
      if (j.contains("config")) j = j.at("config");
      socil::from_json(j, config);
    }
  }
  return config;
}

void add_run_options(CLI::App* cmd, RunConfig& config, std::string& mode_str,
                     double& alpha, double& beta) {
  cmd->add_option("--config", "JSON config file (parsed before flags)");
  cmd->add_option("--system", config.system, "cartpole | arm | lqr-toy");
  cmd->add_option("--mode", mode_str, "safe | baseline");
  cmd->add_option("--alpha", alpha, "barrier weight");
  cmd->add_option("--beta", beta, "softplus sharpness");
  cmd->add_option("--sigma", config.sigma, "measurement noise std dev");
  cmd->add_option("--seed", config.seed, "rng seed");
  cmd->add_option("--iters", config.iterations, "online iterations");
  cmd->add_option("--out", config.out_dir, "output directory");
  cmd->add_option("--p0", config.initial_covariance, "initial covariance scale");
  cmd->add_option("--perturbation", config.perturbation,
                  "initial-guess relative offset");
  cmd->add_flag("--skip-degraded", config.skip_degraded_updates,
                "skip EKF updates on degraded iterations");
  cmd->add_option("--barrier-decay", config.barrier_decay,
                  "per-iteration barrier decay factor");
}

void apply_mode_flags(CLI::App* cmd, RunConfig& config,
                      const std::string& mode_str, double alpha, double beta) {
  if (cmd->count("--mode")) config.mode = socil::run_mode_from_string(mode_str);
  if (cmd->count("--alpha")) config.alpha = alpha;
  if (cmd->count("--beta")) config.beta = beta;
}

void print_violation_table(const socil::ViolationReport& report,
                           std::ostream& out) {
  out << "family  %violation  max violation [%]\n";
  for (const auto& e : report.entries) {
    char line[128];
    std::snprintf(line, sizeof(line), "%-7s %10.1f %18.1f\n", e.family.c_str(),
                  e.pct_violation, e.max_violation);
    out << line;
  }
}

int do_run(RunConfig config) {
  socil::RunLog log;
  try {
    log = socil::run_online(config);
  } catch (const socil::Error& e) {
    std::cerr << "run failed: " << e.what() << "\n";
    return 3;
  }
  if (!config.out_dir.empty()) socil::export_run(log, config.out_dir);
  if (log.aborted) {
    std::cerr << "run aborted: " << log.abort_reason << "\n";
    return 3;
  }

  const auto& last = log.records.back();
  std::cout << "system " << config.system << ", mode "
            << socil::to_string(config.mode) << ", " << log.records.size()
            << " iterations\n";
  std::cout << "final loss " << last.loss << ", initial loss "
            << log.records.front().loss << "\n";
  std::cout << "theta_true   " << log.theta_true.transpose() << "\n";
  std::cout << "theta_final  " << last.theta.transpose() << "\n";
  print_violation_table(log.final_violations, std::cout);
  if (!config.out_dir.empty())
    std::cout << "wrote " << config.out_dir << "\n";
  return 0;
}

int do_sweep(RunConfig config, int trials) {
  std::vector<socil::ViolationReport> reports;
  int positive_both = 0;
  const std::string base_out = config.out_dir;
  for (int i = 0; i < trials; ++i) {
    RunConfig trial = config;
    trial.seed = config.seed + static_cast<std::uint64_t>(i);
    trial.out_dir = base_out.empty()
                        ? ""
                        : base_out + "/trial_" + std::to_string(i);
    socil::RunLog log;
    try {
      log = socil::run_online(trial);
    } catch (const socil::Error& e) {
      std::cerr << "trial " << i << " failed: " << e.what() << "\n";
      return 3;
    }
    if (!trial.out_dir.empty()) socil::export_run(log, trial.out_dir);
    if (log.aborted) {
      std::cerr << "trial " << i << " aborted: " << log.abort_reason << "\n";
      return 3;
    }
    reports.push_back(log.final_violations);
    bool all_positive = !log.final_violations.entries.empty();
    for (const auto& e : log.final_violations.entries)
      if (e.pct_violation <= 0.0) all_positive = false;
    positive_both += all_positive ? 1 : 0;
  }

  socil::ViolationReport mean;
  for (std::size_t f = 0; f < reports.front().entries.size(); ++f) {
    socil::ViolationEntry e;
    e.family = reports.front().entries[f].family;
    for (const auto& r : reports) {
      e.pct_violation += r.entries[f].pct_violation;
      e.max_violation += r.entries[f].max_violation;
    }
    e.pct_violation /= trials;
    e.max_violation /= trials;
    mean.entries.push_back(e);
  }
  std::cout << trials << " trials, seeds " << config.seed << ".."
            << config.seed + static_cast<std::uint64_t>(trials - 1) << "\n";
  std::cout << "mean over trials:\n";
  print_violation_table(mean, std::cout);
  std::cout << "trials with violations in every family: " << positive_both
            << "/" << trials << "\n";

  if (!base_out.empty()) {
    std::ofstream f(std::filesystem::path(base_out) / "summary.csv");
    f << "trial,seed,family,pct_violation,max_violation\n";
    for (int i = 0; i < trials; ++i)
      for (const auto& e : reports[static_cast<std::size_t>(i)].entries)
        f << i << "," << config.seed + static_cast<std::uint64_t>(i) << ","
          << e.family << "," << e.pct_violation << "," << e.max_violation
          << "\n";
  }
  return 0;
}

int do_demo(const RunConfig& config) {
  socil::Demonstration demo;
  try {
    demo = socil::generate_demonstration(config);
  } catch (const socil::Error& e) {
    std::cerr << "demonstration failed: " << e.what() << "\n";
    return 3;
  }
  std::cout << "demonstration with " << demo.xi_star.horizon()
            << " steps, " << demo.measurements.size() << " measurements\n";
  if (config.out_dir.empty()) return 0;

  std::filesystem::create_directories(config.out_dir);
  {
    std::ofstream f(std::filesystem::path(config.out_dir) /
                    "demo_trajectory.csv");
    const int n = demo.xi_star.state_dim();
    const int m = demo.xi_star.input_dim();
    f << "t";
    for (int i = 0; i < n; ++i) f << ",x_" << i;
    for (int j = 0; j < m; ++j) f << ",u_" << j;
    f << "\n";
    for (std::size_t t = 0; t < demo.xi_star.states.size(); ++t) {
      f << t;
      for (int i = 0; i < n; ++i) f << "," << demo.xi_star.states[t](i);
      for (int j = 0; j < m; ++j) {
        f << ",";
        if (t < demo.xi_star.inputs.size()) f << demo.xi_star.inputs[t](j);
      }
      f << "\n";
    }
  }
  {
    std::ofstream f(std::filesystem::path(config.out_dir) /
                    "demo_measurements.csv");
    const Eigen::Index r = demo.measurements.front().size();
    f << "t";
    for (Eigen::Index i = 0; i < r; ++i) f << ",y_" << i;
    f << "\n";
    for (std::size_t t = 0; t < demo.measurements.size(); ++t) {
      f << t;
      for (Eigen::Index i = 0; i < r; ++i) f << "," << demo.measurements[t](i);
      f << "\n";
    }
  }
  std::cout << "wrote " << config.out_dir << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Safe online control-informed learning benchmark harness"};
  app.require_subcommand(1);

  RunConfig base;
  try {
    base = load_config_file(argc, argv);
  } catch (const std::exception& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  }

  RunConfig run_cfg = base, sweep_cfg = base, demo_cfg = base;
  std::string run_mode = "safe", sweep_mode = "safe", demo_mode = "safe";
  double run_alpha = 0, run_beta = 0, sweep_alpha = 0, sweep_beta = 0,
         demo_alpha = 0, demo_beta = 0;
  int trials = 10;

  CLI::App* run = app.add_subcommand("run", "execute one online run");
  add_run_options(run, run_cfg, run_mode, run_alpha, run_beta);

  CLI::App* sweep = app.add_subcommand("sweep", "seeded repeated trials");
  add_run_options(sweep, sweep_cfg, sweep_mode, sweep_alpha, sweep_beta);
  sweep->add_option("--trials", trials, "number of seeded trials");

  CLI::App* demo = app.add_subcommand("demo", "generate a demonstration only");
  add_run_options(demo, demo_cfg, demo_mode, demo_alpha, demo_beta);

  CLI::App* validate =
      app.add_subcommand("validate", "run the built-in oracle suites");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) {
      apply_mode_flags(run, run_cfg, run_mode, run_alpha, run_beta);
      return do_run(run_cfg);
    }
    if (sweep->parsed()) {
      apply_mode_flags(sweep, sweep_cfg, sweep_mode, sweep_alpha, sweep_beta);
      return do_sweep(sweep_cfg, trials);
    }
    if (demo->parsed()) {
      apply_mode_flags(demo, demo_cfg, demo_mode, demo_alpha, demo_beta);
      return do_demo(demo_cfg);
    }
    if (validate->parsed())
      return socil::run_validation(std::cout) ? 0 : 2;
  } catch (const socil::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return 0;
}
