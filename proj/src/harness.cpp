#include "socil/harness.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <ostream>

#include "socil/detail/rng.hpp"

namespace socil {

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start)
      .count();
}

std::string fmt17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

ViolationReport aggregate_violations(const std::vector<IterationRecord>& recs) {
  ViolationReport out;
  if (recs.empty()) return out;
  for (std::size_t f = 0; f < recs.front().violations.entries.size(); ++f) {
    ViolationEntry agg;
    agg.family = recs.front().violations.entries[f].family;
    for (const auto& rec : recs) {
      agg.pct_violation += rec.violations.entries[f].pct_violation;
      agg.max_violation = std::max(agg.max_violation,
                                   rec.violations.entries[f].max_violation);
    }
    agg.pct_violation /= static_cast<double>(recs.size());
    out.entries.push_back(std::move(agg));
  }
  return out;
}

}  // namespace

ParamVector perturb_initial_guess(const ParamVector& theta_true,
                                  double magnitude, std::uint64_t seed) {
  auto scaled = [&](const Vector& part, int partition, bool force_down) {
    double sign =
        detail::counter_uniform(seed, 0xA11CE, static_cast<std::uint64_t>(partition),
                                0.0, 1.0) < 0.5
            ? -1.0
            : 1.0;
    if (force_down) sign = -1.0;
    return (part * (1.0 + sign * magnitude)).eval();
  };
  return ParamVector(scaled(theta_true.dyn, 0, false),
                     scaled(theta_true.obj, 1, false),
                     scaled(theta_true.cstr, 2, true));
}

ViolationReport violation_metrics(const Trajectory& traj,
                                  const SystemModel& model,
                                  const ParamVector& theta_true) {
  if (!traj.rolled_out)
    throw EvaluationError("violation_metrics expects a rolled-out trajectory");
  const ConstraintValues values =
      evaluate_constraints(model.problem, traj, theta_true);
  const int T = traj.horizon();

  ViolationReport report;
  for (const ConstraintFamily& fam : model.families) {
    const double bound = theta_true.cstr(fam.cstr_index);
    if (bound == 0.0)
      throw ConfigError("violation_metrics: zero bound for family " + fam.name);
    int steps = 0, violating = 0;
    double worst = 0.0;
    for (int t = 0; t < T; ++t) {
      ++steps;
      bool bad = false;
      for (int idx : fam.path_indices) {
        const double g = values.ineq_path[static_cast<std::size_t>(t)](idx);
        if (g > 0.0) bad = true;
        worst = std::max(worst, std::max(g, 0.0) / std::abs(bound));
      }
      violating += bad ? 1 : 0;
    }
    if (!fam.term_indices.empty()) {
      ++steps;
      bool bad = false;
      for (int idx : fam.term_indices) {
        const double g = values.ineq_term(idx);
        if (g > 0.0) bad = true;
        worst = std::max(worst, std::max(g, 0.0) / std::abs(bound));
      }
      violating += bad ? 1 : 0;
    }
    report.entries.push_back(ViolationEntry{
        fam.name, 100.0 * violating / std::max(steps, 1), 100.0 * worst});
  }
  return report;
}

Demonstration generate_demonstration(const RunConfig& config) {
  config.validate();
  const SystemModel model = config.build_system();
  BarrierConfig cfg{config.resolved_alpha(), config.resolved_beta()};
  const AugmentedProblem tight =
      augment(model.problem, cfg).with_barrier_scale(0.1);

  SolverSettings settings = config.solver;
  settings.max_iterations = config.demo_max_iterations();
  const Solution sol = solve(tight, model.theta_true, std::nullopt, settings);
  if (!sol.converged)
    throw SolverError("demonstration solve did not converge (stationarity " +
                      std::to_string(sol.stationarity) + ")");

  // The demonstration must strictly satisfy the true constraints; a
  // violating scenario is invalid, not merely degraded.
  const ConstraintValues values =
      evaluate_constraints(model.problem, sol.trajectory, model.theta_true);
  for (int t = 0; t < model.problem.horizon; ++t)
    for (Eigen::Index i = 0; i < values.ineq_path[t].size(); ++i)
      if (values.ineq_path[static_cast<std::size_t>(t)](i) >= 0.0)
        throw Error("demonstration infeasible: g[" + std::to_string(i) +
                    "] >= 0 at t=" + std::to_string(t));
  for (Eigen::Index i = 0; i < values.ineq_term.size(); ++i)
    if (values.ineq_term(i) >= 0.0)
      throw Error("demonstration infeasible: terminal g[" + std::to_string(i) +
                  "] >= 0");

  const MeasurementModel mm = model.default_measurement(config.sigma);
  const NoiseConfig noise{config.sigma, config.seed};
  Demonstration demo;
  demo.xi_star = sol.trajectory;
  demo.measurements.reserve(static_cast<std::size_t>(model.problem.horizon) + 1);
  for (int t = 0; t <= model.problem.horizon; ++t)
    demo.measurements.push_back(
        measure(demo.xi_star.stacked(t), mm, noise, t));
  return demo;
}

RunLog run_online(const RunConfig& config) {
  config.validate();
  const SystemModel model = config.build_system();
  const ParamVector& theta_true = model.theta_true;
  const int T = model.problem.horizon;
  const int p = model.problem.param_dim();

  const Demonstration demo = generate_demonstration(config);
  const MeasurementModel mm = model.default_measurement(config.sigma);

  const ControlProblem solving_problem = config.mode == RunMode::safe_ocil
                                             ? model.problem
                                             : model.problem.without_constraints();
  BarrierConfig barrier_cfg{config.resolved_alpha(), config.resolved_beta()};
  AugmentedProblem aug = augment(solving_problem, barrier_cfg);

  const ParamVector theta0 =
      perturb_initial_guess(theta_true, config.perturbation, config.seed);
  EstimatorState est{theta0, config.initial_covariance * Matrix::Identity(p, p),
                     0};

  RunLog log;
  log.theta_true = theta_true.flat();
  log.theta_initial = theta0.flat();
  log.records.reserve(static_cast<std::size_t>(config.iterations));

  std::optional<Trajectory> warm;
  for (int iter = 0; iter < config.iterations; ++iter) {
    const int t_idx = iter % (T + 1);
    const auto t_start = Clock::now();

    Solution sol;
    try {
      try {
        sol = solve(aug, est.theta_hat, warm, config.solver);
      } catch (const Error&) {
        sol = solve(aug, est.theta_hat, std::nullopt, config.solver);
      }
    } catch (const Error& e) {
      log.aborted = true;
      log.abort_reason = e.what();
      break;
    }
    warm = sol.trajectory;
    bool degraded = !sol.converged;

    const auto t_grad = Clock::now();
    bool gradient_ok = true;
    TrajectoryJacobian jac;
    try {
      const HamiltonianDerivs derivs = assemble_derivs(aug, sol, est.theta_hat);
      jac = pdp_jacobian(derivs);
    } catch (const Error&) {
      gradient_ok = false;
      degraded = true;
    }
    const double ms_gradient = ms_since(t_grad);

    if (gradient_ok && !(degraded && config.skip_degraded_updates)) {
      const Vector xi = sol.trajectory.stacked(t_idx);
      const Matrix L = stage_jacobian(t_idx, jac, mm, xi);
      const Vector innovation =
          demo.measurements[static_cast<std::size_t>(t_idx)] - mm.z(xi);
      auto [next, report] = ekf_step(est, L, innovation, mm);
      est = std::move(next);
    }

    IterationRecord rec;
    rec.iteration = iter;
    rec.ms_gradient = ms_gradient;
    rec.loss = cumulative_loss(sol.trajectory, demo.measurements, mm);
    rec.theta = est.theta_hat.flat();
    rec.stationarity = sol.stationarity;
    rec.degraded = degraded;
    rec.violations = violation_metrics(sol.trajectory, model, theta_true);
    rec.ms_total = ms_since(t_start);
    log.records.push_back(std::move(rec));
    log.final_trajectory = sol.trajectory;

    if (config.barrier_decay != 1.0) {
      barrier_cfg.alpha *= config.barrier_decay;
      barrier_cfg.beta *= config.barrier_decay;
      aug = augment(solving_problem, barrier_cfg);
    }
  }

  log.final_violations = aggregate_violations(log.records);

  nlohmann::json manifest;
  manifest["version"] = kVersion;
  manifest["config"] = config;
  manifest["theta_true"] = std::vector<double>(
      log.theta_true.data(), log.theta_true.data() + log.theta_true.size());
  manifest["theta_initial"] = std::vector<double>(
      log.theta_initial.data(),
      log.theta_initial.data() + log.theta_initial.size());
  manifest["aborted"] = log.aborted;
  if (log.aborted) manifest["abort_reason"] = log.abort_reason;
  log.manifest = std::move(manifest);
  return log;
}

void export_run(const RunLog& log, const std::string& dir) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create output directory " + dir);

  auto open = [&](const std::string& name) {
    std::ofstream f(fs::path(dir) / name);
    if (!f) throw IoError("cannot write " + (fs::path(dir) / name).string());
    return f;
  };

  {
    std::ofstream f = open("manifest.json");
    f << log.manifest.dump(2) << "\n";
  }

  {
    std::ofstream f = open("iterations.csv");
    const int p = static_cast<int>(log.theta_true.size());
    f << "iter,loss";
    for (int k = 0; k < p; ++k) f << ",theta_" << k;
    f << ",ms_total,ms_gradient,stationarity,degraded\n";
    for (const auto& rec : log.records) {
      f << rec.iteration << "," << fmt17(rec.loss);
      for (int k = 0; k < p; ++k) f << "," << fmt17(rec.theta(k));
      f << "," << fmt17(rec.ms_total) << "," << fmt17(rec.ms_gradient) << ","
        << fmt17(rec.stationarity) << "," << (rec.degraded ? 1 : 0) << "\n";
    }
  }

  {
    std::ofstream f = open("violations.csv");
    f << "iter,family,pct_violation,max_violation\n";
    for (const auto& rec : log.records)
      for (const auto& e : rec.violations.entries)
        f << rec.iteration << "," << e.family << "," << fmt17(e.pct_violation)
          << "," << fmt17(e.max_violation) << "\n";
    for (const auto& e : log.final_violations.entries)
      f << "all," << e.family << "," << fmt17(e.pct_violation) << ","
        << fmt17(e.max_violation) << "\n";
  }

  {
    std::ofstream f = open("trajectory_final.csv");
    const Trajectory& traj = log.final_trajectory;
    const int n = traj.state_dim();
    const int m = traj.input_dim();
    f << "t";
    for (int i = 0; i < n; ++i) f << ",x_" << i;
    for (int j = 0; j < m; ++j) f << ",u_" << j;
    f << "\n";
    for (int t = 0; t < static_cast<int>(traj.states.size()); ++t) {
      f << t;
      for (int i = 0; i < n; ++i)
        f << "," << fmt17(traj.states[static_cast<std::size_t>(t)](i));
      for (int j = 0; j < m; ++j) {
        f << ",";
        if (t < traj.horizon())
          f << fmt17(traj.inputs[static_cast<std::size_t>(t)](j));
      }
      f << "\n";
    }
  }

  {
    std::ofstream f = open("plotdata_loss.csv");
    f << "iter,loss\n";
    for (const auto& rec : log.records)
      f << rec.iteration << "," << fmt17(rec.loss) << "\n";
  }
}

}  // namespace socil
