#include "socil/trajopt.hpp"

#include <cmath>

namespace socil {

namespace {

constexpr double kRegularizationCap = 1e12;

struct CostateSweep {
  std::vector<Vector> costates;  // costates[t] = lambda_{t+1}
  double stationarity = 0.0;
};

CostateSweep costate_sweep(const AugmentedProblem& aug,
                           const ParamVector& theta, const Trajectory& traj) {
  const int T = traj.horizon();
  CostateSweep out;
  out.costates.resize(static_cast<std::size_t>(T));
  Vector lam = aug.terminal_blocks(traj.states.back(), theta, false).lx;
  for (int t = T - 1; t >= 0; --t) {
    out.costates[static_cast<std::size_t>(t)] = lam;
    const HamiltonianBlocks b =
        aug.stage_blocks(traj.states[static_cast<std::size_t>(t)],
                         traj.inputs[static_cast<std::size_t>(t)], lam, theta,
                         /*want_theta=*/false);
    out.stationarity =
        std::max(out.stationarity, b.lu.lpNorm<Eigen::Infinity>());
    lam = b.lx;
  }
  return out;
}

}  // namespace

std::vector<Vector> compute_costates(const AugmentedProblem& aug,
                                     const ParamVector& theta,
                                     const Trajectory& traj) {
  return costate_sweep(aug, theta, traj).costates;
}

double stationarity_residual(const AugmentedProblem& aug,
                             const ParamVector& theta,
                             const Trajectory& traj) {
  if (!traj.rolled_out)
    throw EvaluationError("stationarity_residual expects a rolled-out trajectory");
  return costate_sweep(aug, theta, traj).stationarity;
}

Solution solve(const AugmentedProblem& aug, const ParamVector& theta,
               const std::optional<Trajectory>& warm_start,
               const SolverSettings& settings) {
  settings.validate();
  const ControlProblem& pr = aug.original();
  pr.check_theta(theta);
  const int T = pr.horizon;
  const int m = pr.input_dim;

  Trajectory traj;
  if (warm_start) {
    if (warm_start->horizon() != T ||
        warm_start->input_dim() != m)
      throw DimensionError("warm start does not match problem dimensions");
    traj = rollout(pr, theta, warm_start->inputs);
  } else {
    traj = rollout(pr, theta, std::vector<Vector>(
                                  static_cast<std::size_t>(T), Vector::Zero(m)));
  }
  double cost = aug.total_cost(traj, theta);

  std::vector<Vector> feedforward(static_cast<std::size_t>(T));
  std::vector<Matrix> feedback(static_cast<std::size_t>(T));
  double rho = settings.initial_regularization;
  std::vector<double> trace;
  int iterations = 0;
  bool stalled = false;

  for (; iterations < settings.max_iterations && !stalled; ++iterations) {
    // Backward pass on the quadratic expansion; a non-PD regularized
    // Lbar^uu restarts the pass with larger rho.
    double grad_inf = 0.0;
    bool backward_ok = false;
    while (!backward_ok) {
      backward_ok = true;
      grad_inf = 0.0;
      const TerminalHamiltonianBlocks term =
          aug.terminal_blocks(traj.states.back(), theta, false);
      Vector value_x = term.lx;
      Matrix value_xx = term.lxx;
      for (int t = T - 1; t >= 0; --t) {
        const auto ti = static_cast<std::size_t>(t);
        const HamiltonianBlocks b = aug.stage_blocks(
            traj.states[ti], traj.inputs[ti], value_x, theta, false);
        const Matrix qxx = b.lxx + b.fx.transpose() * value_xx * b.fx;
        const Matrix qux =
            b.lxu.transpose() + b.fu.transpose() * value_xx * b.fx;
        const Matrix quu = b.luu + b.fu.transpose() * value_xx * b.fu;
        const Vector& qx = b.lx;
        const Vector& qu = b.lu;
        grad_inf = std::max(grad_inf, qu.lpNorm<Eigen::Infinity>());

        const Matrix quu_reg =
            quu + rho * Matrix::Identity(m, m);
        Eigen::LLT<Matrix> llt(quu_reg);
        if (llt.info() != Eigen::Success) {
          rho *= settings.regularization_growth;
          if (rho > kRegularizationCap) {
            stalled = true;
            backward_ok = true;  // leave with the current trajectory
            break;
          }
          backward_ok = false;
          break;
        }
        feedforward[ti] = -llt.solve(qu);
        feedback[ti] = -llt.solve(qux);

        value_x = qx + feedback[ti].transpose() * quu * feedforward[ti] +
                  feedback[ti].transpose() * qu +
                  qux.transpose() * feedforward[ti];
        value_xx = qxx + feedback[ti].transpose() * quu * feedback[ti] +
                   feedback[ti].transpose() * qux +
                   qux.transpose() * feedback[ti];
        value_xx = 0.5 * (value_xx + value_xx.transpose()).eval();
      }
    }
    if (stalled) break;

    // Forward pass with backtracking line search.
    bool accepted = false;
    double new_cost = cost;
    Trajectory candidate;
    for (double step = 1.0; step >= settings.min_line_search_step;
         step *= settings.line_search_shrink) {
      candidate = Trajectory{};
      candidate.states.reserve(static_cast<std::size_t>(T) + 1);
      candidate.inputs.reserve(static_cast<std::size_t>(T));
      candidate.states.push_back(pr.x0);
      bool valid = true;
      for (int t = 0; t < T && valid; ++t) {
        const auto ti = static_cast<std::size_t>(t);
        const Vector u = traj.inputs[ti] + step * feedforward[ti] +
                         feedback[ti] * (candidate.states[ti] - traj.states[ti]);
        try {
          pr.check_inside_validity(candidate.states[ti], u, t);
          Vector next = pr.dynamics(candidate.states[ti], u, theta);
          if (!next.allFinite()) valid = false;
          candidate.states.push_back(std::move(next));
          candidate.inputs.push_back(u);
        } catch (const EvaluationError&) {
          valid = false;
        }
      }
      if (!valid) continue;
      candidate.rolled_out = true;
      try {
        new_cost = aug.total_cost(candidate, theta);
      } catch (const EvaluationError&) {
        continue;
      }
      if (new_cost < cost) {
        accepted = true;
        break;
      }
    }

    if (accepted) {
      const double decrease = cost - new_cost;
      cost = new_cost;
      traj = std::move(candidate);
      trace.push_back(cost);
      rho = std::max(rho * settings.regularization_shrink, 1e-12);
      if (grad_inf <= settings.gradient_tolerance) break;
      if (decrease <= settings.cost_tolerance * std::max(1.0, std::abs(cost)))
        break;
    } else {
      rho *= settings.regularization_growth;
      if (rho > kRegularizationCap) stalled = true;
      if (grad_inf <= settings.gradient_tolerance) break;
    }
  }

  const CostateSweep sweep = costate_sweep(aug, theta, traj);
  Solution sol;
  sol.trajectory = std::move(traj);
  sol.costates = sweep.costates;
  sol.final_cost = cost;
  sol.iterations = iterations;
  sol.stationarity = sweep.stationarity;
  sol.converged = sweep.stationarity <= settings.gradient_tolerance;
  sol.cost_trace = std::move(trace);
  return sol;
}

}  // namespace socil
