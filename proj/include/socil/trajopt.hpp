#pragma once

#include <optional>

#include "socil/barrier.hpp"

namespace socil {

struct SolverSettings {
  int max_iterations = 200;
  double cost_tolerance = 1e-8;       // relative cost decrease
  double gradient_tolerance = 1e-6;   // on max_t ||Lbar_t^u||_inf
  double initial_regularization = 1e-6;
  double regularization_growth = 10.0;
  double regularization_shrink = 0.5;
  double line_search_shrink = 0.5;
  double min_line_search_step = 1e-8;

  void validate() const {
    if (max_iterations < 1) throw ConfigError("max_iterations must be >= 1");
    for (double v : {cost_tolerance, gradient_tolerance,
                     initial_regularization, regularization_growth,
                     regularization_shrink, line_search_shrink,
                     min_line_search_step})
      if (!(v > 0.0)) throw ConfigError("solver settings must be positive");
  }
};

struct Solution {
  Trajectory trajectory;
  std::vector<Vector> costates;   // lambda_1 .. lambda_T
  double final_cost = 0.0;
  int iterations = 0;
  double stationarity = 0.0;      // max_t ||dLbar_t/du||_inf
  bool converged = false;
  std::vector<double> cost_trace; // accepted cost after each iteration
};

/**
 * Local minimizer of the augmented problem via iterative LQR: backward
 * Riccati-style pass on the quadratic expansion of the stage Hamiltonians
 * with Levenberg regularization on Lbar^uu, line-searched forward rollouts.
 * Deterministic for fixed inputs. Non-convergence within max_iterations
 * returns converged=false; a divergent rollout throws SolverError.
 */
Solution solve(const AugmentedProblem& aug, const ParamVector& theta,
               const std::optional<Trajectory>& warm_start = std::nullopt,
               const SolverSettings& settings = SolverSettings());

/// Costates of a trajectory: lambda_T = Lbar_T^x, lambda_t = Lbar_t^x.
std::vector<Vector> compute_costates(const AugmentedProblem& aug,
                                     const ParamVector& theta,
                                     const Trajectory& traj);

/// max_t ||dLbar_t/du (x_t, u_t, lambda_{t+1}, theta)||_inf with costates
/// from the backward recursion.
double stationarity_residual(const AugmentedProblem& aug,
                             const ParamVector& theta, const Trajectory& traj);

}  // namespace socil
