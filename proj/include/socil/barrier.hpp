#pragma once

#include "socil/ocp.hpp"

namespace socil {

/**
 * Softplus barrier configuration. `alpha` scales the penalties (every
 * barrier term enters with weight 1/alpha), `beta` controls the sharpness
 * of the ReLU approximation.
 */
struct BarrierConfig {
  double alpha = 0.3;
  double beta = 0.075;
  double overflow_threshold = 30.0;

  void validate() const {
    if (!(alpha > 0.0)) throw ConfigError("barrier alpha must be positive");
    if (!(beta > 0.0)) throw ConfigError("barrier beta must be positive");
    if (!(overflow_threshold >= 10.0))
      throw ConfigError("overflow_threshold must be >= 10");
  }
};

/// phi_beta(x) = beta * ln(1 + e^{x/beta}), numerically stable for all x.
double softplus(double x, double beta, double overflow_threshold = 30.0);

/// d/dx phi_beta(x) = logistic(x/beta), in (0,1).
double softplus_grad(double x, double beta);

/// d2/dx2 phi_beta(x) = logistic(x/beta)(1-logistic(x/beta))/beta >= 0.
double softplus_hess(double x, double beta);

/// Hamiltonian value and partial derivatives of one augmented stage,
/// evaluated at (x, u, lambda_next, theta). `cost` is the augmented stage
/// cost alone (no lambda'f term); the l* blocks include the dynamics term.
struct HamiltonianBlocks {
  double cost = 0;
  Vector lx, lu;
  Matrix lxx, lxu, luu;
  Matrix lxtheta, lutheta;
  Vector f;
  Matrix fx, fu, ftheta;
};

struct TerminalHamiltonianBlocks {
  double cost = 0;
  Vector lx;
  Matrix lxx, lxtheta;
};

/**
 * The unconstrained problem obtained by folding every inequality constraint
 * into a softplus barrier and every equality constraint into a quadratic
 * penalty:
 *
 *   cbar_t = c_t + (1/alpha) sum_i phi_beta(g_{t,i}) + (1/(2 alpha)) sum_i h_{t,i}^2
 *
 * and analogously for the terminal stage. The original problem (with its
 * g, h handles) is retained for diagnostics.
 */
class AugmentedProblem {
 public:
  AugmentedProblem(ControlProblem problem, BarrierConfig cfg);

  const ControlProblem& original() const { return problem_; }
  const BarrierConfig& config() const { return cfg_; }

  double stage_cost(const Vector& x, const Vector& u,
                    const ParamVector& theta) const;
  double terminal_cost(const Vector& x, const ParamVector& theta) const;

  /// Jbar over a full trajectory.
  double total_cost(const Trajectory& traj, const ParamVector& theta) const;

  HamiltonianBlocks stage_blocks(const Vector& x, const Vector& u,
                                 const Vector& lambda_next,
                                 const ParamVector& theta,
                                 bool want_theta) const;
  TerminalHamiltonianBlocks terminal_blocks(const Vector& x,
                                            const ParamVector& theta,
                                            bool want_theta) const;

  /// AugmentedProblem with barrier weights scaled by `factor` (alpha and
  /// beta shrink together; used by demonstration generation and sweeps).
  AugmentedProblem with_barrier_scale(double factor) const;

 private:
  ControlProblem problem_;
  BarrierConfig cfg_;
  std::shared_ptr<const DerivativeProvider> provider_;
};

AugmentedProblem augment(const ControlProblem& problem,
                         const BarrierConfig& cfg);

/// Per-step multiplier estimates recovered from the barrier solution:
/// mu = softplus_grad(g, beta)/alpha, nu = h/alpha.
struct MultiplierEstimate {
  std::vector<Vector> mu;   // per stage, length q
  std::vector<Vector> nu;   // per stage, length s
  Vector mu_term, nu_term;
};

MultiplierEstimate approximate_multipliers(const ControlProblem& problem,
                                           const Trajectory& traj,
                                           const ParamVector& theta,
                                           const BarrierConfig& cfg);

}  // namespace socil
