#pragma once

#include "socil/trajopt.hpp"

namespace socil {

/// Hamiltonian second derivatives and dynamics Jacobians of a solved
/// trajectory, evaluated at (x_t, u_t, lambda_{t+1}, theta).
struct HamiltonianDerivs {
  int horizon = 0, state_dim = 0, input_dim = 0, param_dim = 0;
  std::vector<Matrix> lxx, lxu, luu;       // per stage
  std::vector<Matrix> lxtheta, lutheta;
  std::vector<Matrix> fx, fu, ftheta;
  Matrix lxx_term, lxtheta_term;
};

/// dxi/dtheta as per-step sensitivity matrices; X_0 = 0 exactly and
/// X_{t+1} = F^x X_t + F^u U_t + F^theta holds by construction.
struct TrajectoryJacobian {
  std::vector<Matrix> states;  // X_0..X_T, n x p
  std::vector<Matrix> inputs;  // U_0..U_{T-1}, m x p
};

/// Backward value matrices of the recursion, exposed for diagnostics.
struct RecursionState {
  std::vector<Matrix> V;  // V_0..V_T, n x n
  std::vector<Matrix> W;  // W_0..W_T, n x p
};

/// Evaluate every Hamiltonian block along a converged solution.
HamiltonianDerivs assemble_derivs(const AugmentedProblem& aug,
                                  const Solution& sol,
                                  const ParamVector& theta);

/**
 * Trajectory Jacobian via the backward V/W recursion and forward U/X pass.
 * Linear solves use factorizations; Lbar^uu gets one 1e-8 ridge if its
 * smallest eigenvalue falls below 1e-9, and errors if still singular.
 */
TrajectoryJacobian pdp_jacobian(const HamiltonianDerivs& derivs,
                                RecursionState* recursion = nullptr);

/// Central differences of full re-solves, step per theta coordinate.
/// Validation oracle only; throws if any re-solve fails to converge.
TrajectoryJacobian finite_difference_jacobian(const AugmentedProblem& aug,
                                              const ParamVector& theta,
                                              const SolverSettings& settings,
                                              double step);

struct SecondOrderReport {
  double min_quadratic_form = 0.0;
  bool satisfied = false;
};

/// Quadratic form of the second-order condition for one input direction
/// sequence: states follow the linearized dynamics from x_0 = 0.
double second_order_quadratic_form(const HamiltonianDerivs& derivs,
                                   const std::vector<Vector>& input_directions);

/// Sampled second-order condition: random unit-norm input perturbations are
/// propagated through the linearized dynamics (x_0 = 0) and the Hamiltonian
/// quadratic form is evaluated; satisfied iff the minimum stays positive.
SecondOrderReport check_second_order(const HamiltonianDerivs& derivs,
                                     int trials, std::uint64_t rng_seed);

/// max |a - b| over all entries, relative to the largest |b| entry.
double jacobian_max_rel_error(const TrajectoryJacobian& a,
                              const TrajectoryJacobian& b);

}  // namespace socil
