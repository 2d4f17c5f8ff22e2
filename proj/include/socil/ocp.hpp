#pragma once

#include "socil/problem.hpp"

namespace socil {

/// Raw constraint values of a trajectory, in problem-declared order.
struct ConstraintValues {
  std::vector<Vector> ineq_path;  // g_t, t = 0..T-1
  std::vector<Vector> eq_path;    // h_t
  Vector ineq_term;               // g_T
  Vector eq_term;                 // h_T
};

/// J(theta) = sum_t c_t(x_t, u_t, theta) + c_T(x_T, theta).
double evaluate_cost(const ControlProblem& problem, const Trajectory& traj,
                     const ParamVector& theta);

/// Raw g/h values at every step plus terminal; no clipping.
ConstraintValues evaluate_constraints(const ControlProblem& problem,
                                      const Trajectory& traj,
                                      const ParamVector& theta);

/// Iterate the dynamics from x0 over the given inputs (length T).
Trajectory rollout(const ControlProblem& problem, const ParamVector& theta,
                   const std::vector<Vector>& inputs);

}  // namespace socil
