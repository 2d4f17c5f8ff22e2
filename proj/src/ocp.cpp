#include "socil/ocp.hpp"

namespace socil {

namespace {

void check_traj_dims(const ControlProblem& problem, const Trajectory& traj) {
  if (traj.horizon() != problem.horizon)
    throw DimensionError("trajectory horizon " +
                         std::to_string(traj.horizon()) +
                         " != problem horizon " +
                         std::to_string(problem.horizon));
  if (traj.states.size() != static_cast<std::size_t>(problem.horizon) + 1)
    throw DimensionError("trajectory must carry T+1 states");
  for (std::size_t t = 0; t < traj.states.size(); ++t)
    if (traj.states[t].size() != problem.state_dim)
      throw DimensionError("state dimension mismatch at t=" + std::to_string(t));
  for (std::size_t t = 0; t < traj.inputs.size(); ++t)
    if (traj.inputs[t].size() != problem.input_dim)
      throw DimensionError("input dimension mismatch at t=" + std::to_string(t));
}

}  // namespace

double evaluate_cost(const ControlProblem& problem, const Trajectory& traj,
                     const ParamVector& theta) {
  check_traj_dims(problem, traj);
  problem.check_theta(theta);
  double total = 0.0;
  for (int t = 0; t < problem.horizon; ++t) {
    const double c = problem.stage_cost(traj.states[t], traj.inputs[t], theta);
    if (!std::isfinite(c))
      throw EvaluationError("non-finite stage cost at t=" + std::to_string(t));
    total += c;
  }
  const double cT = problem.terminal_cost(traj.states.back(), theta);
  if (!std::isfinite(cT)) throw EvaluationError("non-finite terminal cost");
  return total + cT;
}

ConstraintValues evaluate_constraints(const ControlProblem& problem,
                                      const Trajectory& traj,
                                      const ParamVector& theta) {
  check_traj_dims(problem, traj);
  problem.check_theta(theta);

  auto check = [](const Vector& v, int expected, const char* which, int t) {
    if (v.size() != expected)
      throw DimensionError(std::string(which) + " returned " +
                           std::to_string(v.size()) + " values, declared " +
                           std::to_string(expected) + " at t=" +
                           std::to_string(t));
    for (Eigen::Index i = 0; i < v.size(); ++i)
      if (!std::isfinite(v(i)))
        throw EvaluationError(std::string("non-finite ") + which +
                              " component " + std::to_string(i) + " at t=" +
                              std::to_string(t));
  };

  ConstraintValues out;
  out.ineq_path.reserve(static_cast<std::size_t>(problem.horizon));
  out.eq_path.reserve(static_cast<std::size_t>(problem.horizon));
  for (int t = 0; t < problem.horizon; ++t) {
    Vector g = problem.num_ineq_path > 0
                   ? problem.ineq_path(traj.states[t], traj.inputs[t], theta)
                   : Vector(0);
    check(g, problem.num_ineq_path, "g", t);
    out.ineq_path.push_back(std::move(g));
    Vector h = problem.num_eq_path > 0
                   ? problem.eq_path(traj.states[t], traj.inputs[t], theta)
                   : Vector(0);
    check(h, problem.num_eq_path, "h", t);
    out.eq_path.push_back(std::move(h));
  }
  out.ineq_term = problem.num_ineq_term > 0
                      ? problem.ineq_term(traj.states.back(), theta)
                      : Vector(0);
  check(out.ineq_term, problem.num_ineq_term, "g_T", problem.horizon);
  out.eq_term = problem.num_eq_term > 0
                    ? problem.eq_term(traj.states.back(), theta)
                    : Vector(0);
  check(out.eq_term, problem.num_eq_term, "h_T", problem.horizon);
  return out;
}

Trajectory rollout(const ControlProblem& problem, const ParamVector& theta,
                   const std::vector<Vector>& inputs) {
  problem.check_theta(theta);
  if (inputs.size() != static_cast<std::size_t>(problem.horizon))
    throw DimensionError("rollout expects " + std::to_string(problem.horizon) +
                         " inputs, got " + std::to_string(inputs.size()));

  Trajectory traj;
  traj.states.reserve(inputs.size() + 1);
  traj.inputs = inputs;
  traj.states.push_back(problem.x0);
  for (int t = 0; t < problem.horizon; ++t) {
    const Vector& x = traj.states.back();
    const Vector& u = inputs[static_cast<std::size_t>(t)];
    if (u.size() != problem.input_dim)
      throw DimensionError("input dimension mismatch at t=" + std::to_string(t));
    problem.check_inside_validity(x, u, t);
    Vector next = problem.dynamics(x, u, theta);
    if (next.size() != problem.state_dim || !next.allFinite())
      throw SolverError("rollout diverged at t=" + std::to_string(t));
    traj.states.push_back(std::move(next));
  }
  traj.rolled_out = true;
  return traj;
}

}  // namespace socil
