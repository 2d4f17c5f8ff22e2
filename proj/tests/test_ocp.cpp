#include <doctest.h>

#include "socil/ocp.hpp"
#include "socil/systems.hpp"

using namespace socil;

namespace {

ControlProblem toy_problem(int horizon = 1) {
  LqrToySpec spec;
  spec.horizon = horizon;
  return build_problem(spec).problem;
}

ParamVector toy_theta(double value = 1.0) {
  return ParamVector(Vector(0), (Vector(1) << value).finished(), Vector(0));
}

}  // namespace

TEST_CASE("evaluate_cost: all-zero costs give zero") {
  ControlProblem pr = toy_problem(3);
  pr.stage_cost = [](const Vector&, const Vector&, const ParamVector&) {
    return 0.0;
  };
  pr.terminal_cost = [](const Vector&, const ParamVector&) { return 0.0; };
  const Trajectory traj =
      rollout(pr, toy_theta(), {(Vector(1) << 0.3).finished(),
                                (Vector(1) << -0.7).finished(),
                                (Vector(1) << 0.1).finished()});
  CHECK(evaluate_cost(pr, traj, toy_theta()) == 0.0);
}

TEST_CASE("evaluate_cost: scalar LQR toy hand value") {
  const ControlProblem pr = toy_problem(1);
  const Trajectory traj =
      rollout(pr, toy_theta(), {(Vector(1) << -0.5).finished()});
  CHECK(traj.states[1](0) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(evaluate_cost(pr, traj, toy_theta()) ==
        doctest::Approx(1.5).epsilon(1e-15));
}

TEST_CASE("evaluate_cost: cart-pole stage cost vanishes at the goal") {
  const CartpoleSpec spec;
  const SystemModel model = build_problem(spec);
  CHECK(model.problem.stage_cost(spec.x_goal, Vector::Zero(1),
                                 model.theta_true) == 0.0);
  CHECK(model.problem.terminal_cost(spec.x_goal, model.theta_true) == 0.0);
}

TEST_CASE("evaluate_cost re-evaluation is bit-identical") {
  const ControlProblem pr = toy_problem(4);
  const Trajectory traj = rollout(
      pr, toy_theta(0.7),
      std::vector<Vector>(4, (Vector(1) << -0.21).finished()));
  const double first = evaluate_cost(pr, traj, toy_theta(0.7));
  for (int i = 0; i < 5; ++i)
    CHECK(evaluate_cost(pr, traj, toy_theta(0.7)) == first);
}

TEST_CASE("evaluate_cost rejects mismatched dimensions") {
  const ControlProblem pr = toy_problem(2);
  Trajectory traj;
  traj.states = {pr.x0, pr.x0};  // only T states
  traj.inputs = {Vector::Zero(1), Vector::Zero(1)};
  CHECK_THROWS_AS(evaluate_cost(pr, traj, toy_theta()), DimensionError);

  const Trajectory ok = rollout(pr, toy_theta(),
                                std::vector<Vector>(2, Vector::Zero(1)));
  CHECK_THROWS_AS(
      evaluate_cost(pr, ok, ParamVector(Vector(0), Vector(0), Vector(0))),
      DimensionError);
}

TEST_CASE("evaluate_cost surfaces non-finite stage costs with the index") {
  ControlProblem pr = toy_problem(2);
  pr.stage_cost = [](const Vector& x, const Vector&, const ParamVector&) {
    return x(0) > 0.9 ? std::numeric_limits<double>::quiet_NaN() : 0.0;
  };
  const Trajectory traj = rollout(pr, toy_theta(),
                                  std::vector<Vector>(2, Vector::Zero(1)));
  CHECK_THROWS_WITH_AS(evaluate_cost(pr, traj, toy_theta()),
                       "non-finite stage cost at t=0", EvaluationError);
}

TEST_CASE("evaluate_constraints: box constraint direct substitution") {
  const SystemModel model = build_problem(CartpoleSpec{});
  const ParamVector& theta = model.theta_true;

  Vector x = Vector::Zero(4);
  x(0) = 0.5;
  const Vector g = model.problem.ineq_path(x, Vector::Zero(1), theta);
  CHECK(g(0) == doctest::Approx(-0.3).epsilon(1e-15));
  CHECK(g(1) == doctest::Approx(-1.3).epsilon(1e-15));

  x(0) = 0.8;  // exactly active
  const Vector g_active = model.problem.ineq_path(x, Vector::Zero(1), theta);
  CHECK(g_active(0) == 0.0);
}

TEST_CASE("evaluate_constraints: stable ordering and declared counts") {
  const SystemModel model = build_problem(CartpoleSpec{});
  const Trajectory traj =
      rollout(model.problem, model.theta_true,
              std::vector<Vector>(model.problem.horizon, Vector::Zero(1)));
  const ConstraintValues values =
      evaluate_constraints(model.problem, traj, model.theta_true);
  CHECK(values.ineq_path.size() == 35);
  for (const Vector& g : values.ineq_path) CHECK(g.size() == 4);
  CHECK(values.ineq_term.size() == 2);
  // With u pinned at zero the two input rows are exactly -u_max.
  CHECK(values.ineq_path[0](2) == doctest::Approx(-12.0));
  CHECK(values.ineq_path[0](3) == doctest::Approx(-12.0));
}

TEST_CASE("evaluate_constraints flags non-finite components") {
  ControlProblem pr = toy_problem(1);
  pr.num_ineq_path = 1;
  pr.ineq_path = [](const Vector&, const Vector&, const ParamVector&) {
    return (Vector(1) << std::numeric_limits<double>::infinity()).finished();
  };
  const Trajectory traj =
      rollout(pr, toy_theta(), {(Vector(1) << 0.0).finished()});
  CHECK_THROWS_AS(evaluate_constraints(pr, traj, toy_theta()),
                  EvaluationError);
}

TEST_CASE("rollout: fixed-point dynamics keep the state at x0") {
  ControlProblem pr = toy_problem(3);
  pr.dynamics = [](const Vector& x, const Vector&, const ParamVector&) {
    return x;
  };
  const Trajectory traj = rollout(
      pr, toy_theta(), std::vector<Vector>(3, (Vector(1) << 2.0).finished()));
  for (const Vector& x : traj.states) CHECK(x(0) == pr.x0(0));
  CHECK(traj.rolled_out);
}

TEST_CASE("rollout: scalar integrator one step") {
  const ControlProblem pr = toy_problem(1);
  const Trajectory traj =
      rollout(pr, toy_theta(), {(Vector(1) << -0.5).finished()});
  CHECK(traj.states[0](0) == 1.0);
  CHECK(traj.states[1](0) == 0.5);
}

TEST_CASE("rollout reproduces its own states bit-identically") {
  const SystemModel model = build_problem(CartpoleSpec{});
  std::vector<Vector> inputs;
  for (int t = 0; t < model.problem.horizon; ++t)
    inputs.push_back((Vector(1) << 3.0 * std::sin(0.4 * t)).finished());
  const Trajectory a = rollout(model.problem, model.theta_true, inputs);
  const Trajectory b = rollout(model.problem, model.theta_true, a.inputs);
  for (std::size_t t = 0; t < a.states.size(); ++t)
    CHECK((a.states[t] - b.states[t]).cwiseAbs().maxCoeff() == 0.0);

  // Rolled-out dynamics residual is exactly zero by construction.
  for (int t = 0; t < model.problem.horizon; ++t) {
    const Vector residual =
        a.states[t + 1] -
        model.problem.dynamics(a.states[t], a.inputs[t], model.theta_true);
    CHECK(residual.lpNorm<Eigen::Infinity>() <= 1e-12);
  }
}

TEST_CASE("rollout surfaces divergence at the first bad step") {
  ControlProblem pr = toy_problem(3);
  pr.dynamics = [](const Vector& x, const Vector& u, const ParamVector&) {
    return (100.0 * (x + u)).eval();
  };
  pr.validity.x_hi << 1e3;
  pr.validity.x_lo << -1e3;
  CHECK_THROWS_AS(
      rollout(pr, toy_theta(),
              std::vector<Vector>(3, (Vector(1) << 1.0).finished())),
      Error);
}

TEST_CASE("trajectory stacking zero-pads the terminal input block") {
  const ControlProblem pr = toy_problem(2);
  const Trajectory traj = rollout(
      pr, toy_theta(), std::vector<Vector>(2, (Vector(1) << -0.3).finished()));
  CHECK(traj.stacked(0)(1) == -0.3);
  CHECK(traj.stacked(2)(0) == traj.states[2](0));
  CHECK(traj.stacked(2)(1) == 0.0);
  CHECK_THROWS_AS(traj.stacked(3), DimensionError);
}
