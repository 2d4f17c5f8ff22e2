#include <cmath>
#include <ostream>

#include "socil/harness.hpp"

namespace socil {

namespace {

bool report(std::ostream& out, const std::string& name, bool ok,
            const std::string& detail = "") {
  out << (ok ? "ok   " : "FAIL ") << name;
  if (!detail.empty()) out << " (" << detail << ")";
  out << "\n";
  return ok;
}

bool barrier_suite(std::ostream& out) {
  bool ok = true;
  ok &= report(out, "softplus value at 0",
               std::abs(softplus(0.0, 0.1) - 0.1 * std::log(2.0)) < 1e-15);
  ok &= report(out, "softplus stable branch",
               std::abs(softplus(1.0, 0.1) -
                        (1.0 + 0.1 * std::log1p(std::exp(-10.0)))) < 1e-15);

  bool grid_ok = true;
  for (double beta : {0.2, 0.1, 0.05, 0.01})
    for (double x = -10.0; x <= 10.0; x += 0.05) {
      const double relu = std::max(x, 0.0);
      const double gap = softplus(x, beta) - relu;
      if (gap < -1e-12 || gap > beta * std::log(2.0) + 1e-12) grid_ok = false;
      if (softplus_hess(x, beta) < 0.0) grid_ok = false;
    }
  ok &= report(out, "softplus-ReLU gap bounded by beta ln 2", grid_ok);

  bool fd_ok = true;
  for (double x = -2.0; x <= 2.0; x += 0.11) {
    const double h = 1e-6;
    const double fd_g =
        (softplus(x + h, 0.1) - softplus(x - h, 0.1)) / (2.0 * h);
    const double fd_h =
        (softplus_grad(x + h, 0.1) - softplus_grad(x - h, 0.1)) / (2.0 * h);
    if (std::abs(fd_g - softplus_grad(x, 0.1)) > 1e-6 *
            std::max(1.0, std::abs(fd_g)))
      fd_ok = false;
    if (std::abs(fd_h - softplus_hess(x, 0.1)) > 1e-5 *
            std::max(1.0, std::abs(fd_h)))
      fd_ok = false;
  }
  ok &= report(out, "softplus grad/hess match finite differences", fd_ok);
  return ok;
}

bool estimator_suite(std::ostream& out) {
  bool ok = true;
  {
    MeasurementModel mm = MeasurementModel::state_identity(1, 1, 1.0);
    EstimatorState st{ParamVector(Vector(0), (Vector(1) << 2.0).finished(),
                                  Vector(0)),
                      Matrix::Identity(1, 1), 0};
    auto [next, rep] = ekf_step(st, Matrix::Identity(1, 1),
                                (Vector(1) << 1.0).finished(), mm);
    ok &= report(out, "EKF scalar oracle",
                 std::abs(rep.kalman_gain(0, 0) - 0.5) < 1e-12 &&
                     std::abs(next.P(0, 0) - 0.5) < 1e-12 &&
                     std::abs(next.theta_hat.obj(0) - 1.5) < 1e-12);
  }
  {
    MeasurementModel mm = MeasurementModel::state_identity(1, 1, 1.0);
    EstimatorState st{ParamVector(Vector(0), (Vector(2) << 0.0, 0.0).finished(),
                                  Vector(0)),
                      Matrix::Identity(2, 2), 0};
    Matrix L(1, 2);
    L << 1.0, 2.0;
    auto [next, rep] = ekf_step(st, L, (Vector(1) << 0.0).finished(), mm);
    Matrix expected_P =
        Matrix::Identity(2, 2) - (1.0 / 6.0) * (L.transpose() * L);
    const Matrix joseph =
        (Matrix::Identity(2, 2) - rep.kalman_gain * L) * Matrix::Identity(2, 2) *
            (Matrix::Identity(2, 2) - rep.kalman_gain * L).transpose() +
        rep.kalman_gain * mm.R * rep.kalman_gain.transpose();
    ok &= report(out, "EKF 2x1 oracle and Joseph form",
                 (next.P - expected_P).cwiseAbs().maxCoeff() < 1e-12 &&
                     (joseph - next.P).cwiseAbs().maxCoeff() < 1e-8);
  }
  return ok;
}

bool gradient_suite(std::ostream& out) {
  bool ok = true;
  SolverSettings settings;
  settings.gradient_tolerance = 1e-10;

  {
    LqrToySpec spec;
    spec.horizon = 1;
    const SystemModel model = build_problem(spec);
    const AugmentedProblem aug = augment(model.problem, BarrierConfig{0.3, 0.075});
    const Solution sol = solve(aug, model.theta_true, std::nullopt, settings);
    const HamiltonianDerivs derivs = assemble_derivs(aug, sol, model.theta_true);
    const TrajectoryJacobian jac = pdp_jacobian(derivs);
    const double du_dtheta = jac.inputs[0](0, 0);
    ok &= report(out, "PDP matches closed form on the scalar toy",
                 std::abs(du_dtheta + 0.25) < 1e-6,
                 "du0/dtheta = " + std::to_string(du_dtheta));
    const TrajectoryJacobian fd =
        finite_difference_jacobian(aug, model.theta_true, settings, 1e-5);
    ok &= report(out, "PDP matches finite differences on the scalar toy",
                 jacobian_max_rel_error(jac, fd) < 1e-6);
  }
  {
    const SystemModel model = build_problem(CartpoleSpec{});
    const AugmentedProblem aug = augment(model.problem, BarrierConfig{0.3, 0.075});
    SolverSettings cart_settings;
    cart_settings.max_iterations = 600;
    const Solution sol =
        solve(aug, model.theta_true, std::nullopt, cart_settings);
    const HamiltonianDerivs derivs = assemble_derivs(aug, sol, model.theta_true);
    const TrajectoryJacobian jac = pdp_jacobian(derivs);
    const TrajectoryJacobian fd = finite_difference_jacobian(
        aug, model.theta_true, cart_settings, 1e-4);
    const double err = jacobian_max_rel_error(jac, fd);
    ok &= report(out, "PDP matches finite differences on the cart-pole",
                 err < 1e-3, "max rel err = " + std::to_string(err));
  }
  return ok;
}

}  // namespace

bool run_validation(std::ostream& out) {
  bool ok = true;
  ok &= barrier_suite(out);
  ok &= estimator_suite(out);
  ok &= gradient_suite(out);
  out << (ok ? "validation passed" : "validation FAILED") << "\n";
  return ok;
}

}  // namespace socil
