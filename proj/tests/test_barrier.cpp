#include <doctest.h>

#include <cmath>

#include "socil/barrier.hpp"

using namespace socil;

namespace {

// Scalar problem with one input bound and one equality, for composition
// checks: x' = x + u, c = x^2 + u^2, g = u - 1 <= 0, h = x - 0.2 = 0.
ControlProblem tiny_problem(bool with_ineq, bool with_eq) {
  ControlProblem pr;
  pr.horizon = 2;
  pr.state_dim = 1;
  pr.input_dim = 1;
  pr.obj_param_dim = 1;
  pr.x0 = (Vector(1) << 1.0).finished();
  pr.validity = ValidityBox::unbounded(1, 1);
  pr.dynamics = [](const Vector& x, const Vector& u, const ParamVector&) {
    return (x + u).eval();
  };
  pr.stage_cost = [](const Vector& x, const Vector& u, const ParamVector& th) {
    return th.obj(0) * x.squaredNorm() + u.squaredNorm();
  };
  pr.terminal_cost = [](const Vector& x, const ParamVector& th) {
    return th.obj(0) * x.squaredNorm();
  };
  if (with_ineq) {
    pr.num_ineq_path = 1;
    pr.ineq_path = [](const Vector&, const Vector& u, const ParamVector&) {
      return (Vector(1) << u(0) - 1.0).finished();
    };
  }
  if (with_eq) {
    pr.num_eq_path = 1;
    pr.eq_path = [](const Vector& x, const Vector&, const ParamVector&) {
      return (Vector(1) << x(0) - 0.2).finished();
    };
  }
  return pr;
}

ParamVector unit_theta() {
  return ParamVector(Vector(0), (Vector(1) << 1.0).finished(), Vector(0));
}

Trajectory fixed_trajectory(const ControlProblem& pr, const Vector& u0,
                            const Vector& u1, const ParamVector& theta) {
  return rollout(pr, theta, {u0, u1});
}

}  // namespace

TEST_CASE("softplus reference values") {
  CHECK(softplus(0.0, 0.1) == doctest::Approx(0.1 * std::log(2.0)).epsilon(1e-14));
  const double expected = 1.0 + 0.1 * std::log1p(std::exp(-10.0));
  CHECK(softplus(1.0, 0.1) == doctest::Approx(expected).epsilon(1e-15));
  CHECK(softplus(1.0, 0.1) == doctest::Approx(1.00000454).epsilon(1e-8));
  CHECK(softplus(-5.0, 0.05) <= 1e-40);
  CHECK(softplus(-5.0, 0.05) >= 0.0);
}

TEST_CASE("softplus dominates ReLU within beta ln 2") {
  for (double beta : {0.2, 0.1, 0.05, 0.01}) {
    for (double x = -10.0; x <= 10.0; x += 0.01) {
      const double gap = softplus(x, beta) - std::max(x, 0.0);
      CHECK(gap >= -1e-12);
      CHECK(gap <= beta * std::log(2.0) + 1e-12);
    }
    // Tight at x = 0.
    CHECK(softplus(0.0, beta) ==
          doctest::Approx(beta * std::log(2.0)).epsilon(1e-14));
  }
}

TEST_CASE("softplus is strictly increasing and convex") {
  double prev = softplus(-30.0, 0.1);
  for (double x = -29.9; x <= 30.0; x += 0.1) {
    const double v = softplus(x, 0.1);
    CHECK(v > prev);
    prev = v;
    CHECK(softplus_hess(x, 0.1) >= 0.0);
  }
}

TEST_CASE("softplus gradient and Hessian reference values") {
  CHECK(softplus_grad(0.0, 0.1) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(softplus_grad(0.0, 3.7) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(softplus_grad(0.1, 0.1) ==
        doctest::Approx(0.7310585786300049).epsilon(1e-14));
  CHECK(softplus_hess(0.0, 0.1) == doctest::Approx(2.5).epsilon(1e-14));
  // Saturation tails.
  CHECK(softplus_grad(100.0, 0.1) == doctest::Approx(1.0));
  CHECK(softplus_grad(-100.0, 0.1) == doctest::Approx(0.0));
  CHECK(softplus_hess(100.0, 0.1) == doctest::Approx(0.0));
}

TEST_CASE("softplus derivatives match finite differences") {
  const double h = 1e-6;
  for (double x = -1.5; x <= 1.5; x += 0.07) {
    for (double beta : {0.2, 0.05}) {
      const double fd_grad =
          (softplus(x + h, beta) - softplus(x - h, beta)) / (2.0 * h);
      CHECK(softplus_grad(x, beta) ==
            doctest::Approx(fd_grad).epsilon(1e-6));
      const double fd_hess =
          (softplus_grad(x + h, beta) - softplus_grad(x - h, beta)) / (2.0 * h);
      CHECK(softplus_hess(x, beta) ==
            doctest::Approx(fd_hess).epsilon(1e-5));
    }
  }
}

TEST_CASE("invalid beta raises ConfigError") {
  CHECK_THROWS_AS(softplus(1.0, 0.0), ConfigError);
  CHECK_THROWS_AS(softplus_grad(1.0, -0.1), ConfigError);
  CHECK_THROWS_AS(softplus_hess(1.0, 0.0), ConfigError);
  CHECK_THROWS_AS((BarrierConfig{-1.0, 0.1}.validate()), ConfigError);
  CHECK_THROWS_AS((BarrierConfig{0.1, 0.1, 5.0}.validate()), ConfigError);
}

TEST_CASE("augment: no constraints leaves the cost unchanged") {
  const ControlProblem pr = tiny_problem(false, false);
  const ParamVector theta = unit_theta();
  const AugmentedProblem aug = augment(pr, BarrierConfig{0.5, 0.1});
  const Trajectory traj = fixed_trajectory(
      pr, (Vector(1) << -0.4).finished(), (Vector(1) << 0.2).finished(), theta);
  CHECK(aug.total_cost(traj, theta) ==
        doctest::Approx(evaluate_cost(pr, traj, theta)).epsilon(1e-15));
}

TEST_CASE("augment: single inequality adds the softplus term") {
  const ControlProblem pr = tiny_problem(true, false);
  const ParamVector theta = unit_theta();
  const AugmentedProblem aug = augment(pr, BarrierConfig{0.5, 0.1});
  const Vector x = (Vector(1) << 0.7).finished();
  const Vector u = Vector::Zero(1);
  const double added = aug.stage_cost(x, u, theta) - pr.stage_cost(x, u, theta);
  const double expected = 2.0 * 0.1 * std::log1p(std::exp(-10.0));
  CHECK(added == doctest::Approx(expected).epsilon(1e-12));
  CHECK(added == doctest::Approx(9.0800e-6).epsilon(1e-4));
}

TEST_CASE("augment: equality adds the exact quadratic penalty") {
  const ControlProblem pr = tiny_problem(false, true);
  const ParamVector theta = unit_theta();
  const AugmentedProblem aug = augment(pr, BarrierConfig{0.1, 0.1});
  const Vector x = (Vector(1) << 0.5).finished();  // h = 0.3
  const Vector u = Vector::Zero(1);
  const double added = aug.stage_cost(x, u, theta) - pr.stage_cost(x, u, theta);
  CHECK(added == doctest::Approx(0.45).epsilon(1e-12));
}

TEST_CASE("augmented cost dominates the original when h = 0") {
  const ControlProblem pr = tiny_problem(true, false);
  const ParamVector theta = unit_theta();
  const AugmentedProblem aug = augment(pr, BarrierConfig{0.5, 0.1});
  for (double u0 : {-0.9, -0.3, 0.4, 0.9}) {
    const Trajectory traj =
        fixed_trajectory(pr, (Vector(1) << u0).finished(),
                         (Vector(1) << -u0 / 2).finished(), theta);
    CHECK(aug.total_cost(traj, theta) >= evaluate_cost(pr, traj, theta));
  }
}

TEST_CASE("augmented cost of an interior trajectory converges to the original") {
  const ControlProblem pr = tiny_problem(true, false);
  const ParamVector theta = unit_theta();
  const Trajectory traj = fixed_trajectory(
      pr, (Vector(1) << -0.4).finished(), (Vector(1) << -0.1).finished(), theta);
  const double original = evaluate_cost(pr, traj, theta);

  double alpha = 0.3;
  double prev_gap = std::numeric_limits<double>::infinity();
  for (int k = 0; k < 6; ++k) {
    const AugmentedProblem aug = augment(pr, BarrierConfig{alpha, alpha / 4.0});
    const double gap = aug.total_cost(traj, theta) - original;
    CHECK(gap >= 0.0);
    if (prev_gap > 0.0)
      CHECK(gap < prev_gap);  // strictly decreasing until it underflows
    else
      CHECK(gap == 0.0);
    prev_gap = gap;
    alpha /= 2.0;
  }
  CHECK(prev_gap < 1e-8);
}

TEST_CASE("stage_blocks match finite differences of the augmented Hamiltonian") {
  const ControlProblem pr = tiny_problem(true, true);
  const ParamVector theta = unit_theta();
  const AugmentedProblem aug = augment(pr, BarrierConfig{0.4, 0.15});
  const Vector x = (Vector(1) << 0.45).finished();
  const Vector u = (Vector(1) << 0.6).finished();
  const Vector lambda = (Vector(1) << -0.8).finished();

  auto hamiltonian = [&](double xi, double ui) {
    const Vector xv = (Vector(1) << xi).finished();
    const Vector uv = (Vector(1) << ui).finished();
    return aug.stage_cost(xv, uv, theta) +
           lambda(0) * pr.dynamics(xv, uv, theta)(0);
  };

  const HamiltonianBlocks b = aug.stage_blocks(x, u, lambda, theta, false);
  const double h = 1e-6;
  CHECK(b.lx(0) == doctest::Approx((hamiltonian(x(0) + h, u(0)) -
                                    hamiltonian(x(0) - h, u(0))) /
                                   (2 * h))
                       .epsilon(1e-6));
  CHECK(b.lu(0) == doctest::Approx((hamiltonian(x(0), u(0) + h) -
                                    hamiltonian(x(0), u(0) - h)) /
                                   (2 * h))
                       .epsilon(1e-6));
  const double h2 = 1e-4;
  CHECK(b.lxx(0, 0) ==
        doctest::Approx((hamiltonian(x(0) + h2, u(0)) - 2 * hamiltonian(x(0), u(0)) +
                         hamiltonian(x(0) - h2, u(0))) /
                        (h2 * h2))
            .epsilon(1e-4));
  CHECK(b.luu(0, 0) ==
        doctest::Approx((hamiltonian(x(0), u(0) + h2) - 2 * hamiltonian(x(0), u(0)) +
                         hamiltonian(x(0), u(0) - h2)) /
                        (h2 * h2))
            .epsilon(1e-4));
}

TEST_CASE("approximate_multipliers reference values") {
  const ControlProblem pr = tiny_problem(true, true);
  const ParamVector theta = unit_theta();

  SUBCASE("strictly inactive inequality vanishes as beta -> 0") {
    // g = u - 1 = -1 at u = 0.
    const Trajectory traj = fixed_trajectory(
        pr, Vector::Zero(1), Vector::Zero(1), theta);
    double prev = std::numeric_limits<double>::infinity();
    for (double beta : {0.2, 0.1, 0.02, 0.005}) {
      const MultiplierEstimate est =
          approximate_multipliers(pr, traj, theta, BarrierConfig{0.3, beta});
      CHECK(est.mu[0](0) < prev);
      prev = est.mu[0](0);
    }
    CHECK(prev < 1e-10);
  }

  SUBCASE("active inequality gives 1/(2 alpha)") {
    // g = u - 1 = 0 at u = 1.
    const Trajectory traj = fixed_trajectory(
        pr, (Vector(1) << 1.0).finished(), Vector::Zero(1), theta);
    const MultiplierEstimate est =
        approximate_multipliers(pr, traj, theta, BarrierConfig{0.3, 0.075});
    CHECK(est.mu[0](0) == doctest::Approx(1.0 / 0.6).epsilon(1e-12));
    CHECK(est.mu[0](0) == doctest::Approx(1.6667).epsilon(1e-4));
  }

  SUBCASE("zero equality residual gives zero nu") {
    // h = x - 0.2 = 0 at x = 0.2: start from x0 = 1, u0 = -0.8.
    const Trajectory traj = fixed_trajectory(
        pr, (Vector(1) << -0.8).finished(), Vector::Zero(1), theta);
    const MultiplierEstimate est =
        approximate_multipliers(pr, traj, theta, BarrierConfig{0.3, 0.075});
    CHECK(est.nu[1](0) == doctest::Approx(0.0).epsilon(1e-15));
    // And nu = h / alpha on the first stage where h = 0.8.
    CHECK(est.nu[0](0) == doctest::Approx(0.8 / 0.3).epsilon(1e-12));
  }
}
