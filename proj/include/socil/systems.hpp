#pragma once

#include <optional>
#include <string>

#include "socil/estimator.hpp"
#include "socil/problem.hpp"

namespace socil {

/**
 * Cart-pole (pole point mass, frictionless track). State [p, th, pdot,
 * thdot] with th measured from the downward vertical; input is the
 * horizontal force on the cart. theta_dyn = [cart_mass, pole_mass,
 * pole_length], theta_cstr = [u_max, p_max].
 */
struct CartpoleSpec {
  double cart_mass = 1.0;
  double pole_mass = 0.1;
  double pole_length = 0.5;
  double gravity = 9.81;
  double p_max = 0.8;
  double u_max = 12.0;
  Vector x_start = Vector::Zero(4);
  Vector x_goal = (Vector(4) << 0.0, M_PI, 0.0, 0.0).finished();
  Vector obj_weights = (Vector(4) << 1.0, 1.0, 0.3, 0.3).finished();
  double input_cost_weight = 0.01;
  double dt = 0.1;
  int horizon = 35;
};

/**
 * Two-link planar manipulator, point-mass links, M(q) qdd + C(q,qd) qd +
 * G(q) = u. State [q1, q1dot, q2, q2dot], input [tau1, tau2]. theta_dyn =
 * [m1, m2, l1, l2], theta_cstr = [u_max, q_max]. The benchmark operates in
 * the horizontal plane (gravity 0); arm_dynamics accepts any gravity.
 */
struct TwoLinkArmSpec {
  double m1 = 1.0, m2 = 1.0, l1 = 1.0, l2 = 1.0;
  double gravity = 0.0;
  double u_max = 8.0;
  double q_max = M_PI / 2.0;
  Vector x_start = (Vector(4) << -1.2, 0.0, -1.0, 0.0).finished();
  Vector x_goal = (Vector(4) << 1.2, 0.0, 1.0, 0.0).finished();
  Vector obj_weights = (Vector(4) << 1.0, 0.3, 1.0, 0.3).finished();
  double input_cost_weight = 0.01;
  double dt = 0.2;
  int horizon = 25;
};

/**
 * Scalar integrator x' = x + u with stage cost theta*x^2 + u^2 and terminal
 * cost theta*x_T^2; every quantity has a closed form, which makes this the
 * analytic oracle system. An optional symmetric input bound |u| <= b enters
 * theta_cstr for barrier tests.
 */
struct LqrToySpec {
  double theta = 1.0;
  double x0 = 1.0;
  int horizon = 5;
  std::optional<double> input_bound;
};

/// Reproducible measurement noise: streams are pure functions of
/// (seed, time index, component), so replays are bit-identical.
struct NoiseConfig {
  double sigma = 0.3;
  std::uint64_t seed = 0;
};

/// One classical 4th-order Runge-Kutta step of f_continuous.
Vector rk4_step(
    const std::function<Vector(const Vector&, const Vector&, const ParamVector&)>&
        f_continuous,
    const Vector& x, const Vector& u, const ParamVector& theta, double dt);

/// Continuous-time cart-pole state derivative. theta_dyn = [mc, mp, l].
Vector cartpole_dynamics(const Vector& x, const Vector& u,
                         const Vector& theta_dyn, double gravity = 9.81);

/// Continuous-time two-link arm state derivative. theta_dyn = [m1, m2, l1, l2].
Vector arm_dynamics(const Vector& x, const Vector& u, const Vector& theta_dyn,
                    double gravity = 0.0);

/// Total mechanical energy of the declared models (conserved under u = 0).
double cartpole_energy(const Vector& x, const Vector& theta_dyn,
                       double gravity);
double arm_energy(const Vector& x, const Vector& theta_dyn, double gravity);

/// Gravity torque G(q) of the arm (gravity-compensation input).
Vector arm_gravity_torque(const Vector& x, const Vector& theta_dyn,
                          double gravity);

/// Group of inequality components sharing one bound (e.g. the two sides of
/// |p| <= p_max). `cstr_index` addresses the bound inside theta_cstr.
struct ConstraintFamily {
  std::string name;
  std::vector<int> path_indices;  // rows of g_t
  std::vector<int> term_indices;  // rows of g_T
  int cstr_index = 0;
};

/// A benchmark problem bundled with its analytic provider and metadata.
struct SystemModel {
  std::string name;
  ControlProblem problem;
  ParamVector theta_true;
  std::vector<ConstraintFamily> families;
  double dt = 0.0;
  double observation_interval_ms = 0.0;

  MeasurementModel default_measurement(double sigma) const {
    return MeasurementModel::state_identity(problem.state_dim,
                                            problem.input_dim, sigma);
  }
};

SystemModel build_problem(const CartpoleSpec& spec);
SystemModel build_problem(const TwoLinkArmSpec& spec);
SystemModel build_problem(const LqrToySpec& spec);

/// Standard-normal draw from the counter-based stream (Box-Muller over
/// splitmix64 of (seed, t, component)).
double gaussian_sample(std::uint64_t seed, std::uint64_t t,
                       std::uint64_t component, double sigma);

/// y_t = z(xi_t) + v_t with v_t ~ N(0, sigma^2 I) from the (seed, t) stream.
Vector measure(const Vector& xi_t, const MeasurementModel& model,
               const NoiseConfig& noise, int t);

}  // namespace socil
