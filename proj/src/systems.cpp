#include "socil/systems.hpp"

#include <cmath>

#include "socil/detail/rng.hpp"

namespace socil {

namespace {

inline double sq(double v) { return v * v; }
using ad::sq;

inline double value_of(double v) { return v; }
inline double value_of(const ad::D2& v) { return v.v; }

// Classical RK4 over a generic scalar type; deriv(x, u, out) writes xdot.
template <class S, class Deriv>
void rk4_t(Deriv&& deriv, std::span<const S> x, std::span<const S> u,
           std::span<S> out, double dt) {
  const std::size_t n = x.size();
  std::vector<S> k1(n), k2(n), k3(n), k4(n), tmp(n);
  deriv(x, u, std::span<S>(k1));
  for (std::size_t i = 0; i < n; ++i) tmp[i] = x[i] + k1[i] * (dt / 2.0);
  deriv(std::span<const S>(tmp), u, std::span<S>(k2));
  for (std::size_t i = 0; i < n; ++i) tmp[i] = x[i] + k2[i] * (dt / 2.0);
  deriv(std::span<const S>(tmp), u, std::span<S>(k3));
  for (std::size_t i = 0; i < n; ++i) tmp[i] = x[i] + k3[i] * dt;
  deriv(std::span<const S>(tmp), u, std::span<S>(k4));
  for (std::size_t i = 0; i < n; ++i)
    out[i] = x[i] + (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]) * (dt / 6.0);
}

// Cart-pole with the pole a point mass at distance l, angle from the
// downward vertical. theta_dyn = [mc, mp, l].
template <class S>
void cartpole_deriv_t(std::span<const S> x, std::span<const S> u,
                      std::span<const S> th_dyn, double gravity,
                      std::span<S> out) {
  using std::cos;
  using std::sin;
  const S& ang = x[1];
  const S& vel = x[2];
  const S& omega = x[3];
  const S& mc = th_dyn[0];
  const S& mp = th_dyn[1];
  const S& l = th_dyn[2];
  const S st = sin(ang);
  const S ct = cos(ang);
  const S denom = mc + mp * st * st;
  out[0] = vel;
  out[1] = omega;
  out[2] = (u[0] + mp * st * (l * omega * omega + gravity * ct)) / denom;
  out[3] = (-1.0 * u[0] * ct - mp * l * omega * omega * st * ct -
            (mc + mp) * gravity * st) /
           (l * denom);
}

// Two-link planar manipulator, point-mass links (Spong model with
// lc_i = l_i, I_i = 0). State [q1, q1d, q2, q2d]; theta_dyn = [m1, m2, l1, l2].
template <class S>
void arm_deriv_t(std::span<const S> x, std::span<const S> u,
                 std::span<const S> th_dyn, double gravity, std::span<S> out) {
  using std::cos;
  using std::sin;
  const S& q1 = x[0];
  const S& q1d = x[1];
  const S& q2 = x[2];
  const S& q2d = x[3];
  const S& m1 = th_dyn[0];
  const S& m2 = th_dyn[1];
  const S& l1 = th_dyn[2];
  const S& l2 = th_dyn[3];

  const S c2 = cos(q2);
  const S s2 = sin(q2);
  const S m11 = (m1 + m2) * l1 * l1 + m2 * l2 * l2 + 2.0 * m2 * l1 * l2 * c2;
  const S m12 = m2 * l2 * l2 + m2 * l1 * l2 * c2;
  const S m22 = m2 * l2 * l2;
  const S h = -1.0 * m2 * l1 * l2 * s2;

  // C(q, qd) qd with C = [h q2d, h(q1d + q2d); -h q1d, 0].
  const S cor1 = h * (2.0 * q1d * q2d + q2d * q2d);
  const S cor2 = -1.0 * h * q1d * q1d;

  const S g1 = (m1 + m2) * gravity * l1 * cos(q1) +
               m2 * gravity * l2 * cos(q1 + q2);
  const S g2 = m2 * gravity * l2 * cos(q1 + q2);

  const S tau1 = u[0] - cor1 - g1;
  const S tau2 = u[1] - cor2 - g2;

  const S det = m11 * m22 - m12 * m12;
  if (std::abs(value_of(det)) < 1e-9)
    throw SingularityError("arm mass matrix singular (|det M| < 1e-9)");

  out[0] = q1d;
  out[1] = (m22 * tau1 - m12 * tau2) / det;
  out[2] = q2d;
  out[3] = (m11 * tau2 - m12 * tau1) / det;
}

template <class S>
S weighted_goal_cost(std::span<const S> x, std::span<const S> weights,
                     const Vector& goal) {
  S acc = sq(weights[0] * (x[0] - goal(0)));
  for (std::size_t i = 1; i < x.size(); ++i)
    acc += sq(weights[i] * (x[i] - goal(static_cast<Eigen::Index>(i))));
  return acc;
}

template <class S>
S input_cost(std::span<const S> u, double weight) {
  S acc = sq(u[0]) * weight;
  for (std::size_t i = 1; i < u.size(); ++i) acc += sq(u[i]) * weight;
  return acc;
}

}  // namespace

Vector rk4_step(
    const std::function<Vector(const Vector&, const Vector&, const ParamVector&)>&
        f_continuous,
    const Vector& x, const Vector& u, const ParamVector& theta, double dt) {
  if (!(dt > 0.0)) throw ConfigError("rk4_step: dt must be positive");
  auto deriv = [&](std::span<const double> xs, std::span<const double> us,
                   std::span<double> out) {
    const Vector xv = Eigen::Map<const Vector>(xs.data(), xs.size());
    const Vector uv = Eigen::Map<const Vector>(us.data(), us.size());
    const Vector d = f_continuous(xv, uv, theta);
    if (!d.allFinite())
      throw EvaluationError("rk4_step: non-finite intermediate derivative");
    for (Eigen::Index i = 0; i < d.size(); ++i) out[i] = d(i);
  };
  Vector out(x.size());
  rk4_t<double>(deriv, std::span<const double>(x.data(), x.size()),
                std::span<const double>(u.data(), u.size()),
                std::span<double>(out.data(), out.size()), dt);
  if (!out.allFinite()) throw EvaluationError("rk4_step: non-finite result");
  return out;
}

Vector cartpole_dynamics(const Vector& x, const Vector& u,
                         const Vector& theta_dyn, double gravity) {
  Vector out(4);
  cartpole_deriv_t<double>(std::span<const double>(x.data(), 4),
                           std::span<const double>(u.data(), 1),
                           std::span<const double>(theta_dyn.data(), 3),
                           gravity, std::span<double>(out.data(), 4));
  return out;
}

Vector arm_dynamics(const Vector& x, const Vector& u, const Vector& theta_dyn,
                    double gravity) {
  Vector out(4);
  arm_deriv_t<double>(std::span<const double>(x.data(), 4),
                      std::span<const double>(u.data(), 2),
                      std::span<const double>(theta_dyn.data(), 4), gravity,
                      std::span<double>(out.data(), 4));
  return out;
}

double cartpole_energy(const Vector& x, const Vector& theta_dyn,
                       double gravity) {
  const double mc = theta_dyn(0), mp = theta_dyn(1), l = theta_dyn(2);
  const double ang = x(1), vel = x(2), omega = x(3);
  const double kinetic = 0.5 * (mc + mp) * vel * vel +
                         mp * l * vel * omega * std::cos(ang) +
                         0.5 * mp * l * l * omega * omega;
  const double potential = -mp * gravity * l * std::cos(ang);
  return kinetic + potential;
}

double arm_energy(const Vector& x, const Vector& theta_dyn, double gravity) {
  const double m1 = theta_dyn(0), m2 = theta_dyn(1);
  const double l1 = theta_dyn(2), l2 = theta_dyn(3);
  const double q1 = x(0), q1d = x(1), q2 = x(2), q2d = x(3);
  const double c2 = std::cos(q2);
  const double m11 = (m1 + m2) * l1 * l1 + m2 * l2 * l2 + 2.0 * m2 * l1 * l2 * c2;
  const double m12 = m2 * l2 * l2 + m2 * l1 * l2 * c2;
  const double m22 = m2 * l2 * l2;
  const double kinetic =
      0.5 * (m11 * q1d * q1d + 2.0 * m12 * q1d * q2d + m22 * q2d * q2d);
  const double potential = (m1 + m2) * gravity * l1 * std::sin(q1) +
                           m2 * gravity * l2 * std::sin(q1 + q2);
  return kinetic + potential;
}

Vector arm_gravity_torque(const Vector& x, const Vector& theta_dyn,
                          double gravity) {
  const double m1 = theta_dyn(0), m2 = theta_dyn(1);
  const double l1 = theta_dyn(2), l2 = theta_dyn(3);
  const double q1 = x(0), q2 = x(2);
  Vector g(2);
  g(0) = (m1 + m2) * gravity * l1 * std::cos(q1) +
         m2 * gravity * l2 * std::cos(q1 + q2);
  g(1) = m2 * gravity * l2 * std::cos(q1 + q2);
  return g;
}

namespace {

// Shared scaffolding for the two physical benchmarks: box constraints as
// one-sided inequalities, the paper's goal cost, RK4 discretization.

struct BoxLayout {
  std::vector<int> state_indices;  // constrained state coordinates
  int cstr_state_bound_index = 1;  // position of the state bound in theta_cstr
  int cstr_input_bound_index = 0;  // position of the input bound in theta_cstr
};

template <class S>
void box_path_constraints(std::span<const S> x, std::span<const S> u,
                          std::span<const S> th, int cstr_offset,
                          const BoxLayout& layout, std::span<S> out) {
  const S& state_bound = th[cstr_offset + layout.cstr_state_bound_index];
  const S& input_bound = th[cstr_offset + layout.cstr_input_bound_index];
  std::size_t k = 0;
  for (int idx : layout.state_indices) {
    out[k++] = x[idx] - state_bound;
    out[k++] = -1.0 * x[idx] - state_bound;
  }
  for (std::size_t j = 0; j < u.size(); ++j) {
    out[k++] = u[j] - input_bound;
    out[k++] = -1.0 * u[j] - input_bound;
  }
}

template <class S>
void box_term_constraints(std::span<const S> x, std::span<const S> th,
                          int cstr_offset, const BoxLayout& layout,
                          std::span<S> out) {
  const S& state_bound = th[cstr_offset + layout.cstr_state_bound_index];
  std::size_t k = 0;
  for (int idx : layout.state_indices) {
    out[k++] = x[idx] - state_bound;
    out[k++] = -1.0 * x[idx] - state_bound;
  }
}

}  // namespace

SystemModel build_problem(const CartpoleSpec& spec) {
  if (!(spec.cart_mass > 0 && spec.pole_mass > 0 && spec.pole_length > 0 &&
        spec.dt > 0 && spec.horizon > 0))
    throw ConfigError("cartpole spec: masses, length, dt, horizon must be positive");

  const int n = 4, m = 1, pd = 3, po = 4, pc = 2;
  const int dyn_off = 0, obj_off = pd, cstr_off = pd + po;
  const double gravity = spec.gravity;
  const double dt = spec.dt;
  const double wu = spec.input_cost_weight;
  const Vector goal = spec.x_goal;
  const BoxLayout layout{{0}, 1, 0};

  SystemModel model;
  model.name = "cartpole";
  model.dt = dt;
  model.observation_interval_ms = dt * 1000.0;
  model.theta_true = ParamVector(
      (Vector(3) << spec.cart_mass, spec.pole_mass, spec.pole_length).finished(),
      spec.obj_weights,
      (Vector(2) << spec.u_max, spec.p_max).finished());

  ControlProblem& pr = model.problem;
  pr.horizon = spec.horizon;
  pr.state_dim = n;
  pr.input_dim = m;
  pr.dyn_param_dim = pd;
  pr.obj_param_dim = po;
  pr.cstr_param_dim = pc;
  pr.x0 = spec.x_start;
  pr.num_ineq_path = 4;   // 2 position-sided + 2 input-sided
  pr.num_ineq_term = 2;
  pr.validity = ValidityBox::unbounded(n, m);
  pr.validity.x_lo << -25.0, -50.0, -200.0, -200.0;
  pr.validity.x_hi << 25.0, 50.0, 200.0, 200.0;
  pr.validity.u_lo << -1e4;
  pr.validity.u_hi << 1e4;

  pr.dynamics = [gravity, dt](const Vector& x, const Vector& u,
                              const ParamVector& th) {
    Vector out(4);
    auto deriv = [&](std::span<const double> xs, std::span<const double> us,
                     std::span<double> dx) {
      cartpole_deriv_t<double>(xs, us,
                               std::span<const double>(th.dyn.data(), 3),
                               gravity, dx);
    };
    rk4_t<double>(deriv, std::span<const double>(x.data(), 4),
                  std::span<const double>(u.data(), 1),
                  std::span<double>(out.data(), 4), dt);
    return out;
  };
  pr.stage_cost = [wu, goal](const Vector& x, const Vector& u,
                             const ParamVector& th) {
    double c = wu * u.squaredNorm();
    for (int i = 0; i < 4; ++i) c += sq(th.obj(i) * (x(i) - goal(i)));
    return c;
  };
  pr.terminal_cost = [goal](const Vector& x, const ParamVector& th) {
    double c = 0;
    for (int i = 0; i < 4; ++i) c += sq(th.obj(i) * (x(i) - goal(i)));
    return c;
  };
  pr.ineq_path = [](const Vector& x, const Vector& u, const ParamVector& th) {
    Vector g(4);
    const double p_max = th.cstr(1), u_max = th.cstr(0);
    g << x(0) - p_max, -x(0) - p_max, u(0) - u_max, -u(0) - u_max;
    return g;
  };
  pr.ineq_term = [](const Vector& x, const ParamVector& th) {
    Vector g(2);
    const double p_max = th.cstr(1);
    g << x(0) - p_max, -x(0) - p_max;
    return g;
  };

  AutodiffProvider::Functions fns;
  fns.dynamics = [gravity, dt, dyn_off](std::span<const ad::D2> x,
                                        std::span<const ad::D2> u,
                                        std::span<const ad::D2> th,
                                        std::span<ad::D2> out) {
    auto deriv = [&](std::span<const ad::D2> xs, std::span<const ad::D2> us,
                     std::span<ad::D2> dx) {
      cartpole_deriv_t<ad::D2>(xs, us, th.subspan(dyn_off, 3), gravity, dx);
    };
    rk4_t<ad::D2>(deriv, x, u, out, dt);
  };
  fns.stage_cost = [wu, goal, obj_off](std::span<const ad::D2> x,
                                       std::span<const ad::D2> u,
                                       std::span<const ad::D2> th) {
    return input_cost(u, wu) + weighted_goal_cost(x, th.subspan(obj_off, 4), goal);
  };
  fns.terminal_cost = [goal, obj_off](std::span<const ad::D2> x,
                                      std::span<const ad::D2> th) {
    return weighted_goal_cost(x, th.subspan(obj_off, 4), goal);
  };
  fns.ineq_path = [cstr_off, layout](std::span<const ad::D2> x,
                                     std::span<const ad::D2> u,
                                     std::span<const ad::D2> th,
                                     std::span<ad::D2> out) {
    box_path_constraints(x, u, th, cstr_off, layout, out);
  };
  fns.ineq_term = [cstr_off, layout](std::span<const ad::D2> x,
                                     std::span<const ad::D2> th,
                                     std::span<ad::D2> out) {
    box_term_constraints(x, th, cstr_off, layout, out);
  };
  pr.provider = std::make_shared<AutodiffProvider>(
      n, m, pd + po + pc, pr.num_ineq_path, 0, pr.num_ineq_term, 0,
      std::move(fns));

  model.families = {
      ConstraintFamily{"p", {0, 1}, {0, 1}, 1},
      ConstraintFamily{"u", {2, 3}, {}, 0},
  };
  return model;
}

SystemModel build_problem(const TwoLinkArmSpec& spec) {
  if (!(spec.m1 > 0 && spec.m2 > 0 && spec.l1 > 0 && spec.l2 > 0 &&
        spec.dt > 0 && spec.horizon > 0))
    throw ConfigError("arm spec: masses, lengths, dt, horizon must be positive");

  const int n = 4, m = 2, pd = 4, po = 4, pc = 2;
  const int dyn_off = 0, obj_off = pd, cstr_off = pd + po;
  const double gravity = spec.gravity;
  const double dt = spec.dt;
  const double wu = spec.input_cost_weight;
  const Vector goal = spec.x_goal;
  const BoxLayout layout{{0, 2}, 1, 0};

  SystemModel model;
  model.name = "arm";
  model.dt = dt;
  model.observation_interval_ms = dt * 1000.0;
  model.theta_true = ParamVector(
      (Vector(4) << spec.m1, spec.m2, spec.l1, spec.l2).finished(),
      spec.obj_weights, (Vector(2) << spec.u_max, spec.q_max).finished());

  ControlProblem& pr = model.problem;
  pr.horizon = spec.horizon;
  pr.state_dim = n;
  pr.input_dim = m;
  pr.dyn_param_dim = pd;
  pr.obj_param_dim = po;
  pr.cstr_param_dim = pc;
  pr.x0 = spec.x_start;
  pr.num_ineq_path = 8;   // 2 joints x 2 sides x {q, u}
  pr.num_ineq_term = 4;
  pr.validity = ValidityBox::unbounded(n, m);
  pr.validity.x_lo << -50.0, -200.0, -50.0, -200.0;
  pr.validity.x_hi << 50.0, 200.0, 50.0, 200.0;
  pr.validity.u_lo << -1e4, -1e4;
  pr.validity.u_hi << 1e4, 1e4;

  pr.dynamics = [gravity, dt](const Vector& x, const Vector& u,
                              const ParamVector& th) {
    Vector out(4);
    auto deriv = [&](std::span<const double> xs, std::span<const double> us,
                     std::span<double> dx) {
      arm_deriv_t<double>(xs, us, std::span<const double>(th.dyn.data(), 4),
                          gravity, dx);
    };
    rk4_t<double>(deriv, std::span<const double>(x.data(), 4),
                  std::span<const double>(u.data(), 2),
                  std::span<double>(out.data(), 4), dt);
    return out;
  };
  pr.stage_cost = [wu, goal](const Vector& x, const Vector& u,
                             const ParamVector& th) {
    double c = wu * u.squaredNorm();
    for (int i = 0; i < 4; ++i) c += sq(th.obj(i) * (x(i) - goal(i)));
    return c;
  };
  pr.terminal_cost = [goal](const Vector& x, const ParamVector& th) {
    double c = 0;
    for (int i = 0; i < 4; ++i) c += sq(th.obj(i) * (x(i) - goal(i)));
    return c;
  };
  pr.ineq_path = [](const Vector& x, const Vector& u, const ParamVector& th) {
    const double u_max = th.cstr(0), q_max = th.cstr(1);
    Vector g(8);
    g << x(0) - q_max, -x(0) - q_max, x(2) - q_max, -x(2) - q_max,
        u(0) - u_max, -u(0) - u_max, u(1) - u_max, -u(1) - u_max;
    return g;
  };
  pr.ineq_term = [](const Vector& x, const ParamVector& th) {
    const double q_max = th.cstr(1);
    Vector g(4);
    g << x(0) - q_max, -x(0) - q_max, x(2) - q_max, -x(2) - q_max;
    return g;
  };

  AutodiffProvider::Functions fns;
  fns.dynamics = [gravity, dt, dyn_off](std::span<const ad::D2> x,
                                        std::span<const ad::D2> u,
                                        std::span<const ad::D2> th,
                                        std::span<ad::D2> out) {
    auto deriv = [&](std::span<const ad::D2> xs, std::span<const ad::D2> us,
                     std::span<ad::D2> dx) {
      arm_deriv_t<ad::D2>(xs, us, th.subspan(dyn_off, 4), gravity, dx);
    };
    rk4_t<ad::D2>(deriv, x, u, out, dt);
  };
  fns.stage_cost = [wu, goal, obj_off](std::span<const ad::D2> x,
                                       std::span<const ad::D2> u,
                                       std::span<const ad::D2> th) {
    return input_cost(u, wu) + weighted_goal_cost(x, th.subspan(obj_off, 4), goal);
  };
  fns.terminal_cost = [goal, obj_off](std::span<const ad::D2> x,
                                      std::span<const ad::D2> th) {
    return weighted_goal_cost(x, th.subspan(obj_off, 4), goal);
  };
  fns.ineq_path = [cstr_off, layout](std::span<const ad::D2> x,
                                     std::span<const ad::D2> u,
                                     std::span<const ad::D2> th,
                                     std::span<ad::D2> out) {
    box_path_constraints(x, u, th, cstr_off, layout, out);
  };
  fns.ineq_term = [cstr_off, layout](std::span<const ad::D2> x,
                                     std::span<const ad::D2> th,
                                     std::span<ad::D2> out) {
    box_term_constraints(x, th, cstr_off, layout, out);
  };
  pr.provider = std::make_shared<AutodiffProvider>(
      n, m, pd + po + pc, pr.num_ineq_path, 0, pr.num_ineq_term, 0,
      std::move(fns));

  model.families = {
      ConstraintFamily{"q", {0, 1, 2, 3}, {0, 1, 2, 3}, 1},
      ConstraintFamily{"u", {4, 5, 6, 7}, {}, 0},
  };
  return model;
}

SystemModel build_problem(const LqrToySpec& spec) {
  if (!(spec.theta > 0)) throw ConfigError("lqr toy: theta must be positive");
  const bool bounded = spec.input_bound.has_value();
  const double bound = bounded ? *spec.input_bound : 0.0;
  if (bounded && !(bound > 0))
    throw ConfigError("lqr toy: input bound must be positive");

  const int n = 1, m = 1, pd = 0, po = 1, pc = bounded ? 1 : 0;

  SystemModel model;
  model.name = "lqr-toy";
  model.dt = 1.0;
  model.observation_interval_ms = 1000.0;
  model.theta_true = ParamVector(
      Vector(0), (Vector(1) << spec.theta).finished(),
      bounded ? (Vector(1) << bound).finished() : Vector(0));

  ControlProblem& pr = model.problem;
  pr.horizon = spec.horizon;
  pr.state_dim = n;
  pr.input_dim = m;
  pr.dyn_param_dim = pd;
  pr.obj_param_dim = po;
  pr.cstr_param_dim = pc;
  pr.x0 = (Vector(1) << spec.x0).finished();
  pr.num_ineq_path = bounded ? 2 : 0;
  pr.validity = ValidityBox::unbounded(n, m);

  pr.dynamics = [](const Vector& x, const Vector& u, const ParamVector&) {
    return (x + u).eval();
  };
  pr.stage_cost = [](const Vector& x, const Vector& u, const ParamVector& th) {
    return th.obj(0) * x.squaredNorm() + u.squaredNorm();
  };
  pr.terminal_cost = [](const Vector& x, const ParamVector& th) {
    return th.obj(0) * x.squaredNorm();
  };
  if (bounded) {
    pr.ineq_path = [](const Vector&, const Vector& u, const ParamVector& th) {
      Vector g(2);
      g << u(0) - th.cstr(0), -u(0) - th.cstr(0);
      return g;
    };
  }

  AutodiffProvider::Functions fns;
  fns.dynamics = [](std::span<const ad::D2> x, std::span<const ad::D2> u,
                    std::span<const ad::D2>, std::span<ad::D2> out) {
    out[0] = x[0] + u[0];
  };
  fns.stage_cost = [](std::span<const ad::D2> x, std::span<const ad::D2> u,
                      std::span<const ad::D2> th) {
    return th[0] * x[0] * x[0] + u[0] * u[0];
  };
  fns.terminal_cost = [](std::span<const ad::D2> x,
                         std::span<const ad::D2> th) {
    return th[0] * x[0] * x[0];
  };
  if (bounded) {
    fns.ineq_path = [](std::span<const ad::D2>, std::span<const ad::D2> u,
                       std::span<const ad::D2> th, std::span<ad::D2> out) {
      out[0] = u[0] - th[1];
      out[1] = -1.0 * u[0] - th[1];
    };
  }
  pr.provider = std::make_shared<AutodiffProvider>(
      n, m, pd + po + pc, pr.num_ineq_path, 0, 0, 0, std::move(fns));

  if (bounded)
    model.families = {ConstraintFamily{"u", {0, 1}, {}, 0}};
  return model;
}

double gaussian_sample(std::uint64_t seed, std::uint64_t t,
                       std::uint64_t component, double sigma) {
  if (sigma == 0.0) return 0.0;
  return sigma * detail::counter_normal(seed, t, component);
}

Vector measure(const Vector& xi_t, const MeasurementModel& model,
               const NoiseConfig& noise, int t) {
  Vector y = model.z(xi_t);
  for (Eigen::Index c = 0; c < y.size(); ++c)
    y(c) += gaussian_sample(noise.seed, static_cast<std::uint64_t>(t),
                            static_cast<std::uint64_t>(c), noise.sigma);
  return y;
}

}  // namespace socil
