#include "socil/barrier.hpp"

#include <cmath>

namespace socil {

double softplus(double x, double beta, double overflow_threshold) {
  if (!(beta > 0.0)) throw ConfigError("softplus: beta must be positive");
  const double s = x / beta;
  // For large s, beta*log1p(e^s) = x + beta*log1p(e^{-s}) avoids overflow.
  if (s > overflow_threshold) return x + beta * std::log1p(std::exp(-s));
  return beta * std::log1p(std::exp(s));
}

double softplus_grad(double x, double beta) {
  if (!(beta > 0.0)) throw ConfigError("softplus_grad: beta must be positive");
  const double s = x / beta;
  if (s >= 0.0) return 1.0 / (1.0 + std::exp(-s));
  const double e = std::exp(s);
  return e / (1.0 + e);
}

double softplus_hess(double x, double beta) {
  if (!(beta > 0.0)) throw ConfigError("softplus_hess: beta must be positive");
  const double sigma = softplus_grad(x, beta);
  return sigma * (1.0 - sigma) / beta;
}

AugmentedProblem::AugmentedProblem(ControlProblem problem, BarrierConfig cfg)
    : problem_(std::move(problem)), cfg_(cfg) {
  cfg_.validate();
  provider_ = ensure_provider(problem_);
}

AugmentedProblem augment(const ControlProblem& problem,
                         const BarrierConfig& cfg) {
  return AugmentedProblem(problem, cfg);
}

AugmentedProblem AugmentedProblem::with_barrier_scale(double factor) const {
  BarrierConfig cfg = cfg_;
  cfg.alpha *= factor;
  cfg.beta *= factor;
  return AugmentedProblem(problem_, cfg);
}

double AugmentedProblem::stage_cost(const Vector& x, const Vector& u,
                                    const ParamVector& theta) const {
  double c = problem_.stage_cost(x, u, theta);
  if (problem_.num_ineq_path > 0) {
    const Vector g = problem_.ineq_path(x, u, theta);
    for (Eigen::Index i = 0; i < g.size(); ++i)
      c += softplus(g(i), cfg_.beta, cfg_.overflow_threshold) / cfg_.alpha;
  }
  if (problem_.num_eq_path > 0) {
    const Vector h = problem_.eq_path(x, u, theta);
    c += h.squaredNorm() / (2.0 * cfg_.alpha);
  }
  return c;
}

double AugmentedProblem::terminal_cost(const Vector& x,
                                       const ParamVector& theta) const {
  double c = problem_.terminal_cost(x, theta);
  if (problem_.num_ineq_term > 0) {
    const Vector g = problem_.ineq_term(x, theta);
    for (Eigen::Index i = 0; i < g.size(); ++i)
      c += softplus(g(i), cfg_.beta, cfg_.overflow_threshold) / cfg_.alpha;
  }
  if (problem_.num_eq_term > 0) {
    const Vector h = problem_.eq_term(x, theta);
    c += h.squaredNorm() / (2.0 * cfg_.alpha);
  }
  return c;
}

double AugmentedProblem::total_cost(const Trajectory& traj,
                                    const ParamVector& theta) const {
  double total = 0.0;
  for (int t = 0; t < problem_.horizon; ++t) {
    const double c = stage_cost(traj.states[static_cast<std::size_t>(t)],
                                traj.inputs[static_cast<std::size_t>(t)], theta);
    if (!std::isfinite(c))
      throw EvaluationError("non-finite augmented stage cost at t=" +
                            std::to_string(t));
    total += c;
  }
  const double cT = terminal_cost(traj.states.back(), theta);
  if (!std::isfinite(cT))
    throw EvaluationError("non-finite augmented terminal cost");
  return total + cT;
}

HamiltonianBlocks AugmentedProblem::stage_blocks(const Vector& x,
                                                 const Vector& u,
                                                 const Vector& lambda_next,
                                                 const ParamVector& theta,
                                                 bool want_theta) const {
  const int n = problem_.state_dim;
  const int m = problem_.input_dim;
  const int p = problem_.param_dim();
  const double alpha = cfg_.alpha;
  const double beta = cfg_.beta;

  const DynamicsBlocks dyn =
      provider_->dynamics(x, u, theta, lambda_next, want_theta);
  const CostBlocks c = provider_->stage_cost(x, u, theta, want_theta);

  HamiltonianBlocks b;
  b.cost = c.value;
  b.f = dyn.value;
  b.fx = dyn.x;
  b.fu = dyn.u;
  b.lx = c.x + dyn.x.transpose() * lambda_next;
  b.lu = c.u + dyn.u.transpose() * lambda_next;
  b.lxx = c.xx + dyn.wxx;
  b.lxu = c.xu + dyn.wxu;
  b.luu = c.uu + dyn.wuu;
  if (want_theta) {
    b.ftheta = dyn.theta;
    b.lxtheta = c.xtheta + dyn.wxtheta;
    b.lutheta = c.utheta + dyn.wutheta;
  }

  if (problem_.num_ineq_path > 0) {
    const Vector g = problem_.ineq_path(x, u, theta);
    Vector sigma(g.size()), kappa(g.size());
    for (Eigen::Index i = 0; i < g.size(); ++i) {
      b.cost += softplus(g(i), beta, cfg_.overflow_threshold) / alpha;
      sigma(i) = softplus_grad(g(i), beta);
      kappa(i) = softplus_hess(g(i), beta) / alpha;
    }
    const ConstraintBlocks gb =
        provider_->ineq_path(x, u, theta, sigma / alpha, want_theta);
    b.lx += gb.x.transpose() * sigma / alpha;
    b.lu += gb.u.transpose() * sigma / alpha;
    const Matrix kx = kappa.asDiagonal() * gb.x;
    b.lxx += gb.x.transpose() * kx + gb.wxx;
    b.lxu += gb.x.transpose() * (kappa.asDiagonal() * gb.u) + gb.wxu;
    b.luu += gb.u.transpose() * (kappa.asDiagonal() * gb.u) + gb.wuu;
    if (want_theta) {
      const Matrix ktheta = kappa.asDiagonal() * gb.theta;
      b.lxtheta += gb.x.transpose() * ktheta + gb.wxtheta;
      b.lutheta += gb.u.transpose() * ktheta + gb.wutheta;
    }
  }

  if (problem_.num_eq_path > 0) {
    const Vector h = problem_.eq_path(x, u, theta);
    b.cost += h.squaredNorm() / (2.0 * alpha);
    const ConstraintBlocks hb =
        provider_->eq_path(x, u, theta, h / alpha, want_theta);
    b.lx += hb.x.transpose() * h / alpha;
    b.lu += hb.u.transpose() * h / alpha;
    b.lxx += hb.x.transpose() * hb.x / alpha + hb.wxx;
    b.lxu += hb.x.transpose() * hb.u / alpha + hb.wxu;
    b.luu += hb.u.transpose() * hb.u / alpha + hb.wuu;
    if (want_theta) {
      b.lxtheta += hb.x.transpose() * hb.theta / alpha + hb.wxtheta;
      b.lutheta += hb.u.transpose() * hb.theta / alpha + hb.wutheta;
    }
  }

  b.lxx = 0.5 * (b.lxx + b.lxx.transpose()).eval();
  b.luu = 0.5 * (b.luu + b.luu.transpose()).eval();
  if (!want_theta) {
    b.ftheta = Matrix(n, 0);
    b.lxtheta = Matrix(n, 0);
    b.lutheta = Matrix(m, 0);
  } else if (b.lxtheta.cols() != p) {
    throw DimensionError("theta block width mismatch in stage_blocks");
  }
  return b;
}

TerminalHamiltonianBlocks AugmentedProblem::terminal_blocks(
    const Vector& x, const ParamVector& theta, bool want_theta) const {
  const double alpha = cfg_.alpha;
  const double beta = cfg_.beta;
  const TerminalCostBlocks c = provider_->terminal_cost(x, theta, want_theta);

  TerminalHamiltonianBlocks b;
  b.cost = c.value;
  b.lx = c.x;
  b.lxx = c.xx;
  if (want_theta) b.lxtheta = c.xtheta;

  if (problem_.num_ineq_term > 0) {
    const Vector g = problem_.ineq_term(x, theta);
    Vector sigma(g.size()), kappa(g.size());
    for (Eigen::Index i = 0; i < g.size(); ++i) {
      b.cost += softplus(g(i), beta, cfg_.overflow_threshold) / alpha;
      sigma(i) = softplus_grad(g(i), beta);
      kappa(i) = softplus_hess(g(i), beta) / alpha;
    }
    const TerminalConstraintBlocks gb =
        provider_->ineq_term(x, theta, sigma / alpha, want_theta);
    b.lx += gb.x.transpose() * sigma / alpha;
    b.lxx += gb.x.transpose() * (kappa.asDiagonal() * gb.x) + gb.wxx;
    if (want_theta)
      b.lxtheta += gb.x.transpose() * (kappa.asDiagonal() * gb.theta) +
                   gb.wxtheta;
  }

  if (problem_.num_eq_term > 0) {
    const Vector h = problem_.eq_term(x, theta);
    b.cost += h.squaredNorm() / (2.0 * alpha);
    const TerminalConstraintBlocks hb =
        provider_->eq_term(x, theta, h / alpha, want_theta);
    b.lx += hb.x.transpose() * h / alpha;
    b.lxx += hb.x.transpose() * hb.x / alpha + hb.wxx;
    if (want_theta)
      b.lxtheta += hb.x.transpose() * hb.theta / alpha + hb.wxtheta;
  }

  b.lxx = 0.5 * (b.lxx + b.lxx.transpose()).eval();
  return b;
}

MultiplierEstimate approximate_multipliers(const ControlProblem& problem,
                                           const Trajectory& traj,
                                           const ParamVector& theta,
                                           const BarrierConfig& cfg) {
  cfg.validate();
  const ConstraintValues values = evaluate_constraints(problem, traj, theta);
  MultiplierEstimate est;
  est.mu.reserve(values.ineq_path.size());
  est.nu.reserve(values.eq_path.size());
  for (const Vector& g : values.ineq_path) {
    Vector mu(g.size());
    for (Eigen::Index i = 0; i < g.size(); ++i)
      mu(i) = softplus_grad(g(i), cfg.beta) / cfg.alpha;
    est.mu.push_back(std::move(mu));
  }
  for (const Vector& h : values.eq_path) est.nu.push_back(h / cfg.alpha);
  est.mu_term.resize(values.ineq_term.size());
  for (Eigen::Index i = 0; i < values.ineq_term.size(); ++i)
    est.mu_term(i) = softplus_grad(values.ineq_term(i), cfg.beta) / cfg.alpha;
  est.nu_term = values.eq_term / cfg.alpha;
  return est;
}

}  // namespace socil
