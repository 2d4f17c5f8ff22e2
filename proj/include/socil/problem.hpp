#pragma once

#include <functional>
#include <memory>
#include <span>
#include <string>

#include "socil/autodiff.hpp"
#include "socil/types.hpp"

namespace socil {

/// State/input box outside which evaluation raises instead of returning
/// garbage (solver divergence, near-singular configurations).
struct ValidityBox {
  Vector x_lo, x_hi, u_lo, u_hi;

  static ValidityBox unbounded(int n, int m) {
    constexpr double kBig = 1e12;
    ValidityBox b;
    b.x_lo = Vector::Constant(n, -kBig);
    b.x_hi = Vector::Constant(n, kBig);
    b.u_lo = Vector::Constant(m, -kBig);
    b.u_hi = Vector::Constant(m, kBig);
    return b;
  }

  bool contains(const Vector& x, const Vector& u) const {
    return (x.array() >= x_lo.array()).all() &&
           (x.array() <= x_hi.array()).all() &&
           (u.array() >= u_lo.array()).all() &&
           (u.array() <= u_hi.array()).all();
  }
};

class DerivativeProvider;

using DynamicsFn =
    std::function<Vector(const Vector&, const Vector&, const ParamVector&)>;
using StageCostFn =
    std::function<double(const Vector&, const Vector&, const ParamVector&)>;
using TerminalCostFn = std::function<double(const Vector&, const ParamVector&)>;
using PathConstraintFn =
    std::function<Vector(const Vector&, const Vector&, const ParamVector&)>;
using TerminalConstraintFn =
    std::function<Vector(const Vector&, const ParamVector&)>;

/**
 * Parametric constrained discrete-time optimal-control problem:
 * minimize sum_t c_t(x_t, u_t, theta) + c_T(x_T, theta) over inputs,
 * subject to x_{t+1} = f(x_t, u_t, theta), path/terminal inequality
 * constraints g <= 0 and equality constraints h = 0.
 *
 * Constraint counts are constant over t. Handles must be total on finite
 * inputs inside `validity` and deterministic.
 */
struct ControlProblem {
  int horizon = 0;
  int state_dim = 0;
  int input_dim = 0;
  int dyn_param_dim = 0;
  int obj_param_dim = 0;
  int cstr_param_dim = 0;
  Vector x0;

  DynamicsFn dynamics;
  StageCostFn stage_cost;
  TerminalCostFn terminal_cost;
  PathConstraintFn ineq_path;       // g_t, length num_ineq_path (may be null)
  PathConstraintFn eq_path;         // h_t
  TerminalConstraintFn ineq_term;   // g_T
  TerminalConstraintFn eq_term;     // h_T
  int num_ineq_path = 0;
  int num_eq_path = 0;
  int num_ineq_term = 0;
  int num_eq_term = 0;

  ValidityBox validity;
  std::shared_ptr<const DerivativeProvider> provider;  // analytic when built by `systems`

  int param_dim() const { return dyn_param_dim + obj_param_dim + cstr_param_dim; }

  bool has_constraints() const {
    return num_ineq_path + num_eq_path + num_ineq_term + num_eq_term > 0;
  }

  void check_theta(const ParamVector& theta) const {
    if (theta.dyn.size() != dyn_param_dim || theta.obj.size() != obj_param_dim ||
        theta.cstr.size() != cstr_param_dim)
      throw DimensionError(
          "theta partition sizes (" + std::to_string(theta.dyn.size()) + "," +
          std::to_string(theta.obj.size()) + "," +
          std::to_string(theta.cstr.size()) + ") do not match problem (" +
          std::to_string(dyn_param_dim) + "," + std::to_string(obj_param_dim) +
          "," + std::to_string(cstr_param_dim) + ")");
  }

  void check_inside_validity(const Vector& x, const Vector& u, int t) const {
    if (!x.allFinite() || !u.allFinite() || !validity.contains(x, u))
      throw EvaluationError("state/input outside validity box at t=" +
                            std::to_string(t));
  }

  /// Copy with every explicit constraint removed (used by the unsafe baseline).
  ControlProblem without_constraints() const {
    ControlProblem p = *this;
    p.ineq_path = nullptr;
    p.eq_path = nullptr;
    p.ineq_term = nullptr;
    p.eq_term = nullptr;
    p.num_ineq_path = p.num_eq_path = p.num_ineq_term = p.num_eq_term = 0;
    return p;
  }
};

// Derivative blocks. Second derivatives of vector-valued functions are
// contracted with a caller-supplied weight vector w, i.e. wxx = sum_k w_k
// d2 f_k / dx dx, so no third-order tensors are ever materialized.

struct DynamicsBlocks {
  Vector value;              // f(x,u,theta), length n
  Matrix x, u, theta;        // F^x (n x n), F^u (n x m), F^theta (n x p)
  Matrix wxx, wxu, wuu;      // sum_k w_k * second derivatives
  Matrix wxtheta, wutheta;
};

struct CostBlocks {
  double value = 0;
  Vector x, u;
  Matrix xx, xu, uu;
  Matrix xtheta, utheta;
};

struct TerminalCostBlocks {
  double value = 0;
  Vector x;
  Matrix xx, xtheta;
};

struct ConstraintBlocks {
  Vector value;              // length q
  Matrix x, u, theta;        // Jacobians q x n, q x m, q x p
  Matrix wxx, wxu, wuu;      // sum_i w_i * second derivatives
  Matrix wxtheta, wutheta;
};

struct TerminalConstraintBlocks {
  Vector value;
  Matrix x, theta;
  Matrix wxx, wxtheta;
};

/**
 * First/second partial-derivative evaluators for the problem data. Columns of
 * every theta block follow the flat [dyn, obj, cstr] order. When `want_theta`
 * is false the theta blocks are left empty (the solver hot path never needs
 * them).
 */
class DerivativeProvider {
 public:
  enum class Mode { analytic, numeric };

  virtual ~DerivativeProvider() = default;
  virtual Mode mode() const = 0;

  virtual DynamicsBlocks dynamics(const Vector& x, const Vector& u,
                                  const ParamVector& theta, const Vector& w,
                                  bool want_theta) const = 0;
  virtual CostBlocks stage_cost(const Vector& x, const Vector& u,
                                const ParamVector& theta,
                                bool want_theta) const = 0;
  virtual TerminalCostBlocks terminal_cost(const Vector& x,
                                           const ParamVector& theta,
                                           bool want_theta) const = 0;
  virtual ConstraintBlocks ineq_path(const Vector& x, const Vector& u,
                                     const ParamVector& theta, const Vector& w,
                                     bool want_theta) const = 0;
  virtual ConstraintBlocks eq_path(const Vector& x, const Vector& u,
                                   const ParamVector& theta, const Vector& w,
                                   bool want_theta) const = 0;
  virtual TerminalConstraintBlocks ineq_term(const Vector& x,
                                             const ParamVector& theta,
                                             const Vector& w,
                                             bool want_theta) const = 0;
  virtual TerminalConstraintBlocks eq_term(const Vector& x,
                                           const ParamVector& theta,
                                           const Vector& w,
                                           bool want_theta) const = 0;
};

/**
 * Central-difference provider over the problem's raw function handles.
 * First derivatives use step 1e-5*(1+|coord|); second-difference stencils
 * use 1e-4*(1+|coord|).
 */
class NumericProvider : public DerivativeProvider {
 public:
  explicit NumericProvider(ControlProblem problem)
      : problem_(std::move(problem)) {}

  Mode mode() const override { return Mode::numeric; }

  DynamicsBlocks dynamics(const Vector& x, const Vector& u,
                          const ParamVector& theta, const Vector& w,
                          bool want_theta) const override;
  CostBlocks stage_cost(const Vector& x, const Vector& u,
                        const ParamVector& theta, bool want_theta) const override;
  TerminalCostBlocks terminal_cost(const Vector& x, const ParamVector& theta,
                                   bool want_theta) const override;
  ConstraintBlocks ineq_path(const Vector& x, const Vector& u,
                             const ParamVector& theta, const Vector& w,
                             bool want_theta) const override;
  ConstraintBlocks eq_path(const Vector& x, const Vector& u,
                           const ParamVector& theta, const Vector& w,
                           bool want_theta) const override;
  TerminalConstraintBlocks ineq_term(const Vector& x, const ParamVector& theta,
                                     const Vector& w,
                                     bool want_theta) const override;
  TerminalConstraintBlocks eq_term(const Vector& x, const ParamVector& theta,
                                   const Vector& w,
                                   bool want_theta) const override;

 private:
  ControlProblem problem_;
};

// Autodiff-backed provider. Functions are supplied over second-order dual
// scalars; derivatives are exact.

using AdDynamicsFn = std::function<void(std::span<const ad::D2> x,
                                        std::span<const ad::D2> u,
                                        std::span<const ad::D2> theta,
                                        std::span<ad::D2> out)>;
using AdStageCostFn =
    std::function<ad::D2(std::span<const ad::D2> x, std::span<const ad::D2> u,
                         std::span<const ad::D2> theta)>;
using AdTerminalCostFn = std::function<ad::D2(std::span<const ad::D2> x,
                                              std::span<const ad::D2> theta)>;
using AdPathConstraintFn = AdDynamicsFn;
using AdTerminalConstraintFn = std::function<void(std::span<const ad::D2> x,
                                                  std::span<const ad::D2> theta,
                                                  std::span<ad::D2> out)>;

class AutodiffProvider : public DerivativeProvider {
 public:
  struct Functions {
    AdDynamicsFn dynamics;
    AdStageCostFn stage_cost;
    AdTerminalCostFn terminal_cost;
    AdPathConstraintFn ineq_path;           // null when count is zero
    AdPathConstraintFn eq_path;
    AdTerminalConstraintFn ineq_term;
    AdTerminalConstraintFn eq_term;
  };

  AutodiffProvider(int n, int m, int p, int q, int s, int q_term, int s_term,
                   Functions fns)
      : n_(n), m_(m), p_(p), q_(q), s_(s), q_term_(q_term), s_term_(s_term),
        fns_(std::move(fns)) {}

  Mode mode() const override { return Mode::analytic; }

  DynamicsBlocks dynamics(const Vector& x, const Vector& u,
                          const ParamVector& theta, const Vector& w,
                          bool want_theta) const override;
  CostBlocks stage_cost(const Vector& x, const Vector& u,
                        const ParamVector& theta, bool want_theta) const override;
  TerminalCostBlocks terminal_cost(const Vector& x, const ParamVector& theta,
                                   bool want_theta) const override;
  ConstraintBlocks ineq_path(const Vector& x, const Vector& u,
                             const ParamVector& theta, const Vector& w,
                             bool want_theta) const override;
  ConstraintBlocks eq_path(const Vector& x, const Vector& u,
                           const ParamVector& theta, const Vector& w,
                           bool want_theta) const override;
  TerminalConstraintBlocks ineq_term(const Vector& x, const ParamVector& theta,
                                     const Vector& w,
                                     bool want_theta) const override;
  TerminalConstraintBlocks eq_term(const Vector& x, const ParamVector& theta,
                                   const Vector& w,
                                   bool want_theta) const override;

 private:
  int n_, m_, p_, q_, s_, q_term_, s_term_;
  Functions fns_;
};

/// The problem's provider, or a fresh NumericProvider fallback.
std::shared_ptr<const DerivativeProvider> ensure_provider(
    const ControlProblem& problem);

}  // namespace socil
