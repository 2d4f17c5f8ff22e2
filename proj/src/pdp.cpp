#include "socil/pdp.hpp"

#include <cmath>
#include <limits>

#include "socil/detail/rng.hpp"

namespace socil {

namespace {

void check_finite(const Matrix& block, const char* name, int t) {
  if (!block.allFinite())
    throw EvaluationError(std::string("non-finite Hamiltonian block ") + name +
                          " at t=" + std::to_string(t));
}

// Lemma-4 invertibility policy: one 1e-8 ridge if the smallest eigenvalue of
// Lbar^uu drops below 1e-9, error if that does not restore invertibility.
// Heavy silent regularization would corrupt the gradient.
Matrix regularized_luu(const Matrix& luu, int t) {
  Eigen::SelfAdjointEigenSolver<Matrix> eig(luu, Eigen::EigenvaluesOnly);
  if (eig.eigenvalues().minCoeff() >= 1e-9) return luu;
  const Matrix ridged =
      luu + 1e-8 * Matrix::Identity(luu.rows(), luu.cols());
  Eigen::SelfAdjointEigenSolver<Matrix> eig2(ridged, Eigen::EigenvaluesOnly);
  if (eig2.eigenvalues().minCoeff() < 1e-9)
    throw SingularityError("Lbar^uu singular after ridge at t=" +
                           std::to_string(t));
  return ridged;
}

}  // namespace

HamiltonianDerivs assemble_derivs(const AugmentedProblem& aug,
                                  const Solution& sol,
                                  const ParamVector& theta) {
  const ControlProblem& pr = aug.original();
  const int T = pr.horizon;
  HamiltonianDerivs d;
  d.horizon = T;
  d.state_dim = pr.state_dim;
  d.input_dim = pr.input_dim;
  d.param_dim = pr.param_dim();
  d.lxx.reserve(T);
  d.lxu.reserve(T);
  d.luu.reserve(T);
  d.lxtheta.reserve(T);
  d.lutheta.reserve(T);
  d.fx.reserve(T);
  d.fu.reserve(T);
  d.ftheta.reserve(T);

  for (int t = 0; t < T; ++t) {
    const auto ti = static_cast<std::size_t>(t);
    const HamiltonianBlocks b = aug.stage_blocks(
        sol.trajectory.states[ti], sol.trajectory.inputs[ti],
        sol.costates[ti], theta, /*want_theta=*/true);
    check_finite(b.lxx, "lxx", t);
    check_finite(b.lxu, "lxu", t);
    check_finite(b.luu, "luu", t);
    check_finite(b.lxtheta, "lxtheta", t);
    check_finite(b.lutheta, "lutheta", t);
    check_finite(b.fx, "fx", t);
    check_finite(b.fu, "fu", t);
    check_finite(b.ftheta, "ftheta", t);
    d.lxx.push_back(b.lxx);
    d.lxu.push_back(b.lxu);
    d.luu.push_back(b.luu);
    d.lxtheta.push_back(b.lxtheta);
    d.lutheta.push_back(b.lutheta);
    d.fx.push_back(b.fx);
    d.fu.push_back(b.fu);
    d.ftheta.push_back(b.ftheta);
  }
  const TerminalHamiltonianBlocks term =
      aug.terminal_blocks(sol.trajectory.states.back(), theta, true);
  check_finite(term.lxx, "lxx_term", T);
  check_finite(term.lxtheta, "lxtheta_term", T);
  d.lxx_term = term.lxx;
  d.lxtheta_term = term.lxtheta;
  return d;
}

TrajectoryJacobian pdp_jacobian(const HamiltonianDerivs& derivs,
                                RecursionState* recursion) {
  const int T = derivs.horizon;
  const int n = derivs.state_dim;
  const int p = derivs.param_dim;

  // Stage intermediates. Every inverse in the lemma is a factorized solve.
  std::vector<Eigen::LLT<Matrix>> luu_fact;
  std::vector<Matrix> A(T), B(T), C(T), M(T), N(T);
  std::vector<Matrix> iluu_lux(T), iluu_lutheta(T), iluu_fut(T);
  luu_fact.reserve(T);
  for (int t = 0; t < T; ++t) {
    const Matrix luu = regularized_luu(derivs.luu[t], t);
    luu_fact.emplace_back(luu);
    if (luu_fact.back().info() != Eigen::Success)
      throw SingularityError("Lbar^uu factorization failed at t=" +
                             std::to_string(t));
    const Matrix lux = derivs.lxu[t].transpose();
    iluu_lux[t] = luu_fact.back().solve(lux);
    iluu_lutheta[t] = luu_fact.back().solve(derivs.lutheta[t]);
    iluu_fut[t] = luu_fact.back().solve(derivs.fu[t].transpose());
    A[t] = derivs.fx[t] - derivs.fu[t] * iluu_lux[t];
    B[t] = derivs.lxx[t] - derivs.lxu[t] * iluu_lux[t];
    C[t] = derivs.fu[t] * iluu_fut[t];
    M[t] = derivs.ftheta[t] - derivs.fu[t] * iluu_lutheta[t];
    N[t] = derivs.lxtheta[t] - derivs.lxu[t] * iluu_lutheta[t];
  }

  // Backward value recursion.
  std::vector<Matrix> V(T + 1), W(T + 1);
  std::vector<Eigen::FullPivLU<Matrix>> ivc_fact(T);
  V[T] = derivs.lxx_term;
  W[T] = derivs.lxtheta_term;
  for (int t = T - 1; t >= 0; --t) {
    ivc_fact[t].compute(Matrix::Identity(n, n) + V[t + 1] * C[t]);
    if (!ivc_fact[t].isInvertible())
      throw SingularityError("I + V C singular at t=" + std::to_string(t));
    V[t] = B[t] + A[t].transpose() * ivc_fact[t].solve(V[t + 1] * A[t]);
    V[t] = 0.5 * (V[t] + V[t].transpose()).eval();
    W[t] = A[t].transpose() * ivc_fact[t].solve(W[t + 1] + V[t + 1] * M[t]) +
           N[t];
  }

  // Forward sensitivity pass.
  TrajectoryJacobian jac;
  jac.states.resize(T + 1);
  jac.inputs.resize(T);
  jac.states[0] = Matrix::Zero(n, p);
  for (int t = 0; t < T; ++t) {
    const Matrix& X = jac.states[t];
    const Matrix inner =
        ivc_fact[t].solve(V[t + 1] * (A[t] * X + M[t]) + W[t + 1]);
    jac.inputs[t] = -luu_fact[t].solve(
        derivs.lxu[t].transpose() * X + derivs.lutheta[t] +
        derivs.fu[t].transpose() * inner);
    jac.states[t + 1] =
        derivs.fx[t] * X + derivs.fu[t] * jac.inputs[t] + derivs.ftheta[t];
  }

  if (recursion) {
    recursion->V = std::move(V);
    recursion->W = std::move(W);
  }
  return jac;
}

TrajectoryJacobian finite_difference_jacobian(const AugmentedProblem& aug,
                                              const ParamVector& theta,
                                              const SolverSettings& settings,
                                              double step) {
  const ControlProblem& pr = aug.original();
  const int T = pr.horizon;
  const int n = pr.state_dim;
  const int m = pr.input_dim;
  const int p = pr.param_dim();

  const Solution base = solve(aug, theta, std::nullopt, settings);
  if (!base.converged)
    throw SolverError("finite_difference_jacobian: base solve not converged");

  TrajectoryJacobian jac;
  jac.states.assign(T + 1, Matrix::Zero(n, p));
  jac.inputs.assign(T, Matrix::Zero(m, p));

  const Vector flat = theta.flat();
  for (int k = 0; k < p; ++k) {
    Vector plus = flat, minus = flat;
    plus(k) += step;
    minus(k) -= step;
    const Solution sp =
        solve(aug, theta.with_flat(plus), base.trajectory, settings);
    const Solution sm =
        solve(aug, theta.with_flat(minus), base.trajectory, settings);
    if (!sp.converged || !sm.converged)
      throw SolverError(
          "finite_difference_jacobian: re-solve not converged at coordinate " +
          std::to_string(k));
    for (int t = 0; t <= T; ++t)
      jac.states[t].col(k) =
          (sp.trajectory.states[t] - sm.trajectory.states[t]) / (2.0 * step);
    for (int t = 0; t < T; ++t)
      jac.inputs[t].col(k) =
          (sp.trajectory.inputs[t] - sm.trajectory.inputs[t]) / (2.0 * step);
  }
  return jac;
}

double second_order_quadratic_form(const HamiltonianDerivs& derivs,
                                   const std::vector<Vector>& input_directions) {
  const int T = derivs.horizon;
  const int n = derivs.state_dim;
  if (static_cast<int>(input_directions.size()) != T)
    throw DimensionError("second_order_quadratic_form expects T directions");

  double form = 0.0;
  Vector x = Vector::Zero(n);
  for (int t = 0; t < T; ++t) {
    const Vector& u = input_directions[t];
    form += x.dot(derivs.lxx[t] * x) + 2.0 * x.dot(derivs.lxu[t] * u) +
            u.dot(derivs.luu[t] * u);
    x = (derivs.fx[t] * x + derivs.fu[t] * u).eval();
  }
  form += x.dot(derivs.lxx_term * x);
  return form;
}

double jacobian_max_rel_error(const TrajectoryJacobian& a,
                              const TrajectoryJacobian& b) {
  double max_abs_diff = 0.0, max_abs_ref = 0.0;
  auto scan = [&](const std::vector<Matrix>& lhs,
                  const std::vector<Matrix>& rhs) {
    for (std::size_t i = 0; i < lhs.size(); ++i) {
      max_abs_diff =
          std::max(max_abs_diff, (lhs[i] - rhs[i]).cwiseAbs().maxCoeff());
      max_abs_ref = std::max(max_abs_ref, rhs[i].cwiseAbs().maxCoeff());
    }
  };
  scan(a.states, b.states);
  scan(a.inputs, b.inputs);
  return max_abs_diff / std::max(max_abs_ref, 1e-12);
}

SecondOrderReport check_second_order(const HamiltonianDerivs& derivs,
                                     int trials, std::uint64_t rng_seed) {
  const int T = derivs.horizon;
  const int m = derivs.input_dim;
  SecondOrderReport report;
  report.min_quadratic_form = std::numeric_limits<double>::infinity();
  for (int trial = 0; trial < trials; ++trial) {
    std::vector<Vector> dirs(T, Vector(m));
    double norm_sq = 0.0;
    for (int t = 0; t < T; ++t)
      for (int j = 0; j < m; ++j) {
        const double v = detail::counter_normal(
            rng_seed, static_cast<std::uint64_t>(trial),
            static_cast<std::uint64_t>(t) * m + j);
        dirs[t](j) = v;
        norm_sq += v * v;
      }
    if (norm_sq == 0.0) continue;
    const double scale = 1.0 / std::sqrt(norm_sq);
    for (auto& d : dirs) d *= scale;
    report.min_quadratic_form =
        std::min(report.min_quadratic_form, second_order_quadratic_form(derivs, dirs));
  }
  report.satisfied = report.min_quadratic_form > 0.0;
  return report;
}

}  // namespace socil
