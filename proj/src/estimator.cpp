#include "socil/estimator.hpp"

namespace socil {

Vector stage_loss(const Vector& xi_t, const Vector& y_star,
                  const MeasurementModel& model) {
  const Vector z = model.z(xi_t);
  if (z.size() != y_star.size() || z.size() != model.r)
    throw DimensionError("stage_loss: measurement length " +
                         std::to_string(y_star.size()) +
                         " does not match model r=" + std::to_string(model.r));
  return y_star - z;
}

double cumulative_loss(const Trajectory& traj,
                       const std::vector<Vector>& measurements,
                       const MeasurementModel& model) {
  const int T = traj.horizon();
  if (measurements.size() != static_cast<std::size_t>(T) + 1)
    throw DimensionError("cumulative_loss expects T+1 = " +
                         std::to_string(T + 1) + " measurements, got " +
                         std::to_string(measurements.size()));
  double loss = 0.0;
  for (int t = 0; t <= T; ++t)
    loss += stage_loss(traj.stacked(t), measurements[static_cast<std::size_t>(t)],
                       model)
                .squaredNorm();
  return loss;
}

Matrix stage_jacobian(int t, const TrajectoryJacobian& jac,
                      const MeasurementModel& model, const Vector& xi_t) {
  const int T = static_cast<int>(jac.inputs.size());
  if (t < 0 || t > T)
    throw DimensionError("stage_jacobian: t=" + std::to_string(t) +
                         " outside [0, " + std::to_string(T) + "]");
  const Matrix jz = model.z_jacobian(xi_t);
  const Matrix& X = jac.states[static_cast<std::size_t>(t)];
  const int n = static_cast<int>(X.rows());
  const int p = static_cast<int>(X.cols());

  if (model.state_only) return -jz.leftCols(n) * X;

  Matrix dxi_dtheta(jz.cols(), p);
  dxi_dtheta.topRows(n) = X;
  if (t < T)
    dxi_dtheta.bottomRows(jz.cols() - n) = jac.inputs[static_cast<std::size_t>(t)];
  else
    dxi_dtheta.bottomRows(jz.cols() - n).setZero();
  return -jz * dxi_dtheta;
}

std::pair<EstimatorState, EkfStepReport> ekf_step(
    const EstimatorState& state, const Matrix& L_t, const Vector& innovation,
    const MeasurementModel& model) {
  const Eigen::Index p = state.P.rows();
  const Eigen::Index r = L_t.rows();
  if (L_t.cols() != p || innovation.size() != r || model.R.rows() != r)
    throw DimensionError("ekf_step: shape mismatch (p=" + std::to_string(p) +
                         ", r=" + std::to_string(r) + ")");

  // Predict step is the identity (Eq. 5a): parameters are modeled constant.
  const Matrix& P = state.P;
  Matrix S = L_t * P * L_t.transpose() + model.R;
  Eigen::LDLT<Matrix> ldlt(S);
  if (ldlt.info() != Eigen::Success || !ldlt.isPositive()) {
    S += 1e-9 * Matrix::Identity(r, r);
    ldlt.compute(S);
    if (ldlt.info() != Eigen::Success || !ldlt.isPositive())
      throw SingularityError("ekf_step: innovation covariance singular");
  }
  const Matrix K = ldlt.solve(L_t * P).transpose();  // P L' S^-1

  EstimatorState next = state;
  next.theta_hat =
      state.theta_hat.with_flat(state.theta_hat.flat() - K * innovation);
  Matrix P_next = (Matrix::Identity(p, p) - K * L_t) * P;
  next.P = 0.5 * (P_next + P_next.transpose());
  next.step = state.step + 1;

  EkfStepReport report;
  report.kalman_gain = K;
  report.innovation = innovation;
  report.stage_jac = L_t;
  report.stage_loss_norm = innovation.norm();
  return {std::move(next), std::move(report)};
}

}  // namespace socil
