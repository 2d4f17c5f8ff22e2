#pragma once

#include "socil/pdp.hpp"

namespace socil {

/**
 * Measurement map over the stacked stage vector xi_t = [x_t; u_t] (the input
 * block is zero at the terminal index). The default model reads the state
 * part only, which keeps the terminal stage well-defined. R is the assumed
 * noise covariance, floored at 1e-12 I so it stays invertible at sigma = 0.
 */
struct MeasurementModel {
  std::function<Vector(const Vector&)> z;
  std::function<Matrix(const Vector&)> z_jacobian;  // r x (n+m)
  Matrix R;
  int r = 0;
  bool state_only = true;

  static MeasurementModel state_identity(int n, int m, double sigma) {
    MeasurementModel model;
    model.r = n;
    model.state_only = true;
    model.z = [n](const Vector& xi) { return xi.head(n).eval(); };
    model.z_jacobian = [n, m](const Vector&) {
      Matrix J = Matrix::Zero(n, n + m);
      J.leftCols(n).setIdentity();
      return J;
    };
    model.R = std::max(sigma * sigma, 1e-12) * Matrix::Identity(n, n);
    return model;
  }
};

/// l(xi_t, y*) = y* - z(xi_t).
Vector stage_loss(const Vector& xi_t, const Vector& y_star,
                  const MeasurementModel& model);

/// L = sum_{t=0}^{T} ||l(xi_t, y*_t)||^2; expects T+1 measurements.
double cumulative_loss(const Trajectory& traj,
                       const std::vector<Vector>& measurements,
                       const MeasurementModel& model);

/// L_t = -z_jacobian(xi_t) [X_t; U_t] (input block omitted for state-only
/// models and zero at the terminal index). Shape r x p.
Matrix stage_jacobian(int t, const TrajectoryJacobian& jac,
                      const MeasurementModel& model, const Vector& xi_t);

/// Online estimate: current theta_hat and covariance P (kept symmetric).
struct EstimatorState {
  ParamVector theta_hat;
  Matrix P;
  int step = 0;
};

struct EkfStepReport {
  Matrix kalman_gain;   // p x r
  Vector innovation;    // r
  Matrix stage_jac;     // L_t, r x p
  double stage_loss_norm = 0.0;
  bool degraded = false;
};

/**
 * One predict+update of the parameter EKF:
 *   K = P L' (L P L' + R)^-1,  P+ = (I - K L) P (symmetrized),
 *   theta+ = theta - K * innovation.
 * The minus sign matches the printed update law; it is consistent because
 * L_t carries the -dz/dxi factor. A singular innovation covariance gets one
 * 1e-9 I jitter, then errors.
 */
std::pair<EstimatorState, EkfStepReport> ekf_step(
    const EstimatorState& state, const Matrix& L_t, const Vector& innovation,
    const MeasurementModel& model);

}  // namespace socil
