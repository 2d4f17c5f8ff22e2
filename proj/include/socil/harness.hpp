#pragma once

#include <nlohmann/json.hpp>
#include <iosfwd>

#include "socil/harness_config.hpp"

namespace socil {

/// Violation statistics for one constraint family: percentage of timesteps
/// with g > 0 and the worst exceedance relative to the bound (in percent).
struct ViolationEntry {
  std::string family;
  double pct_violation = 0.0;
  double max_violation = 0.0;
};

struct ViolationReport {
  std::vector<ViolationEntry> entries;

  bool all_zero(double slack_pct = 0.0) const {
    for (const auto& e : entries)
      if (e.pct_violation > slack_pct || e.max_violation > slack_pct)
        return false;
    return true;
  }
  const ViolationEntry* family(const std::string& name) const {
    for (const auto& e : entries)
      if (e.family == name) return &e;
    return nullptr;
  }
};

struct IterationRecord {
  int iteration = 0;
  double ms_total = 0.0;
  double ms_gradient = 0.0;
  double loss = 0.0;
  Vector theta;  // flat snapshot after the update
  double stationarity = 0.0;
  bool degraded = false;
  ViolationReport violations;  // executed trajectory vs true bounds
};

struct RunLog {
  std::vector<IterationRecord> records;
  ViolationReport final_violations;  // aggregated over all iterations
  Trajectory final_trajectory;
  Vector theta_true;
  Vector theta_initial;
  nlohmann::json manifest;
  bool aborted = false;
  std::string abort_reason;
};

struct Demonstration {
  Trajectory xi_star;
  std::vector<Vector> measurements;  // y*_0 .. y*_T
};

/// Solve the barrier system at the true parameters with tightened barriers
/// (alpha/10, beta/10), check strict feasibility, synthesize the noisy
/// measurement stream.
Demonstration generate_demonstration(const RunConfig& config);

/// Execute the online loop: per iteration obtain the (cyclically indexed)
/// measurement, solve the augmented problem at the current estimate
/// (warm-started), run the sensitivity recursion, form the stage-loss
/// Jacobian and apply the EKF update.
RunLog run_online(const RunConfig& config);

/// Per-family violation percentages of a trajectory against the true
/// constraint bounds.
ViolationReport violation_metrics(const Trajectory& traj,
                                  const SystemModel& model,
                                  const ParamVector& theta_true);

/// Write manifest.json, iterations.csv, violations.csv,
/// trajectory_final.csv and plotdata_loss.csv into `dir`.
void export_run(const RunLog& log, const std::string& dir);

/// Built-in oracle suites (gradient, EKF, barrier); prints one line per
/// check, returns false if any fails.
bool run_validation(std::ostream& out);

/// Initial estimate: theta* element-wise scaled by (1 + delta) with one
/// seeded-sign delta per partition; the constraint partition is always
/// perturbed downward so bound estimates start conservative.
ParamVector perturb_initial_guess(const ParamVector& theta_true,
                                  double magnitude, std::uint64_t seed);

}  // namespace socil
