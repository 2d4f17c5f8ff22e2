#pragma once

#include <nlohmann/json.hpp>

#include "socil/systems.hpp"
#include "socil/trajopt.hpp"

namespace socil {

inline constexpr const char* kVersion = "0.1.0";

enum class RunMode { safe_ocil, ocil_baseline };

/**
 * Full description of one online run. Every invented default (physical
 * parameters, initialization, solver settings) lives here and is echoed
 * into the run manifest, which suffices to reproduce the run bit-exactly
 * (timings excluded).
 */
struct RunConfig {
  std::string system = "cartpole";  // cartpole | arm | lqr-toy
  RunMode mode = RunMode::safe_ocil;
  // Barrier weights; unset values resolve to the per-system defaults
  // (cartpole 0.3/0.075, arm 0.08/0.02, toy 0.3/0.075), with beta = alpha/4
  // when only alpha is given.
  std::optional<double> alpha;
  std::optional<double> beta;
  double sigma = 0.3;
  std::uint64_t seed = 1;
  int iterations = 108;
  double initial_covariance = 1.0;  // P_0 = p0 * I
  double perturbation = 0.2;        // relative initial-guess offset
  bool skip_degraded_updates = false;
  double barrier_decay = 1.0;       // per-iteration alpha,beta *= decay
  SolverSettings solver;
  std::string out_dir;

  CartpoleSpec cartpole;
  TwoLinkArmSpec arm;
  LqrToySpec lqr_toy;

  SystemModel build_system() const;
  double resolved_alpha() const;
  double resolved_beta() const;
  int demo_max_iterations() const {
    return std::max(solver.max_iterations, 600);
  }
  void validate() const;
};

std::string to_string(RunMode mode);
RunMode run_mode_from_string(const std::string& s);

void to_json(nlohmann::json& j, const SolverSettings& s);
void from_json(const nlohmann::json& j, SolverSettings& s);
void to_json(nlohmann::json& j, const CartpoleSpec& s);
void from_json(const nlohmann::json& j, CartpoleSpec& s);
void to_json(nlohmann::json& j, const TwoLinkArmSpec& s);
void from_json(const nlohmann::json& j, TwoLinkArmSpec& s);
void to_json(nlohmann::json& j, const LqrToySpec& s);
void from_json(const nlohmann::json& j, LqrToySpec& s);
void to_json(nlohmann::json& j, const RunConfig& c);
void from_json(const nlohmann::json& j, RunConfig& c);

}  // namespace socil
