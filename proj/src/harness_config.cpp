#include "socil/harness_config.hpp"

namespace socil {

namespace {

Vector vector_from_json(const nlohmann::json& j) {
  Vector v(j.size());
  for (std::size_t i = 0; i < j.size(); ++i)
    v(static_cast<Eigen::Index>(i)) = j[i].get<double>();
  return v;
}

nlohmann::json vector_to_json(const Vector& v) {
  nlohmann::json j = nlohmann::json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) j.push_back(v(i));
  return j;
}

template <class T>
void maybe_get(const nlohmann::json& j, const char* key, T& out) {
  if (j.contains(key)) out = j.at(key).get<T>();
}

void maybe_get_vector(const nlohmann::json& j, const char* key, Vector& out) {
  if (j.contains(key)) out = vector_from_json(j.at(key));
}

}  // namespace

std::string to_string(RunMode mode) {
  return mode == RunMode::safe_ocil ? "safe_ocil" : "ocil_baseline";
}

RunMode run_mode_from_string(const std::string& s) {
  if (s == "safe_ocil" || s == "safe") return RunMode::safe_ocil;
  if (s == "ocil_baseline" || s == "baseline") return RunMode::ocil_baseline;
  throw ConfigError("unknown run mode: " + s);
}

SystemModel RunConfig::build_system() const {
  if (system == "cartpole") return build_problem(cartpole);
  if (system == "arm") return build_problem(arm);
  if (system == "lqr-toy") return build_problem(lqr_toy);
  throw ConfigError("unknown system: " + system);
}

double RunConfig::resolved_alpha() const {
  if (alpha) return *alpha;
  return system == "arm" ? 0.08 : 0.3;
}

double RunConfig::resolved_beta() const {
  if (beta) return *beta;
  if (alpha) return *alpha / 4.0;  // default sweep tie beta = alpha/4
  return system == "arm" ? 0.02 : 0.075;
}

void RunConfig::validate() const {
  if (iterations < 1) throw ConfigError("iterations must be >= 1");
  if (!(sigma >= 0.0)) throw ConfigError("sigma must be >= 0");
  if (!(initial_covariance > 0.0)) throw ConfigError("p0 must be positive");
  if (!(barrier_decay > 0.0 && barrier_decay <= 1.0))
    throw ConfigError("barrier_decay must be in (0, 1]");
  if (!(resolved_alpha() > 0.0 && resolved_beta() > 0.0))
    throw ConfigError("alpha and beta must be positive");
  run_mode_from_string(to_string(mode));
  solver.validate();
  build_system();  // validates the selected spec
}

void to_json(nlohmann::json& j, const SolverSettings& s) {
  j = nlohmann::json{{"max_iterations", s.max_iterations},
                     {"cost_tolerance", s.cost_tolerance},
                     {"gradient_tolerance", s.gradient_tolerance},
                     {"initial_regularization", s.initial_regularization},
                     {"regularization_growth", s.regularization_growth},
                     {"regularization_shrink", s.regularization_shrink},
                     {"line_search_shrink", s.line_search_shrink},
                     {"min_line_search_step", s.min_line_search_step}};
}

void from_json(const nlohmann::json& j, SolverSettings& s) {
  maybe_get(j, "max_iterations", s.max_iterations);
  maybe_get(j, "cost_tolerance", s.cost_tolerance);
  maybe_get(j, "gradient_tolerance", s.gradient_tolerance);
  maybe_get(j, "initial_regularization", s.initial_regularization);
  maybe_get(j, "regularization_growth", s.regularization_growth);
  maybe_get(j, "regularization_shrink", s.regularization_shrink);
  maybe_get(j, "line_search_shrink", s.line_search_shrink);
  maybe_get(j, "min_line_search_step", s.min_line_search_step);
}

void to_json(nlohmann::json& j, const CartpoleSpec& s) {
  j = nlohmann::json{{"cart_mass", s.cart_mass},
                     {"pole_mass", s.pole_mass},
                     {"pole_length", s.pole_length},
                     {"gravity", s.gravity},
                     {"p_max", s.p_max},
                     {"u_max", s.u_max},
                     {"x_start", vector_to_json(s.x_start)},
                     {"x_goal", vector_to_json(s.x_goal)},
                     {"obj_weights", vector_to_json(s.obj_weights)},
                     {"input_cost_weight", s.input_cost_weight},
                     {"dt", s.dt},
                     {"horizon", s.horizon}};
}

void from_json(const nlohmann::json& j, CartpoleSpec& s) {
  maybe_get(j, "cart_mass", s.cart_mass);
  maybe_get(j, "pole_mass", s.pole_mass);
  maybe_get(j, "pole_length", s.pole_length);
  maybe_get(j, "gravity", s.gravity);
  maybe_get(j, "p_max", s.p_max);
  maybe_get(j, "u_max", s.u_max);
  maybe_get_vector(j, "x_start", s.x_start);
  maybe_get_vector(j, "x_goal", s.x_goal);
  maybe_get_vector(j, "obj_weights", s.obj_weights);
  maybe_get(j, "input_cost_weight", s.input_cost_weight);
  maybe_get(j, "dt", s.dt);
  maybe_get(j, "horizon", s.horizon);
}

void to_json(nlohmann::json& j, const TwoLinkArmSpec& s) {
  j = nlohmann::json{{"m1", s.m1},
                     {"m2", s.m2},
                     {"l1", s.l1},
                     {"l2", s.l2},
                     {"gravity", s.gravity},
                     {"u_max", s.u_max},
                     {"q_max", s.q_max},
                     {"x_start", vector_to_json(s.x_start)},
                     {"x_goal", vector_to_json(s.x_goal)},
                     {"obj_weights", vector_to_json(s.obj_weights)},
                     {"input_cost_weight", s.input_cost_weight},
                     {"dt", s.dt},
                     {"horizon", s.horizon}};
}

void from_json(const nlohmann::json& j, TwoLinkArmSpec& s) {
  maybe_get(j, "m1", s.m1);
  maybe_get(j, "m2", s.m2);
  maybe_get(j, "l1", s.l1);
  maybe_get(j, "l2", s.l2);
  maybe_get(j, "gravity", s.gravity);
  maybe_get(j, "u_max", s.u_max);
  maybe_get(j, "q_max", s.q_max);
  maybe_get_vector(j, "x_start", s.x_start);
  maybe_get_vector(j, "x_goal", s.x_goal);
  maybe_get_vector(j, "obj_weights", s.obj_weights);
  maybe_get(j, "input_cost_weight", s.input_cost_weight);
  maybe_get(j, "dt", s.dt);
  maybe_get(j, "horizon", s.horizon);
}

void to_json(nlohmann::json& j, const LqrToySpec& s) {
  j = nlohmann::json{{"theta", s.theta},
                     {"x0", s.x0},
                     {"horizon", s.horizon}};
  if (s.input_bound) j["input_bound"] = *s.input_bound;
}

void from_json(const nlohmann::json& j, LqrToySpec& s) {
  maybe_get(j, "theta", s.theta);
  maybe_get(j, "x0", s.x0);
  maybe_get(j, "horizon", s.horizon);
  if (j.contains("input_bound") && !j.at("input_bound").is_null())
    s.input_bound = j.at("input_bound").get<double>();
}

void to_json(nlohmann::json& j, const RunConfig& c) {
  j = nlohmann::json{{"system", c.system},
                     {"mode", to_string(c.mode)},
                     {"alpha", c.resolved_alpha()},
                     {"beta", c.resolved_beta()},
                     {"sigma", c.sigma},
                     {"seed", c.seed},
                     {"iterations", c.iterations},
                     {"initial_covariance", c.initial_covariance},
                     {"perturbation", c.perturbation},
                     {"skip_degraded_updates", c.skip_degraded_updates},
                     {"barrier_decay", c.barrier_decay},
                     {"solver", c.solver},
                     {"out_dir", c.out_dir},
                     {"cartpole", c.cartpole},
                     {"arm", c.arm},
                     {"lqr_toy", c.lqr_toy}};
}

void from_json(const nlohmann::json& j, RunConfig& c) {
  maybe_get(j, "system", c.system);
  if (j.contains("mode")) c.mode = run_mode_from_string(j.at("mode"));
  if (j.contains("alpha") && !j.at("alpha").is_null())
    c.alpha = j.at("alpha").get<double>();
  if (j.contains("beta") && !j.at("beta").is_null())
    c.beta = j.at("beta").get<double>();
  maybe_get(j, "sigma", c.sigma);
  maybe_get(j, "seed", c.seed);
  maybe_get(j, "iterations", c.iterations);
  maybe_get(j, "initial_covariance", c.initial_covariance);
  maybe_get(j, "perturbation", c.perturbation);
  maybe_get(j, "skip_degraded_updates", c.skip_degraded_updates);
  maybe_get(j, "barrier_decay", c.barrier_decay);
  if (j.contains("solver")) from_json(j.at("solver"), c.solver);
  maybe_get(j, "out_dir", c.out_dir);
  if (j.contains("cartpole")) from_json(j.at("cartpole"), c.cartpole);
  if (j.contains("arm")) from_json(j.at("arm"), c.arm);
  if (j.contains("lqr_toy")) from_json(j.at("lqr_toy"), c.lqr_toy);
}

}  // namespace socil
