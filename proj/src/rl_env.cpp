#include "fdrl/rl_env.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace fdrl {

const char* to_string(CaseId c) {
  switch (c) {
    case CaseId::case_i: return "case_i";
    case CaseId::case_ii: return "case_ii";
    case CaseId::case_iii: return "case_iii";
    case CaseId::case_iv: return "case_iv";
  }
  return "?";
}

CaseId parse_case(const std::string& name) {
  std::string s = name;
  for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  if (s.rfind("case_", 0) == 0) s = s.substr(5);
  if (s == "i" || s == "1") return CaseId::case_i;
  if (s == "ii" || s == "2") return CaseId::case_ii;
  if (s == "iii" || s == "3") return CaseId::case_iii;
  if (s == "iv" || s == "4") return CaseId::case_iv;
  throw std::invalid_argument("unknown case '" + name + "' (expected i, ii, iii or iv)");
}

const char* to_string(PlantVariant v) {
  switch (v) {
    case PlantVariant::training: return "training";
    case PlantVariant::delay_free: return "delay-free";
    case PlantVariant::delayed: return "delayed";
  }
  return "?";
}

PlantVariant parse_plant_variant(const std::string& name) {
  std::string s = name;
  for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  std::replace(s.begin(), s.end(), '_', '-');
  if (s == "training") return PlantVariant::training;
  if (s == "delay-free" || s == "delayfree") return PlantVariant::delay_free;
  if (s == "delayed") return PlantVariant::delayed;
  throw std::invalid_argument("unknown plant variant '" + name +
                              "' (expected training, delayed or delay-free)");
}

double reward_fn(const StateVec& x, double z_ref) {
  const double e_pos = x(0) - z_ref;
  const double e_vel = 0.1 * x(1);
  return -100.0 * std::sqrt(e_pos * e_pos + e_vel * e_vel);
}

std::pair<double, double> case_delays(CaseId c, double total_delay) {
  switch (c) {
    case CaseId::case_i: return {0.0, 0.0};
    case CaseId::case_ii:
    case CaseId::case_iii: return {0.0, total_delay};
    case CaseId::case_iv: return {total_delay, 0.0};
  }
  return {0.0, 0.0};
}

namespace {

SimulatorConfig simulator_config(const EnvConfig& cfg) {
  validate(cfg.params);
  const double total = cfg.params.tau_i + cfg.params.tau_o;

  std::pair<double, double> delays{0.0, 0.0};
  switch (cfg.variant) {
    case PlantVariant::delay_free: break;
    case PlantVariant::training: delays = case_delays(cfg.case_id, total); break;
    case PlantVariant::delayed:
      // Case I never trained with a delay; its delayed evaluation puts the
      // full budget on the measurement channel
      delays = cfg.case_id == CaseId::case_i ? std::pair{0.0, total}
                                             : case_delays(cfg.case_id, total);
      break;
  }

  SimulatorConfig sim;
  sim.params = cfg.params;
  sim.params.tau_i = delays.first;
  sim.params.tau_o = delays.second;
  sim.episode_length = cfg.episode_length;
  return sim;
}

double case_period(CaseId c) { return c == CaseId::case_i ? 0.005 : 0.06; }

int case_width(CaseId c) {
  return (c == CaseId::case_iii || c == CaseId::case_iv) ? 4 : 3;
}

}  // namespace

Environment::Environment(const EnvConfig& config)
    : config_(config),
      sim_(simulator_config(config)),
      h_(case_period(config.case_id)),
      obs_width_(case_width(config.case_id)) {
  if (!(config.episode_length > 0))
    throw std::invalid_argument("env: episode_length must be > 0");
  const double steps = config.episode_length / h_;
  steps_per_episode_ = static_cast<int>(std::round(steps));
  if (std::abs(steps - steps_per_episode_) > 1e-9 || steps_per_episode_ < 1)
    throw std::invalid_argument("env: episode_length must be a multiple of the agent period");

  // the augmentation the delay-aware cases rely on requires h > total delay
  if (config.case_id != CaseId::case_i && config.variant != PlantVariant::delay_free) {
    const auto& p = sim_.config().params;
    if (p.tau_i + p.tau_o >= h_)
      throw std::invalid_argument("env: sampling period must exceed the total delay");
  }
  reset();
}

Eigen::VectorXd Environment::observe() const {
  const StateVec y = sim_.measured_output();
  Eigen::VectorXd obs(obs_width_);
  obs.head<3>() = y;
  if (config_.error_coordinates) obs(0) -= config_.z_ref;
  if (obs_width_ == 4) obs(3) = u_prev_;
  return obs;
}

Eigen::VectorXd Environment::reset() {
  sim_.reset();
  step_index_ = 0;
  u_prev_ = 0;
  return observe();
}

Environment::StepResult Environment::step(double action) {
  if (!std::isfinite(action)) throw std::invalid_argument("env: action must be finite");
  if (step_index_ >= steps_per_episode_) throw std::logic_error("env: episode already finished");
  sim_.step(action, h_);
  u_prev_ = std::clamp(action, -config_.params.u_max, config_.params.u_max);
  ++step_index_;
  return {observe(), reward_fn(sim_.state().x, config_.z_ref),
          step_index_ >= steps_per_episode_};
}

Environment::StepResult Environment::step_traced(double action, Trajectory& sink) {
  if (!std::isfinite(action)) throw std::invalid_argument("env: action must be finite");
  if (step_index_ >= steps_per_episode_) throw std::logic_error("env: episode already finished");
  const auto n = sim_.substeps(h_);
  for (std::int64_t i = 0; i < n; ++i) {
    sim_.step(action, sim_.config().base_step);
    const StateVec& x = sim_.state().x;
    sink.push_back({sim_.clock(), x(0), x(1), x(2), sim_.last_applied(),
                    reward_fn(x, config_.z_ref)});
  }
  u_prev_ = std::clamp(action, -config_.params.u_max, config_.params.u_max);
  ++step_index_;
  return {observe(), reward_fn(sim_.state().x, config_.z_ref),
          step_index_ >= steps_per_episode_};
}

}  // namespace fdrl
