#include "fdrl/plant_sim.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace fdrl {
namespace {

// delays must sit exactly on the base-step grid for the ring buffers
std::size_t aligned_steps(double duration, double base_step, const char* what) {
  const double ratio = duration / base_step;
  const double rounded = std::round(ratio);
  if (std::abs(duration - rounded * base_step) > 1e-12)
    throw std::invalid_argument(std::string(what) + " (" + std::to_string(duration) +
                                " s) is not a multiple of the base step");
  return static_cast<std::size_t>(rounded);
}

}  // namespace

Simulator::Simulator(const SimulatorConfig& config) : config_(config) {
  if (!(config.base_step > 0)) throw std::invalid_argument("simulator: base_step must be > 0");
  if (!(config.episode_length > 0))
    throw std::invalid_argument("simulator: episode_length must be > 0");
  validate(config.params);
  const ContinuousSystem sys = build_continuous(config.params);
  phi_base_ = phi(sys, config.base_step);
  gamma_base_ = gamma(sys, config.base_step);
  reset();
}

void Simulator::reset() {
  const std::size_t in_len =
      aligned_steps(config_.params.tau_i, config_.base_step, "input delay");
  const std::size_t out_len =
      aligned_steps(config_.params.tau_o, config_.base_step, "output delay");
  state_.x = config_.initial_state;
  state_.input_buffer.assign(in_len, 0.0);
  state_.output_buffer.assign(out_len, StateVec::Zero());
  state_.in_head = state_.out_head = 0;
  state_.step_count = 0;
  last_applied_ = 0;
}

std::int64_t Simulator::substeps(double duration) const {
  if (!(duration > 0)) throw std::invalid_argument("hold duration must be > 0");
  const std::size_t n = aligned_steps(duration, config_.base_step, "hold duration");
  if (n == 0) throw std::invalid_argument("hold duration must be > 0");
  return static_cast<std::int64_t>(n);
}

double Simulator::advance_base_step(double saturated_command) {
  double applied = saturated_command;
  if (!state_.input_buffer.empty()) {
    applied = state_.input_buffer[state_.in_head];
    state_.input_buffer[state_.in_head] = saturated_command;
    state_.in_head = (state_.in_head + 1) % state_.input_buffer.size();
  }
  if (!state_.output_buffer.empty()) {
    state_.output_buffer[state_.out_head] = state_.x;
    state_.out_head = (state_.out_head + 1) % state_.output_buffer.size();
  }
  state_.x = phi_base_ * state_.x + gamma_base_ * applied;
  ++state_.step_count;
  return applied;
}

StateVec Simulator::step(double commanded_input, double hold_duration) {
  const std::int64_t n = substeps(hold_duration);
  const double u_max = config_.params.u_max;
  const double saturated = std::clamp(commanded_input, -u_max, u_max);
  for (std::int64_t i = 0; i < n; ++i) last_applied_ = advance_base_step(saturated);
  return measured_output();
}

StateVec Simulator::measured_output() const {
  return state_.output_buffer.empty() ? state_.x : state_.output_buffer[state_.out_head];
}

std::vector<TimedSample> run_open_loop(const SimulatorConfig& config,
                                       const std::vector<std::pair<double, double>>& schedule) {
  Simulator sim(config);
  std::vector<TimedSample> out;
  std::int64_t total = 0;
  for (const auto& [value, duration] : schedule) {
    (void)value;
    total += sim.substeps(duration);
  }
  out.reserve(static_cast<std::size_t>(total) + 1);
  out.push_back({0.0, sim.measured_output(), 0.0});
  for (const auto& [value, duration] : schedule) {
    const std::int64_t n = sim.substeps(duration);
    for (std::int64_t i = 0; i < n; ++i) {
      sim.step(value, config.base_step);
      out.push_back({sim.clock(), sim.measured_output(), sim.last_applied()});
    }
  }
  return out;
}

}  // namespace fdrl
