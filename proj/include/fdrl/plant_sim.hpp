#pragma once

#include "fdrl/lti.hpp"

#include <cstdint>
#include <vector>

namespace fdrl {

struct SimulatorConfig {
  double base_step = 0.0005;
  PlantParams params;
  double episode_length = 12.6;        // seconds
  StateVec initial_state = StateVec::Zero();
};

/// Open simulation state: true plant state plus the delay lines, both at
/// base-step resolution. Ring heads point at the oldest element.
struct SimulatorState {
  StateVec x = StateVec::Zero();
  std::vector<double> input_buffer;      // commands in flight, length tau_i/base_step
  std::vector<StateVec> output_buffer;   // past states, length tau_o/base_step
  std::size_t in_head = 0;
  std::size_t out_head = 0;
  std::int64_t step_count = 0;

  double clock(double base_step) const { return static_cast<double>(step_count) * base_step; }
};

/// Fixed-step ground-truth simulator of the saturated, delayed plant.
/// Each base step is an exact ZOH advance, so the simulator is exact for
/// piecewise-constant inputs aligned to the base step.
class Simulator {
 public:
  explicit Simulator(const SimulatorConfig& config);

  void reset();

  /// Saturates the command, holds it for the given duration, advances the
  /// plant one base step at a time. Returns the measurement x(t - tau_o)
  /// at the end of the hold.
  StateVec step(double commanded_input, double hold_duration);

  StateVec measured_output() const;
  const SimulatorState& state() const { return state_; }
  SimulatorState& mutable_state() { return state_; }
  const SimulatorConfig& config() const { return config_; }
  double clock() const { return state_.clock(config_.base_step); }
  double last_applied() const { return last_applied_; }

  /// Number of base steps in a duration; throws if not a positive multiple.
  std::int64_t substeps(double duration) const;

 private:
  double advance_base_step(double saturated_command);

  SimulatorConfig config_;
  Eigen::Matrix3d phi_base_;
  Eigen::Vector3d gamma_base_;
  SimulatorState state_;
  double last_applied_ = 0;
};

struct TimedSample {
  double time;
  StateVec measured;
  double applied;
};

/// Runs (input, duration) segments from reset and samples at every base step,
/// starting with the initial sample at t = 0.
std::vector<TimedSample> run_open_loop(const SimulatorConfig& config,
                                       const std::vector<std::pair<double, double>>& schedule);

}  // namespace fdrl
