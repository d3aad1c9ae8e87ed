#pragma once

#include "fdrl/plant_sim.hpp"
#include "fdrl/trajectory.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <utility>

namespace fdrl {

enum class CaseId { case_i, case_ii, case_iii, case_iv };

const char* to_string(CaseId c);
CaseId parse_case(const std::string& name);  // accepts "i".."iv" and "case_i".."case_iv"

/// Which plant the agent is run against: its training plant, the delay-free
/// plant, or the delayed plant (for Case I this re-introduces the delay the
/// agent never saw, as output delay).
enum class PlantVariant { training, delay_free, delayed };

const char* to_string(PlantVariant v);
PlantVariant parse_plant_variant(const std::string& name);

struct EnvConfig {
  CaseId case_id = CaseId::case_i;
  PlantParams params;            // tau_i + tau_o is the total delay budget;
                                 // its placement is decided by the case
  PlantVariant variant = PlantVariant::training;
  double z_ref = 1.0;
  double episode_length = 12.6;
  std::uint64_t seed = 0;
  bool error_coordinates = false;  // observe z - z_ref instead of raw z
};

/// r = -c ||[z - z_ref, alpha*z_dot]||_2 with c = 100, alpha = 0.1,
/// evaluated on the true plant state.
double reward_fn(const StateVec& x, double z_ref);

/// Delay placement for a case: the total budget goes to the output channel
/// for Cases II/III (and delayed evaluation of Case I), to the input channel
/// for Case IV, and vanishes for Case I training / delay-free evaluation.
std::pair<double, double> case_delays(CaseId c, double total_delay);

/// Episodic wrapper over the ground-truth simulator exposing one of the four
/// observation regimes. Rewards always come from the true state; what the
/// agent sees is the per-case (possibly delayed, possibly input-extended)
/// measurement.
class Environment {
 public:
  explicit Environment(const EnvConfig& config);

  struct StepResult {
    Eigen::VectorXd observation;
    double reward;
    bool done;
  };

  Eigen::VectorXd reset();
  StepResult step(double action);
  /// Same transition, but appends every base-resolution sample (true state,
  /// applied input, instantaneous reward) to the trajectory.
  StepResult step_traced(double action, Trajectory& sink);

  int observation_width() const { return obs_width_; }
  double agent_period() const { return h_; }
  int steps_per_episode() const { return steps_per_episode_; }
  double u_max() const { return config_.params.u_max; }
  double z_ref() const { return config_.z_ref; }
  double u_prev() const { return u_prev_; }
  int step_index() const { return step_index_; }
  const EnvConfig& config() const { return config_; }
  const Simulator& simulator() const { return sim_; }
  /// Parameters actually given to the plant (delays placed per case/variant).
  const PlantParams& effective_params() const { return sim_.config().params; }

 private:
  Eigen::VectorXd observe() const;

  EnvConfig config_;
  Simulator sim_;
  double h_;
  int steps_per_episode_;
  int obs_width_;
  int step_index_ = 0;
  double u_prev_ = 0;
};

inline Environment make_env(const EnvConfig& config) { return Environment(config); }

}  // namespace fdrl
