#pragma once

#include "fdrl/trajectory.hpp"

namespace fdrl {

/// Step-response statistics of one closed-loop episode. Settle-window fields
/// are taken over the final `settle_window` seconds; whole-run fields cover
/// the full record. Unreachable values (rise never completed, fewer than two
/// error zero crossings) are +infinity.
struct StepMetrics {
  double rise_time;                // 10% -> 90% of the reference, interpolated
  double overshoot;                // peak excess over the reference, as a fraction of it
  double settle_rms_pos;           // rms of z - z_ref over the settle window
  double settle_rms_vel;           // rms of z_dot over the settle window
  double settle_amplitude;         // half the peak-to-peak of z over the settle window
  double dominant_period;          // twice the mean error zero-crossing spacing, settle window
  double action_sign_change_rate;  // strict sign flips of u per second, whole run
  double saturation_duty;          // fraction of samples with |u| >= 99% of u_max, whole run
  double settle_saturation_duty;   // same, settle window only
};

/// Computes the statistics above from a uniformly- or non-uniformly-sampled
/// trajectory. Pure function of the samples; invariant to shifting the time
/// origin. Throws std::invalid_argument on fewer than two samples, a zero
/// reference, a non-positive input limit, or a settle window that is not a
/// proper sub-interval of the record.
StepMetrics compute_metrics(const Trajectory& traj, double z_ref, double u_max,
                            double settle_window = 4.0);

}  // namespace fdrl
