#include "fdrl/metrics.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

namespace fdrl {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// first time the normalized response reaches `level`, linearly interpolated;
// scanning starts at sample index `from`
double crossing_time(const Trajectory& traj, double z_ref, double level, size_t from,
                     size_t* hit_index) {
  for (size_t i = from; i < traj.size(); ++i) {
    const double y = traj[i].z / z_ref;
    if (y >= level) {
      if (hit_index) *hit_index = i;
      if (i == 0 || i == from) return traj[i].time;
      const double y_prev = traj[i - 1].z / z_ref;
      const double frac = (level - y_prev) / (y - y_prev);
      return traj[i - 1].time + frac * (traj[i].time - traj[i - 1].time);
    }
  }
  if (hit_index) *hit_index = traj.size();
  return kInf;
}

}  // namespace

StepMetrics compute_metrics(const Trajectory& traj, double z_ref, double u_max,
                            double settle_window) {
  if (traj.size() < 2) throw std::invalid_argument("compute_metrics: need at least two samples");
  if (z_ref == 0.0) throw std::invalid_argument("compute_metrics: z_ref must be nonzero");
  if (u_max <= 0.0) throw std::invalid_argument("compute_metrics: u_max must be positive");
  const double t0 = traj.front().time;
  const double duration = traj.back().time - t0;
  if (!(settle_window > 0.0) || settle_window > duration)
    throw std::invalid_argument("compute_metrics: settle window must lie within the record");

  StepMetrics m{};

  size_t hit10 = 0;
  const double t10 = crossing_time(traj, z_ref, 0.1, 0, &hit10);
  const double t90 =
      std::isinf(t10) ? kInf : crossing_time(traj, z_ref, 0.9, hit10, nullptr);
  m.rise_time = std::isinf(t90) ? kInf : t90 - t10;

  double peak = -kInf;
  for (const auto& p : traj) peak = std::max(peak, p.z / z_ref);
  m.overshoot = std::max(0.0, peak - 1.0);

  const double settle_start = traj.back().time - settle_window;
  size_t first_settle = traj.size();
  for (size_t i = 0; i < traj.size(); ++i)
    if (traj[i].time >= settle_start - 1e-12) {
      first_settle = i;
      break;
    }

  double sum_e2 = 0, sum_v2 = 0;
  double z_min = kInf, z_max = -kInf;
  size_t n_settle = 0, saturated_settle = 0;
  std::vector<double> crossings;
  double prev_err = 0;
  const double sat_level = 0.99 * u_max;
  for (size_t i = first_settle; i < traj.size(); ++i) {
    const auto& p = traj[i];
    const double err = p.z - z_ref;
    sum_e2 += err * err;
    sum_v2 += p.z_dot * p.z_dot;
    z_min = std::min(z_min, p.z);
    z_max = std::max(z_max, p.z);
    if (std::abs(p.u) >= sat_level) ++saturated_settle;
    if (i > first_settle && prev_err * err < 0) {
      const double frac = prev_err / (prev_err - err);
      crossings.push_back(traj[i - 1].time + frac * (p.time - traj[i - 1].time));
    }
    prev_err = err;
    ++n_settle;
  }
  m.settle_rms_pos = std::sqrt(sum_e2 / static_cast<double>(n_settle));
  m.settle_rms_vel = std::sqrt(sum_v2 / static_cast<double>(n_settle));
  m.settle_amplitude = (z_max - z_min) / 2.0;
  m.settle_saturation_duty =
      static_cast<double>(saturated_settle) / static_cast<double>(n_settle);
  if (crossings.size() >= 2)
    m.dominant_period =
        2.0 * (crossings.back() - crossings.front()) / static_cast<double>(crossings.size() - 1);
  else
    m.dominant_period = kInf;

  size_t flips = 0, saturated = 0;
  for (size_t i = 0; i < traj.size(); ++i) {
    if (std::abs(traj[i].u) >= sat_level) ++saturated;
    if (i > 0 && traj[i - 1].u * traj[i].u < 0) ++flips;
  }
  m.action_sign_change_rate = static_cast<double>(flips) / duration;
  m.saturation_duty = static_cast<double>(saturated) / static_cast<double>(traj.size());

  return m;
}

}  // namespace fdrl
