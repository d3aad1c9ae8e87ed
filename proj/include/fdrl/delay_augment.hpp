#pragma once

#include "fdrl/lti.hpp"

#include <stdexcept>
#include <string>
#include <vector>

namespace fdrl {

enum class BlockKind { plant_state, delayed_output_snapshot, output_history, input_history };

inline const char* to_string(BlockKind k) {
  switch (k) {
    case BlockKind::plant_state: return "plant_state";
    case BlockKind::delayed_output_snapshot: return "delayed_output_snapshot";
    case BlockKind::output_history: return "output_history";
    case BlockKind::input_history: return "input_history";
  }
  return "?";
}

struct Block {
  BlockKind kind;
  int width;
  int offset;  // first scalar index within the extended state
};

struct BlockLayout {
  std::vector<Block> blocks;

  int total_width() const {
    return blocks.empty() ? 0 : blocks.back().offset + blocks.back().width;
  }
  int count(BlockKind kind) const {
    int n = 0;
    for (const auto& b : blocks) n += (b.kind == kind);
    return n;
  }
  // index of the first scalar of the block holding the measured output:
  // the oldest delayed-output snapshot when one exists, the plant state otherwise
  int measured_offset() const {
    int off = 0;
    for (const auto& b : blocks)
      if (b.kind == BlockKind::delayed_output_snapshot || b.kind == BlockKind::output_history)
        off = b.offset;
    return off;
  }
  int input_slot_offset() const {
    for (const auto& b : blocks)
      if (b.kind == BlockKind::input_history) return b.offset;
    return -1;
  }
  int input_slot_count() const { return count(BlockKind::input_history); }
};

/// Exact one-step recursion x_e(kh+h) = a_e x_e + b_e u(kh), y = c_e x_e for
/// the plant with input/output delays decomposed against step h. c_e stacks
/// the measured (delayed) plant output with the stored past inputs.
template <typename Scalar>
struct DiscreteAugmentedSystemT {
  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> a_e;
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> b_e;
  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> c_e;
  Scalar h;
  BlockLayout layout;
  Scalar tau_i, tau_o;
};
using DiscreteAugmentedSystem = DiscreteAugmentedSystemT<double>;

template <typename Scalar>
DiscreteAugmentedSystemT<Scalar> build_delay_free(const PlantParamsT<Scalar>& params, Scalar h) {
  if (!(h > Scalar(0))) throw std::invalid_argument("build_delay_free: h must be > 0");
  validate(params);
  const ContinuousSystemT<Scalar> sys = build_continuous(params);
  DiscreteAugmentedSystemT<Scalar> out;
  out.a_e = phi(sys, h);
  out.b_e = gamma(sys, h);
  out.c_e = Eigen::Matrix<Scalar, 3, 3>::Identity();
  out.h = h;
  out.layout.blocks = {{BlockKind::plant_state, 3, 0}};
  out.tau_i = out.tau_o = Scalar(0);
  return out;
}

// The step interval [kh, kh+h] is segmented at the instant the plant-side
// input switches from the oldest stored command to the next one (elapsed
// tau_i' from the sample instant). Each block row integrates the same
// schedule over its own horizon: h for the plant state, h - tau_o' for the
// delayed-output snapshot. The snapshot row sees the switch only when
// tau_i' < h - tau_o', which generalizes both printed orderings.
template <typename Scalar>
DiscreteAugmentedSystemT<Scalar> build_augmented(const PlantParamsT<Scalar>& params, Scalar h) {
  using Mat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  using Vec = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

  if (!(h > Scalar(0))) throw std::invalid_argument("build_augmented: h must be > 0");
  validate(params);
  if (params.tau_i == Scalar(0) && params.tau_o == Scalar(0))
    throw std::invalid_argument("build_augmented: both delays are zero; use build_delay_free");

  const ContinuousSystemT<Scalar> sys = build_continuous(params);
  const DelayDecomposition dec_i = decompose_delay(double(params.tau_i), double(h));
  const DelayDecomposition dec_o = decompose_delay(double(params.tau_o), double(h));
  const bool has_tau_i = !dec_i.delay_free();
  const bool has_tau_o = !dec_o.delay_free();
  const int d_i = has_tau_i ? dec_i.d : 0;
  const int d_o = has_tau_o ? dec_o.d : 0;
  // with no input delay a single stored command is still kept so the
  // reduced observation [y_s, u(kh-h)] exists
  const int n_hist = has_tau_i ? d_i : 1;

  BlockLayout layout;
  int off = 0;
  auto add = [&](BlockKind kind, int width) {
    layout.blocks.push_back({kind, width, off});
    off += width;
  };
  add(BlockKind::plant_state, 3);
  if (has_tau_o) {
    add(BlockKind::delayed_output_snapshot, 3);
    for (int j = 1; j < d_o; ++j) add(BlockKind::output_history, 3);
  }
  for (int m = 0; m < n_hist; ++m) add(BlockKind::input_history, 1);

  const int n = layout.total_width();
  const int in_off = layout.input_slot_offset();

  DiscreteAugmentedSystemT<Scalar> out;
  out.a_e = Mat::Zero(n, n);
  out.b_e = Vec::Zero(n);
  out.c_e = Mat::Zero(3 + n_hist, n);
  out.h = h;
  out.layout = layout;
  out.tau_i = params.tau_i;
  out.tau_o = params.tau_o;

  const Scalar ti = Scalar(dec_i.tau_frac);  // 0 when no input delay

  // scatters the coefficient of the input that becomes active at elapsed
  // tau_i': it is the second stored command when d_i >= 2, else u(kh) itself
  auto put_new_input_coeff = [&](int row, const Eigen::Matrix<Scalar, 3, 1>& coeff) {
    if (has_tau_i && d_i >= 2)
      out.a_e.template block<3, 1>(row, in_off + 1) = coeff;
    else
      out.b_e.template segment<3>(row) = coeff;
  };

  // plant-state rows: full horizon h, input switch at tau_i'
  out.a_e.template block<3, 3>(0, 0) = phi(sys, h);
  if (has_tau_i) {
    out.a_e.template block<3, 1>(0, in_off) = phi(sys, h - ti) * gamma(sys, ti);
    put_new_input_coeff(0, gamma(sys, h - ti));
  } else {
    out.b_e.template segment<3>(0) = gamma(sys, h);
  }

  if (has_tau_o) {
    // snapshot rows: y_s(kh+h) = x(kh + h - tau_o'), truncated horizon
    const Scalar horizon = h - Scalar(dec_o.tau_frac);
    out.a_e.template block<3, 3>(3, 0) = phi(sys, horizon);
    if (!has_tau_i) {
      out.b_e.template segment<3>(3) = gamma(sys, horizon);
    } else if (ti < horizon) {
      out.a_e.template block<3, 1>(3, in_off) = phi(sys, horizon - ti) * gamma(sys, ti);
      put_new_input_coeff(3, gamma(sys, horizon - ti));
    } else {
      out.a_e.template block<3, 1>(3, in_off) = gamma(sys, horizon);
    }
    // snapshot ages one slot per step
    for (int j = 1; j < d_o; ++j)
      out.a_e.template block<3, 3>(3 + 3 * j, 3 + 3 * (j - 1)) =
          Eigen::Matrix<Scalar, 3, 3>::Identity();
  }

  for (int m = 0; m + 1 < n_hist; ++m) out.a_e(in_off + m, in_off + m + 1) = Scalar(1);
  out.b_e(in_off + n_hist - 1) = Scalar(1);

  const int meas = layout.measured_offset();
  out.c_e.template block<3, 3>(0, meas) = Eigen::Matrix<Scalar, 3, 3>::Identity();
  for (int m = 0; m < n_hist; ++m) out.c_e(3 + m, in_off + m) = Scalar(1);

  return out;
}

enum class ObservationMode { full_y, reduced };

/// Extended-state indices the agent observes: the measured output block
/// (full_y), optionally followed by the most recent stored input (reduced).
template <typename Scalar>
std::vector<int> observation_selector(const DiscreteAugmentedSystemT<Scalar>& sys,
                                      ObservationMode mode) {
  const int meas = sys.layout.measured_offset();
  std::vector<int> idx = {meas, meas + 1, meas + 2};
  if (mode == ObservationMode::reduced) {
    const int slots = sys.layout.input_slot_count();
    if (slots == 0)
      throw std::invalid_argument("observation_selector: no stored input on a delay-free system");
    idx.push_back(sys.layout.input_slot_offset() + slots - 1);
  }
  return idx;
}

}  // namespace fdrl
