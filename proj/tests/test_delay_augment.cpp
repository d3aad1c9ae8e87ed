#include "fdrl/delay_augment.hpp"

#include <random>

#include "doctest.h"
#include "oracles.hpp"

using fdrl::BlockKind;
using fdrl::DiscreteAugmentedSystem;
using fdrl::ObservationMode;
using fdrl::PlantParams;

namespace {

PlantParams bench(double tau_i, double tau_o) {
  return {.t_p = 0.049, .t_q = 0.563, .k_z = 0.84, .tau_i = tau_i, .tau_o = tau_o, .u_max = 6.57};
}

// rolls the augmented recursion from quiescence and compares every
// measurement against the exact continuous-time response
double max_deviation_vs_oracle(const PlantParams& p, double h, int steps, std::uint64_t seed) {
  const DiscreteAugmentedSystem sys = fdrl::build_augmented(p, h);
  const fdrl::ContinuousSystem cont = fdrl::build_continuous(p);

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(-p.u_max, p.u_max);
  std::vector<double> u(steps);
  for (double& v : u) v = dist(rng);

  const auto want = oracles::delayed_measurements(cont.a, cont.b, h, p.tau_i, p.tau_o, u);

  Eigen::VectorXd xe = Eigen::VectorXd::Zero(sys.a_e.rows());
  double worst = 0;
  for (int k = 0; k <= steps; ++k) {
    const Eigen::Vector3d got = (sys.c_e * xe).head<3>();
    worst = std::max(worst, (got - want[k]).lpNorm<Eigen::Infinity>());
    if (k < steps) xe = sys.a_e * xe + sys.b_e * u[k];
  }
  return worst;
}

}  // namespace

TEST_SUITE_BEGIN("delay_augment");

TEST_CASE("coarse-sampling layout: output delay only") {
  const DiscreteAugmentedSystem sys = fdrl::build_augmented(bench(0.0, 0.05), 0.06);
  REQUIRE(sys.layout.blocks.size() == 3);
  CHECK(sys.layout.blocks[0].kind == BlockKind::plant_state);
  CHECK(sys.layout.blocks[1].kind == BlockKind::delayed_output_snapshot);
  CHECK(sys.layout.blocks[2].kind == BlockKind::input_history);
  CHECK(sys.layout.blocks[0].width == 3);
  CHECK(sys.layout.blocks[1].width == 3);
  CHECK(sys.layout.blocks[2].width == 1);
  CHECK(sys.layout.total_width() == 7);
  CHECK(sys.a_e.rows() == 7);
  CHECK(sys.c_e.rows() == 4);
}

TEST_CASE("two-step delays on both channels: block count and width") {
  // d_i = d_o = 2 at h = 0.03
  const DiscreteAugmentedSystem sys = fdrl::build_augmented(bench(0.035, 0.045), 0.03);
  CHECK(sys.layout.blocks.size() == 5);
  CHECK(sys.layout.total_width() == 11);
  CHECK(sys.layout.count(BlockKind::output_history) == 1);
  CHECK(sys.layout.count(BlockKind::input_history) == 2);
}

TEST_CASE("block count is d_i + d_o + 1 when both delays are present") {
  for (double h : {0.03, 0.06}) {
    for (double tau_i : {0.01, 0.025, 0.05}) {
      for (double tau_o : {0.01, 0.025, 0.05}) {
        const auto sys = fdrl::build_augmented(bench(tau_i, tau_o), h);
        const int d_i = fdrl::decompose_delay(tau_i, h).d;
        const int d_o = fdrl::decompose_delay(tau_o, h).d;
        CHECK(static_cast<int>(sys.layout.blocks.size()) == d_i + d_o + 1);
        CHECK(sys.layout.total_width() == 3 + 3 * d_o + d_i);
      }
    }
  }
}

TEST_CASE("history rows are pure 0/1 shifts and b_e has one unit input entry") {
  const DiscreteAugmentedSystem sys = fdrl::build_augmented(bench(0.025, 0.05), 0.03);
  const int in_off = sys.layout.input_slot_offset();
  const int slots = sys.layout.input_slot_count();
  for (const auto& blk : sys.layout.blocks) {
    if (blk.kind != BlockKind::output_history && blk.kind != BlockKind::input_history) continue;
    for (int r = blk.offset; r < blk.offset + blk.width; ++r)
      for (int c = 0; c < sys.a_e.cols(); ++c)
        CHECK((sys.a_e(r, c) == 0.0 || sys.a_e(r, c) == 1.0));
  }
  // newest stored input comes straight from the command
  CHECK(sys.b_e(in_off + slots - 1) == 1.0);
  CHECK(sys.a_e.row(in_off + slots - 1).isZero(0.0));
  int units = 0;
  for (int m = 0; m < slots; ++m) units += (sys.b_e(in_off + m) == 1.0);
  CHECK(units == 1);
}

TEST_CASE("coarse-case matrices match the closed form") {
  // both delays sub-step: tau_i' + tau_o' < h, d_i = d_o = 1
  const double h = 0.06, tau_i = 0.02, tau_o = 0.03;
  const PlantParams p = bench(tau_i, tau_o);
  const DiscreteAugmentedSystem sys = fdrl::build_augmented(p, h);
  const fdrl::ContinuousSystem cont = fdrl::build_continuous(p);
  REQUIRE(sys.layout.total_width() == 7);

  auto P = [&](double t) { return fdrl::phi(cont, t); };
  auto G = [&](double t) { return fdrl::gamma(cont, t); };

  CHECK((sys.a_e.block<3, 3>(0, 0) - P(h)).lpNorm<Eigen::Infinity>() <= 1e-14);
  CHECK((sys.a_e.block<3, 1>(0, 6) - P(h - tau_i) * G(tau_i)).lpNorm<Eigen::Infinity>() <= 1e-14);
  CHECK((sys.a_e.block<3, 3>(3, 0) - P(h - tau_o)).lpNorm<Eigen::Infinity>() <= 1e-14);
  CHECK((sys.a_e.block<3, 1>(3, 6) - P(h - tau_i - tau_o) * G(tau_i)).lpNorm<Eigen::Infinity>() <=
        1e-14);
  CHECK((sys.b_e.segment<3>(0) - G(h - tau_i)).lpNorm<Eigen::Infinity>() <= 1e-14);
  CHECK((sys.b_e.segment<3>(3) - G(h - tau_i - tau_o)).lpNorm<Eigen::Infinity>() <= 1e-14);
  CHECK(sys.b_e(6) == 1.0);
  CHECK(sys.a_e.block<3, 3>(3, 3).isZero(0.0));
}

TEST_CASE("measured output equals the continuous-time response") {
  struct Cell {
    double tau_i, tau_o, h;
  };
  // covers: output-only, input-only, switch inside/outside the snapshot
  // horizon, exact-multiple fractional parts, multi-step delays
  const Cell cells[] = {
      {0.0, 0.05, 0.06}, {0.05, 0.0, 0.06},  {0.025, 0.025, 0.06}, {0.045, 0.045, 0.06},
      {0.06, 0.06, 0.06}, {0.05, 0.05, 0.03}, {0.035, 0.045, 0.03}, {0.01, 0.05, 0.03},
  };
  for (const auto& c : cells) {
    for (std::uint64_t seed : {11u, 12u, 13u}) {
      const double dev = max_deviation_vs_oracle(bench(c.tau_i, c.tau_o), c.h, 50, seed);
      INFO("tau_i=", c.tau_i, " tau_o=", c.tau_o, " h=", c.h, " seed=", seed);
      CHECK(dev <= 1e-10);
    }
  }
}

TEST_CASE("spectrum stays in the closed unit disk with the integrator at 1") {
  for (auto [ti, to, h] : {std::tuple{0.0, 0.05, 0.06}, {0.05, 0.0, 0.06}, {0.035, 0.045, 0.03},
                           {0.06, 0.06, 0.06}}) {
    const auto sys = fdrl::build_augmented(bench(ti, to), h);
    const Eigen::VectorXcd ev = Eigen::MatrixXd(sys.a_e).eigenvalues();
    double top = 0;
    for (int i = 0; i < ev.size(); ++i) top = std::max(top, std::abs(ev(i)));
    CHECK(top <= 1.0 + 1e-9);
    bool has_integrator = false;
    for (int i = 0; i < ev.size(); ++i)
      has_integrator = has_integrator || std::abs(ev(i) - std::complex<double>(1, 0)) < 1e-9;
    CHECK(has_integrator);
  }
}

TEST_CASE("delay-free build is the plain ZOH model") {
  const PlantParams p = bench(0, 0);
  const auto sys = fdrl::build_delay_free(p, 0.005);
  const fdrl::ContinuousSystem cont = fdrl::build_continuous(p);

  CHECK((sys.a_e - oracles::expm(cont.a * 0.005)).lpNorm<Eigen::Infinity>() <= 1e-12);
  CHECK((sys.b_e - oracles::gamma_aug(cont.a, cont.b, 0.005)).lpNorm<Eigen::Infinity>() <= 1e-12);
  CHECK(sys.c_e == Eigen::Matrix3d::Identity());
  CHECK(sys.layout.blocks.size() == 1);

  const auto tiny = fdrl::build_delay_free(p, 1e-9);
  CHECK((tiny.a_e - Eigen::Matrix3d::Identity()).lpNorm<Eigen::Infinity>() <= 1e-7);

  // discrete rollout tracks the continuous plant at the sample instants
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> dist(-3, 3);
  std::vector<double> u(40);
  for (double& v : u) v = dist(rng);
  const auto want = oracles::delayed_measurements(cont.a, cont.b, 0.005, 0, 0, u);
  Eigen::Vector3d x = Eigen::Vector3d::Zero();
  for (size_t k = 0; k < u.size(); ++k) {
    CHECK((x - want[k]).lpNorm<Eigen::Infinity>() <= 1e-9);
    x = sys.a_e * x + sys.b_e * u[k];
  }
}

TEST_CASE("observation selectors address the layout") {
  const auto coarse = fdrl::build_augmented(bench(0.0, 0.05), 0.06);
  CHECK(fdrl::observation_selector(coarse, ObservationMode::full_y) == std::vector<int>{3, 4, 5});
  CHECK(fdrl::observation_selector(coarse, ObservationMode::reduced) ==
        std::vector<int>{3, 4, 5, 6});

  const auto input_only = fdrl::build_augmented(bench(0.05, 0.0), 0.06);
  CHECK(input_only.layout.total_width() == 4);
  CHECK(fdrl::observation_selector(input_only, ObservationMode::full_y) ==
        std::vector<int>{0, 1, 2});
  CHECK(fdrl::observation_selector(input_only, ObservationMode::reduced) ==
        std::vector<int>{0, 1, 2, 3});

  const auto free = fdrl::build_delay_free(bench(0, 0), 0.005);
  CHECK_THROWS_AS(fdrl::observation_selector(free, ObservationMode::reduced),
                  std::invalid_argument);

  // with multi-step delays the reduced view picks the newest stored input
  const auto multi = fdrl::build_augmented(bench(0.035, 0.045), 0.03);
  const auto idx = fdrl::observation_selector(multi, ObservationMode::reduced);
  CHECK(idx.size() == 4);
  CHECK(idx.back() == multi.layout.input_slot_offset() + 1);
}

TEST_CASE("builder rejects bad arguments") {
  CHECK_THROWS_AS(fdrl::build_augmented(bench(0.0, 0.0), 0.06), std::invalid_argument);
  CHECK_THROWS_AS(fdrl::build_augmented(bench(0.0, 0.05), 0.0), std::invalid_argument);
  CHECK_THROWS_AS(fdrl::build_delay_free(bench(0, 0), -0.01), std::invalid_argument);
}

TEST_SUITE_END();
