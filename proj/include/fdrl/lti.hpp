#pragma once

#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>

#include <cmath>
#include <span>
#include <stdexcept>
#include <utility>

namespace fdrl {

template <typename Scalar>
using StateVecT = Eigen::Matrix<Scalar, 3, 1>;

/// Plant state ordering is [z, z_dot, z_ddot].
using StateVec = StateVecT<double>;

/// Physical constants of the altitude loop plus its input/output delays.
template <typename Scalar>
struct PlantParamsT {
  Scalar t_p;        // actuator time constant [s]
  Scalar t_q;        // drag time constant [s]
  Scalar k_z;        // static gain
  Scalar tau_i = 0;  // input delay [s]
  Scalar tau_o = 0;  // output delay [s]
  Scalar u_max = 1;  // actuator saturation limit
};
using PlantParams = PlantParamsT<double>;

template <typename Scalar>
void validate(const PlantParamsT<Scalar>& p) {
  if (!(p.t_p > Scalar(0)) || !(p.t_q > Scalar(0)) || !(p.k_z > Scalar(0)))
    throw std::invalid_argument("plant params: t_p, t_q, k_z must be positive");
  if (p.tau_i < Scalar(0) || p.tau_o < Scalar(0))
    throw std::invalid_argument("plant params: delays must be non-negative");
  if (!(p.u_max > Scalar(0)))
    throw std::invalid_argument("plant params: u_max must be positive");
}

/// x_dot = a x + b u, y = c x + d u with c = I and d = 0.
template <typename Scalar>
struct ContinuousSystemT {
  Eigen::Matrix<Scalar, 3, 3> a;
  Eigen::Matrix<Scalar, 3, 1> b;
  Eigen::Matrix<Scalar, 3, 3> c;
  Scalar d;
};
using ContinuousSystem = ContinuousSystemT<double>;

template <typename Scalar>
ContinuousSystemT<Scalar> build_continuous(const PlantParamsT<Scalar>& p) {
  if (!(p.t_p > Scalar(0)) || !(p.t_q > Scalar(0)) || !(p.k_z > Scalar(0)))
    throw std::invalid_argument("build_continuous: t_p, t_q, k_z must be positive");
  const Scalar tptq = p.t_p * p.t_q;
  ContinuousSystemT<Scalar> sys;
  sys.a << Scalar(0), Scalar(1), Scalar(0),
           Scalar(0), Scalar(0), Scalar(1),
           Scalar(0), Scalar(-1) / tptq, -(p.t_p + p.t_q) / tptq;
  sys.b << Scalar(0), Scalar(0), p.k_z / tptq;
  sys.c = Eigen::Matrix<Scalar, 3, 3>::Identity();
  sys.d = Scalar(0);
  return sys;
}

/// Transition matrix e^{a t}.
template <typename Scalar>
Eigen::Matrix<Scalar, 3, 3> phi(const ContinuousSystemT<Scalar>& sys, Scalar t) {
  if (t < Scalar(0)) throw std::invalid_argument("phi: t must be >= 0");
  return (sys.a * t).exp();
}

/// Held-input integral int_0^t e^{a s} b ds.
///
/// Evaluated as a scaled power series followed by doubling,
/// gamma(2T) = (phi(T) + I) gamma(T), which keeps the small-t entries at
/// full relative precision (no cancellation against O(1) matrix entries).
template <typename Scalar>
Eigen::Matrix<Scalar, 3, 1> gamma(const ContinuousSystemT<Scalar>& sys, Scalar t) {
  using Mat3 = Eigen::Matrix<Scalar, 3, 3>;
  if (t < Scalar(0)) throw std::invalid_argument("gamma: t must be >= 0");
  if (t == Scalar(0)) return Eigen::Matrix<Scalar, 3, 1>::Zero();

  int doublings = 0;
  Scalar norm = (sys.a * t).template lpNorm<Eigen::Infinity>();
  while (norm > Scalar(0.5)) {
    norm /= Scalar(2);
    ++doublings;
  }
  const Scalar h = t / Scalar(std::int64_t(1) << doublings);

  // S = sum_k a^k h^{k+1} / (k+1)!,  P = sum_k (a h)^k / k!
  Mat3 s_term = h * Mat3::Identity();
  Mat3 s_sum = s_term;
  Mat3 p_term = Mat3::Identity();
  Mat3 p_sum = p_term;
  for (int k = 1; k <= 30; ++k) {
    p_term = (p_term * sys.a) * (h / Scalar(k));
    p_sum += p_term;
    s_term = (s_term * sys.a) * (h / Scalar(k + 1));
    s_sum += s_term;
  }
  Eigen::Matrix<Scalar, 3, 1> g = s_sum * sys.b;
  Mat3 p = p_sum;
  for (int i = 0; i < doublings; ++i) {
    g = (p + Mat3::Identity()) * g;
    p = p * p;
  }
  return g;
}

/// tau = (d - 1) h + tau_frac with tau_frac in (0, h].
/// tau == 0 is the degenerate delay-free case, flagged by tau_frac == 0.
struct DelayDecomposition {
  int d = 1;
  double tau_frac = 0;
  bool delay_free() const { return tau_frac == 0; }
};

inline DelayDecomposition decompose_delay(double tau, double h) {
  if (!(h > 0)) throw std::invalid_argument("decompose_delay: h must be > 0");
  if (tau < 0) throw std::invalid_argument("decompose_delay: tau must be >= 0");
  if (tau == 0) return {1, 0.0};

  // exact multiples of h keep tau_frac = h, never 0
  const double k = std::round(tau / h);
  if (k >= 1 && std::abs(tau - k * h) < 1e-12) return {static_cast<int>(k), h};

  int d = static_cast<int>(std::ceil(tau / h));
  double frac = tau - (d - 1) * h;
  if (frac > h) {
    ++d;
    frac = tau - (d - 1) * h;
  } else if (frac <= 0) {
    --d;
    frac = tau - (d - 1) * h;
  }
  return {d, frac};
}

/// Applies each (duration, held input) segment in order:
/// x <- phi(dt) x + gamma(dt) u.
template <typename Scalar>
StateVecT<Scalar> propagate_piecewise(
    const ContinuousSystemT<Scalar>& sys, const StateVecT<Scalar>& x0,
    std::span<const std::pair<Scalar, Scalar>> segments) {
  StateVecT<Scalar> x = x0;
  for (const auto& [dt, u] : segments)
    x = phi(sys, dt) * x + gamma(sys, dt) * u;
  return x;
}

}  // namespace fdrl
