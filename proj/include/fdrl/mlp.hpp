#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <random>
#include <vector>

namespace fdrl {

enum class Activation { relu, tanh_act, linear };

struct DenseLayer {
  Eigen::MatrixXd w;  // out x in
  Eigen::VectorXd b;
  Activation act;
};

/// Plain fully-connected net. Batches are column-major: one sample per
/// column, so a layer application is a single W*X product.
struct Mlp {
  std::vector<DenseLayer> layers;

  int input_width() const { return layers.empty() ? 0 : static_cast<int>(layers.front().w.cols()); }
  int output_width() const { return layers.empty() ? 0 : static_cast<int>(layers.back().w.rows()); }
};

/// Stateless draws: a fresh distribution per call so no hidden spare-sample
/// state survives between calls (keeps replay of a seed exact).
double draw_uniform(std::mt19937_64& rng, double lo, double hi);
double draw_normal(std::mt19937_64& rng);

/// widths = {input, hidden..., output}; one activation per layer.
/// Weights are U(+-1/sqrt(fan_in)); a positive output_bound overrides the
/// last layer with U(+-output_bound).
Mlp make_mlp(const std::vector<int>& widths, const std::vector<Activation>& acts,
             std::mt19937_64& rng, double output_bound = 0.0);

/// acts[0] is the input, acts[l+1] the output of layer l.
struct MlpCache {
  std::vector<Eigen::MatrixXd> acts;
};

Eigen::MatrixXd mlp_forward(const Mlp& net, const Eigen::MatrixXd& x, MlpCache* cache = nullptr);

struct MlpGrads {
  std::vector<Eigen::MatrixXd> dw;
  std::vector<Eigen::VectorXd> db;
};

MlpGrads make_grads(const Mlp& net);

/// Backpropagates dL/d(output); fills grads when given (pass nullptr to get
/// only the input gradient, e.g. dQ/d(action) through a frozen critic).
/// Returns dL/d(input).
Eigen::MatrixXd mlp_backward(const Mlp& net, const MlpCache& cache, Eigen::MatrixXd dout,
                             MlpGrads* grads);

struct AdamState {
  std::vector<Eigen::MatrixXd> mw, vw;
  std::vector<Eigen::VectorXd> mb, vb;
  std::int64_t t = 0;
};

AdamState make_adam(const Mlp& net);

void adam_step(Mlp& net, AdamState& state, const MlpGrads& grads, double lr, double beta1 = 0.9,
               double beta2 = 0.999, double eps = 1e-8);

/// target <- rho*online + (1-rho)*target
void polyak_update(Mlp& target, const Mlp& online, double rho);

}  // namespace fdrl
