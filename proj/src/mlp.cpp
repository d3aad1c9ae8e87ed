#include "fdrl/mlp.hpp"

#include <cmath>
#include <stdexcept>

namespace fdrl {

double draw_uniform(std::mt19937_64& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

double draw_normal(std::mt19937_64& rng) {
  return std::normal_distribution<double>(0.0, 1.0)(rng);
}

Mlp make_mlp(const std::vector<int>& widths, const std::vector<Activation>& acts,
             std::mt19937_64& rng, double output_bound) {
  if (widths.size() < 2 || acts.size() != widths.size() - 1)
    throw std::invalid_argument("make_mlp: need one activation per layer");
  Mlp net;
  for (size_t l = 0; l + 1 < widths.size(); ++l) {
    const int in = widths[l], out = widths[l + 1];
    if (in < 1 || out < 1) throw std::invalid_argument("make_mlp: widths must be positive");
    const bool last = l + 2 == widths.size();
    const double bound = (last && output_bound > 0) ? output_bound : 1.0 / std::sqrt(in);
    DenseLayer layer{Eigen::MatrixXd(out, in), Eigen::VectorXd(out), acts[l]};
    for (int i = 0; i < out; ++i) {
      for (int j = 0; j < in; ++j) layer.w(i, j) = draw_uniform(rng, -bound, bound);
    }
    for (int i = 0; i < out; ++i) layer.b(i) = draw_uniform(rng, -bound, bound);
    net.layers.push_back(std::move(layer));
  }
  return net;
}

namespace {

void apply_activation(Eigen::MatrixXd& z, Activation act) {
  switch (act) {
    case Activation::relu: z = z.cwiseMax(0.0); break;
    case Activation::tanh_act: z = z.array().tanh().matrix(); break;
    case Activation::linear: break;
  }
}

// derivative expressed through the activation output
Eigen::ArrayXXd activation_grad(const Eigen::MatrixXd& a, Activation act) {
  switch (act) {
    case Activation::relu: return (a.array() > 0.0).cast<double>();
    case Activation::tanh_act: return 1.0 - a.array().square();
    case Activation::linear: break;
  }
  return Eigen::ArrayXXd::Ones(a.rows(), a.cols());
}

}  // namespace

Eigen::MatrixXd mlp_forward(const Mlp& net, const Eigen::MatrixXd& x, MlpCache* cache) {
  if (x.rows() != net.input_width())
    throw std::invalid_argument("mlp_forward: input width mismatch");
  if (cache) {
    cache->acts.clear();
    cache->acts.reserve(net.layers.size() + 1);
    cache->acts.push_back(x);
  }
  Eigen::MatrixXd a = x;
  for (const auto& layer : net.layers) {
    Eigen::MatrixXd z = layer.w * a;
    z.colwise() += layer.b;
    apply_activation(z, layer.act);
    a = std::move(z);
    if (cache) cache->acts.push_back(a);
  }
  return a;
}

MlpGrads make_grads(const Mlp& net) {
  MlpGrads g;
  for (const auto& layer : net.layers) {
    g.dw.push_back(Eigen::MatrixXd::Zero(layer.w.rows(), layer.w.cols()));
    g.db.push_back(Eigen::VectorXd::Zero(layer.b.size()));
  }
  return g;
}

Eigen::MatrixXd mlp_backward(const Mlp& net, const MlpCache& cache, Eigen::MatrixXd dout,
                             MlpGrads* grads) {
  const auto layer_count = static_cast<std::ptrdiff_t>(net.layers.size());
  if (static_cast<std::ptrdiff_t>(cache.acts.size()) != layer_count + 1)
    throw std::invalid_argument("mlp_backward: cache does not match network");
  for (std::ptrdiff_t l = layer_count - 1; l >= 0; --l) {
    const auto& layer = net.layers[l];
    const Eigen::MatrixXd dz =
        (dout.array() * activation_grad(cache.acts[l + 1], layer.act)).matrix();
    if (grads) {
      grads->dw[l] = dz * cache.acts[l].transpose();
      grads->db[l] = dz.rowwise().sum();
    }
    dout = layer.w.transpose() * dz;
  }
  return dout;
}

AdamState make_adam(const Mlp& net) {
  AdamState s;
  for (const auto& layer : net.layers) {
    s.mw.push_back(Eigen::MatrixXd::Zero(layer.w.rows(), layer.w.cols()));
    s.vw.push_back(Eigen::MatrixXd::Zero(layer.w.rows(), layer.w.cols()));
    s.mb.push_back(Eigen::VectorXd::Zero(layer.b.size()));
    s.vb.push_back(Eigen::VectorXd::Zero(layer.b.size()));
  }
  return s;
}

namespace {

template <typename T>
void adam_apply(T& param, T& m, T& v, const T& grad, double lr, double beta1, double beta2,
                double eps, std::int64_t t) {
  m = beta1 * m + (1.0 - beta1) * grad;
  v.array() = beta2 * v.array() + (1.0 - beta2) * grad.array().square();
  const double c1 = 1.0 - std::pow(beta1, static_cast<double>(t));
  const double c2 = 1.0 - std::pow(beta2, static_cast<double>(t));
  param.array() -= lr * (m.array() / c1) / ((v.array() / c2).sqrt() + eps);
}

}  // namespace

void adam_step(Mlp& net, AdamState& state, const MlpGrads& grads, double lr, double beta1,
               double beta2, double eps) {
  if (state.mw.size() != net.layers.size() || grads.dw.size() != net.layers.size())
    throw std::invalid_argument("adam_step: shape bookkeeping mismatch");
  ++state.t;
  for (size_t l = 0; l < net.layers.size(); ++l) {
    adam_apply(net.layers[l].w, state.mw[l], state.vw[l], grads.dw[l], lr, beta1, beta2, eps,
               state.t);
    adam_apply(net.layers[l].b, state.mb[l], state.vb[l], grads.db[l], lr, beta1, beta2, eps,
               state.t);
  }
}

void polyak_update(Mlp& target, const Mlp& online, double rho) {
  if (target.layers.size() != online.layers.size())
    throw std::invalid_argument("polyak_update: network shapes differ");
  for (size_t l = 0; l < target.layers.size(); ++l) {
    target.layers[l].w = rho * online.layers[l].w + (1.0 - rho) * target.layers[l].w;
    target.layers[l].b = rho * online.layers[l].b + (1.0 - rho) * target.layers[l].b;
  }
}

}  // namespace fdrl
