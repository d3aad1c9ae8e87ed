#pragma once

#include "fdrl/mlp.hpp"
#include "fdrl/rl_env.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace fdrl {

struct HyperParams {
  double polyak = 0.005;
  double discount = 0.99;
  double lr_actor = 0.001;
  double lr_critic = 0.002;
  int buffer_capacity = 50000;
  int batch_size = 1024;
  double ou_theta = 0.15;       // per agent step
  double ou_sigma = 1.314;      // 0.2 * u_max
  int episodes = 200;
  double action_scale = 6.57;   // u_max multiplying the tanh output
  // architecture; defaults follow the classic branch layout
  int actor_hidden1 = 256, actor_hidden2 = 256;
  int critic_state_hidden1 = 16, critic_state_hidden2 = 32;
  int critic_action_hidden = 32;
  int critic_joint_hidden1 = 256, critic_joint_hidden2 = 256;
};

inline HyperParams default_hyper(double u_max) {
  HyperParams h;
  h.action_scale = u_max;
  h.ou_sigma = 0.2 * u_max;
  return h;
}

/// Q(s,a): the observation and action pass through separate branches whose
/// features are stacked into the joint trunk.
struct Critic {
  Mlp state_branch;
  Mlp action_branch;
  Mlp joint;
};

struct CriticCache {
  MlpCache state, action, joint;
};
struct CriticGrads {
  MlpGrads state, action, joint;
};
struct CriticAdam {
  AdamState state, action, joint;
};

CriticGrads make_grads(const Critic& critic);
CriticAdam make_adam(const Critic& critic);
void polyak_update(Critic& target, const Critic& online, double rho);

Eigen::RowVectorXd critic_forward(const Critic& critic, const Eigen::MatrixXd& obs,
                                  const Eigen::RowVectorXd& action, CriticCache* cache = nullptr);

/// Backpropagates dL/dQ; fills grads when given; returns dL/d(action).
/// With grads == nullptr only the action gradient is computed.
Eigen::RowVectorXd critic_backward(const Critic& critic, const CriticCache& cache,
                                   const Eigen::RowVectorXd& dq, CriticGrads* grads);

/// Mean squared error of Q(s,a) against the fixed targets; gradients for one
/// optimizer step when grads is given.
double critic_loss_and_grads(const Critic& critic, const Eigen::MatrixXd& obs,
                             const Eigen::RowVectorXd& action,
                             const Eigen::RowVectorXd& target_q, CriticGrads* grads);

/// Mean of Q(s, scale*actor(s)) through a frozen critic. grads receives the
/// gradients of the NEGATED objective, ready for a descent step.
double actor_objective_and_grads(const Mlp& actor, const Critic& critic, double action_scale,
                                 const Eigen::MatrixXd& obs, MlpGrads* grads);

class ReplayBuffer {
 public:
  ReplayBuffer(int obs_width, int capacity);

  void push(const Eigen::VectorXd& obs, double action, double reward,
            const Eigen::VectorXd& next_obs, bool done);

  int size() const { return size_; }
  int capacity() const { return static_cast<int>(obs_.cols()); }
  int obs_width() const { return static_cast<int>(obs_.rows()); }
  std::int64_t total_inserted() const { return inserted_; }
  double action_at(int slot) const { return action_(slot); }

  struct Batch {
    Eigen::MatrixXd obs, next_obs;
    Eigen::RowVectorXd action, reward, done;
  };
  /// Uniform without replacement within the batch (Floyd's algorithm).
  Batch sample(int batch_size, std::mt19937_64& rng) const;

 private:
  Eigen::MatrixXd obs_, next_obs_;
  Eigen::RowVectorXd action_, reward_, done_;
  int size_ = 0;
  std::int64_t inserted_ = 0;
};

struct AgentBundle {
  Mlp actor, actor_target;
  Critic critic, critic_target;
  AdamState actor_adam;
  CriticAdam critic_adam;
  double noise_state = 0.0;
  std::uint64_t rng_seed = 0;
  std::mt19937_64 rng;
  HyperParams hyper;
  int obs_width = 0;
};

AgentBundle init_agent(int obs_width, const HyperParams& hyper, std::uint64_t seed);

/// scale*tanh-actor(obs), plus evolving OU noise when exploring.
double select_action(AgentBundle& agent, const Eigen::VectorXd& obs, bool explore);

struct UpdateStats {
  double critic_loss;
  double actor_objective;
};

/// One DDPG update: critic regression to the bootstrapped target, actor
/// ascent through the critic, Polyak refresh of both targets.
UpdateStats update(AgentBundle& agent, const ReplayBuffer& buffer);

struct EpisodeLog {
  int episode;
  double episode_return;
  double critic_loss_mean;
  double actor_objective_mean;
  double wall_time;  // seconds since training started
};

std::vector<EpisodeLog> train(AgentBundle& agent, Environment& env, int episodes);

void write_training_log_csv(const std::string& path, const std::vector<EpisodeLog>& log);

void save_agent(const AgentBundle& agent, const std::string& path);
AgentBundle load_agent(const std::string& path);

}  // namespace fdrl
