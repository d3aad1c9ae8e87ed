#include "fdrl/ddpg.hpp"

#include "fdrl/io_util.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <stdexcept>
#include <unordered_set>

#ifdef __GLIBC__
#include <malloc.h>
#endif

namespace fdrl {

CriticGrads make_grads(const Critic& critic) {
  return {make_grads(critic.state_branch), make_grads(critic.action_branch),
          make_grads(critic.joint)};
}

CriticAdam make_adam(const Critic& critic) {
  return {make_adam(critic.state_branch), make_adam(critic.action_branch),
          make_adam(critic.joint)};
}

void polyak_update(Critic& target, const Critic& online, double rho) {
  polyak_update(target.state_branch, online.state_branch, rho);
  polyak_update(target.action_branch, online.action_branch, rho);
  polyak_update(target.joint, online.joint, rho);
}

Eigen::RowVectorXd critic_forward(const Critic& critic, const Eigen::MatrixXd& obs,
                                  const Eigen::RowVectorXd& action, CriticCache* cache) {
  CriticCache local;
  CriticCache& c = cache ? *cache : local;
  const Eigen::MatrixXd s_feat = mlp_forward(critic.state_branch, obs, &c.state);
  const Eigen::MatrixXd a_feat = mlp_forward(critic.action_branch, action, &c.action);
  Eigen::MatrixXd joint_in(s_feat.rows() + a_feat.rows(), obs.cols());
  joint_in.topRows(s_feat.rows()) = s_feat;
  joint_in.bottomRows(a_feat.rows()) = a_feat;
  return mlp_forward(critic.joint, joint_in, &c.joint).row(0);
}

Eigen::RowVectorXd critic_backward(const Critic& critic, const CriticCache& cache,
                                   const Eigen::RowVectorXd& dq, CriticGrads* grads) {
  const Eigen::MatrixXd d_joint_in =
      mlp_backward(critic.joint, cache.joint, dq, grads ? &grads->joint : nullptr);
  const auto s_rows = critic.state_branch.output_width();
  const auto a_rows = critic.action_branch.output_width();
  if (grads)
    mlp_backward(critic.state_branch, cache.state, d_joint_in.topRows(s_rows), &grads->state);
  const Eigen::MatrixXd d_action = mlp_backward(
      critic.action_branch, cache.action, d_joint_in.bottomRows(a_rows),
      grads ? &grads->action : nullptr);
  return d_action.row(0);
}

double critic_loss_and_grads(const Critic& critic, const Eigen::MatrixXd& obs,
                             const Eigen::RowVectorXd& action,
                             const Eigen::RowVectorXd& target_q, CriticGrads* grads) {
  const auto batch = static_cast<double>(obs.cols());
  CriticCache cache;
  const Eigen::RowVectorXd q = critic_forward(critic, obs, action, &cache);
  const Eigen::RowVectorXd diff = q - target_q;
  if (grads) critic_backward(critic, cache, (2.0 / batch) * diff, grads);
  return diff.squaredNorm() / batch;
}

double actor_objective_and_grads(const Mlp& actor, const Critic& critic, double action_scale,
                                 const Eigen::MatrixXd& obs, MlpGrads* grads) {
  const auto batch = static_cast<double>(obs.cols());
  MlpCache actor_cache;
  const Eigen::RowVectorXd pre = mlp_forward(actor, obs, &actor_cache).row(0);
  const Eigen::RowVectorXd action = action_scale * pre;
  CriticCache critic_cache;
  const Eigen::RowVectorXd q = critic_forward(critic, obs, action, &critic_cache);
  if (grads) {
    const Eigen::RowVectorXd dq = Eigen::RowVectorXd::Constant(obs.cols(), 1.0 / batch);
    const Eigen::RowVectorXd d_action = critic_backward(critic, critic_cache, dq, nullptr);
    // gradients of -J so the optimizer's descent step ascends Q
    mlp_backward(actor, actor_cache, (-action_scale) * d_action, grads);
  }
  return q.mean();
}

ReplayBuffer::ReplayBuffer(int obs_width, int capacity) {
  if (obs_width < 1 || capacity < 1)
    throw std::invalid_argument("replay buffer needs positive width and capacity");
  obs_.setZero(obs_width, capacity);
  next_obs_.setZero(obs_width, capacity);
  action_.setZero(capacity);
  reward_.setZero(capacity);
  done_.setZero(capacity);
}

void ReplayBuffer::push(const Eigen::VectorXd& obs, double action, double reward,
                        const Eigen::VectorXd& next_obs, bool done) {
  if (obs.size() != obs_.rows() || next_obs.size() != obs_.rows())
    throw std::invalid_argument("replay push: observation width mismatch");
  const int slot = static_cast<int>(inserted_ % capacity());
  obs_.col(slot) = obs;
  next_obs_.col(slot) = next_obs;
  action_(slot) = action;
  reward_(slot) = reward;
  done_(slot) = done ? 1.0 : 0.0;
  ++inserted_;
  size_ = std::min(size_ + 1, capacity());
}

ReplayBuffer::Batch ReplayBuffer::sample(int batch_size, std::mt19937_64& rng) const {
  if (batch_size < 1 || batch_size > size_)
    throw std::runtime_error("replay sample: fewer stored transitions than the batch size");
  // Floyd: each j in [n-k, n) admits one new index, uniformly without
  // replacement
  std::vector<int> picked;
  picked.reserve(batch_size);
  std::unordered_set<int> seen;
  for (int j = size_ - batch_size; j < size_; ++j) {
    std::uniform_int_distribution<int> dist(0, j);
    const int t = dist(rng);
    if (seen.insert(t).second)
      picked.push_back(t);
    else {
      seen.insert(j);
      picked.push_back(j);
    }
  }
  Batch b;
  b.obs.resize(obs_.rows(), batch_size);
  b.next_obs.resize(obs_.rows(), batch_size);
  b.action.resize(batch_size);
  b.reward.resize(batch_size);
  b.done.resize(batch_size);
  for (int i = 0; i < batch_size; ++i) {
    const int s = picked[i];
    b.obs.col(i) = obs_.col(s);
    b.next_obs.col(i) = next_obs_.col(s);
    b.action(i) = action_(s);
    b.reward(i) = reward_(s);
    b.done(i) = done_(s);
  }
  return b;
}

AgentBundle init_agent(int obs_width, const HyperParams& hyper, std::uint64_t seed) {
  if (obs_width < 1) throw std::invalid_argument("init_agent: obs_width must be positive");
  if (!(hyper.polyak > 0 && hyper.polyak <= 1))
    throw std::invalid_argument("init_agent: polyak must lie in (0,1]");
  if (!(hyper.discount > 0 && hyper.discount <= 1))
    throw std::invalid_argument("init_agent: discount must lie in (0,1]");
  if (hyper.buffer_capacity < hyper.batch_size)
    throw std::invalid_argument("init_agent: buffer capacity below batch size");

  AgentBundle agent;
  agent.hyper = hyper;
  agent.obs_width = obs_width;
  agent.rng_seed = seed;
  agent.rng.seed(seed);

  using A = Activation;
  agent.actor = make_mlp({obs_width, hyper.actor_hidden1, hyper.actor_hidden2, 1},
                         {A::relu, A::relu, A::tanh_act}, agent.rng, 3e-3);
  agent.critic.state_branch =
      make_mlp({obs_width, hyper.critic_state_hidden1, hyper.critic_state_hidden2},
               {A::relu, A::relu}, agent.rng);
  agent.critic.action_branch =
      make_mlp({1, hyper.critic_action_hidden}, {A::relu}, agent.rng);
  agent.critic.joint = make_mlp({hyper.critic_state_hidden2 + hyper.critic_action_hidden,
                                 hyper.critic_joint_hidden1, hyper.critic_joint_hidden2, 1},
                                {A::relu, A::relu, A::linear}, agent.rng);
  agent.actor_target = agent.actor;
  agent.critic_target = agent.critic;
  agent.actor_adam = make_adam(agent.actor);
  agent.critic_adam = make_adam(agent.critic);
  return agent;
}

double select_action(AgentBundle& agent, const Eigen::VectorXd& obs, bool explore) {
  if (obs.size() != agent.obs_width)
    throw std::invalid_argument("select_action: observation width mismatch");
  const double mean = agent.hyper.action_scale * mlp_forward(agent.actor, obs)(0, 0);
  if (!explore) return mean;
  // OU with dt = one agent step
  agent.noise_state += agent.hyper.ou_theta * (0.0 - agent.noise_state) +
                       agent.hyper.ou_sigma * draw_normal(agent.rng);
  return mean + agent.noise_state;
}

UpdateStats update(AgentBundle& agent, const ReplayBuffer& buffer) {
  const HyperParams& hp = agent.hyper;
  if (buffer.size() < hp.batch_size)
    throw std::runtime_error("update: replay buffer smaller than one batch");
  const ReplayBuffer::Batch batch = buffer.sample(hp.batch_size, agent.rng);

  // bootstrapped target through the frozen target networks
  const Eigen::RowVectorXd next_action =
      hp.action_scale * mlp_forward(agent.actor_target, batch.next_obs).row(0);
  const Eigen::RowVectorXd next_q =
      critic_forward(agent.critic_target, batch.next_obs, next_action);
  const Eigen::RowVectorXd target =
      (batch.reward.array() + hp.discount * (1.0 - batch.done.array()) * next_q.array())
          .matrix();

  CriticGrads critic_grads = make_grads(agent.critic);
  const double critic_loss =
      critic_loss_and_grads(agent.critic, batch.obs, batch.action, target, &critic_grads);
  adam_step(agent.critic.state_branch, agent.critic_adam.state, critic_grads.state,
            hp.lr_critic);
  adam_step(agent.critic.action_branch, agent.critic_adam.action, critic_grads.action,
            hp.lr_critic);
  adam_step(agent.critic.joint, agent.critic_adam.joint, critic_grads.joint, hp.lr_critic);

  MlpGrads actor_grads = make_grads(agent.actor);
  const double actor_objective = actor_objective_and_grads(
      agent.actor, agent.critic, hp.action_scale, batch.obs, &actor_grads);
  adam_step(agent.actor, agent.actor_adam, actor_grads, hp.lr_actor);

  polyak_update(agent.actor_target, agent.actor, hp.polyak);
  polyak_update(agent.critic_target, agent.critic, hp.polyak);
  return {critic_loss, actor_objective};
}

std::vector<EpisodeLog> train(AgentBundle& agent, Environment& env, int episodes) {
  if (env.observation_width() != agent.obs_width)
    throw std::invalid_argument("train: environment and agent observation widths differ");
#ifdef __GLIBC__
  // batch-sized temporaries sit above the default mmap threshold; without this the
  // update loop spends half its time faulting pages back in
  static const bool malloc_tuned = [] {
    mallopt(M_MMAP_THRESHOLD, 1 << 30);
    mallopt(M_TRIM_THRESHOLD, 1 << 30);
    return true;
  }();
  (void)malloc_tuned;
#endif
  const HyperParams& hp = agent.hyper;
  ReplayBuffer buffer(agent.obs_width, hp.buffer_capacity);
  const auto start = std::chrono::steady_clock::now();

  std::vector<EpisodeLog> log;
  log.reserve(episodes);
  for (int ep = 0; ep < episodes; ++ep) {
    Eigen::VectorXd obs = env.reset();
    agent.noise_state = 0.0;
    double episode_return = 0, loss_sum = 0, objective_sum = 0;
    int updates = 0;
    bool done = false;
    while (!done) {
      const double action = select_action(agent, obs, true);
      const auto result = env.step(action);
      const double applied =
          std::clamp(action, -hp.action_scale, hp.action_scale);
      buffer.push(obs, applied, result.reward, result.observation, result.done);
      if (buffer.size() >= hp.batch_size) {
        const UpdateStats stats = update(agent, buffer);
        loss_sum += stats.critic_loss;
        objective_sum += stats.actor_objective;
        ++updates;
      }
      episode_return += result.reward;
      obs = result.observation;
      done = result.done;
    }
    const double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    log.push_back({ep, episode_return, updates ? loss_sum / updates : 0.0,
                   updates ? objective_sum / updates : 0.0, elapsed});
  }
  return log;
}

void write_training_log_csv(const std::string& path, const std::vector<EpisodeLog>& log) {
  AtomicFile file(path);
  auto& out = file.stream();
  out << "episode,return,critic_loss_mean,actor_objective_mean,wall_time\n";
  char buf[160];
  for (const auto& e : log) {
    std::snprintf(buf, sizeof buf, "%d,%.17g,%.17g,%.17g,%.3f\n", e.episode, e.episode_return,
                  e.critic_loss_mean, e.actor_objective_mean, e.wall_time);
    out << buf;
  }
  file.commit();
}

}  // namespace fdrl
