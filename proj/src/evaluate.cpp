#include "fdrl/evaluate.hpp"

#include <algorithm>
#include <stdexcept>

namespace fdrl {

CaseReport evaluate_agent(AgentBundle& agent, const EnvConfig& cfg, Trajectory* trajectory) {
  Environment env(cfg);
  if (agent.obs_width != env.observation_width())
    throw std::invalid_argument("evaluate: agent expects width " +
                                std::to_string(agent.obs_width) + " but the environment yields " +
                                std::to_string(env.observation_width()));

  Trajectory traj;
  traj.reserve(static_cast<size_t>(cfg.episode_length / env.simulator().config().base_step) + 1);
  Eigen::VectorXd obs = env.reset();
  const StateVec x0 = env.simulator().state().x;
  traj.push_back({0.0, x0(0), x0(1), x0(2), 0.0, reward_fn(x0, env.z_ref())});
  for (bool done = false; !done;) {
    const double action = select_action(agent, obs, false);
    Environment::StepResult result = env.step_traced(action, traj);
    obs = std::move(result.observation);
    done = result.done;
  }

  CaseReport report;
  report.case_id = cfg.case_id;
  report.variant = cfg.variant;
  report.seed = agent.rng_seed;
  report.z_ref = env.z_ref();
  report.u_max = env.u_max();
  // the standard settle window, shrunk to fit unusually short episodes
  const double window = std::min(4.0, traj.back().time - traj.front().time);
  report.metrics = compute_metrics(traj, env.z_ref(), env.u_max(), window);
  if (trajectory) *trajectory = std::move(traj);
  return report;
}

}  // namespace fdrl
