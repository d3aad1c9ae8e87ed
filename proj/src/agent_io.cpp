// Agent persistence: a self-describing text container of named arrays with
// shape headers plus the hyperparameter block. %.17g encoding makes the
// save -> load -> save cycle byte-identical.

#include "fdrl/ddpg.hpp"
#include "fdrl/io_util.hpp"

#include <charconv>
#include <cstdio>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

namespace fdrl {
namespace {

constexpr const char* kMagic = "fdrl-agent-v1";

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

double parse_double(const std::string& text, const std::string& what) {
  double v = 0;
  const char* first = text.data();
  const char* last = first + text.size();
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last)
    throw std::runtime_error("agent file: field '" + what + "' is not a number: '" + text + "'");
  return v;
}

template <typename Bundle, typename F>
void visit_arrays(Bundle& agent, F&& f) {
  auto net = [&](const std::string& prefix, auto& mlp) {
    for (size_t l = 0; l < mlp.layers.size(); ++l) {
      const std::string base = prefix + ".l" + std::to_string(l);
      f(base + ".w", mlp.layers[l].w);
      f(base + ".b", mlp.layers[l].b);
    }
  };
  auto adam = [&](const std::string& prefix, auto& state) {
    for (size_t l = 0; l < state.mw.size(); ++l) {
      const std::string base = prefix + ".l" + std::to_string(l);
      f(base + ".mw", state.mw[l]);
      f(base + ".vw", state.vw[l]);
      f(base + ".mb", state.mb[l]);
      f(base + ".vb", state.vb[l]);
    }
  };
  net("actor", agent.actor);
  net("actor_target", agent.actor_target);
  net("critic.state", agent.critic.state_branch);
  net("critic.action", agent.critic.action_branch);
  net("critic.joint", agent.critic.joint);
  net("critic_target.state", agent.critic_target.state_branch);
  net("critic_target.action", agent.critic_target.action_branch);
  net("critic_target.joint", agent.critic_target.joint);
  adam("adam.actor", agent.actor_adam);
  adam("adam.critic.state", agent.critic_adam.state);
  adam("adam.critic.action", agent.critic_adam.action);
  adam("adam.critic.joint", agent.critic_adam.joint);
}

// (name, parse/format) table over the hyperparameter block
template <typename F>
void visit_hyper(HyperParams& h, F&& f) {
  f("polyak", h.polyak);
  f("discount", h.discount);
  f("lr_actor", h.lr_actor);
  f("lr_critic", h.lr_critic);
  f("buffer_capacity", h.buffer_capacity);
  f("batch_size", h.batch_size);
  f("ou_theta", h.ou_theta);
  f("ou_sigma", h.ou_sigma);
  f("episodes", h.episodes);
  f("action_scale", h.action_scale);
  f("actor_hidden1", h.actor_hidden1);
  f("actor_hidden2", h.actor_hidden2);
  f("critic_state_hidden1", h.critic_state_hidden1);
  f("critic_state_hidden2", h.critic_state_hidden2);
  f("critic_action_hidden", h.critic_action_hidden);
  f("critic_joint_hidden1", h.critic_joint_hidden1);
  f("critic_joint_hidden2", h.critic_joint_hidden2);
}

}  // namespace

void save_agent(const AgentBundle& agent, const std::string& path) {
  AtomicFile file(path);
  auto& out = file.stream();
  out << kMagic << '\n';
  out << "obs_width " << agent.obs_width << '\n';
  out << "seed " << agent.rng_seed << '\n';
  out << "noise_state " << fmt(agent.noise_state) << '\n';
  out << "adam.actor.t " << agent.actor_adam.t << '\n';
  out << "adam.critic.state.t " << agent.critic_adam.state.t << '\n';
  out << "adam.critic.action.t " << agent.critic_adam.action.t << '\n';
  out << "adam.critic.joint.t " << agent.critic_adam.joint.t << '\n';
  HyperParams hyper = agent.hyper;
  visit_hyper(hyper, [&](const char* name, auto& value) {
    if constexpr (std::is_same_v<std::decay_t<decltype(value)>, double>)
      out << name << ' ' << fmt(value) << '\n';
    else
      out << name << ' ' << value << '\n';
  });
  visit_arrays(agent, [&](const std::string& name, const auto& mat) {
    out << "array " << name << ' ' << mat.rows() << ' ' << mat.cols() << '\n';
    for (Eigen::Index i = 0; i < mat.rows(); ++i) {
      for (Eigen::Index j = 0; j < mat.cols(); ++j) {
        if (j) out << ' ';
        out << fmt(mat(i, j));
      }
      out << '\n';
    }
  });
  file.commit();
}

AgentBundle load_agent(const std::string& path) {
  std::istringstream in(read_text_file(path));
  std::string line;
  if (!std::getline(in, line) || line != kMagic)
    throw std::runtime_error("agent file '" + path + "': bad or missing header line");

  std::map<std::string, std::string> scalars;
  struct StoredArray {
    Eigen::Index rows, cols;
    std::vector<double> values;
  };
  std::map<std::string, StoredArray> arrays;

  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::string key;
    ls >> key;
    if (key != "array") {
      std::string value;
      ls >> value;
      scalars[key] = value;
      continue;
    }
    std::string name;
    Eigen::Index rows = 0, cols = 0;
    ls >> name >> rows >> cols;
    if (name.empty() || rows < 1 || cols < 1)
      throw std::runtime_error("agent file: malformed array header: '" + line + "'");
    StoredArray arr{rows, cols, {}};
    arr.values.reserve(static_cast<size_t>(rows * cols));
    for (Eigen::Index i = 0; i < rows; ++i) {
      if (!std::getline(in, line))
        throw std::runtime_error("agent file: array '" + name + "' is truncated");
      const char* p = line.data();
      const char* end = p + line.size();
      for (Eigen::Index j = 0; j < cols; ++j) {
        while (p < end && *p == ' ') ++p;
        double v = 0;
        auto [next, ec] = std::from_chars(p, end, v);
        if (ec != std::errc())
          throw std::runtime_error("agent file: array '" + name + "' row " + std::to_string(i) +
                                   " is malformed");
        arr.values.push_back(v);
        p = next;
      }
    }
    arrays.emplace(std::move(name), std::move(arr));
  }

  auto scalar = [&](const std::string& key) -> std::string {
    auto it = scalars.find(key);
    if (it == scalars.end())
      throw std::runtime_error("agent file: missing field '" + key + "'");
    return it->second;
  };

  HyperParams hyper;
  visit_hyper(hyper, [&](const char* name, auto& value) {
    using T = std::decay_t<decltype(value)>;
    const std::string text = scalar(name);
    if constexpr (std::is_same_v<T, double>)
      value = parse_double(text, name);
    else
      value = static_cast<T>(std::stol(text));
  });

  const int obs_width = static_cast<int>(std::stol(scalar("obs_width")));
  const auto seed = static_cast<std::uint64_t>(std::stoull(scalar("seed")));
  AgentBundle agent = init_agent(obs_width, hyper, seed);
  agent.noise_state = parse_double(scalar("noise_state"), "noise_state");
  agent.actor_adam.t = std::stoll(scalar("adam.actor.t"));
  agent.critic_adam.state.t = std::stoll(scalar("adam.critic.state.t"));
  agent.critic_adam.action.t = std::stoll(scalar("adam.critic.action.t"));
  agent.critic_adam.joint.t = std::stoll(scalar("adam.critic.joint.t"));

  std::set<std::string> used;
  visit_arrays(agent, [&](const std::string& name, auto& mat) {
    auto it = arrays.find(name);
    if (it == arrays.end())
      throw std::runtime_error("agent file: missing array '" + name + "'");
    const StoredArray& arr = it->second;
    if (arr.rows != mat.rows() || arr.cols != mat.cols())
      throw std::runtime_error("agent file: array '" + name + "' has shape " +
                               std::to_string(arr.rows) + "x" + std::to_string(arr.cols) +
                               ", expected " + std::to_string(mat.rows()) + "x" +
                               std::to_string(mat.cols()));
    size_t k = 0;
    for (Eigen::Index i = 0; i < mat.rows(); ++i)
      for (Eigen::Index j = 0; j < mat.cols(); ++j) mat(i, j) = arr.values[k++];
    used.insert(name);
  });
  for (const auto& [name, arr] : arrays)
    if (!used.count(name))
      throw std::runtime_error("agent file: unexpected array '" + name + "'");
  return agent;
}

}  // namespace fdrl
