// Command-line front end: model export, open-loop simulation, training,
// evaluation, and cross-case comparison over the fdrl_core library.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "fdrl/config.hpp"
#include "fdrl/delay_augment.hpp"
#include "fdrl/evaluate.hpp"
#include "fdrl/io_util.hpp"
#include "fdrl/plot.hpp"

namespace {

fdrl::Config load_config(const std::string& path) {
  if (path.empty()) return fdrl::Config{};
  return fdrl::Config::from_file(path);
}

fdrl::PlantParams plant_from_config(const fdrl::Config& cfg) {
  fdrl::PlantParams p{.t_p = 0.049, .t_q = 0.563, .k_z = 0.84, .tau_i = 0.0, .tau_o = 0.05,
                      .u_max = 6.57};
  p.t_p = cfg.number("t_p", p.t_p);
  p.t_q = cfg.number("t_q", p.t_q);
  p.k_z = cfg.number("k_z", p.k_z);
  p.tau_i = cfg.number("tau_i", p.tau_i);
  p.tau_o = cfg.number("tau_o", p.tau_o);
  p.u_max = cfg.number("u_max", p.u_max);
  return p;
}

fdrl::EnvConfig env_from_config(const fdrl::Config& cfg) {
  fdrl::EnvConfig env;
  env.params = plant_from_config(cfg);
  env.z_ref = cfg.number("z_ref", env.z_ref);
  env.episode_length = cfg.number("episode_length", env.episode_length);
  env.error_coordinates = cfg.flag("error_coordinates", env.error_coordinates);
  return env;
}

fdrl::HyperParams hyper_from_config(const fdrl::Config& cfg, double u_max) {
  fdrl::HyperParams h = fdrl::default_hyper(u_max);
  h.polyak = cfg.number("polyak", h.polyak);
  h.discount = cfg.number("discount", h.discount);
  h.lr_actor = cfg.number("lr_actor", h.lr_actor);
  h.lr_critic = cfg.number("lr_critic", h.lr_critic);
  h.buffer_capacity = static_cast<int>(cfg.integer("buffer_capacity", h.buffer_capacity));
  h.batch_size = static_cast<int>(cfg.integer("batch_size", h.batch_size));
  h.ou_theta = cfg.number("ou_theta", h.ou_theta);
  h.ou_sigma = cfg.number("ou_sigma", h.ou_sigma);
  h.episodes = static_cast<int>(cfg.integer("episodes", h.episodes));
  h.actor_hidden1 = static_cast<int>(cfg.integer("actor_hidden1", h.actor_hidden1));
  h.actor_hidden2 = static_cast<int>(cfg.integer("actor_hidden2", h.actor_hidden2));
  h.critic_state_hidden1 =
      static_cast<int>(cfg.integer("critic_state_hidden1", h.critic_state_hidden1));
  h.critic_state_hidden2 =
      static_cast<int>(cfg.integer("critic_state_hidden2", h.critic_state_hidden2));
  h.critic_action_hidden =
      static_cast<int>(cfg.integer("critic_action_hidden", h.critic_action_hidden));
  h.critic_joint_hidden1 =
      static_cast<int>(cfg.integer("critic_joint_hidden1", h.critic_joint_hidden1));
  h.critic_joint_hidden2 =
      static_cast<int>(cfg.integer("critic_joint_hidden2", h.critic_joint_hidden2));
  return h;
}

void write_matrix(std::ostream& out, const char* name, const Eigen::MatrixXd& m) {
  out << name << ' ' << m.rows() << ' ' << m.cols() << '\n';
  char buf[32];
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      std::snprintf(buf, sizeof buf, "%.17g", m(i, j));
      out << (j ? "," : "") << buf;
    }
    out << '\n';
  }
}

struct DiscretizeArgs {
  double tp = 0.049, tq = 0.563, kz = 0.84, tau_i = 0.0, tau_o = 0.0, h = 0.06;
  std::string out;
};

void run_discretize(const DiscretizeArgs& a) {
  const fdrl::PlantParams params{.t_p = a.tp, .t_q = a.tq, .k_z = a.kz, .tau_i = a.tau_i,
                                 .tau_o = a.tau_o, .u_max = 1.0};
  const fdrl::DiscreteAugmentedSystem sys =
      (a.tau_i == 0.0 && a.tau_o == 0.0) ? fdrl::build_delay_free(params, a.h)
                                         : fdrl::build_augmented(params, a.h);

  fdrl::AtomicFile file(a.out);
  auto& out = file.stream();
  out << "# exact discrete-time model of the delayed plant\n";
  out << "h " << a.h << '\n';
  out << "tau_i " << a.tau_i << '\n';
  out << "tau_o " << a.tau_o << '\n';
  out << "blocks";
  for (const auto& b : sys.layout.blocks)
    out << ' ' << to_string(b.kind) << ':' << b.width << '@' << b.offset;
  out << '\n';
  write_matrix(out, "a_e", sys.a_e);
  write_matrix(out, "b_e", sys.b_e);
  write_matrix(out, "c_e", sys.c_e);
  file.commit();

  std::cout << "wrote " << a.out << ": " << sys.a_e.rows() << " states, "
            << sys.layout.blocks.size() << " blocks\n";
}

struct SimulateArgs {
  std::string config, schedule, out;
};

// each schedule line: `command hold_seconds`
std::vector<std::pair<double, double>> read_schedule(const std::string& path) {
  std::istringstream in(fdrl::read_text_file(path));
  std::vector<std::pair<double, double>> schedule;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    double command = 0, hold = 0;
    if (!(ls >> command)) continue;  // blank or comment-only
    if (!(ls >> hold))
      throw std::runtime_error("schedule '" + path + "' line " + std::to_string(line_no) +
                               ": expected 'command hold_seconds'");
    schedule.emplace_back(command, hold);
  }
  if (schedule.empty())
    throw std::runtime_error("schedule '" + path + "' contains no (command, hold) pairs");
  return schedule;
}

void run_simulate(const SimulateArgs& a) {
  const fdrl::Config cfg = load_config(a.config);
  const auto schedule = read_schedule(a.schedule);

  fdrl::SimulatorConfig sim_cfg;
  sim_cfg.params = plant_from_config(cfg);
  sim_cfg.base_step = cfg.number("base_step", sim_cfg.base_step);
  sim_cfg.episode_length = 0;
  for (const auto& [command, hold] : schedule) sim_cfg.episode_length += hold;

  fdrl::Trajectory traj;
  for (const auto& s : fdrl::run_open_loop(sim_cfg, schedule))
    traj.push_back({s.time, s.measured(0), s.measured(1), s.measured(2), s.applied, 0.0});
  fdrl::write_trajectory_csv(a.out, traj, false);
  std::cout << "wrote " << a.out << ": " << traj.size() << " samples over "
            << sim_cfg.episode_length << " s\n";
}

struct TrainArgs {
  std::string case_name, config, out_agent, log;
  std::uint64_t seed = 0;
  int episodes = -1;  // -1: take the config value
};

void run_train(const TrainArgs& a) {
  const fdrl::Config cfg = load_config(a.config);
  fdrl::EnvConfig env_cfg = env_from_config(cfg);
  env_cfg.case_id = fdrl::parse_case(a.case_name);
  env_cfg.variant = fdrl::PlantVariant::training;
  env_cfg.seed = a.seed;
  fdrl::Environment env(env_cfg);

  fdrl::HyperParams hyper = hyper_from_config(cfg, env_cfg.params.u_max);
  const int episodes = a.episodes >= 0 ? a.episodes : hyper.episodes;

  fdrl::AgentBundle agent = fdrl::init_agent(env.observation_width(), hyper, a.seed);
  const auto log = fdrl::train(agent, env, episodes);
  if (!a.log.empty()) fdrl::write_training_log_csv(a.log, log);
  fdrl::save_agent(agent, a.out_agent);

  std::cout << "trained " << to_string(env_cfg.case_id) << " seed " << a.seed << " for "
            << episodes << " episodes";
  if (!log.empty())
    std::cout << "; final return " << log.back().episode_return << " after "
              << log.back().wall_time << " s";
  std::cout << "; agent: " << a.out_agent << '\n';
}

struct EvaluateArgs {
  std::string agent, case_name, plant = "delayed", config, out_report, out_traj;
  bool plot = false;
};

void run_evaluate(const EvaluateArgs& a) {
  const fdrl::Config cfg = load_config(a.config);
  fdrl::EnvConfig env_cfg = env_from_config(cfg);
  env_cfg.case_id = fdrl::parse_case(a.case_name);
  env_cfg.variant = fdrl::parse_plant_variant(a.plant);

  fdrl::AgentBundle agent = fdrl::load_agent(a.agent);
  fdrl::Trajectory traj;
  fdrl::CaseReport report = fdrl::evaluate_agent(agent, env_cfg, &traj);
  report.agent_path = a.agent;
  report.trajectory_path = a.out_traj;

  fdrl::write_trajectory_csv(a.out_traj, traj, true);
  fdrl::write_case_report(a.out_report, report);
  if (a.plot) {
    const std::string svg =
        std::filesystem::path(a.out_traj).replace_extension(".svg").string();
    const std::string title = std::string(to_string(report.case_id)) + "/" +
                              to_string(report.variant) + " seed " +
                              std::to_string(report.seed);
    fdrl::write_trajectory_svg(svg, traj, report.z_ref, report.u_max, title);
    std::cout << "plot: " << svg << '\n';
  }

  const auto& m = report.metrics;
  std::cout << to_string(report.case_id) << "/" << to_string(report.variant)
            << ": rise_time " << m.rise_time << " s, settle_rms_pos " << m.settle_rms_pos
            << " m, saturation_duty " << m.saturation_duty << ", sign_changes "
            << m.action_sign_change_rate << "/s\n";
}

struct CompareArgs {
  std::vector<std::string> reports;
  std::string out;
};

void run_compare(const CompareArgs& a) {
  std::vector<fdrl::CaseReport> reports;
  reports.reserve(a.reports.size());
  for (const auto& path : a.reports) reports.push_back(fdrl::read_case_report(path));

  fdrl::AtomicFile file(a.out);
  file.stream() << fdrl::comparison_csv(reports);
  file.commit();
  std::cout << fdrl::comparison_table(reports);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"discrete delayed-plant models, simulation, and DDPG case studies"};
  app.require_subcommand(1);
  // --h is a model option below, so help loses its short form everywhere
  app.set_help_flag("--help", "print help");

  DiscretizeArgs dis;
  auto* discretize = app.add_subcommand("discretize", "export the exact discrete model");
  discretize->set_help_flag("--help", "print help");
  discretize->add_option("--tp", dis.tp, "position time constant [s]");
  discretize->add_option("--tq", dis.tq, "velocity time constant [s]");
  discretize->add_option("--kz", dis.kz, "steady-state gain");
  discretize->add_option("--tau-i", dis.tau_i, "input delay [s]");
  discretize->add_option("--tau-o", dis.tau_o, "output delay [s]");
  discretize->add_option("--h", dis.h, "sampling period [s]");
  discretize->add_option("--out", dis.out, "output model file")->required();

  SimulateArgs sim;
  auto* simulate = app.add_subcommand("simulate", "run an open-loop command schedule");
  simulate->add_option("--config", sim.config, "key=value config file");
  simulate->add_option("--schedule", sim.schedule, "text file of 'hold command' lines")
      ->required();
  simulate->add_option("--out", sim.out, "output trajectory csv")->required();

  TrainArgs tr;
  auto* train = app.add_subcommand("train", "train a DDPG agent for one case");
  train->add_option("--case", tr.case_name, "observation regime")
      ->required()
      ->check(CLI::IsMember({"i", "ii", "iii", "iv"}));
  train->add_option("--seed", tr.seed, "rng seed");
  train->add_option("--episodes", tr.episodes, "episode count (default from config)");
  train->add_option("--config", tr.config, "key=value config file");
  train->add_option("--out-agent", tr.out_agent, "agent output file")->required();
  train->add_option("--log", tr.log, "training log csv");

  EvaluateArgs ev;
  auto* evaluate = app.add_subcommand("evaluate", "score a trained agent");
  evaluate->add_option("--agent", ev.agent, "agent file")->required();
  evaluate->add_option("--case", ev.case_name, "observation regime")
      ->required()
      ->check(CLI::IsMember({"i", "ii", "iii", "iv"}));
  evaluate->add_option("--plant", ev.plant, "which plant to run against")
      ->check(CLI::IsMember({"delayed", "delay-free", "training"}));
  evaluate->add_option("--config", ev.config, "key=value config file");
  evaluate->add_option("--out-report", ev.out_report, "report json")->required();
  evaluate->add_option("--out-traj", ev.out_traj, "trajectory csv")->required();
  evaluate->add_flag("--plot", ev.plot, "also write an svg next to the trajectory");

  CompareArgs cmp;
  auto* compare = app.add_subcommand("compare", "tabulate evaluation reports");
  compare->add_option("--reports", cmp.reports, "report json files")
      ->required()
      ->expected(-2);
  compare->add_option("--out", cmp.out, "comparison csv")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (discretize->parsed()) run_discretize(dis);
    if (simulate->parsed()) run_simulate(sim);
    if (train->parsed()) run_train(tr);
    if (evaluate->parsed()) run_evaluate(ev);
    if (compare->parsed()) run_compare(cmp);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
