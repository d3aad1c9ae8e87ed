#include "fdrl/trajectory.hpp"

#include "fdrl/io_util.hpp"

#include <cstdio>
#include <sstream>
#include <stdexcept>

namespace fdrl {
namespace {

// shortest decimal that round-trips a double
std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

void write_trajectory_csv(const std::string& path, const Trajectory& traj, bool include_reward) {
  AtomicFile file(path);
  auto& out = file.stream();
  out << (include_reward ? "time,z,z_dot,z_ddot,u,reward\n" : "time,z,z_dot,z_ddot,u\n");
  for (const auto& p : traj) {
    out << fmt(p.time) << ',' << fmt(p.z) << ',' << fmt(p.z_dot) << ',' << fmt(p.z_ddot) << ','
        << fmt(p.u);
    if (include_reward) out << ',' << fmt(p.reward);
    out << '\n';
  }
  file.commit();
}

Trajectory read_trajectory_csv(const std::string& path) {
  std::istringstream in(read_text_file(path));
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("trajectory '" + path + "' is empty");
  const bool with_reward = line.find("reward") != std::string::npos;
  if (line.rfind("time,z,z_dot,z_ddot,u", 0) != 0)
    throw std::runtime_error("trajectory '" + path + "' has unexpected header: " + line);

  Trajectory traj;
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    TrajectoryPoint p{};
    const int want = with_reward ? 6 : 5;
    const int got = std::sscanf(line.c_str(), "%lf,%lf,%lf,%lf,%lf,%lf", &p.time, &p.z, &p.z_dot,
                                &p.z_ddot, &p.u, &p.reward);
    if (got != want)
      throw std::runtime_error("trajectory '" + path + "' line " + std::to_string(lineno) +
                               " is malformed: " + line);
    traj.push_back(p);
  }
  return traj;
}

}  // namespace fdrl
