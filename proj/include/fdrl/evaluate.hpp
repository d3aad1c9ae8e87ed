#pragma once

#include "fdrl/ddpg.hpp"
#include "fdrl/report.hpp"

namespace fdrl {

/// Runs one noise-free episode of `agent` in the environment described by
/// `cfg` and returns the scored report. The dense base-step trace (including
/// the initial state) is appended to *trajectory when given. Throws
/// std::invalid_argument when the agent's observation width does not match
/// the environment.
CaseReport evaluate_agent(AgentBundle& agent, const EnvConfig& cfg,
                          Trajectory* trajectory = nullptr);

}  // namespace fdrl
