#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "fdrl/metrics.hpp"
#include "fdrl/rl_env.hpp"

namespace fdrl {

/// Everything one evaluation run produced, ready for the comparison stage.
struct CaseReport {
  CaseId case_id = CaseId::case_i;
  PlantVariant variant = PlantVariant::delayed;
  std::uint64_t seed = 0;
  std::string agent_path;
  std::string trajectory_path;
  double z_ref = 1.0;
  double u_max = 0.0;
  StepMetrics metrics{};
};

/// JSON on disk; infinities are encoded as the strings "inf" / "-inf".
void write_case_report(const std::string& path, const CaseReport& report);
CaseReport read_case_report(const std::string& path);

/// One row per report plus a rise-time ratio against the median of the
/// finite rise times. Throws std::invalid_argument on fewer than two rows.
std::string comparison_csv(const std::vector<CaseReport>& reports);
std::string comparison_table(const std::vector<CaseReport>& reports);

}  // namespace fdrl
