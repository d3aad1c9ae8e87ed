#include "fdrl/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>

#include "fdrl/io_util.hpp"
#include "json.hpp"

namespace fdrl {
namespace {

using nlohmann::json;

template <typename Metrics, typename F>
void visit_metrics(Metrics& m, F&& f) {
  f("rise_time", m.rise_time);
  f("overshoot", m.overshoot);
  f("settle_rms_pos", m.settle_rms_pos);
  f("settle_rms_vel", m.settle_rms_vel);
  f("settle_amplitude", m.settle_amplitude);
  f("dominant_period", m.dominant_period);
  f("action_sign_change_rate", m.action_sign_change_rate);
  f("saturation_duty", m.saturation_duty);
  f("settle_saturation_duty", m.settle_saturation_duty);
}

json encode_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return v;
}

double decode_double(const json& j, const std::string& what) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) {
    const auto& s = j.get_ref<const std::string&>();
    if (s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
    if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
  }
  throw std::runtime_error("case report: field '" + what + "' is not a number");
}

std::string fmt(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

std::string row_label(const CaseReport& r) {
  return std::string(to_string(r.case_id)) + "/" + to_string(r.variant);
}

double median_finite_rise(const std::vector<CaseReport>& reports) {
  std::vector<double> rises;
  for (const auto& r : reports)
    if (std::isfinite(r.metrics.rise_time)) rises.push_back(r.metrics.rise_time);
  if (rises.empty()) return std::numeric_limits<double>::infinity();
  std::sort(rises.begin(), rises.end());
  const size_t n = rises.size();
  return n % 2 ? rises[n / 2] : 0.5 * (rises[n / 2 - 1] + rises[n / 2]);
}

}  // namespace

void write_case_report(const std::string& path, const CaseReport& report) {
  json j;
  j["case"] = to_string(report.case_id);
  j["plant"] = to_string(report.variant);
  j["seed"] = report.seed;
  j["agent"] = report.agent_path;
  j["trajectory"] = report.trajectory_path;
  j["z_ref"] = encode_double(report.z_ref);
  j["u_max"] = encode_double(report.u_max);
  json metrics;
  visit_metrics(report.metrics, [&](const char* name, const double& v) {
    metrics[name] = encode_double(v);
  });
  j["metrics"] = std::move(metrics);

  AtomicFile file(path);
  file.stream() << j.dump(2) << '\n';
  file.commit();
}

CaseReport read_case_report(const std::string& path) {
  json j;
  try {
    j = json::parse(read_text_file(path));
  } catch (const json::parse_error& err) {
    throw std::runtime_error("case report '" + path + "': " + err.what());
  }
  CaseReport report;
  report.case_id = parse_case(j.at("case").get<std::string>());
  report.variant = parse_plant_variant(j.at("plant").get<std::string>());
  report.seed = j.at("seed").get<std::uint64_t>();
  report.agent_path = j.at("agent").get<std::string>();
  report.trajectory_path = j.at("trajectory").get<std::string>();
  report.z_ref = decode_double(j.at("z_ref"), "z_ref");
  report.u_max = decode_double(j.at("u_max"), "u_max");
  const json& metrics = j.at("metrics");
  visit_metrics(report.metrics, [&](const char* name, double& v) {
    v = decode_double(metrics.at(name), name);
  });
  return report;
}

std::string comparison_csv(const std::vector<CaseReport>& reports) {
  if (reports.size() < 2)
    throw std::invalid_argument("comparison needs at least two reports");
  const double median = median_finite_rise(reports);
  std::string out = "case,plant,seed";
  visit_metrics(reports[0].metrics,
                [&](const char* name, const double&) { out += std::string(",") + name; });
  out += ",rise_over_median\n";
  for (const auto& r : reports) {
    out += std::string(to_string(r.case_id)) + "," + to_string(r.variant) + "," +
           std::to_string(r.seed);
    visit_metrics(r.metrics, [&](const char*, const double& v) { out += "," + fmt(v); });
    out += "," + fmt(r.metrics.rise_time / median) + "\n";
  }
  return out;
}

std::string comparison_table(const std::vector<CaseReport>& reports) {
  if (reports.size() < 2)
    throw std::invalid_argument("comparison needs at least two reports");
  const double median = median_finite_rise(reports);

  std::vector<std::string> names{"run", "seed"};
  visit_metrics(reports[0].metrics,
                [&](const char* name, const double&) { names.emplace_back(name); });
  names.emplace_back("rise_over_median");

  std::vector<std::vector<std::string>> rows;
  for (const auto& r : reports) {
    std::vector<std::string> row{row_label(r), std::to_string(r.seed)};
    visit_metrics(r.metrics, [&](const char*, const double& v) { row.push_back(fmt(v)); });
    row.push_back(fmt(r.metrics.rise_time / median));
    rows.push_back(std::move(row));
  }

  std::vector<size_t> width(names.size());
  for (size_t c = 0; c < names.size(); ++c) {
    width[c] = names[c].size();
    for (const auto& row : rows) width[c] = std::max(width[c], row[c].size());
  }
  std::string out;
  auto emit = [&](const std::vector<std::string>& row) {
    for (size_t c = 0; c < row.size(); ++c) {
      out += row[c];
      out.append(width[c] - row[c].size() + (c + 1 < row.size() ? 2 : 0), ' ');
    }
    out += '\n';
  };
  emit(names);
  for (const auto& row : rows) emit(row);
  return out;
}

}  // namespace fdrl
