#include "fdrl/plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>
#include <vector>

#include "fdrl/io_util.hpp"

namespace fdrl {
namespace {

constexpr int kWidth = 900;
constexpr int kPanelHeight = 200;
constexpr int kGap = 18;
constexpr int kMarginLeft = 64, kMarginRight = 16, kMarginTop = 28, kMarginBottom = 34;
constexpr size_t kMaxPoints = 2000;

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

struct Panel {
  const char* label;
  std::vector<double> values;   // one per kept sample
  std::vector<double> guides;   // horizontal reference lines
};

}  // namespace

void write_trajectory_svg(const std::string& path, const Trajectory& traj, double z_ref,
                          double u_max, const std::string& title) {
  if (traj.size() < 2)
    throw std::invalid_argument("write_trajectory_svg: need at least two samples");

  // thin uniformly so even 12.6 s at the base step stays a modest polyline
  const size_t stride = std::max<size_t>(1, (traj.size() + kMaxPoints - 1) / kMaxPoints);
  std::vector<size_t> keep;
  for (size_t i = 0; i < traj.size(); i += stride) keep.push_back(i);
  if (keep.back() != traj.size() - 1) keep.push_back(traj.size() - 1);

  std::vector<double> times(keep.size());
  for (size_t k = 0; k < keep.size(); ++k) times[k] = traj[keep[k]].time;

  Panel panels[3] = {
      {"z [m]", {}, {z_ref}},
      {"z_dot [m/s]", {}, {0.0}},
      {"u [-]", {}, {u_max, -u_max, 0.0}},
  };
  for (size_t k : keep) {
    panels[0].values.push_back(traj[k].z);
    panels[1].values.push_back(traj[k].z_dot);
    panels[2].values.push_back(traj[k].u);
  }

  const double t_lo = times.front(), t_hi = times.back();
  const int total_height = kMarginTop + 3 * kPanelHeight + 2 * kGap + kMarginBottom;
  const double plot_w = kWidth - kMarginLeft - kMarginRight;

  std::string svg;
  svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + std::to_string(kWidth) +
         "\" height=\"" + std::to_string(total_height) + "\" viewBox=\"0 0 " +
         std::to_string(kWidth) + " " + std::to_string(total_height) + "\">\n";
  svg += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  if (!title.empty())
    svg += "<text x=\"" + std::to_string(kWidth / 2) +
           "\" y=\"18\" text-anchor=\"middle\" font-family=\"monospace\" font-size=\"14\">" +
           title + "</text>\n";

  const char* stroke[3] = {"#1f77b4", "#2ca02c", "#d62728"};
  for (int p = 0; p < 3; ++p) {
    const Panel& panel = panels[p];
    const int top = kMarginTop + p * (kPanelHeight + kGap);

    double lo = *std::min_element(panel.values.begin(), panel.values.end());
    double hi = *std::max_element(panel.values.begin(), panel.values.end());
    for (double g : panel.guides) {
      lo = std::min(lo, g);
      hi = std::max(hi, g);
    }
    if (hi - lo < 1e-9) {
      hi += 0.5;
      lo -= 0.5;
    }
    const double pad = 0.06 * (hi - lo);
    lo -= pad;
    hi += pad;

    auto sx = [&](double t) { return kMarginLeft + (t - t_lo) / (t_hi - t_lo) * plot_w; };
    auto sy = [&](double v) { return top + (hi - v) / (hi - lo) * kPanelHeight; };

    svg += "<rect x=\"" + std::to_string(kMarginLeft) + "\" y=\"" + std::to_string(top) +
           "\" width=\"" + num(plot_w) + "\" height=\"" + std::to_string(kPanelHeight) +
           "\" fill=\"none\" stroke=\"#888\"/>\n";
    for (double g : panel.guides)
      svg += "<line x1=\"" + std::to_string(kMarginLeft) + "\" y1=\"" + num(sy(g)) + "\" x2=\"" +
             num(kMarginLeft + plot_w) + "\" y2=\"" + num(sy(g)) +
             "\" stroke=\"#bbb\" stroke-dasharray=\"4 3\"/>\n";

    svg += "<polyline fill=\"none\" stroke=\"";
    svg += stroke[p];
    svg += "\" stroke-width=\"1.2\" points=\"";
    for (size_t k = 0; k < times.size(); ++k) {
      if (k) svg += ' ';
      svg += num(sx(times[k])) + "," + num(sy(panel.values[k]));
    }
    svg += "\"/>\n";

    svg += "<text x=\"8\" y=\"" + std::to_string(top + 14) +
           "\" font-family=\"monospace\" font-size=\"12\">" + panel.label + "</text>\n";
    svg += "<text x=\"8\" y=\"" + num(sy(hi - pad)) +
           "\" font-family=\"monospace\" font-size=\"10\">" + num(hi - pad) + "</text>\n";
    svg += "<text x=\"8\" y=\"" + num(sy(lo + pad)) +
           "\" font-family=\"monospace\" font-size=\"10\">" + num(lo + pad) + "</text>\n";
  }

  const int axis_y = kMarginTop + 3 * kPanelHeight + 2 * kGap;
  svg += "<text x=\"" + std::to_string(kMarginLeft) + "\" y=\"" + std::to_string(axis_y + 24) +
         "\" font-family=\"monospace\" font-size=\"12\">" + num(t_lo) + " s</text>\n";
  svg += "<text x=\"" + num(kMarginLeft + plot_w) + "\" y=\"" + std::to_string(axis_y + 24) +
         "\" text-anchor=\"end\" font-family=\"monospace\" font-size=\"12\">" + num(t_hi) +
         " s</text>\n";
  svg += "</svg>\n";

  AtomicFile file(path);
  file.stream() << svg;
  file.commit();
}

}  // namespace fdrl
