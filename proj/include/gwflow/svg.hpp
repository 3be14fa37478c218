// Copyright 2026 The gwflow Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef GWFLOW_SVG_HPP
#define GWFLOW_SVG_HPP

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "gwflow/coinc.hpp"

namespace gwflow {

/// Significance annotations for the top axis: (statistic, sigma) pairs.
using SigmaTicks = std::vector<std::pair<double, double>>;

namespace svg_detail {

inline std::string num(double v) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

}  // namespace svg_detail

/// Renders the search histogram: foreground counts as discrete markers,
/// mean background per trial as a step line, log-scale y, sigma values along
/// the top axis, and a label on the loudest event. Self-contained SVG with
/// no plotting dependency.
inline std::string render_histogram_svg(const HistogramData& h, const SigmaTicks& sigma_ticks) {
  using svg_detail::num;
  const double width = 720, height = 480;
  const double ml = 70, mr = 30, mt = 50, mb = 55;
  const double pw = width - ml - mr, ph = height - mt - mb;

  double x_lo = 8.0, x_hi = 10.0;
  if (!h.bins.empty()) {
    x_lo = h.bins.front().left_edge;
    x_hi = h.bins.back().left_edge + h.bin_width;
  }
  double y_min = 1e300, y_max = 0.0;
  for (const auto& b : h.bins) {
    if (b.fg_count > 0) {
      y_min = std::min(y_min, static_cast<double>(b.fg_count));
      y_max = std::max(y_max, static_cast<double>(b.fg_count));
    }
    if (b.mean_bg_per_trial > 0.0) {
      y_min = std::min(y_min, b.mean_bg_per_trial);
      y_max = std::max(y_max, b.mean_bg_per_trial);
    }
  }
  if (!(y_max > 0.0)) {
    y_min = 0.1;
    y_max = 10.0;
  }
  const double ly_lo = std::floor(std::log10(y_min)) - 0.3;
  const double ly_hi = std::ceil(std::log10(y_max)) + 0.3;

  auto x_of = [&](double stat) { return ml + (stat - x_lo) / (x_hi - x_lo) * pw; };
  auto y_of = [&](double v) {
    const double ly = std::log10(std::max(v, 1e-300));
    return mt + (ly_hi - ly) / (ly_hi - ly_lo) * ph;
  };

  std::string s;
  s += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  s += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + num(width) + "\" height=\"" +
       num(height) + "\" viewBox=\"0 0 " + num(width) + " " + num(height) + "\">\n";
  s += "<rect x=\"0\" y=\"0\" width=\"" + num(width) + "\" height=\"" + num(height) +
       "\" fill=\"white\"/>\n";

  // Frame.
  s += "<rect x=\"" + num(ml) + "\" y=\"" + num(mt) + "\" width=\"" + num(pw) + "\" height=\"" +
       num(ph) + "\" fill=\"none\" stroke=\"black\" stroke-width=\"1\"/>\n";

  // x ticks at whole statistics, thinned on wide ranges.
  const double tick_step = (x_hi - x_lo) > 24.0 ? 4.0 : (x_hi - x_lo) > 12.0 ? 2.0 : 1.0;
  for (double t = std::ceil(x_lo); t <= x_hi + 1e-9; t += tick_step) {
    const double x = x_of(t);
    char lbl[32];
    std::snprintf(lbl, sizeof(lbl), "%g", t);
    s += "<line x1=\"" + num(x) + "\" y1=\"" + num(mt + ph) + "\" x2=\"" + num(x) + "\" y2=\"" +
         num(mt + ph + 5) + "\" stroke=\"black\"/>\n";
    s += "<text x=\"" + num(x) + "\" y=\"" + num(mt + ph + 20) +
         "\" font-size=\"12\" text-anchor=\"middle\">" + lbl + "</text>\n";
  }
  s += "<text x=\"" + num(ml + pw / 2) + "\" y=\"" + num(height - 12) +
       "\" font-size=\"14\" text-anchor=\"middle\">detection statistic</text>\n";

  // y ticks at powers of ten.
  for (int e = static_cast<int>(std::ceil(ly_lo)); e <= static_cast<int>(std::floor(ly_hi)); ++e) {
    const double y = y_of(std::pow(10.0, e));
    s += "<line x1=\"" + num(ml - 5) + "\" y1=\"" + num(y) + "\" x2=\"" + num(ml) + "\" y2=\"" +
         num(y) + "\" stroke=\"black\"/>\n";
    char lbl[32];
    std::snprintf(lbl, sizeof(lbl), "1e%d", e);
    s += "<text x=\"" + num(ml - 8) + "\" y=\"" + num(y + 4) +
         "\" font-size=\"12\" text-anchor=\"end\">" + lbl + "</text>\n";
  }
  s += "<text x=\"16\" y=\"" + num(mt + ph / 2) + "\" font-size=\"14\" text-anchor=\"middle\" " +
       "transform=\"rotate(-90 16 " + num(mt + ph / 2) + ")\">number of events</text>\n";

  // Top axis: significance in Gaussian standard deviations.
  for (const auto& [stat, sigma] : sigma_ticks) {
    if (stat < x_lo || stat > x_hi) continue;
    const double x = x_of(stat);
    s += "<line x1=\"" + num(x) + "\" y1=\"" + num(mt) + "\" x2=\"" + num(x) + "\" y2=\"" +
         num(mt - 5) + "\" stroke=\"black\"/>\n";
    char lbl[32];
    std::snprintf(lbl, sizeof(lbl), "%.0f&#963;", sigma);
    s += "<text x=\"" + num(x) + "\" y=\"" + num(mt - 10) +
         "\" font-size=\"12\" text-anchor=\"middle\">" + lbl + "</text>\n";
  }

  // Mean background per trial: step line across consecutive non-empty bins.
  std::string path;
  bool open = false;
  for (const auto& b : h.bins) {
    if (b.mean_bg_per_trial > 0.0) {
      const double y = y_of(b.mean_bg_per_trial);
      const double x0 = x_of(b.left_edge), x1 = x_of(b.left_edge + h.bin_width);
      if (!open) {
        path += "M " + num(x0) + " " + num(y) + " ";
        open = true;
      } else {
        path += "L " + num(x0) + " " + num(y) + " ";
      }
      path += "L " + num(x1) + " " + num(y) + " ";
    } else {
      open = false;
    }
  }
  if (!path.empty())
    s += "<path class=\"bg-line\" d=\"" + path + "\" fill=\"none\" stroke=\"black\" "
         "stroke-width=\"1.5\"/>\n";

  // Foreground: one marker per non-empty bin.
  for (const auto& b : h.bins) {
    if (b.fg_count == 0) continue;
    const double x = x_of(b.left_edge + 0.5 * h.bin_width);
    const double y = y_of(static_cast<double>(b.fg_count));
    s += "<circle class=\"fg-marker\" cx=\"" + num(x) + "\" cy=\"" + num(y) +
         "\" r=\"4\" fill=\"orange\" stroke=\"darkorange\"/>\n";
  }

  if (h.loudest_stat && !h.loudest_label.empty()) {
    const double x = std::min(x_of(*h.loudest_stat), ml + pw - 60.0);
    s += "<text x=\"" + num(x) + "\" y=\"" + num(mt + 18) +
         "\" font-size=\"13\" text-anchor=\"middle\">" + h.loudest_label + "</text>\n";
  }

  s += "</svg>\n";
  return s;
}

}  // namespace gwflow

#endif  // GWFLOW_SVG_HPP
