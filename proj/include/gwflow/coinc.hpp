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

#ifndef GWFLOW_COINC_HPP
#define GWFLOW_COINC_HPP

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "gwflow/stats_math.hpp"
#include "gwflow/triggers.hpp"
#include "gwflow/types.hpp"

namespace gwflow {

/// Interval of coincident livetime; slide shifts wrap circularly inside it.
struct AnalyzedSpan {
  double start_s = 0.0;
  double duration_s = 0.0;

  double wrap(double t) const {
    double rel = std::fmod(t - start_s, duration_s);
    if (rel < 0.0) rel += duration_s;
    return start_s + rel;
  }
};

/// Two-detector coincident candidate. slide_index 0 is the zero-lag
/// (physical) analysis; h_index/l_index identify the constituent triggers in
/// the input lists.
struct CoincEvent {
  Trigger trigger_h;
  Trigger trigger_l;
  double dt_s = 0.0;  // t_h - shifted t_l
  double combined_stat = 0.0;
  int slide_index = 0;
  std::size_t h_index = 0;
  std::size_t l_index = 0;
};

struct SlideConfig {
  int n_slides = 200;
  double step_s = 0.1;
  double analyzed_time_s = 0.0;  // coincident livetime per slide

  void validate(double window_s, double span_duration_s) const {
    if (n_slides < 1) throw make_error("SlideConfig", "n_slides must be >= 1");
    if (step_s <= 2.0 * window_s) throw make_error("SlideConfig", "slides not independent");
    if (static_cast<double>(n_slides) * step_s > span_duration_s)
      throw make_error("SlideConfig", "slides exceed analyzed duration");
    if (!(analyzed_time_s > 0.0)) throw make_error("SlideConfig", "analyzed_time_s must be > 0");
  }
};

namespace coinc_detail {

inline void require_sorted(const std::vector<Trigger>& trigs, const char* which) {
  for (std::size_t i = 1; i < trigs.size(); ++i)
    if (trigs[i].end_time_s < trigs[i - 1].end_time_s)
      throw make_error("find_coincidences", std::string("unsorted input (") + which + ")");
}

}  // namespace coinc_detail

/// Pairs triggers with equal template id whose arrival times agree within
/// window_s after circularly shifting the second detector by shift_s. Each
/// trigger joins at most one coincidence: candidate pairs are taken loudest
/// combined statistic first (ties broken by time, then template id).
inline std::vector<CoincEvent> find_coincidences(const std::vector<Trigger>& trigs_h,
                                                 const std::vector<Trigger>& trigs_l,
                                                 double window_s, double shift_s,
                                                 const AnalyzedSpan& span) {
  if (!(window_s > 0.0)) throw make_error("find_coincidences", "window must be positive");
  if (!(span.duration_s > 0.0)) throw make_error("find_coincidences", "empty analyzed span");
  coinc_detail::require_sorted(trigs_h, "first detector");
  coinc_detail::require_sorted(trigs_l, "second detector");

  struct Candidate {
    double combined;
    double t_h;
    double t_shifted;
    int template_id;
    std::size_t hi, li;
  };
  std::vector<Candidate> candidates;
  for (std::size_t i = 0; i < trigs_h.size(); ++i) {
    for (std::size_t j = 0; j < trigs_l.size(); ++j) {
      if (trigs_h[i].template_id != trigs_l[j].template_id) continue;
      const double t_shifted = span.wrap(trigs_l[j].end_time_s + shift_s);
      if (std::abs(trigs_h[i].end_time_s - t_shifted) > window_s) continue;
      candidates.push_back({std::hypot(trigs_h[i].stat, trigs_l[j].stat),
                            trigs_h[i].end_time_s, t_shifted, trigs_h[i].template_id, i, j});
    }
  }
  std::sort(candidates.begin(), candidates.end(), [](const Candidate& a, const Candidate& b) {
    if (a.combined != b.combined) return a.combined > b.combined;
    if (a.t_h != b.t_h) return a.t_h < b.t_h;
    if (a.t_shifted != b.t_shifted) return a.t_shifted < b.t_shifted;
    if (a.template_id != b.template_id) return a.template_id < b.template_id;
    return a.hi < b.hi;
  });

  std::vector<bool> used_h(trigs_h.size(), false), used_l(trigs_l.size(), false);
  std::vector<CoincEvent> events;
  for (const auto& c : candidates) {
    if (used_h[c.hi] || used_l[c.li]) continue;
    used_h[c.hi] = used_l[c.li] = true;
    CoincEvent e;
    e.trigger_h = trigs_h[c.hi];
    e.trigger_l = trigs_l[c.li];
    e.dt_s = c.t_h - c.t_shifted;
    e.combined_stat = c.combined;
    e.slide_index = 0;
    e.h_index = c.hi;
    e.l_index = c.li;
    events.push_back(e);
  }
  std::sort(events.begin(), events.end(), [](const CoincEvent& a, const CoincEvent& b) {
    if (a.trigger_h.end_time_s != b.trigger_h.end_time_s)
      return a.trigger_h.end_time_s < b.trigger_h.end_time_s;
    return a.trigger_h.template_id < b.trigger_h.template_id;
  });
  return events;
}

struct BackgroundEstimate {
  std::vector<CoincEvent> events;   // slide_index in 1..n_slides
  double total_time_s = 0.0;        // n_slides * analyzed_time_s
};

/// Time-slide background: repeats the coincidence analysis at shifts
/// k*step_s for k = 1..n_slides (zero-lag excluded).
inline BackgroundEstimate estimate_background(const std::vector<Trigger>& trigs_h,
                                              const std::vector<Trigger>& trigs_l,
                                              double window_s, const SlideConfig& slides,
                                              const AnalyzedSpan& span) {
  slides.validate(window_s, span.duration_s);
  BackgroundEstimate bg;
  bg.total_time_s = static_cast<double>(slides.n_slides) * slides.analyzed_time_s;
  for (int k = 1; k <= slides.n_slides; ++k) {
    auto events =
        find_coincidences(trigs_h, trigs_l, window_s, static_cast<double>(k) * slides.step_s, span);
    for (auto& e : events) {
      e.slide_index = k;
      bg.events.push_back(e);
    }
  }
  return bg;
}

struct FarResult {
  double far_per_s = 0.0;
  bool is_lower_bound = false;  // no louder background event exists
};

/// FAR with the standard +1 convention: (1 + n_louder) / background time,
/// where background events count when their statistic >= stat.
inline FarResult far_of(double stat, const std::vector<double>& background_stats,
                        double total_background_time_s) {
  if (!(total_background_time_s > 0.0))
    throw make_error("far_of", "background time must be positive");
  std::size_t n_louder = 0;
  for (double b : background_stats)
    if (b >= stat) ++n_louder;
  FarResult r;
  r.far_per_s = static_cast<double>(1 + n_louder) / total_background_time_s;
  r.is_lower_bound = (n_louder == 0);
  return r;
}

struct SignificanceValue {
  double p_value = 0.0;
  double sigma = 0.0;
  bool capped = false;  // p hit the configured floor; sigma is a lower bound
};

/// Maps a FAR to a p-value over the foreground time, p = 1 - exp(-far*T),
/// and to one-sided Gaussian sigma. When p falls below p_floor (e.g. the
/// 1/(10 * trials) floor used by statmap) the result is reported at the
/// floor and flagged as a lower bound.
inline SignificanceValue significance(double far_per_s, double foreground_time_s,
                                      double p_floor = 0.0) {
  if (far_per_s < 0.0 || foreground_time_s <= 0.0)
    throw make_error("significance", "need far >= 0 and foreground time > 0");
  SignificanceValue out;
  out.p_value = -std::expm1(-far_per_s * foreground_time_s);
  if (p_floor > 0.0 && out.p_value < p_floor) {
    out.p_value = p_floor;
    out.capped = true;
  }
  if (!(out.p_value > 0.0))
    throw make_error("significance", "p-value underflow: supply a p_floor");
  out.sigma = sigma_from_p(out.p_value);
  return out;
}

struct SignificanceResult {
  double combined_stat = 0.0;
  double far_per_s = 0.0;
  double p_value = 0.0;
  double sigma = 0.0;
  bool is_lower_bound = false;
};

/// Per-event FAR and sigma for the foreground against the slide background.
/// With remove_loudest set, the loudest event's numbers are computed against
/// a background from which coincidences sharing either of its triggers are
/// excluded (closed-box style).
inline std::vector<SignificanceResult> statmap(const std::vector<CoincEvent>& foreground,
                                               const BackgroundEstimate& background,
                                               double foreground_time_s,
                                               bool remove_loudest = false) {
  if (!(foreground_time_s > 0.0)) throw make_error("statmap", "foreground time must be > 0");
  const double p_floor = foreground_time_s / (10.0 * background.total_time_s);

  std::vector<double> all_stats;
  all_stats.reserve(background.events.size());
  for (const auto& e : background.events) all_stats.push_back(e.combined_stat);

  std::size_t loudest = 0;
  for (std::size_t i = 1; i < foreground.size(); ++i)
    if (foreground[i].combined_stat > foreground[loudest].combined_stat) loudest = i;

  std::vector<SignificanceResult> results;
  results.reserve(foreground.size());
  for (std::size_t i = 0; i < foreground.size(); ++i) {
    const auto& ev = foreground[i];
    const std::vector<double>* stats = &all_stats;
    std::vector<double> reduced;
    if (remove_loudest && i == loudest) {
      for (const auto& b : background.events)
        if (b.h_index != ev.h_index && b.l_index != ev.l_index)
          reduced.push_back(b.combined_stat);
      stats = &reduced;
    }
    const FarResult far = far_of(ev.combined_stat, *stats, background.total_time_s);
    const SignificanceValue sig = significance(far.far_per_s, foreground_time_s, p_floor);
    results.push_back({ev.combined_stat, far.far_per_s, sig.p_value, sig.sigma,
                       far.is_lower_bound || sig.capped});
  }
  return results;
}

/// Background-binned variant: events compare only against background from
/// their own template-duration bin; the FAR carries an n_bins trials factor.
inline std::vector<SignificanceResult> statmap_binned(
    const std::vector<CoincEvent>& foreground, const BackgroundEstimate& background,
    const std::map<int, int>& bin_of_template, int n_bins, double foreground_time_s) {
  if (n_bins < 1) throw make_error("statmap_binned", "n_bins must be >= 1");
  if (!(foreground_time_s > 0.0))
    throw make_error("statmap_binned", "foreground time must be > 0");
  const double p_floor = foreground_time_s / (10.0 * background.total_time_s);

  auto bin_of = [&](int template_id) {
    auto it = bin_of_template.find(template_id);
    if (it == bin_of_template.end())
      throw make_error("statmap_binned", "template " + std::to_string(template_id) +
                                             " has no background bin");
    return it->second;
  };
  std::vector<std::vector<double>> binned(static_cast<std::size_t>(n_bins));
  for (const auto& e : background.events)
    binned.at(static_cast<std::size_t>(bin_of(e.trigger_h.template_id))).push_back(e.combined_stat);

  std::vector<SignificanceResult> results;
  results.reserve(foreground.size());
  for (const auto& ev : foreground) {
    const auto& stats = binned.at(static_cast<std::size_t>(bin_of(ev.trigger_h.template_id)));
    FarResult far = far_of(ev.combined_stat, stats, background.total_time_s);
    far.far_per_s *= static_cast<double>(n_bins);  // trials factor
    const SignificanceValue sig = significance(far.far_per_s, foreground_time_s, p_floor);
    results.push_back({ev.combined_stat, far.far_per_s, sig.p_value, sig.sigma,
                       far.is_lower_bound || sig.capped});
  }
  return results;
}

struct HistogramBin {
  double left_edge = 0.0;
  std::size_t fg_count = 0;
  double mean_bg_per_trial = 0.0;
};

struct HistogramData {
  double bin_width = 0.2;
  std::vector<HistogramBin> bins;
  std::optional<double> loudest_stat;
  std::string loudest_label;  // e.g. "> 2.6 sigma" when the FAR is a bound
};

/// Left-closed right-open binning of foreground counts and per-trial mean
/// background over [lo, hi).
inline HistogramData make_histogram(const std::vector<double>& foreground_stats,
                                    const std::vector<double>& background_stats, int n_slides,
                                    double bin_width, double lo, double hi) {
  if (!(bin_width > 0.0)) throw make_error("make_histogram", "bin width must be positive");
  if (!(hi > lo)) throw make_error("make_histogram", "empty range");
  if (n_slides < 1) throw make_error("make_histogram", "n_slides must be >= 1");

  HistogramData h;
  h.bin_width = bin_width;
  const auto n_bins = static_cast<std::size_t>(std::ceil((hi - lo) / bin_width - 1e-12));
  h.bins.resize(n_bins);
  for (std::size_t i = 0; i < n_bins; ++i)
    h.bins[i].left_edge = lo + static_cast<double>(i) * bin_width;

  auto bin_of = [&](double s) -> std::ptrdiff_t {
    if (s < lo) return -1;
    const auto b = static_cast<std::ptrdiff_t>(std::floor((s - lo) / bin_width));
    return b < static_cast<std::ptrdiff_t>(n_bins) ? b : -1;
  };
  for (double s : foreground_stats) {
    const auto b = bin_of(s);
    if (b >= 0) ++h.bins[static_cast<std::size_t>(b)].fg_count;
  }
  for (double s : background_stats) {
    const auto b = bin_of(s);
    if (b >= 0) h.bins[static_cast<std::size_t>(b)].mean_bg_per_trial += 1.0;
  }
  for (auto& b : h.bins) b.mean_bg_per_trial /= static_cast<double>(n_slides);

  if (!foreground_stats.empty())
    h.loudest_stat = *std::max_element(foreground_stats.begin(), foreground_stats.end());
  return h;
}

inline void write_histogram_csv(const HistogramData& h, const std::string& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw make_error("write_histogram_csv", "cannot open " + path);
  out << "bin_left,fg_count,mean_bg_per_trial\n";
  char buf[96];
  for (const auto& b : h.bins) {
    std::snprintf(buf, sizeof(buf), "%.9g,%zu,%.9g", b.left_edge, b.fg_count,
                  b.mean_bg_per_trial);
    out << buf << "\n";
  }
  if (!out) throw make_error("write_histogram_csv", "write failed for " + path);
}

// ---------------------------------------------------------------------------
// Results file: a metadata comment, then [foreground] and [background]
// sections.

struct CoincResults {
  int n_slides = 0;
  double background_time_s = 0.0;
  double foreground_time_s = 0.0;
  std::vector<CoincEvent> foreground;
  std::vector<SignificanceResult> foreground_stats;
  std::vector<CoincEvent> background;  // only combined_stat/slide_index survive io
};

inline void write_results(const CoincResults& r, const std::string& path) {
  if (r.foreground.size() != r.foreground_stats.size())
    throw make_error("write_results", "foreground/statistics size mismatch");
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw make_error("write_results", "cannot open " + path);
  char buf[256];
  std::snprintf(buf, sizeof(buf), "# meta n_slides=%d background_time_s=%.9g foreground_time_s=%.9g",
                r.n_slides, r.background_time_s, r.foreground_time_s);
  out << buf << "\n[foreground]\n";
  out << "template_id,end_time_h_s,end_time_l_s,dt_s,combined_stat,far_per_s,p_value,sigma,is_lower_bound\n";
  for (std::size_t i = 0; i < r.foreground.size(); ++i) {
    const auto& e = r.foreground[i];
    const auto& s = r.foreground_stats[i];
    std::snprintf(buf, sizeof(buf), "%d,%.6f,%.6f,%.9g,%.9g,%.9g,%.9g,%.9g,%d",
                  e.trigger_h.template_id, e.trigger_h.end_time_s, e.trigger_l.end_time_s,
                  e.dt_s, e.combined_stat, s.far_per_s, s.p_value, s.sigma,
                  s.is_lower_bound ? 1 : 0);
    out << buf << "\n";
  }
  out << "[background]\n";
  out << "combined_stat,slide_index\n";
  for (const auto& e : r.background) {
    std::snprintf(buf, sizeof(buf), "%.9g,%d", e.combined_stat, e.slide_index);
    out << buf << "\n";
  }
  if (!out) throw make_error("write_results", "write failed for " + path);
}

inline CoincResults read_results(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw make_error("read_results", "cannot open " + path);
  CoincResults r;
  std::string line;
  if (!std::getline(in, line) || line.rfind("# meta ", 0) != 0)
    throw make_error("read_results", "missing metadata line in " + path);
  {
    std::istringstream meta(line.substr(7));
    std::string kv;
    while (meta >> kv) {
      const auto eq = kv.find('=');
      if (eq == std::string::npos) continue;
      const std::string key = kv.substr(0, eq), val = kv.substr(eq + 1);
      if (key == "n_slides") r.n_slides = std::stoi(val);
      if (key == "background_time_s") r.background_time_s = std::stod(val);
      if (key == "foreground_time_s") r.foreground_time_s = std::stod(val);
    }
  }
  enum class Section { none, fg, bg } section = Section::none;
  bool header_pending = false;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (line == "[foreground]") {
      section = Section::fg;
      header_pending = true;
      continue;
    }
    if (line == "[background]") {
      section = Section::bg;
      header_pending = true;
      continue;
    }
    if (header_pending) {
      header_pending = false;
      continue;  // column header
    }
    std::istringstream row(line);
    std::string field;
    auto next = [&]() {
      if (!std::getline(row, field, ','))
        throw make_error("read_results", "malformed row: " + line);
      return field;
    };
    if (section == Section::fg) {
      CoincEvent e;
      SignificanceResult s;
      e.trigger_h.template_id = e.trigger_l.template_id = std::stoi(next());
      e.trigger_h.end_time_s = std::stod(next());
      e.trigger_l.end_time_s = std::stod(next());
      e.dt_s = std::stod(next());
      e.combined_stat = s.combined_stat = std::stod(next());
      s.far_per_s = std::stod(next());
      s.p_value = std::stod(next());
      s.sigma = std::stod(next());
      s.is_lower_bound = std::stoi(next()) != 0;
      r.foreground.push_back(e);
      r.foreground_stats.push_back(s);
    } else if (section == Section::bg) {
      CoincEvent e;
      e.combined_stat = std::stod(next());
      e.slide_index = std::stoi(next());
      r.background.push_back(e);
    } else {
      throw make_error("read_results", "row outside any section: " + line);
    }
  }
  return r;
}

}  // namespace gwflow

#endif  // GWFLOW_COINC_HPP
