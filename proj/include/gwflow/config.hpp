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

#ifndef GWFLOW_CONFIG_HPP
#define GWFLOW_CONFIG_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "gwflow/coinc.hpp"
#include "gwflow/fft.hpp"
#include "gwflow/noise.hpp"
#include "gwflow/psd.hpp"
#include "gwflow/waveform.hpp"

namespace gwflow {

/// Parsed analysis configuration. Every module precondition that can be
/// checked from the configuration alone is enforced in validate(), so a
/// config that parses cleanly runs cleanly.
struct RunConfig {
  // [detectors]
  std::vector<DetectorId> detectors{DetectorId("H1"), DetectorId("L1")};
  double light_travel_time_s = 0.010;

  // [noise]
  NoiseModel noise;
  double sample_rate_hz = 4096.0;
  double duration_s = 256.0;
  std::int64_t start_s = 0;

  // [injections]
  bool injections_enabled = true;
  InjectionSpec injection;

  // [bank]
  double mc_min = 20.0;
  double mc_max = 45.0;
  int n_templates = 8;

  // [search]
  double f_low_hz = 20.0;
  double segment_s = 64.0;
  double edge_s = 8.0;
  double snr_threshold = 3.5;
  int chisq_bins = 16;
  double cluster_window_s = 1.0;
  double psd_segment_s = 4.0;
  double psd_overlap = 0.5;
  PsdAverage psd_average = PsdAverage::median;

  // [coinc]
  double timing_slack_s = 0.005;
  int n_slides = 200;
  double slide_step_s = 0.1;
  double hist_bin_width = 0.2;
  int background_bins = 1;
  bool remove_loudest = false;

  // [workflow]
  int psd_parts = 2;
  int bank_parts = 1;
  int max_retries = 5;
  double escalation_factor = 2.0;
  std::uint64_t seed = 42;
  std::map<std::string, double> request_mem_mb = {
      {"calculate_psd", 1024.0},  {"inspiral", 2048.0},
      {"hdf_trigger_merge", 1024.0}, {"statmap", 4096.0},
      {"distribute_background_bins", 4096.0}, {"plot_snrifar", 2048.0}};
  std::vector<std::string> inspiral_features{"fma4"};
  std::string corrupt_file;  // fault injection: corrupt this output once
  std::map<std::string, std::string> hidden_feature;  // transformation -> feature

  double coincidence_window_s() const { return light_travel_time_s + timing_slack_s; }
  double stride_s() const { return segment_s - 2.0 * edge_s; }
  int n_segments() const {
    return static_cast<int>(std::llround((duration_s - 2.0 * edge_s) / stride_s()));
  }
  double livetime_s() const { return duration_s - 2.0 * edge_s; }
  double analysis_start_s() const { return static_cast<double>(start_s) + edge_s; }

  void validate() const {
    if (detectors.size() != 2) throw make_error("config", "exactly two detectors required");
    if (detectors[0] == detectors[1]) throw make_error("config", "detectors must be distinct");
    if (light_travel_time_s <= 0.0) throw make_error("config", "light_travel_time_s must be > 0");

    noise.validate();
    if (sample_rate_hz < 1.0 || std::abs(sample_rate_hz - std::round(sample_rate_hz)) > 1e-9)
      throw make_error("config", "sample_rate_hz must be a whole number of Hz");
    const double n_f = duration_s * sample_rate_hz;
    if (duration_s <= 0.0 || std::abs(n_f - std::round(n_f)) > 1e-6)
      throw make_error("config", "duration_s * sample_rate_hz must be a positive integer");

    if (!(mc_min > 0.0) || !(mc_max > mc_min)) throw make_error("config", "need 0 < mc_min < mc_max");
    if (n_templates < 1) throw make_error("config", "n_templates must be >= 1");
    if (f_low_hz <= 0.0 || f_low_hz >= sample_rate_hz / 2.0)
      throw make_error("config", "f_low_hz must lie below Nyquist");
    if (isco_frequency_hz(mc_max) <= f_low_hz)
      throw make_error("config", "template band empty: ISCO of mc_max below f_low");

    const double seg_samples = segment_s * sample_rate_hz;
    if (!is_power_of_two(static_cast<std::size_t>(std::llround(seg_samples))) ||
        std::abs(seg_samples - std::round(seg_samples)) > 1e-6)
      throw make_error("config", "segment_s * sample_rate_hz must be a power of two");
    if (edge_s < 0.0 || 2.0 * edge_s >= segment_s)
      throw make_error("config", "edge_s must satisfy 0 <= 2*edge < segment");
    const double n_seg = (duration_s - 2.0 * edge_s) / stride_s();
    if (n_seg < 1.0 - 1e-9) throw make_error("config", "empty analysis: no segments fit");
    if (std::abs(n_seg - std::round(n_seg)) > 1e-9)
      throw make_error("config", "duration must tile into segments: (duration - 2*edge) / (segment - 2*edge) must be an integer");

    if (snr_threshold <= 0.0) throw make_error("config", "snr_threshold must be positive");
    if (chisq_bins < 2) throw make_error("config", "chisq_bins must be >= 2");
    if (cluster_window_s <= 0.0) throw make_error("config", "cluster_window_s must be positive");
    if (psd_overlap < 0.0 || psd_overlap > 0.9)
      throw make_error("config", "psd_overlap out of range [0, 0.9]");
    if (psd_parts < 1) throw make_error("config", "psd_parts must be >= 1");
    if (duration_s / psd_parts < 2.0 * psd_segment_s)
      throw make_error("config", "each PSD part needs at least 2 Welch segments");
    if (bank_parts < 1 || bank_parts > n_templates)
      throw make_error("config", "bank_parts must be in [1, n_templates]");

    if (injections_enabled) {
      injection.validate();
      const double t0 = analysis_start_s(), t1 = t0 + livetime_s();
      if (injection.coalescence_time_s < t0 || injection.coalescence_time_s >= t1)
        throw make_error("config", "coalescence time outside analyzed span");
      if (std::abs(injection.inter_detector_delay_s) > light_travel_time_s)
        throw make_error("config", "inter_detector_delay exceeds light travel time");
    }

    if (timing_slack_s < 0.0) throw make_error("config", "timing_slack_s must be >= 0");
    SlideConfig slides{n_slides, slide_step_s, livetime_s()};
    slides.validate(coincidence_window_s(), livetime_s());
    if (hist_bin_width <= 0.0) throw make_error("config", "hist_bin_width must be positive");
    if (background_bins < 1 || background_bins > n_templates)
      throw make_error("config", "background_bins must be in [1, n_templates]");

    if (max_retries < 0) throw make_error("config", "max_retries must be >= 0");
    if (escalation_factor < 1.0) throw make_error("config", "escalation_factor must be >= 1");
  }
};

namespace config_detail {

inline std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

inline std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::istringstream in(s);
  std::string item;
  while (std::getline(in, item, sep)) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

inline bool parse_bool(const std::string& v, const std::string& key) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw make_error("config", "bad boolean for key " + key + ": " + v);
}

}  // namespace config_detail

/// INI-style parser; unknown sections and keys are rejected by name.
inline RunConfig parse_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw make_error("config", "cannot open " + path);

  RunConfig cfg;
  std::string line, section;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    line = config_detail::trim(line);
    if (line.empty() || line[0] == '#' || line[0] == ';') continue;
    if (line.front() == '[') {
      if (line.back() != ']')
        throw make_error("config", "malformed section at line " + std::to_string(lineno));
      section = line.substr(1, line.size() - 2);
      static const std::set<std::string> known = {"detectors", "noise",  "injections", "bank",
                                                  "search",    "coinc",  "workflow"};
      if (!known.count(section)) throw make_error("config", "unknown section [" + section + "]");
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw make_error("config", "expected key=value at line " + std::to_string(lineno));
    const std::string key = config_detail::trim(line.substr(0, eq));
    const std::string val = config_detail::trim(line.substr(eq + 1));
    const std::string qual = section + "." + key;

    auto d = [&] { return std::stod(val); };
    auto i = [&] { return std::stoi(val); };

    if (qual == "detectors.names") {
      cfg.detectors.clear();
      for (const auto& t : config_detail::split(val, ',')) cfg.detectors.emplace_back(t);
    } else if (qual == "detectors.light_travel_time_s") {
      cfg.light_travel_time_s = d();
    } else if (qual == "noise.kind") {
      if (val == "white")
        cfg.noise.kind = NoiseModel::Kind::white;
      else if (val == "power-law")
        cfg.noise.kind = NoiseModel::Kind::power_law;
      else
        throw make_error("config", "unknown noise kind: " + val);
    } else if (qual == "noise.sigma") {
      cfg.noise.sigma = d();
    } else if (qual == "noise.f_ref_hz") {
      cfg.noise.f_ref_hz = d();
    } else if (qual == "noise.exponent") {
      cfg.noise.exponent = d();
    } else if (qual == "noise.floor") {
      cfg.noise.floor = d();
    } else if (qual == "noise.sample_rate_hz") {
      cfg.sample_rate_hz = d();
    } else if (qual == "noise.duration_s") {
      cfg.duration_s = d();
    } else if (qual == "noise.start_s") {
      cfg.start_s = std::stoll(val);
    } else if (qual == "injections.enabled") {
      cfg.injections_enabled = config_detail::parse_bool(val, qual);
    } else if (qual == "injections.chirp_mass") {
      cfg.injection.chirp_mass = d();
    } else if (qual == "injections.coalescence_time_s") {
      cfg.injection.coalescence_time_s = d();
    } else if (qual == "injections.phase") {
      cfg.injection.phase = d();
    } else if (qual == "injections.target_snr") {
      cfg.injection.target_snr = d();
    } else if (qual == "injections.inter_detector_delay_s") {
      cfg.injection.inter_detector_delay_s = d();
    } else if (qual == "bank.mc_min") {
      cfg.mc_min = d();
    } else if (qual == "bank.mc_max") {
      cfg.mc_max = d();
    } else if (qual == "bank.n_templates") {
      cfg.n_templates = i();
    } else if (qual == "search.f_low_hz") {
      cfg.f_low_hz = d();
    } else if (qual == "search.segment_s") {
      cfg.segment_s = d();
    } else if (qual == "search.edge_s") {
      cfg.edge_s = d();
    } else if (qual == "search.snr_threshold") {
      cfg.snr_threshold = d();
    } else if (qual == "search.chisq_bins") {
      cfg.chisq_bins = i();
    } else if (qual == "search.cluster_window_s") {
      cfg.cluster_window_s = d();
    } else if (qual == "search.psd_segment_s") {
      cfg.psd_segment_s = d();
    } else if (qual == "search.psd_overlap") {
      cfg.psd_overlap = d();
    } else if (qual == "search.psd_average") {
      if (val == "median")
        cfg.psd_average = PsdAverage::median;
      else if (val == "mean")
        cfg.psd_average = PsdAverage::mean;
      else
        throw make_error("config", "unknown psd_average: " + val);
    } else if (qual == "coinc.timing_slack_s") {
      cfg.timing_slack_s = d();
    } else if (qual == "coinc.n_slides") {
      cfg.n_slides = i();
    } else if (qual == "coinc.slide_step_s") {
      cfg.slide_step_s = d();
    } else if (qual == "coinc.hist_bin_width") {
      cfg.hist_bin_width = d();
    } else if (qual == "coinc.background_bins") {
      cfg.background_bins = i();
    } else if (qual == "coinc.remove_loudest") {
      cfg.remove_loudest = config_detail::parse_bool(val, qual);
    } else if (qual == "workflow.psd_parts") {
      cfg.psd_parts = i();
    } else if (qual == "workflow.bank_parts") {
      cfg.bank_parts = i();
    } else if (qual == "workflow.max_retries") {
      cfg.max_retries = i();
    } else if (qual == "workflow.escalation_factor") {
      cfg.escalation_factor = d();
    } else if (qual == "workflow.seed") {
      cfg.seed = std::stoull(val);
    } else if (qual == "workflow.inspiral_features") {
      cfg.inspiral_features = config_detail::split(val, ',');
    } else if (qual == "workflow.corrupt_file") {
      cfg.corrupt_file = val;
    } else if (qual == "workflow.hidden_feature") {
      // transformation:feature, e.g. inspiral:fma4
      const auto colon = val.find(':');
      if (colon == std::string::npos)
        throw make_error("config", "hidden_feature must be transformation:feature");
      cfg.hidden_feature[val.substr(0, colon)] = val.substr(colon + 1);
    } else if (section == "workflow" && key.rfind("mem_", 0) == 0 &&
               key.size() > 7 && key.substr(key.size() - 3) == "_mb") {
      const std::string transformation = key.substr(4, key.size() - 7);
      if (!cfg.request_mem_mb.count(transformation))
        throw make_error("config", "unknown key " + qual + " (no such transformation)");
      cfg.request_mem_mb[transformation] = d();
    } else {
      throw make_error("config", "unknown key " + qual);
    }
  }
  cfg.validate();
  return cfg;
}

}  // namespace gwflow

#endif  // GWFLOW_CONFIG_HPP
