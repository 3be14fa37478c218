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

#ifndef GWFLOW_STAGES_HPP
#define GWFLOW_STAGES_HPP

#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "gwflow/coinc.hpp"
#include "gwflow/config.hpp"
#include "gwflow/engine.hpp"
#include "gwflow/filter.hpp"
#include "gwflow/noise.hpp"
#include "gwflow/plan.hpp"
#include "gwflow/psd.hpp"
#include "gwflow/strain_io.hpp"
#include "gwflow/svg.hpp"
#include "gwflow/triggers.hpp"
#include "gwflow/waveform.hpp"

namespace gwflow {

// ---------------------------------------------------------------------------
// Data manifest: path<TAB>sha256 per line.

inline void write_manifest(const std::map<std::string, Sha256>& m, const std::string& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw make_error("write_manifest", "cannot open " + path);
  for (const auto& [p, sha] : m) out << p << "\t" << to_hex(sha) << "\n";
  if (!out) throw make_error("write_manifest", "write failed for " + path);
}

inline std::map<std::string, Sha256> read_manifest(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw make_error("read_manifest", "cannot open " + path);
  std::map<std::string, Sha256> m;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto tab = line.find('\t');
    if (tab == std::string::npos) throw make_error("read_manifest", "malformed line: " + line);
    m[line.substr(0, tab)] = from_hex(line.substr(tab + 1));
  }
  return m;
}

/// Generates the per-detector strain files: colored noise from the model
/// plus the configured injection, with the inter-detector delay applied to
/// the second detector. Returns path -> payload checksum.
inline std::map<std::string, Sha256> generate_data(const RunConfig& cfg,
                                                   const std::string& out_dir) {
  std::map<std::string, Sha256> manifest;
  for (std::size_t d = 0; d < cfg.detectors.size(); ++d) {
    const auto& det = cfg.detectors[d];
    TimeSeries ts = generate_noise(cfg.noise, det, cfg.start_s, cfg.duration_s,
                                   cfg.sample_rate_hz, cfg.seed);
    if (cfg.injections_enabled) {
      const double df = cfg.sample_rate_hz / static_cast<double>(ts.samples.size());
      const PowerSpectrum psd =
          model_psd(cfg.noise, det, df, ts.samples.size() / 2 + 1, cfg.sample_rate_hz);
      InjectionSpec spec = cfg.injection;
      if (d == 1) spec.coalescence_time_s += spec.inter_detector_delay_s;
      ts = inject(ts, spec, psd, cfg.f_low_hz);
    }
    const std::string rel = strain_path(det);
    write_strain(ts, out_dir + "/" + rel);
    // The manifest carries whole-file digests (the payload digest lives in
    // the strain header); consumers re-verify against these on every read.
    manifest[rel] = sha256_file(out_dir + "/" + rel);
  }
  write_manifest(manifest, out_dir + "/manifest.txt");
  return manifest;
}

// ---------------------------------------------------------------------------
// Stage payloads

namespace stage_detail {

inline TimeSeries slice_series(const TimeSeries& ts, std::size_t offset, std::size_t count) {
  if (offset + count > ts.samples.size()) throw make_error("stage", "slice out of range");
  TimeSeries out;
  out.detector = ts.detector;
  out.dt = ts.dt;
  const double off_ns_f = static_cast<double>(offset) * ts.dt * 1e9;
  const auto off_ns = static_cast<std::int64_t>(std::llround(off_ns_f)) + ts.start_ns;
  out.start_s = ts.start_s + off_ns / 1000000000;
  out.start_ns = static_cast<std::uint32_t>(off_ns % 1000000000);
  out.samples.assign(ts.samples.begin() + static_cast<std::ptrdiff_t>(offset),
                     ts.samples.begin() + static_cast<std::ptrdiff_t>(offset + count));
  return out;
}

/// Linear combination of the per-part estimates weighted by their Welch
/// average counts.
inline PowerSpectrum combine_psd_parts(const std::vector<PowerSpectrum>& parts) {
  if (parts.empty()) throw make_error("stage", "no PSD parts to combine");
  PowerSpectrum out = parts.front();
  std::vector<double> acc(out.values.size(), 0.0);
  double weight = 0.0;
  for (const auto& p : parts) {
    if (p.values.size() != out.values.size() || std::abs(p.df - out.df) > 1e-12)
      throw make_error("stage", "PSD parts disagree on grid");
    const double w = std::max(1, p.n_averages);
    for (std::size_t k = 0; k < acc.size(); ++k) acc[k] += w * p.values[k];
    weight += w;
  }
  out.n_averages = 0;
  for (const auto& p : parts) out.n_averages += p.n_averages;
  for (std::size_t k = 0; k < acc.size(); ++k) out.values[k] = acc[k] / weight;
  return out;
}

inline int arg_int(const TaskSpec& t, const std::string& key) {
  auto it = t.args.find(key);
  if (it == t.args.end()) throw make_error("stage", t.id + " missing arg " + key);
  return std::stoi(it->second);
}

inline std::string arg_str(const TaskSpec& t, const std::string& key) {
  auto it = t.args.find(key);
  if (it == t.args.end()) throw make_error("stage", t.id + " missing arg " + key);
  return it->second;
}

/// Map template id -> background bin, splitting the bank into n_bins groups
/// of (nearly) equal size by template duration.
inline std::map<int, int> duration_bins(const std::vector<Template>& bank, int n_bins) {
  std::vector<std::size_t> order(bank.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (bank[a].duration_s != bank[b].duration_s) return bank[a].duration_s < bank[b].duration_s;
    return bank[a].id < bank[b].id;
  });
  std::map<int, int> bins;
  for (std::size_t rank = 0; rank < order.size(); ++rank)
    bins[bank[order[rank]].id] =
        static_cast<int>(rank * static_cast<std::size_t>(n_bins) / order.size());
  return bins;
}

struct StatmapInputs {
  std::vector<CoincEvent> foreground;
  BackgroundEstimate background;
  AnalyzedSpan span;
};

inline StatmapInputs run_coincidence(const RunConfig& cfg, const std::string& ws,
                                     const std::string& merged_h, const std::string& merged_l) {
  StatmapInputs out;
  const auto trigs_h = read_trigger_csv(ws + "/" + merged_h);
  const auto trigs_l = read_trigger_csv(ws + "/" + merged_l);
  out.span = {cfg.analysis_start_s(), cfg.livetime_s()};
  const double window = cfg.coincidence_window_s();
  out.foreground = find_coincidences(trigs_h, trigs_l, window, 0.0, out.span);
  const SlideConfig slides{cfg.n_slides, cfg.slide_step_s, cfg.livetime_s()};
  out.background = estimate_background(trigs_h, trigs_l, window, slides, out.span);
  return out;
}

inline std::string sigma_label(const SignificanceResult& s) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%s%.2f&#963;", s.is_lower_bound ? "&gt; " : "", s.sigma);
  return buf;
}

}  // namespace stage_detail

/// Builds the histogram and its sigma annotations from a results file.
inline std::pair<HistogramData, SigmaTicks> histogram_from_results(const CoincResults& res,
                                                                   double bin_width,
                                                                   double range_lo = 0.0,
                                                                   double range_hi = 0.0) {
  std::vector<double> fg, bg;
  for (const auto& e : res.foreground) fg.push_back(e.combined_stat);
  for (const auto& e : res.background) bg.push_back(e.combined_stat);

  double lo = range_lo, hi = range_hi;
  if (!(hi > lo)) {
    double mn = 1e300, mx = -1e300;
    for (double v : fg) {
      mn = std::min(mn, v);
      mx = std::max(mx, v);
    }
    for (double v : bg) {
      mn = std::min(mn, v);
      mx = std::max(mx, v);
    }
    if (mn > mx) {
      mn = 8.0;
      mx = 9.0;
    }
    lo = std::floor(mn / bin_width) * bin_width;
    hi = (std::floor(mx / bin_width) + 1.0) * bin_width;
  }

  const int n_slides = std::max(1, res.n_slides);
  HistogramData h = make_histogram(fg, bg, n_slides, bin_width, lo, hi);

  if (!res.foreground_stats.empty()) {
    std::size_t loudest = 0;
    for (std::size_t i = 1; i < res.foreground_stats.size(); ++i)
      if (res.foreground_stats[i].combined_stat > res.foreground_stats[loudest].combined_stat)
        loudest = i;
    h.loudest_label = stage_detail::sigma_label(res.foreground_stats[loudest]);
  }

  // Top-axis ticks: the first bin edge at which the background implies
  // sigma >= k, for whole k.
  SigmaTicks ticks;
  if (res.background_time_s > 0.0 && res.foreground_time_s > 0.0) {
    const double p_floor = res.foreground_time_s / (10.0 * res.background_time_s);
    int next_k = 1;
    for (const auto& bin : h.bins) {
      const FarResult far = far_of(bin.left_edge, bg, res.background_time_s);
      const SignificanceValue sig = significance(far.far_per_s, res.foreground_time_s, p_floor);
      while (next_k <= 8 && sig.sigma >= static_cast<double>(next_k)) {
        ticks.emplace_back(bin.left_edge, static_cast<double>(next_k));
        ++next_k;
      }
    }
  }
  return {h, ticks};
}

/// Stage registry: the in-process science payload for every transformation
/// the planner emits. The configuration is captured by value.
inline StageRegistry make_stage_registry(const RunConfig& config) {
  auto cfg = std::make_shared<RunConfig>(config);
  StageRegistry reg;

  reg["calculate_psd"] = [cfg](const TaskSpec& task, const std::string& ws) {
    const DetectorId det(stage_detail::arg_str(task, "detector"));
    const int part = stage_detail::arg_int(task, "part");
    const TimeSeries ts = read_strain(ws + "/" + strain_path(det));
    const std::size_t part_len = ts.samples.size() / static_cast<std::size_t>(cfg->psd_parts);
    const TimeSeries slice =
        stage_detail::slice_series(ts, static_cast<std::size_t>(part) * part_len, part_len);
    const PowerSpectrum psd = estimate_psd(slice, cfg->psd_segment_s, cfg->psd_overlap,
                                           PsdWindow::hann, cfg->psd_average);
    write_psd_csv(psd, ws + "/" + task.outputs.at(0));
  };

  reg["inspiral"] = [cfg](const TaskSpec& task, const std::string& ws) {
    const DetectorId det(stage_detail::arg_str(task, "detector"));
    const int seg = stage_detail::arg_int(task, "segment");
    const int bank_part = stage_detail::arg_int(task, "bank_part");

    const TimeSeries ts = read_strain(ws + "/" + strain_path(det));
    std::vector<PowerSpectrum> parts;
    for (int p = 0; p < cfg->psd_parts; ++p)
      parts.push_back(read_psd_csv(ws + "/" + psd_part_path(det, p)));
    const PowerSpectrum combined = stage_detail::combine_psd_parts(parts);

    const double fs = cfg->sample_rate_hz;
    const auto seg_len = static_cast<std::size_t>(std::llround(cfg->segment_s * fs));
    const auto stride = static_cast<std::size_t>(std::llround(cfg->stride_s() * fs));
    const TimeSeries segment =
        stage_detail::slice_series(ts, static_cast<std::size_t>(seg) * stride, seg_len);
    const PowerSpectrum psd_seg =
        interpolate_psd(combined, fs / static_cast<double>(seg_len));
    const TimeSeries whitened = whiten(segment, psd_seg);

    const auto bank = build_bank(cfg->mc_min, cfg->mc_max, cfg->n_templates, cfg->f_low_hz);
    const std::size_t per_part =
        (bank.size() + static_cast<std::size_t>(cfg->bank_parts) - 1) /
        static_cast<std::size_t>(cfg->bank_parts);
    const std::size_t t0 = static_cast<std::size_t>(bank_part) * per_part;
    const std::size_t t1 = std::min(bank.size(), t0 + per_part);

    // Triggers are kept only inside the segment's edge-trimmed zone; zones
    // tile the analyzed span without overlap.
    const double keep_lo = segment.start_time() + cfg->edge_s;
    const double keep_hi = segment.start_time() + cfg->segment_s - cfg->edge_s;

    std::vector<Trigger> triggers;
    for (std::size_t i = t0; i < t1; ++i) {
      const SnrSeries snr = matched_filter(whitened, bank[i], psd_seg, cfg->f_low_hz);
      for (const auto& peak : cluster(snr, cfg->snr_threshold, cfg->cluster_window_s)) {
        if (peak.time_s < keep_lo || peak.time_s >= keep_hi) continue;
        Trigger trig;
        trig.detector = det;
        trig.template_id = bank[i].id;
        trig.end_time_s = peak.time_s;
        trig.snr = peak.abs_snr;
        trig.chisq_r =
            chisq_veto(whitened, bank[i], psd_seg, peak.time_s, cfg->chisq_bins, cfg->f_low_hz);
        trig.stat = reweight(trig.snr, trig.chisq_r);
        triggers.push_back(trig);
      }
    }
    std::sort(triggers.begin(), triggers.end(), [](const Trigger& a, const Trigger& b) {
      if (a.end_time_s != b.end_time_s) return a.end_time_s < b.end_time_s;
      return a.template_id < b.template_id;
    });
    write_trigger_csv(triggers, ws + "/" + task.outputs.at(0));
  };

  reg["hdf_trigger_merge"] = [](const TaskSpec& task, const std::string& ws) {
    std::vector<std::vector<Trigger>> lists;
    for (const auto& in : task.inputs) lists.push_back(read_trigger_csv(ws + "/" + in));
    write_trigger_csv(merge_triggers(lists), ws + "/" + task.outputs.at(0));
  };

  reg["statmap"] = [cfg](const TaskSpec& task, const std::string& ws) {
    auto in = stage_detail::run_coincidence(*cfg, ws, task.inputs.at(0), task.inputs.at(1));
    CoincResults res;
    res.n_slides = cfg->n_slides;
    res.background_time_s = in.background.total_time_s;
    res.foreground_time_s = cfg->livetime_s();
    res.foreground = in.foreground;
    res.foreground_stats =
        statmap(in.foreground, in.background, cfg->livetime_s(), cfg->remove_loudest);
    res.background = in.background.events;
    write_results(res, ws + "/" + task.outputs.at(0));
  };

  reg["distribute_background_bins"] = [cfg](const TaskSpec& task, const std::string& ws) {
    // Re-derives the coincidences from the merged triggers and re-scores
    // them in template-duration bins with the trials-factor correction.
    auto in = stage_detail::run_coincidence(*cfg, ws, task.inputs.at(1), task.inputs.at(2));
    const auto bank = build_bank(cfg->mc_min, cfg->mc_max, cfg->n_templates, cfg->f_low_hz);
    const auto bins = stage_detail::duration_bins(bank, cfg->background_bins);
    CoincResults res;
    res.n_slides = cfg->n_slides;
    res.background_time_s = in.background.total_time_s;
    res.foreground_time_s = cfg->livetime_s();
    res.foreground = in.foreground;
    res.foreground_stats = statmap_binned(in.foreground, in.background, bins,
                                          cfg->background_bins, cfg->livetime_s());
    res.background = in.background.events;
    write_results(res, ws + "/" + task.outputs.at(0));
  };

  reg["plot_snrifar"] = [cfg](const TaskSpec& task, const std::string& ws) {
    const CoincResults res = read_results(ws + "/" + task.inputs.at(0));
    auto [hist, ticks] = histogram_from_results(res, cfg->hist_bin_width);
    write_histogram_csv(hist, ws + "/" + task.outputs.at(0));
    std::ofstream svg(ws + "/" + task.outputs.at(1), std::ios::trunc);
    if (!svg) throw make_error("plot_snrifar", "cannot open " + task.outputs.at(1));
    svg << render_histogram_svg(hist, ticks);
  };

  return reg;
}

}  // namespace gwflow

#endif  // GWFLOW_STAGES_HPP
