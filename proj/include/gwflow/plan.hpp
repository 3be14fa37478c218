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

#ifndef GWFLOW_PLAN_HPP
#define GWFLOW_PLAN_HPP

#include <string>
#include <vector>

#include "gwflow/config.hpp"
#include "gwflow/dag.hpp"

namespace gwflow {

inline std::string strain_path(const DetectorId& det) { return "strain_" + det.tag + ".gwsd"; }

inline std::string psd_part_path(const DetectorId& det, int part) {
  return "psd_" + det.tag + "_part" + std::to_string(part) + ".csv";
}

inline std::string trigger_path(const DetectorId& det, int seg, int bank_part) {
  return "triggers_" + det.tag + "_seg" + std::to_string(seg) + "_bank" +
         std::to_string(bank_part) + ".csv";
}

inline std::string merged_trigger_path(const DetectorId& det) {
  return "triggers_" + det.tag + "_merged.csv";
}

inline constexpr const char* kResultsPath = "results.txt";
inline constexpr const char* kBinnedResultsPath = "results_binned.txt";
inline constexpr const char* kHistCsvPath = "hist.csv";
inline constexpr const char* kHistSvgPath = "hist.svg";

/// Plans the full pipeline: per-detector PSD parts, per (detector, segment,
/// bank part) filtering, per-detector trigger merge, statmap, optional
/// background binning, then the histogram job. Task ids are deterministic
/// functions of the configuration.
inline Dag plan(const RunConfig& cfg) {
  if (cfg.n_segments() < 1) throw make_error("plan", "empty analysis: no segments");
  if (cfg.detectors.size() != 2) throw make_error("plan", "exactly two detectors required");

  auto mem = [&](const std::string& transformation) {
    auto it = cfg.request_mem_mb.find(transformation);
    return it == cfg.request_mem_mb.end() ? 1024.0 : it->second;
  };

  Dag dag;
  const std::string pair_tag = cfg.detectors[0].tag + cfg.detectors[1].tag;

  for (const auto& det : cfg.detectors) {
    for (int p = 0; p < cfg.psd_parts; ++p) {
      TaskSpec t;
      t.id = "calculate_psd-PART" + std::to_string(p) + "-" + det.tag;
      t.transformation = "calculate_psd";
      t.inputs = {strain_path(det)};
      t.outputs = {psd_part_path(det, p)};
      t.request_mem_mb = mem(t.transformation);
      t.max_retries = cfg.max_retries;
      t.args = {{"detector", det.tag}, {"part", std::to_string(p)}};
      dag.tasks.push_back(std::move(t));
    }
  }

  for (const auto& det : cfg.detectors) {
    for (int s = 0; s < cfg.n_segments(); ++s) {
      for (int b = 0; b < cfg.bank_parts; ++b) {
        TaskSpec t;
        t.id = "inspiral-SEG" + std::to_string(s) + "-BANK" + std::to_string(b) + "-" + det.tag;
        t.transformation = "inspiral";
        t.inputs = {strain_path(det)};
        for (int p = 0; p < cfg.psd_parts; ++p) {
          t.parents.push_back("calculate_psd-PART" + std::to_string(p) + "-" + det.tag);
          t.inputs.push_back(psd_part_path(det, p));
        }
        t.outputs = {trigger_path(det, s, b)};
        t.request_mem_mb = mem(t.transformation);
        t.required_features = cfg.inspiral_features;
        t.max_retries = cfg.max_retries;
        t.args = {{"detector", det.tag},
                  {"segment", std::to_string(s)},
                  {"bank_part", std::to_string(b)}};
        dag.tasks.push_back(std::move(t));
      }
    }
  }

  for (const auto& det : cfg.detectors) {
    TaskSpec t;
    t.id = "hdf_trigger_merge-FULL_DATA-" + det.tag;
    t.transformation = "hdf_trigger_merge";
    for (int s = 0; s < cfg.n_segments(); ++s) {
      for (int b = 0; b < cfg.bank_parts; ++b) {
        t.parents.push_back("inspiral-SEG" + std::to_string(s) + "-BANK" + std::to_string(b) +
                            "-" + det.tag);
        t.inputs.push_back(trigger_path(det, s, b));
      }
    }
    t.outputs = {merged_trigger_path(det)};
    t.request_mem_mb = mem(t.transformation);
    t.max_retries = cfg.max_retries;
    t.args = {{"detector", det.tag}};
    dag.tasks.push_back(std::move(t));
  }

  {
    TaskSpec t;
    t.id = "statmap-FULL_DATA-" + pair_tag;
    t.transformation = "statmap";
    for (const auto& det : cfg.detectors) {
      t.parents.push_back("hdf_trigger_merge-FULL_DATA-" + det.tag);
      t.inputs.push_back(merged_trigger_path(det));
    }
    t.outputs = {kResultsPath};
    t.request_mem_mb = mem(t.transformation);
    t.max_retries = cfg.max_retries;
    dag.tasks.push_back(std::move(t));
  }

  const bool binned = cfg.background_bins > 1;
  if (binned) {
    TaskSpec t;
    t.id = "distribute_background_bins-FULL_DATA-" + pair_tag;
    t.transformation = "distribute_background_bins";
    t.parents = {"statmap-FULL_DATA-" + pair_tag};
    t.inputs = {kResultsPath};
    for (const auto& det : cfg.detectors) {
      t.parents.push_back("hdf_trigger_merge-FULL_DATA-" + det.tag);
      t.inputs.push_back(merged_trigger_path(det));
    }
    t.outputs = {kBinnedResultsPath};
    t.request_mem_mb = mem(t.transformation);
    t.max_retries = cfg.max_retries;
    dag.tasks.push_back(std::move(t));
  }

  {
    TaskSpec t;
    t.id = "plot_snrifar-FULL_DATA-" + pair_tag;
    t.transformation = "plot_snrifar";
    if (binned) {
      t.parents = {"distribute_background_bins-FULL_DATA-" + pair_tag};
      t.inputs = {kBinnedResultsPath};
    } else {
      t.parents = {"statmap-FULL_DATA-" + pair_tag};
      t.inputs = {kResultsPath};
    }
    t.outputs = {kHistCsvPath, kHistSvgPath};
    t.request_mem_mb = mem(t.transformation);
    t.max_retries = cfg.max_retries;
    dag.tasks.push_back(std::move(t));
  }

  std::set<std::string> initial;
  for (const auto& det : cfg.detectors) initial.insert(strain_path(det));
  dag.validate(initial);
  return dag;
}

}  // namespace gwflow

#endif  // GWFLOW_PLAN_HPP
