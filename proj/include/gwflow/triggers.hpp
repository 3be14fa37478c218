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

#ifndef GWFLOW_TRIGGERS_HPP
#define GWFLOW_TRIGGERS_HPP

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "gwflow/types.hpp"

namespace gwflow {

/// Single-detector matched-filter candidate after clustering.
struct Trigger {
  DetectorId detector;
  int template_id = 0;
  double end_time_s = 0.0;  // epoch seconds
  double snr = 0.0;
  double chisq_r = 0.0;
  double stat = 0.0;  // reweighted SNR
};

inline constexpr const char* kTriggerCsvHeader = "detector,template_id,end_time_s,snr,chisq_r,stat";

// Numeric rendering is pinned for reproducible file checksums: statistics get
// 9 significant digits, end times fixed microseconds (9 significant digits
// would drop sub-sample timing at GPS-scale epochs).
inline std::string format_trigger_row(const Trigger& t) {
  char buf[160];
  std::snprintf(buf, sizeof(buf), "%s,%d,%.6f,%.9g,%.9g,%.9g", t.detector.tag.c_str(),
                t.template_id, t.end_time_s, t.snr, t.chisq_r, t.stat);
  return buf;
}

inline void write_trigger_csv(const std::vector<Trigger>& triggers, const std::string& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw make_error("write_trigger_csv", "cannot open " + path);
  out << kTriggerCsvHeader << "\n";
  for (const auto& t : triggers) out << format_trigger_row(t) << "\n";
  if (!out) throw make_error("write_trigger_csv", "write failed for " + path);
}

inline std::vector<Trigger> read_trigger_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw make_error("read_trigger_csv", "cannot open " + path);
  std::string line;
  if (!std::getline(in, line) || line != kTriggerCsvHeader)
    throw make_error("read_trigger_csv", "bad header in " + path);
  std::vector<Trigger> triggers;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream row(line);
    std::string field;
    Trigger t;
    if (!std::getline(row, field, ',')) throw make_error("read_trigger_csv", "bad row: " + line);
    t.detector = DetectorId(field);
    auto next = [&](const char* what) {
      if (!std::getline(row, field, ','))
        throw make_error("read_trigger_csv", std::string("missing ") + what + ": " + line);
      return field;
    };
    t.template_id = std::stoi(next("template_id"));
    t.end_time_s = std::stod(next("end_time_s"));
    t.snr = std::stod(next("snr"));
    t.chisq_r = std::stod(next("chisq_r"));
    t.stat = std::stod(next("stat"));
    triggers.push_back(t);
  }
  return triggers;
}

/// Stable concatenation sorted by (end_time, template_id). Duplicates are
/// preserved; already-merged input passes through unchanged.
inline std::vector<Trigger> merge_triggers(const std::vector<std::vector<Trigger>>& lists) {
  std::vector<Trigger> merged;
  for (const auto& l : lists) merged.insert(merged.end(), l.begin(), l.end());
  std::stable_sort(merged.begin(), merged.end(), [](const Trigger& a, const Trigger& b) {
    if (a.end_time_s != b.end_time_s) return a.end_time_s < b.end_time_s;
    return a.template_id < b.template_id;
  });
  return merged;
}

}  // namespace gwflow

#endif  // GWFLOW_TRIGGERS_HPP
