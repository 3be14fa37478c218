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

#ifndef GWFLOW_REPORT_HPP
#define GWFLOW_REPORT_HPP

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "gwflow/engine.hpp"
#include "gwflow/types.hpp"

namespace gwflow {

/// Two-unit duration rendering: "22 years, 54 days", "29 days, 0 hrs",
/// "7 hrs, 55 mins", "4 mins, 9 secs", or bare "N secs" under a minute.
/// A year is 365 days.
inline std::string format_duration(double seconds) {
  const long long total = std::llround(std::max(0.0, seconds));
  const long long minute = 60, hour = 3600, day = 86400, year = 365 * day;
  char buf[64];
  if (total >= year)
    std::snprintf(buf, sizeof(buf), "%lld years, %lld days", total / year, (total % year) / day);
  else if (total >= day)
    std::snprintf(buf, sizeof(buf), "%lld days, %lld hrs", total / day, (total % day) / hour);
  else if (total >= hour)
    std::snprintf(buf, sizeof(buf), "%lld hrs, %lld mins", total / hour, (total % hour) / minute);
  else if (total >= minute)
    std::snprintf(buf, sizeof(buf), "%lld mins, %lld secs", total / minute, total % minute);
  else
    std::snprintf(buf, sizeof(buf), "%lld secs", total);
  return buf;
}

namespace report_detail {

inline std::string pad(const std::string& s, std::size_t width) {
  return s.size() >= width ? s : s + std::string(width - s.size(), ' ');
}

// 194898.65 -> "194,898.65"
inline std::string with_commas(double v, int decimals = 2) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", decimals, v);
  std::string s(buf);
  const auto dot = s.find('.');
  std::string intpart = dot == std::string::npos ? s : s.substr(0, dot);
  const std::string rest = dot == std::string::npos ? "" : s.substr(dot);
  std::string grouped;
  int count = 0;
  for (auto it = intpart.rbegin(); it != intpart.rend(); ++it) {
    if (count && count % 3 == 0 && *it != '-') grouped.push_back(',');
    grouped.push_back(*it);
    ++count;
  }
  std::reverse(grouped.begin(), grouped.end());
  return grouped + rest;
}

}  // namespace report_detail

/// Renders the run statistics report. Tasks and Jobs rows coincide here:
/// the pipeline is flattened, one job per task.
inline std::string render_report(const RunReport& r) {
  using report_detail::pad;
  const std::string rule(77, '-');
  std::string out;
  out += rule + "\n";
  out += pad("Type", 15) + pad("Succeeded", 10) + pad("Failed", 8) + pad("Incomplete", 12) +
         pad("Total", 10) + "Retries\n";
  auto row = [&](const std::string& type) {
    out += pad(type, 15) + pad(std::to_string(r.tasks_succeeded), 10) +
           pad(std::to_string(r.tasks_failed), 8) + pad(std::to_string(r.tasks_incomplete), 12) +
           pad(std::to_string(r.tasks_total), 10) + std::to_string(r.retries) + "\n";
  };
  row("Tasks");
  row("Jobs");
  out += rule + "\n\n";

  auto line = [&](const std::string& label, double seconds) {
    out += pad(label, 57) + ": " + format_duration(seconds) + "\n";
  };
  line("Workflow wall time", r.workflow_wall_time_s);
  line("Cumulative job wall time", r.cumulative_job_wall_time_s);
  line("Cumulative job badput wall time", r.cumulative_badput_s);

  out += "\n# Integrity Metrics\n";
  out += "# Number of files for which checksums were compared/computed along\n";
  out += "# with total time spent doing it.\n";
  out += std::to_string(r.files_checksums_compared) +
         " files checksums compared with total duration of " +
         format_duration(r.checksums_compare_duration_s) + "\n";
  out += std::to_string(r.files_checksums_generated) +
         " files checksums generated with total duration of " +
         format_duration(r.checksums_generate_duration_s) + "\n";

  out += "\n# Integrity Errors\n";
  out += "# Total:\n";
  out += "#       Total number of integrity errors encountered across all job\n";
  out += "#       executions(including retries) of a workflow.\n";
  out += "# Failures:\n";
  out += "#       Number of failed jobs where the last job instance had integrity errors.\n";
  out += "Total:    A total of " + std::to_string(r.integrity_errors_total) +
         " integrity errors encountered in the workflow\n";
  out += "Failures: " + std::to_string(r.failures_with_integrity_errors) +
         " job failures had integrity errors\n";
  return out;
}

/// Rebuilds a RunReport from a provenance log. Tasks that never ran leave no
/// records, so the true task count (for the Incomplete column) must be
/// supplied when known, e.g. from the DAG file.
inline RunReport report_from_provenance(const std::vector<AttemptRecord>& records,
                                        int tasks_total = 0) {
  RunReport r;
  std::map<std::string, const AttemptRecord*> last;
  for (const auto& rec : records) {
    last[rec.task_id] = &rec;
    r.cumulative_job_wall_time_s += rec.duration_s;
    if (!rec.success) r.cumulative_badput_s += rec.duration_s;
    r.files_checksums_compared += rec.checksums_compared;
    r.checksums_compare_duration_s += rec.compare_duration_s;
    r.files_checksums_generated += rec.checksums_generated;
    r.checksums_generate_duration_s += rec.generate_duration_s;
    r.integrity_errors_total += rec.integrity_errors;
    r.workflow_wall_time_s = std::max(r.workflow_wall_time_s, rec.start_s + rec.duration_s);
  }
  for (const auto& [id, rec] : last) {
    if (rec->success) {
      ++r.tasks_succeeded;
    } else {
      ++r.tasks_failed;
      if (rec->integrity_errors > 0) ++r.failures_with_integrity_errors;
    }
  }
  const int attempted = static_cast<int>(last.size());
  r.tasks_total = std::max(tasks_total, attempted);
  r.tasks_incomplete = r.tasks_total - attempted;
  r.retries = static_cast<long>(records.size()) - attempted;
  return r;
}

enum class SummarySort { by_max_memory, by_max_runtime };

struct TransformationSummary {
  std::string transformation;
  int count = 0;  // attempts
  double mean_runtime_s = 0.0;
  double max_runtime_s = 0.0;
  double min_mem_mb = 0.0;
  double max_mem_mb = 0.0;
  double mean_mem_mb = 0.0;
};

/// Groups attempts by transformation with runtime and peak-memory profiles,
/// sorted descending by max memory (or max runtime).
inline std::vector<TransformationSummary> summarize_transformations(
    const std::vector<AttemptRecord>& records, SummarySort sort = SummarySort::by_max_memory) {
  std::map<std::string, TransformationSummary> acc;
  for (const auto& rec : records) {
    // Task ids are <transformation>-<qualifiers>; the prefix up to the first
    // dash names the executable, as in the upstream job naming scheme.
    const auto dash = rec.task_id.find('-');
    const std::string name = dash == std::string::npos ? rec.task_id : rec.task_id.substr(0, dash);
    auto& s = acc[name];
    if (s.count == 0) {
      s.transformation = name;
      s.min_mem_mb = rec.peak_mem_mb;
      s.max_mem_mb = rec.peak_mem_mb;
      s.max_runtime_s = rec.duration_s;
    }
    s.min_mem_mb = std::min(s.min_mem_mb, rec.peak_mem_mb);
    s.max_mem_mb = std::max(s.max_mem_mb, rec.peak_mem_mb);
    s.max_runtime_s = std::max(s.max_runtime_s, rec.duration_s);
    s.mean_runtime_s += rec.duration_s;
    s.mean_mem_mb += rec.peak_mem_mb;
    s.count += 1;
  }
  std::vector<TransformationSummary> rows;
  for (auto& [name, s] : acc) {
    s.mean_runtime_s /= s.count;
    s.mean_mem_mb /= s.count;
    rows.push_back(s);
  }
  std::sort(rows.begin(), rows.end(),
            [sort](const TransformationSummary& a, const TransformationSummary& b) {
              const double ka = sort == SummarySort::by_max_memory ? a.max_mem_mb : a.max_runtime_s;
              const double kb = sort == SummarySort::by_max_memory ? b.max_mem_mb : b.max_runtime_s;
              if (ka != kb) return ka > kb;
              return a.transformation < b.transformation;
            });
  return rows;
}

inline std::string render_transformation_table(const std::vector<TransformationSummary>& rows) {
  using report_detail::pad;
  using report_detail::with_commas;
  std::string out;
  out += pad("Transformation", 30) + pad("Count", 7) + pad("Mean (runtime) s", 18) +
         pad("Min (mem) MB", 14) + pad("Max (mem) MB", 14) + "Mean (mem) MB\n";
  for (const auto& r : rows) {
    out += pad(r.transformation, 30) + pad(std::to_string(r.count), 7) +
           pad(with_commas(r.mean_runtime_s), 18) + pad(with_commas(r.min_mem_mb), 14) +
           pad(with_commas(r.max_mem_mb), 14) + with_commas(r.mean_mem_mb) + "\n";
  }
  return out;
}

}  // namespace gwflow

#endif  // GWFLOW_REPORT_HPP
