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

#ifndef GWFLOW_TYPES_HPP
#define GWFLOW_TYPES_HPP

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace gwflow {

// All gwflow errors are runtime_errors with a "context: message" text so
// callers can match on the message when they need to distinguish causes.
inline std::runtime_error make_error(const std::string& context, const std::string& msg) {
  return std::runtime_error(context + ": " + msg);
}

/// Two-character detector label, e.g. "H1" or "L1".
struct DetectorId {
  std::string tag;

  DetectorId() = default;
  explicit DetectorId(std::string t) : tag(std::move(t)) {
    if (tag.size() != 2)
      throw make_error("DetectorId", "tag must be exactly 2 characters, got \"" + tag + "\"");
  }

  bool operator==(const DetectorId&) const = default;
  auto operator<=>(const DetectorId&) const = default;
};

/// Uniformly sampled strain segment. Strain values are dimensionless,
/// order-unity numbers; the epoch is split into whole seconds plus
/// nanoseconds so long runs do not lose sub-sample timing.
struct TimeSeries {
  DetectorId detector;
  std::int64_t start_s = 0;
  std::uint32_t start_ns = 0;      // in [0, 1e9)
  double dt = 0.0;                 // sample interval, seconds
  std::vector<double> samples;

  double sample_rate() const { return 1.0 / dt; }
  double duration() const { return static_cast<double>(samples.size()) * dt; }
  double start_time() const { return static_cast<double>(start_s) + 1e-9 * start_ns; }
  double end_time() const { return start_time() + duration(); }

  // dt > 0, samples non-empty and finite, whole-Hz sample rate.
  void validate(const std::string& context) const {
    if (dt <= 0.0) throw make_error(context, "dt must be positive");
    if (samples.empty()) throw make_error(context, "samples must be non-empty");
    if (start_ns >= 1000000000u) throw make_error(context, "start_ns out of range");
    const double fs = 1.0 / dt;
    if (std::abs(fs - std::round(fs)) > 1e-6 || fs < 1.0)
      throw make_error(context, "1/dt must be a positive integer (whole-Hz rates only)");
    for (double x : samples)
      if (!std::isfinite(x)) throw make_error(context, "samples must all be finite");
  }
};

}  // namespace gwflow

#endif  // GWFLOW_TYPES_HPP
