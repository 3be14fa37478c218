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

#ifndef GWFLOW_TESTS_HELPERS_HPP
#define GWFLOW_TESTS_HELPERS_HPP

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <string>
#include <unistd.h>
#include <vector>

#include "gwflow/coinc.hpp"
#include "gwflow/stats_math.hpp"
#include "gwflow/triggers.hpp"

namespace gwtest {

class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    static std::atomic<int> counter{0};
    path_ = (std::filesystem::temp_directory_path() /
             ("gwflow_" + tag + "_" + std::to_string(::getpid()) + "_" +
              std::to_string(counter++)))
                .string();
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~TempDir() { std::filesystem::remove_all(path_); }
  const std::string& path() const { return path_; }

 private:
  std::string path_;
};

inline std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

// Independent inverse normal: bisection on 0.5*erfc(-x/sqrt(2)) over
// [-40, 40], good to ~1e-12 absolute.
inline double quantile_bisect(double p) {
  double lo = -40.0, hi = 40.0;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (0.5 * std::erfc(-mid * M_SQRT1_2) < p)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

// O(N^2) reference for the greedy loudest-first clustering, over sample
// indices (callers arrange integer-valued times so the window comparison is
// exact).
inline std::vector<std::size_t> cluster_oracle(const std::vector<double>& abs_snr,
                                               double threshold, double window_samples) {
  std::vector<std::size_t> kept;
  std::vector<char> alive(abs_snr.size(), 1);
  for (;;) {
    std::ptrdiff_t best = -1;
    for (std::size_t i = 0; i < abs_snr.size(); ++i) {
      if (!alive[i] || abs_snr[i] < threshold) continue;
      if (best < 0 || abs_snr[i] > abs_snr[static_cast<std::size_t>(best)])
        best = static_cast<std::ptrdiff_t>(i);
    }
    if (best < 0) break;
    kept.push_back(static_cast<std::size_t>(best));
    for (std::size_t i = 0; i < abs_snr.size(); ++i)
      if (std::abs(static_cast<double>(i) - static_cast<double>(best)) < window_samples)
        alive[i] = 0;
  }
  std::sort(kept.begin(), kept.end());
  return kept;
}

// Exhaustive reference for one coincidence pass: enumerate every pair, keep
// loudest-first with each trigger used at most once. Written against the
// contract, not the implementation.
struct OraclePair {
  double combined;
  int slide;
  std::size_t hi, li;
};

inline std::vector<OraclePair> coincidence_oracle(const std::vector<gwflow::Trigger>& h,
                                                  const std::vector<gwflow::Trigger>& l,
                                                  double window_s, double shift_s, int slide,
                                                  const gwflow::AnalyzedSpan& span) {
  struct Cand {
    double combined, t_h, t_shifted;
    int tid;
    std::size_t hi, li;
  };
  std::vector<Cand> cands;
  for (std::size_t i = 0; i < h.size(); ++i)
    for (std::size_t j = 0; j < l.size(); ++j) {
      if (h[i].template_id != l[j].template_id) continue;
      double t = l[j].end_time_s + shift_s;
      double rel = std::fmod(t - span.start_s, span.duration_s);
      if (rel < 0) rel += span.duration_s;
      t = span.start_s + rel;
      if (std::abs(h[i].end_time_s - t) > window_s) continue;
      cands.push_back({std::hypot(h[i].stat, l[j].stat), h[i].end_time_s, t, h[i].template_id,
                       i, j});
    }
  std::sort(cands.begin(), cands.end(), [](const Cand& a, const Cand& b) {
    if (a.combined != b.combined) return a.combined > b.combined;
    if (a.t_h != b.t_h) return a.t_h < b.t_h;
    if (a.t_shifted != b.t_shifted) return a.t_shifted < b.t_shifted;
    if (a.tid != b.tid) return a.tid < b.tid;
    return a.hi < b.hi;
  });
  std::vector<char> uh(h.size(), 0), ul(l.size(), 0);
  std::vector<OraclePair> out;
  for (const auto& c : cands) {
    if (uh[c.hi] || ul[c.li]) continue;
    uh[c.hi] = ul[c.li] = 1;
    out.push_back({c.combined, slide, c.hi, c.li});
  }
  return out;
}

inline std::vector<gwflow::Trigger> random_triggers(std::mt19937_64& rng, int max_count,
                                                    double span_start, double span_len,
                                                    int n_templates,
                                                    const std::string& detector) {
  std::uniform_int_distribution<int> count(0, max_count);
  std::uniform_real_distribution<double> time(span_start, span_start + span_len);
  std::uniform_int_distribution<int> tid(0, n_templates - 1);
  std::uniform_real_distribution<double> stat(4.0, 12.0);
  std::vector<gwflow::Trigger> out;
  const int n = count(rng);
  for (int i = 0; i < n; ++i) {
    gwflow::Trigger t;
    t.detector = gwflow::DetectorId(detector);
    t.template_id = tid(rng);
    t.end_time_s = time(rng);
    t.snr = t.stat = stat(rng);
    t.chisq_r = 1.0;
    out.push_back(t);
  }
  std::sort(out.begin(), out.end(),
            [](const auto& a, const auto& b) { return a.end_time_s < b.end_time_s; });
  return out;
}

// Minimal XML well-formedness check: single root, balanced tags, quoted
// attributes. Enough to catch malformed SVG output.
inline bool xml_well_formed(const std::string& text) {
  std::vector<std::string> stack;
  std::size_t i = 0;
  bool seen_root = false;
  auto skip_until = [&](const std::string& end) {
    const auto pos = text.find(end, i);
    if (pos == std::string::npos) return false;
    i = pos + end.size();
    return true;
  };
  while (i < text.size()) {
    if (text[i] != '<') {
      ++i;
      continue;
    }
    if (text.compare(i, 5, "<?xml") == 0) {
      if (!skip_until("?>")) return false;
      continue;
    }
    if (text.compare(i, 4, "<!--") == 0) {
      if (!skip_until("-->")) return false;
      continue;
    }
    const auto close = text.find('>', i);
    if (close == std::string::npos) return false;
    std::string tag = text.substr(i + 1, close - i - 1);
    i = close + 1;
    bool self_closing = !tag.empty() && tag.back() == '/';
    if (self_closing) tag.pop_back();
    if (tag.empty()) return false;
    if (tag[0] == '/') {
      const std::string name = tag.substr(1);
      if (stack.empty() || stack.back() != name) return false;
      stack.pop_back();
      continue;
    }
    const auto space = tag.find_first_of(" \t\n");
    const std::string name = space == std::string::npos ? tag : tag.substr(0, space);
    // attributes must have an even number of quotes
    if (std::count(tag.begin(), tag.end(), '"') % 2 != 0) return false;
    if (!self_closing) {
      if (stack.empty() && seen_root) return false;  // second root
      stack.push_back(name);
      seen_root = true;
    } else if (stack.empty()) {
      if (seen_root) return false;
      seen_root = true;
    }
  }
  return stack.empty() && seen_root;
}

}  // namespace gwtest

#endif  // GWFLOW_TESTS_HELPERS_HPP
