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

#ifndef GWFLOW_PSD_HPP
#define GWFLOW_PSD_HPP

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "gwflow/fft.hpp"
#include "gwflow/types.hpp"

namespace gwflow {

/// One-sided noise power spectral density on a uniform grid from f=0 to
/// Nyquist (strain^2/Hz).
struct PowerSpectrum {
  double df = 0.0;
  std::vector<double> values;  // length N/2+1 for underlying segment length N
  DetectorId detector;
  int n_averages = 0;

  double f_max() const { return df * static_cast<double>(values.size() - 1); }

  void validate(const std::string& context) const {
    if (df <= 0.0) throw make_error(context, "df must be positive");
    if (values.size() < 2) throw make_error(context, "PSD needs at least 2 bins");
    for (double v : values)
      if (!(v > 0.0) || !std::isfinite(v))
        throw make_error(context, "PSD values must be positive and finite");
  }
};

enum class PsdWindow { hann, rect };
enum class PsdAverage { median, mean };

/// Bias of the median of n unit-mean exponentials (n odd): the alternating
/// harmonic partial sum. Dividing a per-bin median periodogram by this makes
/// the estimator unbiased for Gaussian noise.
inline double median_bias(int n) {
  double m = 0.0;
  for (int l = 1; l <= n; ++l) m += (l % 2 == 1 ? 1.0 : -1.0) / static_cast<double>(l);
  return m;
}

/// Welch PSD estimate. With median averaging an even segment count is
/// reduced by one so the exact odd-count bias correction applies.
inline PowerSpectrum estimate_psd(const TimeSeries& ts, double seg_len_s,
                                  double overlap_fraction, PsdWindow window = PsdWindow::hann,
                                  PsdAverage average = PsdAverage::median) {
  ts.validate("estimate_psd");
  if (overlap_fraction < 0.0 || overlap_fraction > 0.9)
    throw make_error("estimate_psd", "overlap out of range [0, 0.9]");
  if (ts.duration() < 2.0 * seg_len_s)
    throw make_error("estimate_psd", "series too short: need at least 2 segments");

  const double fs = ts.sample_rate();
  const double nper_f = seg_len_s * fs;
  const auto nper = static_cast<std::size_t>(std::llround(nper_f));
  if (nper < 2 || std::abs(nper_f - static_cast<double>(nper)) > 1e-9 || nper % 2 != 0)
    throw make_error("estimate_psd", "segment length must be a positive even sample count");

  double mean = std::accumulate(ts.samples.begin(), ts.samples.end(), 0.0) /
                static_cast<double>(ts.samples.size());
  double var = 0.0;
  for (double x : ts.samples) var += (x - mean) * (x - mean);
  if (var == 0.0) throw make_error("estimate_psd", "zero-variance input");

  std::vector<double> w(nper, 1.0);
  if (window == PsdWindow::hann)
    for (std::size_t i = 0; i < nper; ++i)
      w[i] = 0.5 - 0.5 * std::cos(2.0 * M_PI * static_cast<double>(i) / static_cast<double>(nper));
  double u = 0.0;
  for (double wi : w) u += wi * wi;

  const auto hop = std::max<std::size_t>(
      1, nper - static_cast<std::size_t>(std::floor(overlap_fraction * static_cast<double>(nper))));
  std::size_t n_seg = 0;
  for (std::size_t start = 0; start + nper <= ts.samples.size(); start += hop) ++n_seg;
  if (average == PsdAverage::median && n_seg % 2 == 0) --n_seg;

  const std::size_t n_bins = nper / 2 + 1;
  std::vector<std::vector<double>> per_bin;
  if (average == PsdAverage::median) per_bin.assign(n_bins, {});
  std::vector<double> acc(n_bins, 0.0);

  const double dt = ts.dt;
  std::vector<double> seg(nper);
  for (std::size_t s = 0; s < n_seg; ++s) {
    const std::size_t start = s * hop;
    for (std::size_t i = 0; i < nper; ++i) seg[i] = ts.samples[start + i] * w[i];
    auto spec = rfft(seg);
    for (std::size_t k = 0; k < n_bins; ++k) {
      const double one_sided = (k == 0 || k == nper / 2) ? 1.0 : 2.0;
      const double p = one_sided * std::norm(spec[k]) * dt / u;
      if (average == PsdAverage::median)
        per_bin[k].push_back(p);
      else
        acc[k] += p;
    }
  }

  PowerSpectrum psd;
  psd.df = fs / static_cast<double>(nper);
  psd.detector = ts.detector;
  psd.n_averages = static_cast<int>(n_seg);
  psd.values.resize(n_bins);
  if (average == PsdAverage::median) {
    const double bias = median_bias(static_cast<int>(n_seg));
    for (std::size_t k = 0; k < n_bins; ++k) {
      auto& v = per_bin[k];
      std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(v.size() / 2), v.end());
      psd.values[k] = v[v.size() / 2] / bias;
    }
  } else {
    for (std::size_t k = 0; k < n_bins; ++k) psd.values[k] = acc[k] / static_cast<double>(n_seg);
  }
  // The DC bin of windowed zero-mean noise can come out zero-adjacent; clamp
  // so the positivity invariant holds everywhere.
  const double floor_v = *std::max_element(psd.values.begin(), psd.values.end()) * 1e-30;
  for (double& v : psd.values) v = std::max(v, floor_v);
  psd.validate("estimate_psd");
  return psd;
}

/// Frequency-domain whitening: output spectrum is input * sqrt(2*dt/S(f)),
/// which maps noise of PSD S onto unit-variance white samples.
inline TimeSeries whiten(const TimeSeries& ts, const PowerSpectrum& psd) {
  ts.validate("whiten");
  psd.validate("whiten");
  const std::size_t n = ts.samples.size();
  if (n % 2 != 0) throw make_error("whiten", "series length must be even");
  const double df_series = ts.sample_rate() / static_cast<double>(n);
  if (psd.values.size() != n / 2 + 1 || std::abs(psd.df - df_series) > 1e-9 * df_series)
    throw make_error("whiten", "PSD grid mismatch (interpolate_psd first)");

  auto spec = rfft(ts.samples);
  for (std::size_t k = 0; k < spec.size(); ++k)
    spec[k] *= std::sqrt(2.0 * ts.dt / psd.values[k]);
  auto out = irfft_hermitian(spec, n);
  const double inv_n = 1.0 / static_cast<double>(n);
  for (double& x : out) x *= inv_n;

  TimeSeries res = ts;
  res.samples = std::move(out);
  return res;
}

/// Resamples a PSD onto a finer or coarser grid with the same Nyquist,
/// interpolating linearly in log-PSD; endpoints are preserved exactly.
inline PowerSpectrum interpolate_psd(const PowerSpectrum& psd, double df_target) {
  psd.validate("interpolate_psd");
  if (df_target <= 0.0) throw make_error("interpolate_psd", "df_target must be positive");
  const double f_max = psd.f_max();
  const double n_t = f_max / df_target;
  const auto n_target = static_cast<std::size_t>(std::llround(n_t));
  if (n_target < 1 || std::abs(n_t - static_cast<double>(n_target)) > 1e-6)
    throw make_error("interpolate_psd", "incompatible grids: Nyquist not representable");

  PowerSpectrum out;
  out.df = df_target;
  out.detector = psd.detector;
  out.n_averages = psd.n_averages;
  out.values.resize(n_target + 1);
  const std::size_t last = psd.values.size() - 1;
  for (std::size_t j = 0; j <= n_target; ++j) {
    const double pos = static_cast<double>(j) * df_target / psd.df;
    auto i0 = static_cast<std::size_t>(std::floor(pos));
    if (i0 >= last) {
      out.values[j] = psd.values[last];
      continue;
    }
    const double frac = pos - static_cast<double>(i0);
    if (frac < 1e-12) {
      out.values[j] = psd.values[i0];
    } else {
      out.values[j] = std::exp((1.0 - frac) * std::log(psd.values[i0]) +
                               frac * std::log(psd.values[i0 + 1]));
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// PSD file format: one comment line, a header line, one row per bin.

inline void write_psd_csv(const PowerSpectrum& psd, const std::string& path) {
  psd.validate("write_psd_csv");
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw make_error("write_psd_csv", "cannot open " + path);
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", psd.df);
  out << "# detector=" << psd.detector.tag << " df=" << buf
      << " n_averages=" << psd.n_averages << "\n";
  out << "f_hz,psd\n";
  for (std::size_t k = 0; k < psd.values.size(); ++k) {
    std::snprintf(buf, sizeof(buf), "%.9g", static_cast<double>(k) * psd.df);
    out << buf << ",";
    std::snprintf(buf, sizeof(buf), "%.17g", psd.values[k]);
    out << buf << "\n";
  }
  if (!out) throw make_error("write_psd_csv", "write failed for " + path);
}

inline PowerSpectrum read_psd_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw make_error("read_psd_csv", "cannot open " + path);
  std::string line;
  if (!std::getline(in, line) || line.rfind("# detector=", 0) != 0)
    throw make_error("read_psd_csv", "missing metadata comment in " + path);

  PowerSpectrum psd;
  std::istringstream meta(line.substr(2));
  std::string kv;
  while (meta >> kv) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) continue;
    const std::string key = kv.substr(0, eq), val = kv.substr(eq + 1);
    if (key == "detector")
      psd.detector = DetectorId(val);
    else if (key == "df")
      psd.df = std::stod(val);
    else if (key == "n_averages")
      psd.n_averages = std::stoi(val);
  }
  if (!std::getline(in, line) || line != "f_hz,psd")
    throw make_error("read_psd_csv", "missing f_hz,psd header in " + path);
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos) throw make_error("read_psd_csv", "malformed row: " + line);
    psd.values.push_back(std::stod(line.substr(comma + 1)));
  }
  psd.validate("read_psd_csv");
  return psd;
}

}  // namespace gwflow

#endif  // GWFLOW_PSD_HPP
