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

#ifndef GWFLOW_FILTER_HPP
#define GWFLOW_FILTER_HPP

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numeric>
#include <vector>

#include "gwflow/fft.hpp"
#include "gwflow/psd.hpp"
#include "gwflow/types.hpp"
#include "gwflow/waveform.hpp"

namespace gwflow {

struct Template {
  int id = 0;
  double chirp_mass = 0.0;  // solar masses
  double duration_s = 0.0;  // sweep time from f_low to the ISCO cutoff
};

/// Geometrically spaced chirp masses over [mc_min, mc_max] with ids 0..n-1.
/// A single-template bank sits at the lower edge.
inline std::vector<Template> build_bank(double mc_min, double mc_max, int n_templates,
                                        double f_low_hz) {
  if (!(mc_min > 0.0) || !(mc_max > mc_min))
    throw make_error("build_bank", "need 0 < mc_min < mc_max");
  if (n_templates < 1) throw make_error("build_bank", "need at least one template");
  std::vector<Template> bank;
  bank.reserve(static_cast<std::size_t>(n_templates));
  for (int i = 0; i < n_templates; ++i) {
    Template t;
    t.id = i;
    t.chirp_mass = n_templates == 1
                       ? mc_min
                       : mc_min * std::pow(mc_max / mc_min,
                                           static_cast<double>(i) /
                                               static_cast<double>(n_templates - 1));
    t.duration_s = chirp_duration_s(t.chirp_mass, f_low_hz);
    bank.push_back(t);
  }
  return bank;
}

/// Complex SNR time series of one template against one whitened segment.
struct SnrSeries {
  int template_id = 0;
  std::vector<std::complex<double>> samples;  // on the segment's time grid
  double sigma = 0.0;                         // template norm against the PSD
  double start_time_s = 0.0;
  double dt = 0.0;

  double time_at(std::size_t i) const { return start_time_s + static_cast<double>(i) * dt; }
};

namespace filter_detail {

// Frequency-domain weights w_hat[k] * conj(h[k]) * sqrt(dt / (2 S[k])): the
// complex SNR is (4 df / sigma) times the one-sided inverse transform of
// these. Shared by the filter and the chi-squared veto so both sides see the
// same normalization.
inline std::vector<std::complex<double>> overlap_integrand(
    const std::vector<std::complex<double>>& data_spec,
    const std::vector<std::complex<double>>& h_fd, const PowerSpectrum& psd, double dt) {
  std::vector<std::complex<double>> y(h_fd.size(), {0.0, 0.0});
  for (std::size_t k = 0; k < h_fd.size(); ++k) {
    if (h_fd[k] == std::complex<double>(0.0, 0.0)) continue;
    y[k] = data_spec[k] * std::conj(h_fd[k]) * std::sqrt(dt / (2.0 * psd.values[k]));
  }
  return y;
}

}  // namespace filter_detail

/// FFT matched filter over a whitened segment. Normalized so that Gaussian
/// noise gives E[|rho|^2] = 2 and a noiseless injection peaks at its optimal
/// SNR.
inline SnrSeries matched_filter(const TimeSeries& whitened, const Template& tmpl,
                                const PowerSpectrum& psd, double f_low_hz) {
  whitened.validate("matched_filter");
  const std::size_t n = whitened.samples.size();
  if (!is_power_of_two(n))
    throw make_error("matched_filter", "segment length must be a power of two");
  const double df = whitened.sample_rate() / static_cast<double>(n);
  if (psd.values.size() != n / 2 + 1 || std::abs(psd.df - df) > 1e-9 * df)
    throw make_error("matched_filter", "PSD grid mismatch");

  const auto h_fd = chirp_fd(tmpl.chirp_mass, df, n / 2 + 1, f_low_hz, 0.0, 0.0);
  const double sigma = optimal_sigma(h_fd, psd);
  if (!(sigma > 0.0)) throw make_error("matched_filter", "degenerate template");

  const auto data_spec = rfft(whitened.samples);
  const auto y = filter_detail::overlap_integrand(data_spec, h_fd, psd, whitened.dt);

  // One-sided inverse transform keeps both quadratures (complex SNR).
  std::vector<std::complex<double>> full(n, {0.0, 0.0});
  for (std::size_t k = 0; k < y.size(); ++k) full[k] = y[k];
  auto z = fft_backward(full);

  SnrSeries out;
  out.template_id = tmpl.id;
  out.sigma = sigma;
  out.start_time_s = whitened.start_time();
  out.dt = whitened.dt;
  out.samples.resize(n);
  const double scale = 4.0 * df / sigma;
  for (std::size_t i = 0; i < n; ++i) out.samples[i] = scale * z[i];
  return out;
}

/// Power chi-squared veto: splits the template into n_bins bands of equal
/// expected power and compares each band's SNR contribution at peak_time
/// against rho/n_bins. Returns the reduced chi-squared with 2*n_bins-2
/// degrees of freedom (expectation 1 for a matching signal in Gaussian
/// noise).
inline double chisq_veto(const TimeSeries& whitened, const Template& tmpl,
                         const PowerSpectrum& psd, double peak_time_s, int n_bins,
                         double f_low_hz) {
  if (n_bins < 2) throw make_error("chisq_veto", "need >= 2 bins");
  whitened.validate("chisq_veto");
  const std::size_t n = whitened.samples.size();
  const double df = whitened.sample_rate() / static_cast<double>(n);
  if (psd.values.size() != n / 2 + 1 || std::abs(psd.df - df) > 1e-9 * df)
    throw make_error("chisq_veto", "PSD grid mismatch");

  const double rel = (peak_time_s - whitened.start_time()) / whitened.dt;
  const auto idx = static_cast<std::ptrdiff_t>(std::llround(rel));
  if (idx < 0 || idx >= static_cast<std::ptrdiff_t>(n))
    throw make_error("chisq_veto", "peak time outside segment");

  const auto h_fd = chirp_fd(tmpl.chirp_mass, df, n / 2 + 1, f_low_hz, 0.0, 0.0);
  const double sigma = optimal_sigma(h_fd, psd);
  const auto data_spec = rfft(whitened.samples);
  const auto y = filter_detail::overlap_integrand(data_spec, h_fd, psd, whitened.dt);

  // Cumulative power fractions over the band; bin edges at multiples of 1/p.
  std::vector<std::size_t> band;
  std::vector<double> power;
  double total = 0.0;
  for (std::size_t k = 0; k < h_fd.size(); ++k) {
    const double p = std::norm(h_fd[k]) / psd.values[k];
    if (p > 0.0) {
      band.push_back(k);
      power.push_back(p);
      total += p;
    }
  }
  if (band.size() < static_cast<std::size_t>(n_bins))
    throw make_error("chisq_veto", "template band too narrow for requested bins");

  const double scale = 4.0 * df / sigma;
  const double omega = 2.0 * M_PI * static_cast<double>(idx) / static_cast<double>(n);
  std::vector<std::complex<double>> bin_snr(static_cast<std::size_t>(n_bins), {0.0, 0.0});
  double cum = 0.0;
  std::size_t bin = 0;
  for (std::size_t j = 0; j < band.size(); ++j) {
    const std::size_t k = band[j];
    const auto rot = std::polar(1.0, omega * static_cast<double>(k));
    bin_snr[bin] += scale * y[k] * rot;
    cum += power[j];
    while (bin + 1 < static_cast<std::size_t>(n_bins) &&
           cum * static_cast<double>(n_bins) >= static_cast<double>(bin + 1) * total)
      ++bin;
  }

  const std::complex<double> rho =
      std::accumulate(bin_snr.begin(), bin_snr.end(), std::complex<double>(0.0, 0.0));
  const auto p = static_cast<double>(n_bins);
  double chisq = 0.0;
  for (const auto& z : bin_snr) chisq += std::norm(z - rho / p);
  chisq *= p;
  return chisq / (2.0 * p - 2.0);
}

/// Reweighted SNR: the detection statistic. Downweights triggers whose
/// reduced chi-squared exceeds 1.
inline double reweight(double snr, double chisq_r) {
  if (snr < 0.0 || chisq_r < 0.0) throw make_error("reweight", "inputs must be non-negative");
  if (chisq_r <= 1.0) return snr;
  return snr * std::pow((1.0 + chisq_r * chisq_r * chisq_r) / 2.0, -1.0 / 6.0);
}

struct ClusteredPeak {
  std::size_t index = 0;
  double time_s = 0.0;
  double abs_snr = 0.0;
};

/// Greedy loudest-first clustering of threshold crossings: repeatedly keep
/// the loudest remaining sample (earlier time on ties) and suppress everything
/// within window_s of it. Kept peaks are therefore pairwise >= window_s apart.
inline std::vector<ClusteredPeak> cluster(const SnrSeries& snr, double threshold,
                                          double window_s) {
  if (threshold <= 0.0) throw make_error("cluster", "threshold must be positive");
  if (window_s < 0.0) throw make_error("cluster", "window must be non-negative");

  std::vector<ClusteredPeak> candidates;
  for (std::size_t i = 0; i < snr.samples.size(); ++i) {
    const double a = std::abs(snr.samples[i]);
    if (a >= threshold) candidates.push_back({i, snr.time_at(i), a});
  }
  std::sort(candidates.begin(), candidates.end(), [](const auto& a, const auto& b) {
    if (a.abs_snr != b.abs_snr) return a.abs_snr > b.abs_snr;
    return a.index < b.index;
  });

  std::vector<ClusteredPeak> kept;
  for (const auto& c : candidates) {
    bool blocked = false;
    for (const auto& k : kept) {
      if (std::abs(c.time_s - k.time_s) < window_s) {
        blocked = true;
        break;
      }
    }
    if (!blocked) kept.push_back(c);
  }
  std::sort(kept.begin(), kept.end(),
            [](const auto& a, const auto& b) { return a.index < b.index; });
  return kept;
}

}  // namespace gwflow

#endif  // GWFLOW_FILTER_HPP
