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

#ifndef GWFLOW_NOISE_HPP
#define GWFLOW_NOISE_HPP

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "gwflow/fft.hpp"
#include "gwflow/psd.hpp"
#include "gwflow/rng.hpp"
#include "gwflow/types.hpp"

namespace gwflow {

struct NoiseModel {
  enum class Kind { white, power_law };
  Kind kind = Kind::white;
  double sigma = 1.0;      // white-noise standard deviation (dimensionless strain)
  double f_ref_hz = 100.0;  // power-law parameters
  double exponent = 0.0;
  double floor = 0.0;

  void validate() const {
    if (kind == Kind::white) {
      if (!(sigma > 0.0)) throw make_error("NoiseModel", "sigma must be positive");
    } else {
      if (!(f_ref_hz > 0.0)) throw make_error("NoiseModel", "f_ref_hz must be positive");
      if (floor < 0.0) throw make_error("NoiseModel", "floor must be non-negative");
    }
  }

  /// Analytic one-sided PSD at frequency f. Frequencies below one grid step
  /// are evaluated at f_min so negative exponents stay finite at DC.
  double psd_at(double f, double f_min) const {
    if (kind == Kind::white) {
      // one-sided white PSD for sampling rate fs = 2 * Nyquist; callers pass
      // f_min = df and use model_psd for the grid form.
      throw make_error("NoiseModel", "psd_at(white) requires model_psd with a rate");
    }
    const double fe = std::max(f, f_min);
    const double v = floor + std::pow(fe / f_ref_hz, exponent);
    if (!(v > 0.0)) throw make_error("NoiseModel", "PSD must be positive at analyzed frequency");
    return v;
  }
};

/// Evaluates the model PSD on a uniform grid of n_bins points spaced df,
/// covering f = 0 .. Nyquist for sampling rate fs.
inline PowerSpectrum model_psd(const NoiseModel& model, const DetectorId& detector, double df,
                               std::size_t n_bins, double fs) {
  model.validate();
  PowerSpectrum psd;
  psd.df = df;
  psd.detector = detector;
  psd.n_averages = 0;
  psd.values.resize(n_bins);
  for (std::size_t k = 0; k < n_bins; ++k) {
    if (model.kind == NoiseModel::Kind::white)
      psd.values[k] = 2.0 * model.sigma * model.sigma / fs;
    else
      psd.values[k] = model.psd_at(static_cast<double>(k) * df, df);
  }
  psd.validate("model_psd");
  return psd;
}

/// Colored Gaussian noise whose one-sided PSD matches the model in
/// expectation. Identical (seed, parameters) reproduce the series bit for
/// bit; different detectors draw from independent substreams.
inline TimeSeries generate_noise(const NoiseModel& model, const DetectorId& detector,
                                 std::int64_t start_s, double duration_s, double sample_rate_hz,
                                 std::uint64_t seed) {
  model.validate();
  if (duration_s <= 0.0) throw make_error("generate_noise", "non-positive duration");
  if (sample_rate_hz < 1.0 ||
      std::abs(sample_rate_hz - std::round(sample_rate_hz)) > 1e-9)
    throw make_error("generate_noise", "sample rate must be a whole number of Hz");
  const double n_f = duration_s * sample_rate_hz;
  const auto n = static_cast<std::size_t>(std::llround(n_f));
  if (n == 0 || std::abs(n_f - static_cast<double>(n)) > 1e-6)
    throw make_error("generate_noise", "non-integer sample count");

  TimeSeries ts;
  ts.detector = detector;
  ts.start_s = start_s;
  ts.start_ns = 0;
  ts.dt = 1.0 / sample_rate_hz;

  GaussianStream g(derive_seed(seed, "synth.noise", detector.tag, 0));

  if (model.kind == NoiseModel::Kind::white) {
    ts.samples.resize(n);
    for (double& x : ts.samples) x = model.sigma * g.normal();
    return ts;
  }

  // Frequency-domain synthesis: draw Hermitian spectrum bins with
  // E|X_k|^2 = N*fs*S_k/2 interior (doubled at DC/Nyquist where the
  // one-sided PSD counts the bin once), then invert.
  if (n % 2 != 0) throw make_error("generate_noise", "sample count must be even");
  const std::size_t n_bins = n / 2 + 1;
  const double df = sample_rate_hz / static_cast<double>(n);
  const PowerSpectrum psd = model_psd(model, detector, df, n_bins, sample_rate_hz);
  std::vector<std::complex<double>> spec(n_bins);
  const double nfs = static_cast<double>(n) * sample_rate_hz;
  spec[0] = g.normal() * std::sqrt(nfs * psd.values[0]);
  for (std::size_t k = 1; k + 1 < n_bins; ++k) {
    const double amp = std::sqrt(nfs * psd.values[k] / 4.0);
    spec[k] = std::complex<double>(amp * g.normal(), amp * g.normal());
  }
  spec[n_bins - 1] = g.normal() * std::sqrt(nfs * psd.values[n_bins - 1]);

  auto x = irfft_hermitian(spec, n);
  const double inv_n = 1.0 / static_cast<double>(n);
  for (double& v : x) v *= inv_n;
  ts.samples = std::move(x);
  return ts;
}

}  // namespace gwflow

#endif  // GWFLOW_NOISE_HPP
