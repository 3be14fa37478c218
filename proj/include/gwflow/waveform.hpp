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

#ifndef GWFLOW_WAVEFORM_HPP
#define GWFLOW_WAVEFORM_HPP

#include <cmath>
#include <complex>
#include <vector>

#include "gwflow/fft.hpp"
#include "gwflow/psd.hpp"
#include "gwflow/types.hpp"

namespace gwflow {

namespace constants {
inline constexpr double G = 6.67430e-11;          // m^3 kg^-1 s^-2
inline constexpr double c_light = 299792458.0;    // m/s
inline constexpr double solar_mass_kg = 1.98892e30;
// G * M_sun / c^3, the natural time unit of a solar mass.
inline const double solar_mass_s = G * solar_mass_kg / (c_light * c_light * c_light);
}  // namespace constants

/// Frequency cutoff at the innermost stable circular orbit for an equal-mass
/// binary of the given chirp mass (total mass = 2^(6/5) * Mc).
inline double isco_frequency_hz(double chirp_mass_solar) {
  const double total_mass_s = std::pow(2.0, 1.2) * chirp_mass_solar * constants::solar_mass_s;
  return 1.0 / (std::pow(6.0, 1.5) * M_PI * total_mass_s);
}

/// Newtonian time to coalescence from frequency f.
inline double chirp_time_s(double chirp_mass_solar, double f_hz) {
  const double mc_s = chirp_mass_solar * constants::solar_mass_s;
  return (5.0 / 256.0) * std::pow(M_PI * f_hz, -8.0 / 3.0) * std::pow(mc_s, -5.0 / 3.0);
}

/// Sweep duration from f_low to the ISCO cutoff.
inline double chirp_duration_s(double chirp_mass_solar, double f_low_hz) {
  const double f_cut = isco_frequency_hz(chirp_mass_solar);
  if (f_cut <= f_low_hz) return 0.0;
  return chirp_time_s(chirp_mass_solar, f_low_hz) - chirp_time_s(chirp_mass_solar, f_cut);
}

/// Stationary-phase Newtonian inspiral evaluated on the rfft grid
/// (n_bins points spaced df): amplitude f^(-7/6) inside [f_low, f_isco],
/// zero outside, unit overall amplitude. The phase
///   2*pi*f*t_ref - phase - pi/4 + (3/128) * (pi*Mc*f*G/c^3)^(-5/3)
/// enters negated because the series is reconstructed with the e^{+2*pi*i*f*t}
/// inverse transform; this puts coalescence at t_ref.
inline std::vector<std::complex<double>> chirp_fd(double chirp_mass_solar, double df,
                                                  std::size_t n_bins, double f_low_hz,
                                                  double t_ref_s, double phase_rad) {
  if (chirp_mass_solar <= 0.0) throw make_error("chirp_fd", "chirp mass must be positive");
  if (f_low_hz <= 0.0) throw make_error("chirp_fd", "f_low must be positive");
  const double f_nyquist = df * static_cast<double>(n_bins - 1);
  if (f_low_hz >= f_nyquist) throw make_error("chirp_fd", "template band outside Nyquist");
  const double f_cut = std::min(isco_frequency_hz(chirp_mass_solar), f_nyquist);
  if (f_cut <= f_low_hz) throw make_error("chirp_fd", "template band outside Nyquist");

  const double mc_s = chirp_mass_solar * constants::solar_mass_s;
  std::vector<std::complex<double>> h(n_bins, {0.0, 0.0});
  for (std::size_t k = 1; k < n_bins; ++k) {
    const double f = static_cast<double>(k) * df;
    if (f < f_low_hz || f > f_cut) continue;
    const double amp = std::pow(f, -7.0 / 6.0);
    const double psi = 2.0 * M_PI * f * t_ref_s - phase_rad - M_PI / 4.0 +
                       (3.0 / 128.0) * std::pow(M_PI * mc_s * f, -5.0 / 3.0);
    h[k] = std::polar(amp, -psi);
  }
  return h;
}

/// Noise-weighted template norm sigma = sqrt(4*df*sum |h(f)|^2 / S(f)); the
/// optimal SNR of a unit-amplitude injection.
inline double optimal_sigma(const std::vector<std::complex<double>>& h_fd,
                            const PowerSpectrum& psd) {
  if (h_fd.size() != psd.values.size())
    throw make_error("optimal_sigma", "PSD grid mismatch");
  double acc = 0.0;
  for (std::size_t k = 0; k < h_fd.size(); ++k) acc += std::norm(h_fd[k]) / psd.values[k];
  return std::sqrt(4.0 * psd.df * acc);
}

struct InjectionSpec {
  double chirp_mass = 30.0;          // solar masses
  double coalescence_time_s = 0.0;   // epoch seconds, sub-sample allowed
  double phase = 0.0;                // radians in [0, 2*pi)
  double target_snr = 18.0;          // single-detector optimal SNR
  double inter_detector_delay_s = 0.0;

  void validate() const {
    if (!(chirp_mass > 0.0)) throw make_error("InjectionSpec", "chirp_mass must be positive");
    if (!(target_snr > 0.0)) throw make_error("InjectionSpec", "target_snr must be positive");
    if (phase < 0.0 || phase >= 2.0 * M_PI)
      throw make_error("InjectionSpec", "phase must be in [0, 2*pi)");
  }
};

/// Returns ts + chirp scaled so the injected waveform's optimal SNR against
/// `psd` equals spec.target_snr. The input series is not modified.
inline TimeSeries inject(const TimeSeries& ts, const InjectionSpec& spec,
                         const PowerSpectrum& psd, double f_low_hz) {
  ts.validate("inject");
  spec.validate();
  const std::size_t n = ts.samples.size();
  if (n % 2 != 0) throw make_error("inject", "series length must be even");
  const double df = ts.sample_rate() / static_cast<double>(n);
  if (psd.values.size() != n / 2 + 1 || std::abs(psd.df - df) > 1e-9 * df)
    throw make_error("inject", "PSD grid mismatch");

  const double t_rel = spec.coalescence_time_s - ts.start_time();
  if (t_rel < 0.0 || t_rel >= ts.duration())
    throw make_error("inject", "coalescence time outside segment");

  auto h_fd = chirp_fd(spec.chirp_mass, df, n / 2 + 1, f_low_hz, t_rel, spec.phase);
  const double sigma1 = optimal_sigma(h_fd, psd);
  if (!(sigma1 > 0.0)) throw make_error("inject", "degenerate template (zero norm)");
  const double scale = spec.target_snr / sigma1;

  // h_fd is in physical units; the DFT-bin spectrum is h_fd/dt.
  const double dft_scale = scale / ts.dt;
  for (auto& v : h_fd) v *= dft_scale;
  auto h_t = irfft_hermitian(h_fd, n);

  TimeSeries out = ts;
  const double inv_n = 1.0 / static_cast<double>(n);
  for (std::size_t i = 0; i < n; ++i) out.samples[i] += h_t[i] * inv_n;
  return out;
}

}  // namespace gwflow

#endif  // GWFLOW_WAVEFORM_HPP
