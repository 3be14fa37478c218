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

#ifndef GWFLOW_FFT_HPP
#define GWFLOW_FFT_HPP

#include <complex>
#include <map>
#include <mutex>
#include <vector>

#include <fftw3.h>

#include "gwflow/types.hpp"

namespace gwflow {

// Thin FFTW wrapper. All transforms are unnormalized:
//   forward  X[k] = sum_n x[n] exp(-2*pi*i*k*n/N)
//   backward x[n] = sum_k X[k] exp(+2*pi*i*k*n/N)
// Plans are cached per (size, kind) behind a mutex; execution uses the
// new-array interface, which is safe to call from multiple threads. Plans are
// created with FFTW_ESTIMATE so planning is reproducible.
namespace fft_detail {

enum class Kind { forward, backward, r2c };

struct PlanCache {
  std::mutex mu;
  std::map<std::pair<std::size_t, int>, fftw_plan> plans;
  ~PlanCache() {
    for (auto& [key, plan] : plans) fftw_destroy_plan(plan);
    fftw_cleanup();
  }
};

inline fftw_plan get_plan(std::size_t n, Kind kind) {
  static PlanCache cache_holder;
  auto& cache = cache_holder.plans;
  std::lock_guard<std::mutex> lock(cache_holder.mu);
  auto key = std::make_pair(n, static_cast<int>(kind));
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;

  const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
  fftw_plan plan = nullptr;
  if (kind == Kind::r2c) {
    std::vector<double> in(n);
    std::vector<std::complex<double>> out(n / 2 + 1);
    plan = fftw_plan_dft_r2c_1d(static_cast<int>(n), in.data(),
                                reinterpret_cast<fftw_complex*>(out.data()), flags);
  } else {
    std::vector<std::complex<double>> in(n), out(n);
    plan = fftw_plan_dft_1d(static_cast<int>(n), reinterpret_cast<fftw_complex*>(in.data()),
                            reinterpret_cast<fftw_complex*>(out.data()),
                            kind == Kind::forward ? FFTW_FORWARD : FFTW_BACKWARD, flags);
  }
  if (!plan) throw make_error("fft", "fftw plan creation failed");
  cache.emplace(key, plan);
  return plan;
}

}  // namespace fft_detail

inline std::vector<std::complex<double>> fft_forward(const std::vector<std::complex<double>>& x) {
  if (x.empty()) throw make_error("fft", "empty input");
  std::vector<std::complex<double>> in(x), out(x.size());
  fftw_execute_dft(fft_detail::get_plan(x.size(), fft_detail::Kind::forward),
                   reinterpret_cast<fftw_complex*>(in.data()),
                   reinterpret_cast<fftw_complex*>(out.data()));
  return out;
}

inline std::vector<std::complex<double>> fft_backward(const std::vector<std::complex<double>>& x) {
  if (x.empty()) throw make_error("fft", "empty input");
  std::vector<std::complex<double>> in(x), out(x.size());
  fftw_execute_dft(fft_detail::get_plan(x.size(), fft_detail::Kind::backward),
                   reinterpret_cast<fftw_complex*>(in.data()),
                   reinterpret_cast<fftw_complex*>(out.data()));
  return out;
}

/// Forward transform of a real series; returns bins 0..N/2 (N must be even).
inline std::vector<std::complex<double>> rfft(const std::vector<double>& x) {
  if (x.empty()) throw make_error("fft", "empty input");
  if (x.size() % 2 != 0) throw make_error("fft", "rfft requires even length");
  std::vector<double> in(x);
  std::vector<std::complex<double>> out(x.size() / 2 + 1);
  fftw_execute_dft_r2c(fft_detail::get_plan(x.size(), fft_detail::Kind::r2c), in.data(),
                       reinterpret_cast<fftw_complex*>(out.data()));
  return out;
}

/// Unnormalized backward transform of a half spectrum (bins 0..N/2) assumed
/// Hermitian; returns the real series of length n. Caller divides by n to
/// invert rfft.
inline std::vector<double> irfft_hermitian(const std::vector<std::complex<double>>& half,
                                           std::size_t n) {
  if (half.size() != n / 2 + 1 || n % 2 != 0)
    throw make_error("fft", "half spectrum length must be n/2+1 with even n");
  std::vector<std::complex<double>> full(n);
  for (std::size_t k = 0; k <= n / 2; ++k) full[k] = half[k];
  for (std::size_t k = n / 2 + 1; k < n; ++k) full[k] = std::conj(half[n - k]);
  auto t = fft_backward(full);
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = t[i].real();
  return out;
}

inline bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

}  // namespace gwflow

#endif  // GWFLOW_FFT_HPP
