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

#ifndef GWFLOW_RNG_HPP
#define GWFLOW_RNG_HPP

#include <cmath>
#include <cstdint>
#include <random>
#include <string>

namespace gwflow {

inline std::uint64_t fnv1a64(const void* data, std::size_t n, std::uint64_t h = 0xcbf29ce484222325ull) {
  const auto* p = static_cast<const unsigned char*>(data);
  for (std::size_t i = 0; i < n; ++i) {
    h ^= p[i];
    h *= 0x100000001b3ull;
  }
  return h;
}

inline std::uint64_t fnv1a64(const std::string& s, std::uint64_t h = 0xcbf29ce484222325ull) {
  return fnv1a64(s.data(), s.size(), h);
}

// Substream derivation: every consumer of randomness derives its own seed as
//   master ^ fnv1a64(component \0 tag \0 index)
// so that streams for different components/detectors/parts are independent
// and a run is fully determined by the single master seed.
inline std::uint64_t derive_seed(std::uint64_t master, const std::string& component,
                                 const std::string& tag = "", std::uint64_t index = 0) {
  std::uint64_t h = fnv1a64(component);
  h = fnv1a64("\0", 1, h);
  h = fnv1a64(tag, h);
  h = fnv1a64("\0", 1, h);
  unsigned char idx[8];
  for (int i = 0; i < 8; ++i) idx[i] = static_cast<unsigned char>((index >> (8 * i)) & 0xff);
  h = fnv1a64(idx, 8, h);
  return master ^ h;
}

// mt19937_64 plus a hand-rolled Box-Muller transform. The engine's output
// sequence is pinned by the standard and the uniform->double mapping below is
// explicit, so the Gaussian stream is reproducible bit-for-bit across runs.
class GaussianStream {
 public:
  explicit GaussianStream(std::uint64_t seed) : eng_(seed) {}

  double uniform() {  // in [0, 1)
    return static_cast<double>(eng_() >> 11) * 0x1.0p-53;
  }

  double normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    // u1 in (0, 1] so the log is finite.
    const double u1 = 1.0 - uniform();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 2.0 * M_PI * u2;
    spare_ = r * std::sin(a);
    have_spare_ = true;
    return r * std::cos(a);
  }

 private:
  std::mt19937_64 eng_;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

}  // namespace gwflow

#endif  // GWFLOW_RNG_HPP
