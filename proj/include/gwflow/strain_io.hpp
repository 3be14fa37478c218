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

#ifndef GWFLOW_STRAIN_IO_HPP
#define GWFLOW_STRAIN_IO_HPP

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <string>
#include <vector>

#include "gwflow/sha256.hpp"
#include "gwflow/types.hpp"

namespace gwflow {

// Strain container format ("GWSD", version 1):
//   magic "GWSD" | version u16 LE | detector 2 ASCII | start_s i64 LE |
//   start_ns u32 LE | sample_rate_hz f64 LE | n_samples u64 LE |
//   SHA-256 of payload (32 bytes) | payload: n_samples f64 LE
inline constexpr std::uint16_t kStrainFormatVersion = 1;

namespace io_detail {

inline void put_u16(std::string& b, std::uint16_t v) {
  for (int i = 0; i < 2; ++i) b.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}
inline void put_u32(std::string& b, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) b.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}
inline void put_u64(std::string& b, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) b.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}
inline void put_f64(std::string& b, double v) { put_u64(b, std::bit_cast<std::uint64_t>(v)); }

class Reader {
 public:
  Reader(const std::string& data, const std::string& context) : d_(data), ctx_(context) {}

  std::string take(std::size_t n) {
    if (pos_ + n > d_.size()) throw make_error(ctx_, "truncated file");
    std::string s = d_.substr(pos_, n);
    pos_ += n;
    return s;
  }
  std::uint16_t u16() { return static_cast<std::uint16_t>(u_(2)); }
  std::uint32_t u32() { return static_cast<std::uint32_t>(u_(4)); }
  std::uint64_t u64() { return u_(8); }
  std::int64_t i64() { return static_cast<std::int64_t>(u_(8)); }
  double f64() { return std::bit_cast<double>(u_(8)); }
  std::size_t pos() const { return pos_; }

 private:
  std::uint64_t u_(int n) {
    if (pos_ + static_cast<std::size_t>(n) > d_.size()) throw make_error(ctx_, "truncated file");
    std::uint64_t v = 0;
    for (int i = 0; i < n; ++i)
      v |= static_cast<std::uint64_t>(static_cast<unsigned char>(d_[pos_ + i])) << (8 * i);
    pos_ += static_cast<std::size_t>(n);
    return v;
  }
  const std::string& d_;
  std::string ctx_;
  std::size_t pos_ = 0;
};

}  // namespace io_detail

/// Serializes a strain series; returns the SHA-256 of the payload, which is
/// also stored in the header.
inline Sha256 write_strain(const TimeSeries& ts, const std::string& path) {
  ts.validate("write_strain");

  std::string payload;
  payload.reserve(ts.samples.size() * 8);
  for (double x : ts.samples) io_detail::put_f64(payload, x);
  const Sha256 digest = sha256_string(payload);

  std::string header = "GWSD";
  io_detail::put_u16(header, kStrainFormatVersion);
  header += ts.detector.tag;
  io_detail::put_u64(header, std::bit_cast<std::uint64_t>(ts.start_s));
  io_detail::put_u32(header, ts.start_ns);
  io_detail::put_f64(header, ts.sample_rate());
  io_detail::put_u64(header, ts.samples.size());
  header.append(reinterpret_cast<const char*>(digest.data()), digest.size());

  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw make_error("write_strain", "cannot open " + path);
  out.write(header.data(), static_cast<std::streamsize>(header.size()));
  out.write(payload.data(), static_cast<std::streamsize>(payload.size()));
  if (!out) throw make_error("write_strain", "write failed for " + path);
  return digest;
}

inline TimeSeries read_strain(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw make_error("read_strain", "cannot open " + path);
  std::string data((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());

  io_detail::Reader r(data, "read_strain");
  if (r.take(4) != "GWSD") throw make_error("read_strain", "bad magic");
  const std::uint16_t version = r.u16();
  if (version != kStrainFormatVersion)
    throw make_error("read_strain",
                     "version mismatch: file has " + std::to_string(version) + ", expected " +
                         std::to_string(kStrainFormatVersion));

  TimeSeries ts;
  ts.detector = DetectorId(r.take(2));
  ts.start_s = r.i64();
  ts.start_ns = r.u32();
  const double fs = r.f64();
  const std::uint64_t n = r.u64();

  Sha256 stored{};
  const std::string digest_bytes = r.take(32);
  std::memcpy(stored.data(), digest_bytes.data(), 32);

  const std::size_t payload_at = r.pos();
  if (payload_at + n * 8 != data.size()) throw make_error("read_strain", "truncated file");
  const Sha256 actual = sha256_bytes(data.data() + payload_at, n * 8);
  if (actual != stored) throw make_error("read_strain", "checksum mismatch");

  if (fs <= 0) throw make_error("read_strain", "non-positive sample rate");
  ts.dt = 1.0 / fs;
  ts.samples.resize(n);
  for (std::uint64_t i = 0; i < n; ++i) ts.samples[i] = r.f64();
  ts.validate("read_strain");
  return ts;
}

}  // namespace gwflow

#endif  // GWFLOW_STRAIN_IO_HPP
