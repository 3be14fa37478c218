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

#ifndef GWFLOW_SHA256_HPP
#define GWFLOW_SHA256_HPP

#include <array>
#include <cstdint>
#include <fstream>
#include <string>
#include <vector>

#include <openssl/evp.h>

#include "gwflow/types.hpp"

namespace gwflow {

using Sha256 = std::array<unsigned char, 32>;

inline Sha256 sha256_bytes(const void* data, std::size_t n) {
  Sha256 out{};
  unsigned int len = 0;
  EVP_MD_CTX* ctx = EVP_MD_CTX_new();
  if (!ctx) throw make_error("sha256", "EVP_MD_CTX_new failed");
  if (EVP_DigestInit_ex(ctx, EVP_sha256(), nullptr) != 1 ||
      EVP_DigestUpdate(ctx, data, n) != 1 ||
      EVP_DigestFinal_ex(ctx, out.data(), &len) != 1) {
    EVP_MD_CTX_free(ctx);
    throw make_error("sha256", "digest computation failed");
  }
  EVP_MD_CTX_free(ctx);
  return out;
}

inline Sha256 sha256_string(const std::string& s) { return sha256_bytes(s.data(), s.size()); }

inline Sha256 sha256_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw make_error("sha256", "cannot open " + path);
  EVP_MD_CTX* ctx = EVP_MD_CTX_new();
  if (!ctx) throw make_error("sha256", "EVP_MD_CTX_new failed");
  EVP_DigestInit_ex(ctx, EVP_sha256(), nullptr);
  std::vector<char> buf(1 << 16);
  while (in) {
    in.read(buf.data(), static_cast<std::streamsize>(buf.size()));
    const std::streamsize got = in.gcount();
    if (got > 0) EVP_DigestUpdate(ctx, buf.data(), static_cast<std::size_t>(got));
  }
  Sha256 out{};
  unsigned int len = 0;
  EVP_DigestFinal_ex(ctx, out.data(), &len);
  EVP_MD_CTX_free(ctx);
  return out;
}

inline std::string to_hex(const Sha256& d) {
  static const char* hex = "0123456789abcdef";
  std::string s;
  s.reserve(64);
  for (unsigned char b : d) {
    s.push_back(hex[b >> 4]);
    s.push_back(hex[b & 0xf]);
  }
  return s;
}

inline Sha256 from_hex(const std::string& s) {
  if (s.size() != 64) throw make_error("sha256", "hex digest must be 64 characters");
  auto nib = [](char c) -> unsigned {
    if (c >= '0' && c <= '9') return static_cast<unsigned>(c - '0');
    if (c >= 'a' && c <= 'f') return static_cast<unsigned>(c - 'a' + 10);
    if (c >= 'A' && c <= 'F') return static_cast<unsigned>(c - 'A' + 10);
    throw make_error("sha256", "invalid hex character");
  };
  Sha256 out{};
  for (std::size_t i = 0; i < 32; ++i)
    out[i] = static_cast<unsigned char>((nib(s[2 * i]) << 4) | nib(s[2 * i + 1]));
  return out;
}

}  // namespace gwflow

#endif  // GWFLOW_SHA256_HPP
