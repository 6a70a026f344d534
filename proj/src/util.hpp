// Copyright 2026 The VoiceBench Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace voicebench {

// Deterministic PRNG (xoshiro256** seeded via splitmix64). We do not use the
// <random> distributions because their output is implementation-defined;
// every randomized result in the toolkit must be reproducible from a seed.
class Rng {
 public:
  explicit Rng(uint64_t seed);

  uint64_t next_u64();
  // Uniform in [0, 1), 53-bit resolution.
  double next_double();
  // Uniform integer in [0, n). n must be > 0.
  uint64_t next_below(uint64_t n);
  // Standard normal via Box-Muller.
  double next_normal();

  // Independent stream derived from this generator's seed and a stream id.
  // Forking does not advance this generator.
  Rng fork(uint64_t stream) const;

  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (size_t i = v.size(); i > 1; --i) {
      size_t j = static_cast<size_t>(next_below(i));
      std::swap(v[i - 1], v[j]);
    }
  }

 private:
  uint64_t state_[4];
  uint64_t seed_;
  bool have_spare_normal_ = false;
  double spare_normal_ = 0.0;
};

uint32_t crc32(const void* data, size_t len);

std::string base64_encode(const void* data, size_t len);
std::vector<uint8_t> base64_decode(const std::string& text);

// Bit-exact double <-> text transport (little-endian IEEE754 via base64).
std::string encode_doubles(const double* values, size_t count);
std::vector<double> decode_doubles(const std::string& text);

// Linear-interpolation percentile, p in [0, 100]. Copies and sorts.
double percentile(std::vector<double> values, double p);
double mean_of(const std::vector<double>& values);
double stddev_of(const std::vector<double>& values);  // population convention

std::string trim(const std::string& s);
std::vector<std::string> split_string(const std::string& s, char delim);
std::string lowercase(std::string s);

// Row-major dense matrix of doubles. NaN is the missing-value marker.
struct Matrix {
  size_t rows = 0;
  size_t cols = 0;
  std::vector<double> data;

  Matrix() = default;
  Matrix(size_t r, size_t c, double fill = 0.0) : rows(r), cols(c), data(r * c, fill) {}

  double& at(size_t r, size_t c) { return data[r * cols + c]; }
  double at(size_t r, size_t c) const { return data[r * cols + c]; }
  const double* row(size_t r) const { return data.data() + r * cols; }
  double* row(size_t r) { return data.data() + r * cols; }

  Matrix take_rows(const std::vector<size_t>& idx) const;
};

}  // namespace voicebench
