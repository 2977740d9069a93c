// Copyright 2026 The spectral-lab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Reproducible randomness.
//
// Every Gaussian in the project comes from a NormalStream. A stream is a
// std::mt19937_64 engine (whose output sequence is fixed by the C++ standard)
// seeded with splitmix64(seed), turned into standard normals by the Marsaglia
// polar method below. Generator version: "mt64-polar-1". Changing any step of
// this pipeline changes every released number and must bump that tag.
//
// Independent substreams are obtained with derive_seed(root, tag, index), so a
// trial never shares draws with another trial or with a different purpose.

#ifndef SPECTRAL_RANDOM_HPP_
#define SPECTRAL_RANDOM_HPP_

#include <cstdint>
#include <random>
#include <string_view>

#include "spectral/linalg.hpp"

namespace spectral {

inline constexpr std::string_view kGeneratorVersion = "mt64-polar-1";

std::uint64_t splitmix64(std::uint64_t x);

// 64-bit FNV-1a of the tag bytes.
std::uint64_t hash_tag(std::string_view tag);

// splitmix64(splitmix64(root ^ splitmix64(hash_tag(tag))) + index).
std::uint64_t derive_seed(std::uint64_t root, std::string_view tag, std::uint64_t index);

class NormalStream {
 public:
  explicit NormalStream(std::uint64_t seed);

  // Uniform on the open interval (0, 1) with 53 random bits.
  double uniform();
  double normal();

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

// rows x cols standard normals drawn in row-major order.
DenseMatrix gaussian_matrix(Eigen::Index rows, Eigen::Index cols, NormalStream& stream);

}  // namespace spectral

#endif  // SPECTRAL_RANDOM_HPP_
