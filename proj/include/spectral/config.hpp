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

// Flat key = value experiment configuration files.
//
//   # comment
//   mode = subspace            subspace | covariance | weighted | scaling_m | scaling_d
//   m = 100
//   d = 10
//   profile = linear           explicit | exponential | linear
//   sigma = 10, 2              explicit profile
//   sigma1 = 100               exponential and linear profiles
//   decay = 0.5                exponential profile
//   gap = 10                   linear profile
//   rotation_seed = 7
//   k = 2
//   T = 1e-4, 1e-3             empty or absent: small-perturbation default
//   trials = 500
//   seed = 42
//   bounds = main, subspace    empty or absent: every applicable bound
//   gamma = 1, 0.5, 0          weighted mode
//   sweep = 100, 200, 400, 800 scaling modes
//   threads = 4
//   uniform_gap_constant = 1
//
// Later lines override earlier ones; unknown keys are errors.

#ifndef SPECTRAL_CONFIG_HPP_
#define SPECTRAL_CONFIG_HPP_

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "spectral/experiments.hpp"

namespace spectral {

std::vector<std::pair<std::string, std::string>> parse_key_values(std::istream& in);

// Sets one field from its text form; throws InputError on an unknown key or
// a malformed value.
void apply_setting(ExperimentConfig& cfg, const std::string& key, const std::string& value);

ExperimentConfig parse_experiment_config(std::istream& in, ExperimentConfig base = {});
ExperimentConfig load_experiment_config(const std::string& path, ExperimentConfig base = {});

}  // namespace spectral

#endif  // SPECTRAL_CONFIG_HPP_
