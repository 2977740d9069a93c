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

#include "spectral/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <sstream>

#include "spectral/errors.hpp"
#include "spectral/matrix_io.hpp"

namespace spectral {

namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return "";
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

template <typename Int>
Int parse_int(const std::string& key, const std::string& text) {
  const std::string t = trim(text);
  Int value{};
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), value);
  if (ec != std::errc() || ptr != t.data() + t.size() || t.empty()) {
    throw InputError("config: '" + key + "' expects an integer, got '" + text + "'");
  }
  return value;
}

double parse_real(const std::string& key, const std::string& text) {
  const auto values = parse_double_list(text);
  if (values.size() != 1) {
    throw InputError("config: '" + key + "' expects one number, got '" + text + "'");
  }
  return values.front();
}

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

std::vector<double> real_list(const std::string& text) {
  if (trim(text).empty()) return {};
  return parse_double_list(text);
}

}  // namespace

std::vector<std::pair<std::string, std::string>> parse_key_values(std::istream& in) {
  std::vector<std::pair<std::string, std::string>> out;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw InputError("config line " + std::to_string(line_no) + ": expected key = value");
    }
    const std::string key = trim(line.substr(0, eq));
    if (key.empty()) {
      throw InputError("config line " + std::to_string(line_no) + ": empty key");
    }
    out.emplace_back(key, trim(line.substr(eq + 1)));
  }
  return out;
}

void apply_setting(ExperimentConfig& cfg, const std::string& key, const std::string& value) {
  if (key == "mode") {
    cfg.mode = experiment_mode_from_string(value);
  } else if (key == "m") {
    cfg.spec.m = parse_int<int>(key, value);
  } else if (key == "d") {
    cfg.spec.d = parse_int<int>(key, value);
  } else if (key == "profile") {
    cfg.spec.profile = profile_kind_from_string(value);
  } else if (key == "sigma") {
    cfg.spec.sigma = real_list(value);
  } else if (key == "sigma1") {
    cfg.spec.sigma1 = parse_real(key, value);
  } else if (key == "decay") {
    cfg.spec.decay = parse_real(key, value);
  } else if (key == "gap") {
    cfg.spec.gap = parse_real(key, value);
  } else if (key == "rotation_seed") {
    cfg.spec.rotation_seed = parse_int<std::uint64_t>(key, value);
  } else if (key == "k") {
    cfg.k = parse_int<int>(key, value);
  } else if (key == "T") {
    cfg.T = real_list(value);
  } else if (key == "trials") {
    cfg.trials = parse_int<int>(key, value);
  } else if (key == "seed") {
    cfg.seed = parse_int<std::uint64_t>(key, value);
  } else if (key == "bounds") {
    cfg.bounds_requested = split_list(value);
  } else if (key == "gamma") {
    cfg.gamma = real_list(value);
  } else if (key == "sweep") {
    cfg.sweep.clear();
    for (const auto& item : split_list(value)) cfg.sweep.push_back(parse_int<int>(key, item));
  } else if (key == "threads") {
    cfg.threads = parse_int<int>(key, value);
  } else if (key == "uniform_gap_constant") {
    cfg.uniform_gap_constant = parse_real(key, value);
  } else {
    throw InputError("config: unknown key '" + key + "'");
  }
}

ExperimentConfig parse_experiment_config(std::istream& in, ExperimentConfig base) {
  for (const auto& [key, value] : parse_key_values(in)) apply_setting(base, key, value);
  return base;
}

ExperimentConfig load_experiment_config(const std::string& path, ExperimentConfig base) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open config file " + path);
  return parse_experiment_config(in, std::move(base));
}

}  // namespace spectral
