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

// Monte Carlo experiments comparing measured release errors with every
// applicable bound: synthetic matrices with prescribed spectra, parallel
// trials with per-trial seed substreams, and log-log scaling fits.

#ifndef SPECTRAL_EXPERIMENTS_HPP_
#define SPECTRAL_EXPERIMENTS_HPP_

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "spectral/bounds.hpp"
#include "spectral/linalg.hpp"

namespace spectral {

enum class ProfileKind { kExplicit, kExponential, kLinear };

std::string to_string(ProfileKind kind);
ProfileKind profile_kind_from_string(const std::string& name);

struct MatrixSpec {
  int m = 0;
  int d = 0;
  ProfileKind profile = ProfileKind::kExplicit;
  // Explicit singular values. A list shorter than d is padded with its last
  // entry, which lets one spec describe a spiked spectrum for any d.
  std::vector<double> sigma;
  double sigma1 = 1.0;  // exponential and linear profiles
  double decay = 0.5;   // exponential: sigma_i = sigma1 * decay^(i-1)
  double gap = 0.0;     // linear: sigma_i = sigma1 - (i-1) * gap
  std::uint64_t rotation_seed = 0;

  void validate() const;
  DenseVector singular_values() const;
};

// U diag(sigma) V^T with U (m x d) and V (d x d) Haar-distributed: QR of
// Gaussian matrices drawn from derive_seed(rotation_seed, "rotation-u"/"-v", 0)
// with diag(R) >= 0.
DenseMatrix gen_matrix(const MatrixSpec& spec);

enum class ExperimentMode { kSubspace, kCovariance, kWeighted, kScalingM, kScalingD };

std::string to_string(ExperimentMode mode);
ExperimentMode experiment_mode_from_string(const std::string& name);

struct ExperimentConfig {
  MatrixSpec spec;
  int k = 1;
  // Noise variances; empty means the small-perturbation default.
  std::vector<double> T;
  int trials = 500;
  std::uint64_t seed = 0;
  ExperimentMode mode = ExperimentMode::kSubspace;
  // Bound labels to report (see kBoundLabels); empty means all applicable.
  std::vector<std::string> bounds_requested;
  // Weights for kWeighted; must be nonincreasing with zeros past k.
  std::vector<double> gamma;
  // Values of m (kScalingM) or d (kScalingD).
  std::vector<int> sweep;
  int threads = 1;
  double uniform_gap_constant = 1.0;

  void validate() const;
};

// Every bound label a summary can carry, in CSV column order.
extern const std::vector<std::string> kBoundLabels;

// T with sqrt(T) (sqrt(m) + sqrt(d)) = 0.1 * min_{i<=k} (sigma_i - sigma_{i+1}).
double default_noise_variance(const DenseVector& sigma, int m, int k);

struct LabeledBound {
  std::string label;
  BoundValue value;
};

struct ExperimentSummary {
  std::string mode;
  int m = 0;
  int d = 0;
  int k = 0;
  double T = 0.0;
  int trials = 0;
  std::uint64_t seed = 0;

  // Frobenius error of the release, its square, and their standard errors
  // (unbiased sample variance).
  double empirical_mean = 0.0;
  double empirical_stderr = 0.0;
  double empirical_mean_sq = 0.0;
  double empirical_stderr_sq = 0.0;
  double max_sample = 0.0;
  // Leading-order prediction of the mean squared error.
  double first_order_prediction = 0.0;

  std::vector<LabeledBound> bounds;
  std::optional<AssumptionReport> assumption;
  // bound / empirical for every finite bound whose regime holds. Bounds on the second moment
  // (main, main_explicit, covariance) are compared with the root mean square
  // error, all others with the mean error.
  std::vector<std::pair<std::string, double>> ratios;
  std::vector<std::string> warnings;
  double runtime_seconds = 0.0;

  const LabeledBound* bound(const std::string& label) const;
  std::optional<double> ratio(const std::string& label) const;
};

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double slope_stderr = 0.0;
  double ci_low = 0.0;  // 95% normal interval
  double ci_high = 0.0;
};

struct ScalingResult {
  std::string swept;  // "m" or "d"
  std::vector<int> values;
  std::vector<ExperimentSummary> points;
  LinearFit empirical;   // log(empirical_mean) vs log(value), weighted
  LinearFit dkw_whp;     // sqrt(k m T) / gap
  LinearFit dkw_proxy;   // sqrt(k T) (sqrt(m) + sqrt(d)) / gap
  LinearFit subspace;    // sqrt(k d T) / gap
};

std::vector<ExperimentSummary> run_subspace_experiment(const ExperimentConfig& cfg);
std::vector<ExperimentSummary> run_covariance_experiment(const ExperimentConfig& cfg);
std::vector<ExperimentSummary> run_weighted_experiment(const ExperimentConfig& cfg);
ScalingResult run_scaling_study(const ExperimentConfig& cfg);

// Dispatch on cfg.mode for the three non-scaling modes.
std::vector<ExperimentSummary> run_experiment(const ExperimentConfig& cfg);

// Weighted least squares of y on x; weights empty means ordinary least squares.
LinearFit fit_line(const std::vector<double>& x, const std::vector<double>& y,
                   const std::vector<double>& weights = {});

}  // namespace spectral

#endif  // SPECTRAL_EXPERIMENTS_HPP_
