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

// The Gaussian mechanism: release A + sqrt(T) G through its right singular
// structure (top-k projector, rank-k covariance, or a general weighted Gram)
// and measure the Frobenius error against the same object built from A.

#ifndef SPECTRAL_MECHANISM_HPP_
#define SPECTRAL_MECHANISM_HPP_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "spectral/linalg.hpp"

namespace spectral {

struct NoiseConfig {
  double T = 0.0;  // per-entry noise variance
  std::uint64_t seed = 0;

  // T must be finite and nonnegative; T == 0 releases the exact target.
  void validate() const;
};

struct ReleaseResult {
  DenseMatrix released;  // d x d, symmetrized
  DenseVector perturbed_sigma;
  // Empty only when a degenerate target was released on explicit request.
  std::optional<double> error_frobenius;
  std::vector<std::string> flags;
};

// rows x cols iid N(0, 1), row-major draw order from NormalStream(seed).
DenseMatrix sample_gaussian_matrix(Eigen::Index rows, Eigen::Index cols, std::uint64_t seed);

// A + sqrt(T) * sample_gaussian_matrix(m, d, seed).
DenseMatrix perturb(const DenseMatrix& a, const NoiseConfig& cfg);

// Two singular values closer than this (relative to max(1, sigma_1)) are tied.
inline constexpr double kTieTolerance = 1e-12;

bool is_degenerate_split(const DenseVector& sigma, int k);

ReleaseResult release_subspace(const DenseMatrix& a, int k, const NoiseConfig& cfg,
                               bool allow_degenerate = false);
ReleaseResult release_covariance(const DenseMatrix& a, int k, const NoiseConfig& cfg);
ReleaseResult release_weighted(const DenseMatrix& a, const SpectralWeights& w,
                               const NoiseConfig& cfg);

// The same releases starting from an already perturbed matrix and a
// precomputed factorization of the unperturbed one. Monte Carlo drivers use
// these to factor A once per configuration.
ReleaseResult subspace_release_from(const DenseMatrix& perturbed,
                                    const SvdFactors<double>& truth, int k,
                                    bool allow_degenerate = false);
ReleaseResult covariance_release_from(const DenseMatrix& perturbed,
                                      const SvdFactors<double>& truth, int k);
ReleaseResult weighted_release_from(const DenseMatrix& perturbed,
                                    const SvdFactors<double>& truth, const SpectralWeights& w);

}  // namespace spectral

#endif  // SPECTRAL_MECHANISM_HPP_
