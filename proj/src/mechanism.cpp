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

#include "spectral/mechanism.hpp"

#include <cmath>

#include "spectral/random.hpp"

namespace spectral {
namespace {

void require_rank(int k, int max_k, const char* who) {
  if (k < 1 || k > max_k) {
    throw InputError(std::string(who) + ": k=" + std::to_string(k) + " outside [1, " +
                     std::to_string(max_k) + "]");
  }
}

void require_shape(const DenseMatrix& perturbed, const SvdFactors<double>& truth) {
  if (perturbed.cols() != truth.right.cols() || perturbed.rows() != truth.left.rows()) {
    throw InputError("release: perturbed matrix " +
                     shape_string(perturbed.rows(), perturbed.cols()) +
                     " does not match the factored target");
  }
}

}  // namespace

void NoiseConfig::validate() const {
  if (!std::isfinite(T) || T < 0) throw InputError("noise config: T must be finite and >= 0");
}

DenseMatrix sample_gaussian_matrix(Eigen::Index rows, Eigen::Index cols, std::uint64_t seed) {
  if (rows < 1 || cols < 1) throw InputError("sample_gaussian_matrix: empty shape");
  NormalStream stream(seed);
  return gaussian_matrix(rows, cols, stream);
}

DenseMatrix perturb(const DenseMatrix& a, const NoiseConfig& cfg) {
  cfg.validate();
  if (!a.allFinite()) throw InputError("perturb: non-finite entries");
  return a + std::sqrt(cfg.T) * sample_gaussian_matrix(a.rows(), a.cols(), cfg.seed);
}

bool is_degenerate_split(const DenseVector& sigma, int k) {
  if (k < 1 || k >= sigma.size()) return false;
  const double scale = std::max(1.0, sigma[0]);
  return sigma[k - 1] - sigma[k] <= kTieTolerance * scale;
}

ReleaseResult subspace_release_from(const DenseMatrix& perturbed,
                                    const SvdFactors<double>& truth, int k,
                                    bool allow_degenerate) {
  const int d = static_cast<int>(truth.right.cols());
  require_rank(k, d - 1, "release_subspace");
  require_shape(perturbed, truth);
  const bool degenerate = is_degenerate_split(truth.singular_values, k);
  if (degenerate && !allow_degenerate) {
    throw DegenerateTruthError("release_subspace: sigma_k == sigma_{k+1} at k=" +
                               std::to_string(k) + "; the target projector is ill-defined");
  }

  const auto noisy = svd(perturbed);
  ReleaseResult r;
  r.released = symmetrize(projector(noisy.right, k));
  r.perturbed_sigma = noisy.singular_values;
  if (degenerate) {
    r.flags.push_back("degenerate_truth");
  } else {
    r.error_frobenius = frobenius_distance(r.released, projector(truth.right, k));
  }
  return r;
}

ReleaseResult covariance_release_from(const DenseMatrix& perturbed,
                                      const SvdFactors<double>& truth, int k) {
  const int d = static_cast<int>(truth.right.cols());
  require_rank(k, d, "release_covariance");
  require_shape(perturbed, truth);

  const auto noisy = svd(perturbed);
  const auto released_w = SpectralWeights::truncated(noisy.singular_values, k);
  const auto truth_w = SpectralWeights::truncated(truth.singular_values, k);

  ReleaseResult r;
  r.released = symmetrize(weighted_gram(noisy.right, released_w));
  r.perturbed_sigma = noisy.singular_values;
  r.error_frobenius =
      frobenius_distance(r.released, symmetrize(weighted_gram(truth.right, truth_w)));
  for (int i = 1; i < d; ++i) {
    if (i <= k && is_degenerate_split(truth.singular_values, i)) {
      r.flags.push_back("tied_singular_values");
      break;
    }
  }
  return r;
}

ReleaseResult weighted_release_from(const DenseMatrix& perturbed,
                                    const SvdFactors<double>& truth,
                                    const SpectralWeights& w) {
  require_shape(perturbed, truth);
  const auto noisy = svd(perturbed);
  ReleaseResult r;
  r.released = symmetrize(weighted_gram(noisy.right, w));
  r.perturbed_sigma = noisy.singular_values;
  r.error_frobenius = frobenius_distance(r.released, symmetrize(weighted_gram(truth.right, w)));
  return r;
}

ReleaseResult release_subspace(const DenseMatrix& a, int k, const NoiseConfig& cfg,
                               bool allow_degenerate) {
  const auto truth = svd(a);
  return subspace_release_from(perturb(a, cfg), truth, k, allow_degenerate);
}

ReleaseResult release_covariance(const DenseMatrix& a, int k, const NoiseConfig& cfg) {
  const auto truth = svd(a);
  return covariance_release_from(perturb(a, cfg), truth, k);
}

ReleaseResult release_weighted(const DenseMatrix& a, const SpectralWeights& w,
                               const NoiseConfig& cfg) {
  const auto truth = svd(a);
  return weighted_release_from(perturb(a, cfg), truth, w);
}

}  // namespace spectral
