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

// Closed-form perturbation bounds for singular subspaces under iid Gaussian
// noise of variance T, plus the gap assumption they rest on.
//
// Every bound is reported at "constant 1" (sans_constant). Where an explicit
// constant is known it is reported as well. Zero gaps never throw: the bound is
// returned as +inf with the "infinite" flag so that sweeps can record a vacuous
// bound and keep going.

#ifndef SPECTRAL_BOUNDS_HPP_
#define SPECTRAL_BOUNDS_HPP_

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "spectral/linalg.hpp"

namespace spectral {

// Singular values sigma_1 >= ... >= sigma_d >= 0 of an m x d matrix, d <= m.
class GapProfile {
 public:
  GapProfile(DenseVector sigma, int m);

  const DenseVector& sigma() const { return sigma_; }
  int m() const { return m_; }
  int d() const { return static_cast<int>(sigma_.size()); }
  // 1-based accessor; sigma(d + 1) is defined as 0.
  double sigma(int i) const { return i > d() ? 0.0 : sigma_[i - 1]; }
  // sigma_k - sigma_{k+1}.
  double gap(int k) const { return sigma(k) - sigma(k + 1); }

 private:
  DenseVector sigma_;
  int m_;
};

enum class BoundKind {
  kDavisKahan,
  kORourkeVu,
  kMainBound,
  kSubspace,         // sqrt(kd) / gap * sqrt(T)
  kSubspaceUniform,  // sqrt(d) / gap * sqrt(T), uniform top gaps
  kCovariance,
  kCovarianceDavisKahan,
  kCovarianceORourkeVu,
};

std::string to_string(BoundKind kind);
BoundKind bound_kind_from_string(const std::string& name);

struct BoundValue {
  explicit BoundValue(BoundKind k) : kind(k) {}

  BoundKind kind;
  double sans_constant = 0.0;
  std::optional<double> explicit_constant;
  std::vector<std::string> flags;
  // Named auxiliary quantities (sums, simplified forms, regime inputs).
  std::vector<std::pair<std::string, double>> details;

  bool infinite() const;
  bool has_flag(const std::string& flag) const;
  std::optional<double> detail(const std::string& name) const;
};

enum class DeltaValidity { kValid, kOutOfRange };

struct DeltaResult {
  double value = 0.0;
  DeltaValidity validity = DeltaValidity::kValid;
  bool valid() const { return validity == DeltaValidity::kValid; }
};

struct AssumptionReport {
  double delta = 0.0;
  DeltaValidity validity = DeltaValidity::kValid;
  double required_gap = 0.0;
  std::vector<double> gaps;     // sigma_i - sigma_{i+1}, i = 1..k
  std::vector<bool> satisfied;  // per gap
  bool overall = false;
};

// delta = (gamma_1^2 - gamma_d^2) / (8 d gamma_1^2 (sigma_1 - sigma_d)^2).
// Throws InputError when gamma_1 == 0 or sigma_1 == sigma_d.
DeltaResult delta_of(const GapProfile& profile, const SpectralWeights& w);

// Gap test against 8 sqrt(T) sqrt(m) log(1/delta) for a given delta.
AssumptionReport check_gaps(const GapProfile& profile, int k, double T,
                            const DeltaResult& delta);
AssumptionReport check_assumption(const GapProfile& profile, int k, double T,
                                  const SpectralWeights& w);

BoundValue davis_kahan_bound(const GapProfile& profile, int k, double e_norm);
BoundValue orourke_vu_bound(const GapProfile& profile, int k, int rank, double T);

// Frobenius-scale bound on E||V^ G^2 V^^T - V G^2 V^T||_F^2:
//   sans_constant     = sqrt(T * S1)
//   explicit_constant = sqrt(64 T S1 + 32 T^2 S2)
// with S1 = sum_{i<=k} sum_{j>i} (g_i^2 - g_j^2)^2 / (s_i - s_j)^2 and
//      S2 = sum_{i<=k} (sum_{j>i} (g_i^2 - g_j^2) / (s_i - s_j)^2)^2.
// Both sums are also exposed as details "S1" and "S2".
BoundValue main_bound(const GapProfile& profile, const SpectralWeights& w, double T);

BoundValue subspace_bound(const GapProfile& profile, int k, double T, bool uniform_gaps,
                          double uniform_gap_constant = 1.0);

// True when min_{i<=k} (sigma_i - sigma_{i+1}) >= c * (sigma_k - sigma_{k+1}).
bool uniform_gap_hypothesis(const GapProfile& profile, int k, double c);

BoundValue covariance_bound(const GapProfile& profile, int k, double T);

struct CovarianceBaselines {
  BoundValue davis_kahan;
  BoundValue orourke_vu;
};
CovarianceBaselines baseline_covariance_bounds(const GapProfile& profile, int k, double T,
                                               double regime_constant = 0.5);

// sqrt((a^2 + b^2) / (a^2 - b^2)^2); +inf when a == b.
double cij(double sigma_i, double sigma_j);

struct TailBound {
  double threshold;    // sqrt(m) + sqrt(d) + s
  double probability;  // min(1, 2 exp(-s^2))
};
TailBound gaussian_opnorm_tail(int m, int d, double s);

// Leading-order value of E||Psi(T) - Psi(0)||_F^2 as T -> 0:
//   2 T sum_{i<j} (gamma_i^2 - gamma_j^2)^2 c_ij^2.
double first_order_psi_error(const GapProfile& profile, const SpectralWeights& w, double T);

// Leading-order value of E||V^ S^_k^2 V^^T - V S_k^2 V^T||_F^2, which adds the
// singular value fluctuations to the rotation term:
//   T (4 sum_{i<=k} sigma_i^2) + first_order_psi_error(gamma = sigma truncated at k).
// For k = d it equals 2 (d + 1) ||A||_F^2 T.
double first_order_covariance_error(const GapProfile& profile, int k, double T);

}  // namespace spectral

#endif  // SPECTRAL_BOUNDS_HPP_
