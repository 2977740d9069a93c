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

#include "spectral/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace spectral {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr const char* kInfiniteFlag = "infinite";

void require_k(const GapProfile& p, int k, int max_k, const char* who) {
  if (k < 1 || k > max_k) {
    throw InputError(std::string(who) + ": k=" + std::to_string(k) + " outside [1, " +
                     std::to_string(max_k) + "] for d=" + std::to_string(p.d()));
  }
}

void require_time(double T, const char* who) {
  if (!std::isfinite(T) || T < 0) {
    throw InputError(std::string(who) + ": T must be finite and nonnegative");
  }
}

BoundValue infinite_bound(BoundKind kind) {
  BoundValue b{kind};
  b.sans_constant = kInf;
  b.flags.push_back(kInfiniteFlag);
  return b;
}

void require_weights(const GapProfile& p, const SpectralWeights& w, const char* who) {
  if (w.size() != p.d()) {
    throw InputError(std::string(who) + ": " + std::to_string(w.size()) +
                     " weights for d=" + std::to_string(p.d()));
  }
}

}  // namespace

GapProfile::GapProfile(DenseVector sigma, int m) : sigma_(std::move(sigma)), m_(m) {
  if (sigma_.size() < 1) throw InputError("gap profile: empty sigma");
  if (m_ < sigma_.size()) {
    throw InputError("gap profile: need d <= m, got d=" + std::to_string(sigma_.size()) +
                     ", m=" + std::to_string(m_));
  }
  for (Eigen::Index i = 0; i < sigma_.size(); ++i) {
    if (!std::isfinite(sigma_[i]) || sigma_[i] < 0) {
      throw InputError("gap profile: sigma must be finite and nonnegative");
    }
    if (i > 0 && sigma_[i] > sigma_[i - 1]) {
      throw InputError("gap profile: sigma must be nonincreasing");
    }
  }
}

std::string to_string(BoundKind kind) {
  switch (kind) {
    case BoundKind::kDavisKahan: return "davis_kahan";
    case BoundKind::kORourkeVu: return "orourke_vu";
    case BoundKind::kMainBound: return "main";
    case BoundKind::kSubspace: return "subspace";
    case BoundKind::kSubspaceUniform: return "subspace_uniform";
    case BoundKind::kCovariance: return "covariance";
    case BoundKind::kCovarianceDavisKahan: return "covariance_davis_kahan";
    case BoundKind::kCovarianceORourkeVu: return "covariance_orourke_vu";
  }
  return "unknown";
}

BoundKind bound_kind_from_string(const std::string& name) {
  for (auto kind : {BoundKind::kDavisKahan, BoundKind::kORourkeVu, BoundKind::kMainBound,
                    BoundKind::kSubspace, BoundKind::kSubspaceUniform,
                    BoundKind::kCovariance, BoundKind::kCovarianceDavisKahan,
                    BoundKind::kCovarianceORourkeVu}) {
    if (to_string(kind) == name) return kind;
  }
  throw InputError("unknown bound kind '" + name + "'");
}

bool BoundValue::infinite() const { return has_flag(kInfiniteFlag); }

bool BoundValue::has_flag(const std::string& flag) const {
  return std::find(flags.begin(), flags.end(), flag) != flags.end();
}

std::optional<double> BoundValue::detail(const std::string& name) const {
  for (const auto& [key, value] : details) {
    if (key == name) return value;
  }
  return std::nullopt;
}

DeltaResult delta_of(const GapProfile& profile, const SpectralWeights& w) {
  require_weights(profile, w, "delta_of");
  const double g1 = w.gamma()[0];
  const double gd = w.gamma()[w.size() - 1];
  const double spread = profile.sigma(1) - profile.sigma(profile.d());
  if (g1 == 0) throw InputError("delta_of: gamma_1 is zero");
  if (spread == 0) throw InputError("delta_of: sigma_1 == sigma_d");

  DeltaResult r;
  const int d = profile.d();
  r.value = (g1 * g1 - gd * gd) / (8.0 * d * g1 * g1 * spread * spread);
  r.validity = (r.value > 0 && r.value < 1) ? DeltaValidity::kValid
                                            : DeltaValidity::kOutOfRange;
  return r;
}

AssumptionReport check_gaps(const GapProfile& profile, int k, double T,
                            const DeltaResult& delta) {
  require_k(profile, k, profile.d() - 1, "check_assumption");
  if (!std::isfinite(T) || T <= 0) throw InputError("check_assumption: T must be positive");

  AssumptionReport r;
  r.delta = delta.value;
  r.validity = delta.validity;
  const double log_inv = delta.value > 0 ? std::log(1.0 / delta.value) : kInf;
  r.required_gap = std::max(0.0, 8.0 * std::sqrt(T) * std::sqrt(double(profile.m())) * log_inv);

  bool all = true;
  for (int i = 1; i <= k; ++i) {
    const double g = profile.gap(i);
    const bool ok = g >= r.required_gap && g > 0;
    r.gaps.push_back(g);
    r.satisfied.push_back(ok);
    all = all && ok;
  }
  r.overall = all && delta.valid();
  return r;
}

AssumptionReport check_assumption(const GapProfile& profile, int k, double T,
                                  const SpectralWeights& w) {
  return check_gaps(profile, k, T, delta_of(profile, w));
}

BoundValue davis_kahan_bound(const GapProfile& profile, int k, double e_norm) {
  require_k(profile, k, profile.d(), "davis_kahan_bound");
  if (!std::isfinite(e_norm) || e_norm < 0) {
    throw InputError("davis_kahan_bound: e_norm must be finite and nonnegative");
  }
  const double gap = profile.gap(k);
  if (gap <= 0) return infinite_bound(BoundKind::kDavisKahan);
  BoundValue b{BoundKind::kDavisKahan};
  b.sans_constant = std::sqrt(double(k)) * e_norm / gap;
  b.details = {{"e_norm", e_norm}, {"gap", gap}};
  return b;
}

BoundValue orourke_vu_bound(const GapProfile& profile, int k, int rank, double T) {
  require_k(profile, k, profile.d(), "orourke_vu_bound");
  require_time(T, "orourke_vu_bound");
  if (rank < 0) throw InputError("orourke_vu_bound: negative rank");
  const double gap = profile.gap(k);
  const double sk = profile.sigma(k);
  if (gap <= 0 || sk <= 0) return infinite_bound(BoundKind::kORourkeVu);
  const double m = profile.m();
  BoundValue b{BoundKind::kORourkeVu};
  b.sans_constant =
      k * (std::sqrt(double(rank)) / gap + m / (sk * gap) + std::sqrt(m) / sk) * std::sqrt(T);
  b.details = {{"rank", double(rank)}};
  return b;
}

BoundValue main_bound(const GapProfile& profile, const SpectralWeights& w, double T) {
  require_weights(profile, w, "main_bound");
  require_time(T, "main_bound");
  const int d = profile.d();
  const auto& g = w.gamma();
  double s1 = 0.0;
  double s2 = 0.0;
  for (int i = 1; i <= w.k(); ++i) {
    double inner = 0.0;
    for (int j = i + 1; j <= d; ++j) {
      const double num = g[i - 1] * g[i - 1] - g[j - 1] * g[j - 1];
      if (num == 0) continue;
      const double den = profile.sigma(i) - profile.sigma(j);
      if (den == 0) return infinite_bound(BoundKind::kMainBound);
      s1 += num * num / (den * den);
      inner += num / (den * den);
    }
    s2 += inner * inner;
  }
  BoundValue b{BoundKind::kMainBound};
  b.sans_constant = std::sqrt(s1 * T);
  b.explicit_constant = std::sqrt(64.0 * T * s1 + 32.0 * T * T * s2);
  b.details = {{"S1", s1}, {"S2", s2}};
  return b;
}

bool uniform_gap_hypothesis(const GapProfile& profile, int k, double c) {
  require_k(profile, k, profile.d(), "uniform_gap_hypothesis");
  double min_gap = kInf;
  for (int i = 1; i <= k; ++i) min_gap = std::min(min_gap, profile.gap(i));
  return min_gap >= c * profile.gap(k);
}

BoundValue subspace_bound(const GapProfile& profile, int k, double T, bool uniform_gaps,
                          double uniform_gap_constant) {
  require_k(profile, k, profile.d(), "subspace_bound");
  require_time(T, "subspace_bound");
  const BoundKind kind = uniform_gaps ? BoundKind::kSubspaceUniform : BoundKind::kSubspace;
  if (uniform_gaps && !uniform_gap_hypothesis(profile, k, uniform_gap_constant)) {
    throw HypothesisError("subspace_bound: top-" + std::to_string(k) +
                          " gaps are not uniform at c_ug=" +
                          std::to_string(uniform_gap_constant));
  }
  const double gap = profile.gap(k);
  if (gap <= 0) return infinite_bound(kind);
  const double d = profile.d();
  BoundValue b{kind};
  b.sans_constant = std::sqrt(uniform_gaps ? d : k * d) / gap * std::sqrt(T);
  if (uniform_gaps) b.details = {{"c_ug", uniform_gap_constant}};
  return b;
}

BoundValue covariance_bound(const GapProfile& profile, int k, double T) {
  require_k(profile, k, profile.d(), "covariance_bound");
  require_time(T, "covariance_bound");
  const int d = profile.d();
  const double sk = profile.sigma(k);
  double head = 0.0;
  for (int i = 1; i <= k; ++i) head += profile.sigma(i) * profile.sigma(i);
  double tail = 0.0;
  for (int j = k + 1; j <= d; ++j) {
    const double den = sk - profile.sigma(j);
    if (den <= 0) return infinite_bound(BoundKind::kCovariance);
    const double r = sk * sk / den;
    tail += r * r;
  }
  const double gap = profile.gap(k);
  BoundValue b{BoundKind::kCovariance};
  b.sans_constant = std::sqrt((d * head + k * tail) * T);
  const double simplified =
      gap > 0 ? std::sqrt(double(k) * d) * (profile.sigma(1) + sk * sk / gap) * std::sqrt(T)
              : kInf;
  b.details = {{"simplified", simplified}};
  return b;
}

CovarianceBaselines baseline_covariance_bounds(const GapProfile& profile, int k, double T,
                                               double regime_constant) {
  require_k(profile, k, profile.d(), "baseline_covariance_bounds");
  require_time(T, "baseline_covariance_bounds");
  const double gap = profile.gap(k);
  const double m = profile.m();
  const double sk = profile.sigma(k);
  const double s1 = profile.sigma(1);
  const double rt = std::sqrt(T);

  CovarianceBaselines out{infinite_bound(BoundKind::kCovarianceDavisKahan),
                          BoundValue{BoundKind::kCovarianceORourkeVu}};
  if (gap > 0) {
    out.davis_kahan = BoundValue{BoundKind::kCovarianceDavisKahan};
    out.davis_kahan.sans_constant =
        2.0 * std::pow(double(k), 1.5) * std::sqrt(m) * rt * s1 +
        sk * sk * std::sqrt(double(k)) * std::sqrt(m) / gap * rt;
  }
  out.orourke_vu.sans_constant = s1 * k * std::sqrt(m) * rt;
  const double needed = regime_constant * std::max(sk, std::sqrt(m));
  out.orourke_vu.flags.push_back(gap >= needed ? "regime_satisfied" : "regime_not_satisfied");
  out.orourke_vu.details = {{"regime_constant", regime_constant}, {"required_gap", needed}};
  return out;
}

double cij(double sigma_i, double sigma_j) {
  const double a2 = sigma_i * sigma_i;
  const double b2 = sigma_j * sigma_j;
  const double diff = a2 - b2;
  if (diff == 0) return kInf;
  return std::sqrt(a2 + b2) / std::abs(diff);
}

TailBound gaussian_opnorm_tail(int m, int d, double s) {
  if (m < 1 || d < 1) throw InputError("gaussian_opnorm_tail: dimensions must be positive");
  if (!(s > 0) || !std::isfinite(s)) throw InputError("gaussian_opnorm_tail: s must be positive");
  return {std::sqrt(double(m)) + std::sqrt(double(d)) + s,
          std::min(1.0, 2.0 * std::exp(-s * s))};
}

double first_order_psi_error(const GapProfile& profile, const SpectralWeights& w, double T) {
  require_weights(profile, w, "first_order_psi_error");
  require_time(T, "first_order_psi_error");
  const auto& g = w.gamma();
  double sum = 0.0;
  for (int i = 1; i <= profile.d(); ++i) {
    for (int j = i + 1; j <= profile.d(); ++j) {
      const double num = g[i - 1] * g[i - 1] - g[j - 1] * g[j - 1];
      if (num == 0) continue;
      const double c = cij(profile.sigma(i), profile.sigma(j));
      sum += num * num * c * c;
    }
  }
  return 2.0 * T * sum;
}

double first_order_covariance_error(const GapProfile& profile, int k, double T) {
  require_k(profile, k, profile.d(), "first_order_covariance_error");
  double head = 0.0;
  for (int i = 1; i <= k; ++i) head += profile.sigma(i) * profile.sigma(i);
  const auto w = SpectralWeights::truncated(profile.sigma(), k);
  return 4.0 * T * head + first_order_psi_error(profile, w, T);
}

}  // namespace spectral
