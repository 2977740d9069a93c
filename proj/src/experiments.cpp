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

#include "spectral/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>

#include "spectral/mechanism.hpp"
#include "spectral/parallel.hpp"
#include "spectral/random.hpp"

namespace spectral {

const std::vector<std::string> kBoundLabels = {
    "davis_kahan_measured", "davis_kahan_proxy", "orourke_vu",
    "subspace",             "subspace_uniform",  "main",
    "covariance",           "covariance_davis_kahan", "covariance_orourke_vu",
};

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct TrialOutcome {
  double error = 0.0;
  double noise_norm = 0.0;  // sqrt(T) ||G||_2, subspace mode only
};

struct Moments {
  double mean = 0.0;
  double stderr_ = 0.0;
};

// Sequential, index-ordered reduction so results never depend on threading.
Moments moments(const std::vector<double>& xs) {
  Moments out;
  const double n = static_cast<double>(xs.size());
  double sum = 0.0;
  for (double x : xs) sum += x;
  out.mean = sum / n;
  if (xs.size() > 1) {
    double ss = 0.0;
    for (double x : xs) ss += (x - out.mean) * (x - out.mean);
    out.stderr_ = std::sqrt(ss / (n - 1.0) / n);
  }
  return out;
}

bool second_moment_label(const std::string& label) {
  return label == "main" || label == "main_explicit" || label == "covariance";
}

bool wanted(const ExperimentConfig& cfg, const std::string& label) {
  if (cfg.bounds_requested.empty()) return true;
  return std::find(cfg.bounds_requested.begin(), cfg.bounds_requested.end(), label) !=
         cfg.bounds_requested.end();
}

int numeric_rank(const DenseVector& sigma) {
  const double tol = 1e-12 * std::max(1.0, sigma[0]);
  int r = 0;
  for (Eigen::Index i = 0; i < sigma.size(); ++i) r += sigma[i] > tol ? 1 : 0;
  return r;
}

std::vector<double> noise_levels(const ExperimentConfig& cfg, const DenseVector& sigma) {
  if (!cfg.T.empty()) return cfg.T;
  return {default_noise_variance(sigma, cfg.spec.m, std::min(cfg.k, cfg.spec.d - 1))};
}

void add_ratio(ExperimentSummary& s, const std::string& label, double bound) {
  if (!std::isfinite(bound)) return;
  const double denom =
      second_moment_label(label) ? std::sqrt(s.empirical_mean_sq) : s.empirical_mean;
  s.ratios.emplace_back(label, denom > 0 ? bound / denom : kInf);
}

void attach(ExperimentSummary& s, const ExperimentConfig& cfg, const std::string& label,
            BoundValue value) {
  if (!wanted(cfg, label)) return;
  if (!value.infinite() && !value.has_flag("regime_not_satisfied")) {
    add_ratio(s, label, value.sans_constant);
    if (label == "main" && value.explicit_constant) {
      add_ratio(s, "main_explicit", *value.explicit_constant);
    }
  }
  s.bounds.push_back({label, std::move(value)});
}

std::optional<AssumptionReport> try_assumption(const GapProfile& profile, int k, double T,
                                               const SpectralWeights& w) {
  if (k >= profile.d() || !(T > 0)) return std::nullopt;
  try {
    return check_assumption(profile, k, T, w);
  } catch (const InputError&) {
    return std::nullopt;
  }
}

enum class Release { kSubspace, kCovariance, kWeighted };

std::vector<ExperimentSummary> run_release(const ExperimentConfig& cfg, Release kind) {
  cfg.validate();
  const DenseVector sigma = cfg.spec.singular_values();
  const DenseMatrix a = gen_matrix(cfg.spec);
  const auto truth = svd(a);
  const GapProfile profile(sigma, cfg.spec.m);
  const int m = cfg.spec.m;
  const int d = cfg.spec.d;
  const int k = cfg.k;

  std::optional<SpectralWeights> weights;
  if (kind == Release::kSubspace) {
    if (k >= d) throw InputError("subspace experiment: need k < d");
    if (is_degenerate_split(truth.singular_values, k)) {
      throw DegenerateTruthError("subspace experiment: sigma_k == sigma_{k+1} at k=" +
                                 std::to_string(k));
    }
    weights = SpectralWeights::indicator(d, k);
  } else if (kind == Release::kCovariance) {
    weights = SpectralWeights::truncated(sigma, k);
  } else {
    weights = SpectralWeights(Eigen::Map<const DenseVector>(cfg.gamma.data(), d), k);
  }

  std::vector<ExperimentSummary> out;
  for (double T : noise_levels(cfg, sigma)) {
    const auto start = std::chrono::steady_clock::now();
    const double rt = std::sqrt(T);

    const auto outcomes = parallel_map(
        static_cast<std::size_t>(cfg.trials), cfg.threads, [&](std::size_t i) {
          const auto g = sample_gaussian_matrix(m, d, derive_seed(cfg.seed, "trial", i));
          const DenseMatrix perturbed = a + rt * g;
          TrialOutcome o;
          switch (kind) {
            case Release::kSubspace:
              o.error = *subspace_release_from(perturbed, truth, k).error_frobenius;
              o.noise_norm = rt * spectral_norm(g);
              break;
            case Release::kCovariance:
              o.error = *covariance_release_from(perturbed, truth, k).error_frobenius;
              break;
            case Release::kWeighted:
              o.error = *weighted_release_from(perturbed, truth, *weights).error_frobenius;
              break;
          }
          return o;
        });

    std::vector<double> errors, squares, norms;
    errors.reserve(outcomes.size());
    for (const auto& o : outcomes) {
      errors.push_back(o.error);
      squares.push_back(o.error * o.error);
      norms.push_back(o.noise_norm);
    }

    ExperimentSummary s;
    s.m = m;
    s.d = d;
    s.k = k;
    s.T = T;
    s.trials = cfg.trials;
    s.seed = cfg.seed;
    const auto e = moments(errors);
    const auto e2 = moments(squares);
    s.empirical_mean = e.mean;
    s.empirical_stderr = e.stderr_;
    s.empirical_mean_sq = e2.mean;
    s.empirical_stderr_sq = e2.stderr_;
    s.max_sample = *std::max_element(errors.begin(), errors.end());
    if (cfg.trials < 30) s.warnings.push_back("fewer than 30 trials");
    s.assumption = try_assumption(profile, k, T, *weights);

    switch (kind) {
      case Release::kSubspace: {
        s.mode = "subspace";
        s.first_order_prediction = first_order_psi_error(profile, *weights, T);
        auto measured = davis_kahan_bound(profile, k, moments(norms).mean);
        measured.flags.push_back("measured_noise_norm");
        attach(s, cfg, "davis_kahan_measured", std::move(measured));
        auto proxy = davis_kahan_bound(profile, k, rt * (std::sqrt(double(m)) + std::sqrt(double(d))));
        proxy.flags.push_back("proxy_noise_norm");
        attach(s, cfg, "davis_kahan_proxy", std::move(proxy));
        attach(s, cfg, "orourke_vu", orourke_vu_bound(profile, k, numeric_rank(sigma), T));
        attach(s, cfg, "subspace", subspace_bound(profile, k, T, false));
        if (uniform_gap_hypothesis(profile, k, cfg.uniform_gap_constant)) {
          attach(s, cfg, "subspace_uniform",
                 subspace_bound(profile, k, T, true, cfg.uniform_gap_constant));
        } else {
          s.warnings.push_back("uniform gap hypothesis fails; subspace_uniform omitted");
        }
        attach(s, cfg, "main", main_bound(profile, *weights, T));
        break;
      }
      case Release::kCovariance: {
        s.mode = "covariance";
        s.first_order_prediction = first_order_covariance_error(profile, k, T);
        attach(s, cfg, "covariance", covariance_bound(profile, k, T));
        auto baselines = baseline_covariance_bounds(profile, k, T);
        attach(s, cfg, "covariance_davis_kahan", std::move(baselines.davis_kahan));
        attach(s, cfg, "covariance_orourke_vu", std::move(baselines.orourke_vu));
        break;
      }
      case Release::kWeighted: {
        s.mode = "weighted";
        s.first_order_prediction = first_order_psi_error(profile, *weights, T);
        attach(s, cfg, "main", main_bound(profile, *weights, T));
        break;
      }
    }
    if (s.first_order_prediction > 0) {
      s.ratios.emplace_back("first_order", s.empirical_mean_sq / s.first_order_prediction);
    }
    s.runtime_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    out.push_back(std::move(s));
  }
  return out;
}

}  // namespace

std::string to_string(ProfileKind kind) {
  switch (kind) {
    case ProfileKind::kExplicit: return "explicit";
    case ProfileKind::kExponential: return "exponential";
    case ProfileKind::kLinear: return "linear";
  }
  return "unknown";
}

ProfileKind profile_kind_from_string(const std::string& name) {
  if (name == "explicit") return ProfileKind::kExplicit;
  if (name == "exponential") return ProfileKind::kExponential;
  if (name == "linear") return ProfileKind::kLinear;
  throw InputError("unknown profile '" + name + "'");
}

std::string to_string(ExperimentMode mode) {
  switch (mode) {
    case ExperimentMode::kSubspace: return "subspace";
    case ExperimentMode::kCovariance: return "covariance";
    case ExperimentMode::kWeighted: return "weighted";
    case ExperimentMode::kScalingM: return "scaling_m";
    case ExperimentMode::kScalingD: return "scaling_d";
  }
  return "unknown";
}

ExperimentMode experiment_mode_from_string(const std::string& name) {
  for (auto mode : {ExperimentMode::kSubspace, ExperimentMode::kCovariance,
                    ExperimentMode::kWeighted, ExperimentMode::kScalingM,
                    ExperimentMode::kScalingD}) {
    if (to_string(mode) == name) return mode;
  }
  throw InputError("unknown experiment mode '" + name + "'");
}

void MatrixSpec::validate() const {
  if (d < 1 || m < d) {
    throw InputError("matrix spec: need 1 <= d <= m, got m=" + std::to_string(m) +
                     ", d=" + std::to_string(d));
  }
  switch (profile) {
    case ProfileKind::kExplicit:
      if (sigma.empty() || static_cast<int>(sigma.size()) > d) {
        throw InputError("matrix spec: explicit sigma needs 1..d entries");
      }
      for (std::size_t i = 0; i < sigma.size(); ++i) {
        if (!std::isfinite(sigma[i]) || sigma[i] < 0) {
          throw InputError("matrix spec: sigma must be finite and nonnegative");
        }
        if (i > 0 && sigma[i] > sigma[i - 1]) {
          throw InputError("matrix spec: sigma must be nonincreasing");
        }
      }
      break;
    case ProfileKind::kExponential:
      if (!(decay > 0 && decay < 1)) throw InputError("matrix spec: decay must lie in (0, 1)");
      if (!(sigma1 > 0) || !std::isfinite(sigma1)) {
        throw InputError("matrix spec: sigma1 must be positive");
      }
      break;
    case ProfileKind::kLinear:
      if (!(gap >= 0) || !std::isfinite(gap)) {
        throw InputError("matrix spec: gap must be nonnegative");
      }
      if (!(sigma1 > 0) || sigma1 - (d - 1) * gap < 0) {
        throw InputError("matrix spec: linear profile goes negative");
      }
      break;
  }
}

DenseVector MatrixSpec::singular_values() const {
  validate();
  DenseVector s(d);
  for (int i = 0; i < d; ++i) {
    switch (profile) {
      case ProfileKind::kExplicit:
        s[i] = sigma[std::min<std::size_t>(i, sigma.size() - 1)];
        break;
      case ProfileKind::kExponential:
        s[i] = sigma1 * std::pow(decay, i);
        break;
      case ProfileKind::kLinear:
        s[i] = sigma1 - i * gap;
        break;
    }
  }
  return s;
}

DenseMatrix gen_matrix(const MatrixSpec& spec) {
  const DenseVector sigma = spec.singular_values();
  NormalStream u_stream(derive_seed(spec.rotation_seed, "rotation-u", 0));
  NormalStream v_stream(derive_seed(spec.rotation_seed, "rotation-v", 0));
  const DenseMatrix u = orthonormalize(gaussian_matrix(spec.m, spec.d, u_stream));
  const DenseMatrix v = orthonormalize(gaussian_matrix(spec.d, spec.d, v_stream));
  return u * sigma.asDiagonal() * v.transpose();
}

void ExperimentConfig::validate() const {
  const bool scaling = mode == ExperimentMode::kScalingM || mode == ExperimentMode::kScalingD;
  if (scaling) {
    if (sweep.empty()) throw InputError("experiment: scaling mode needs a sweep list");
    for (int value : sweep) {
      MatrixSpec point = spec;
      (mode == ExperimentMode::kScalingM ? point.m : point.d) = value;
      point.validate();
      if (k < 1 || k >= point.d) {
        throw InputError("experiment: k=" + std::to_string(k) + " outside [1, d-1] at d=" +
                         std::to_string(point.d));
      }
    }
  } else {
    spec.validate();
  }
  if (trials < 2) throw InputError("experiment: trials must be >= 2");
  if (threads < 1) throw InputError("experiment: threads must be >= 1");
  for (double t : T) {
    if (!std::isfinite(t) || t < 0) throw InputError("experiment: T must be finite and >= 0");
  }
  if (!scaling && (k < 1 || k > spec.d)) {
    throw InputError("experiment: k=" + std::to_string(k) + " outside [1, d]");
  }
  if (mode == ExperimentMode::kWeighted && static_cast<int>(gamma.size()) != spec.d) {
    throw InputError("experiment: weighted mode needs d gamma values");
  }
  if (!(uniform_gap_constant > 0)) {
    throw InputError("experiment: uniform_gap_constant must be positive");
  }
  for (const auto& label : bounds_requested) {
    if (label != "main_explicit" &&
        std::find(kBoundLabels.begin(), kBoundLabels.end(), label) == kBoundLabels.end()) {
      throw InputError("experiment: unknown bound label '" + label + "'");
    }
  }
}

double default_noise_variance(const DenseVector& sigma, int m, int k) {
  const int d = static_cast<int>(sigma.size());
  if (k < 1 || k >= d) throw InputError("default_noise_variance: need 1 <= k < d");
  double min_gap = kInf;
  for (int i = 0; i < k; ++i) min_gap = std::min(min_gap, sigma[i] - sigma[i + 1]);
  if (!(min_gap > 0)) throw InputError("default_noise_variance: zero top gap");
  const double scale = 0.1 * min_gap / (std::sqrt(double(m)) + std::sqrt(double(d)));
  return scale * scale;
}

const LabeledBound* ExperimentSummary::bound(const std::string& label) const {
  for (const auto& b : bounds) {
    if (b.label == label) return &b;
  }
  return nullptr;
}

std::optional<double> ExperimentSummary::ratio(const std::string& label) const {
  for (const auto& [key, value] : ratios) {
    if (key == label) return value;
  }
  return std::nullopt;
}

std::vector<ExperimentSummary> run_subspace_experiment(const ExperimentConfig& cfg) {
  return run_release(cfg, Release::kSubspace);
}

std::vector<ExperimentSummary> run_covariance_experiment(const ExperimentConfig& cfg) {
  return run_release(cfg, Release::kCovariance);
}

std::vector<ExperimentSummary> run_weighted_experiment(const ExperimentConfig& cfg) {
  return run_release(cfg, Release::kWeighted);
}

std::vector<ExperimentSummary> run_experiment(const ExperimentConfig& cfg) {
  switch (cfg.mode) {
    case ExperimentMode::kSubspace: return run_subspace_experiment(cfg);
    case ExperimentMode::kCovariance: return run_covariance_experiment(cfg);
    case ExperimentMode::kWeighted: return run_weighted_experiment(cfg);
    default: break;
  }
  throw InputError("run_experiment: use run_scaling_study for scaling modes");
}

LinearFit fit_line(const std::vector<double>& x, const std::vector<double>& y,
                   const std::vector<double>& weights) {
  const std::size_t n = x.size();
  if (n < 2 || y.size() != n || (!weights.empty() && weights.size() != n)) {
    throw InputError("fit_line: need at least two matching points");
  }
  auto w = [&](std::size_t i) { return weights.empty() ? 1.0 : weights[i]; };
  double sw = 0, sx = 0, sy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    sw += w(i);
    sx += w(i) * x[i];
    sy += w(i) * y[i];
  }
  const double xbar = sx / sw;
  const double ybar = sy / sw;
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += w(i) * (x[i] - xbar) * (x[i] - xbar);
    sxy += w(i) * (x[i] - xbar) * (y[i] - ybar);
  }
  if (!(sxx > 0)) throw InputError("fit_line: x values are all equal");

  LinearFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = ybar - fit.slope * xbar;
  if (!weights.empty()) {
    // Weights are inverse variances of y.
    fit.slope_stderr = std::sqrt(1.0 / sxx);
  } else if (n > 2) {
    double rss = 0;
    for (std::size_t i = 0; i < n; ++i) {
      const double r = y[i] - fit.intercept - fit.slope * x[i];
      rss += r * r;
    }
    fit.slope_stderr = std::sqrt(rss / double(n - 2) / sxx);
  }
  fit.ci_low = fit.slope - 1.96 * fit.slope_stderr;
  fit.ci_high = fit.slope + 1.96 * fit.slope_stderr;
  return fit;
}

ScalingResult run_scaling_study(const ExperimentConfig& cfg) {
  cfg.validate();
  const bool over_m = cfg.mode == ExperimentMode::kScalingM;
  if (!over_m && cfg.mode != ExperimentMode::kScalingD) {
    throw InputError("run_scaling_study: mode must be scaling_m or scaling_d");
  }
  if (cfg.sweep.size() < 4) throw InputError("run_scaling_study: need at least 4 sweep points");
  if (cfg.trials < 100) throw InputError("run_scaling_study: need at least 100 trials per point");

  auto spec_at = [&](int value) {
    MatrixSpec s = cfg.spec;
    (over_m ? s.m : s.d) = value;
    return s;
  };

  // One noise level for the whole sweep, small enough for its largest point.
  std::vector<double> T = cfg.T;
  if (T.empty()) {
    const int largest = *std::max_element(cfg.sweep.begin(), cfg.sweep.end());
    const MatrixSpec s = spec_at(largest);
    T = {default_noise_variance(s.singular_values(), s.m, cfg.k)};
  }

  ScalingResult result;
  result.swept = over_m ? "m" : "d";
  result.values = cfg.sweep;
  std::vector<double> lx, ly, wy, whp, proxy, sub;
  for (int value : cfg.sweep) {
    ExperimentConfig point = cfg;
    point.mode = ExperimentMode::kSubspace;
    point.spec = spec_at(value);
    point.T = {T.front()};
    auto summaries = run_subspace_experiment(point);
    ExperimentSummary s = std::move(summaries.front());
    s.mode = to_string(cfg.mode);

    const GapProfile profile(point.spec.singular_values(), point.spec.m);
    const double gap = profile.gap(cfg.k);
    const double rt = std::sqrt(s.T);
    lx.push_back(std::log(double(value)));
    ly.push_back(std::log(s.empirical_mean));
    const double rel = s.empirical_stderr / s.empirical_mean;
    wy.push_back(rel > 0 ? 1.0 / (rel * rel) : 1.0);
    whp.push_back(std::log(std::sqrt(double(cfg.k) * s.m) * rt / gap));
    proxy.push_back(std::log(std::sqrt(double(cfg.k)) * rt *
                             (std::sqrt(double(s.m)) + std::sqrt(double(s.d))) / gap));
    sub.push_back(std::log(std::sqrt(double(cfg.k) * s.d) * rt / gap));
    result.points.push_back(std::move(s));
  }
  result.empirical = fit_line(lx, ly, wy);
  result.dkw_whp = fit_line(lx, whp);
  result.dkw_proxy = fit_line(lx, proxy);
  result.subspace = fit_line(lx, sub);
  return result;
}

}  // namespace spectral
