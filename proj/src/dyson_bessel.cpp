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

#include "spectral/dyson_bessel.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "spectral/bounds.hpp"

namespace spectral {
namespace {

// Smallest neighbour separation, counting sigma_d against 0. Returns the
// offending index (0-based, d meaning the boundary) through `where`.
double min_separation(const DenseVector& sigma, int* where) {
  double best = std::numeric_limits<double>::infinity();
  const int d = static_cast<int>(sigma.size());
  for (int i = 0; i < d; ++i) {
    const double sep = i + 1 < d ? sigma[i] - sigma[i + 1] : sigma[i];
    if (sep < best) {
      best = sep;
      if (where) *where = i;
    }
  }
  return best;
}

std::string sigma_string(const DenseVector& sigma) {
  std::ostringstream os;
  os.precision(17);
  for (Eigen::Index i = 0; i < sigma.size(); ++i) os << (i ? "," : "") << sigma[i];
  return os.str();
}

// Brownian-bridge split of an increment over dt into two halves.
std::pair<BrownianIncrements, BrownianIncrements> bridge_split(const BrownianIncrements& inc,
                                                               double dt,
                                                               NormalStream& stream) {
  const int d = inc.size();
  const double sd = std::sqrt(dt / 4.0);
  BrownianIncrements first = BrownianIncrements::zero(d);
  for (int i = 0; i < d; ++i) first.diag[i] = inc.diag[i] / 2.0 + sd * stream.normal();
  for (int j = 1; j < d; ++j) {
    for (int i = 0; i < j; ++i) first.skew(j, i) = inc.skew(j, i) / 2.0 + sd * stream.normal();
  }
  BrownianIncrements second{inc.diag - first.diag, inc.skew - first.skew};
  return {std::move(first), std::move(second)};
}

SdeState advance(const SdeState& state, int m, const BrownianIncrements& inc, double dt,
                 double floor, int depth, int max_depth, NormalStream& stream) {
  SdeState next = euler_step(state, m, inc, dt);
  int where = 0;
  if (min_separation(next.sigma, &where) >= floor) return next;
  if (depth >= max_depth) {
    throw CollisionError("dyson-bessel: singular values collided at t=" +
                             std::to_string(state.t) + " near index " +
                             std::to_string(where + 1) + " after " + std::to_string(depth) +
                             " halvings; sigma=(" + sigma_string(next.sigma) + ")",
                         state.t, where + 1);
  }
  auto [first, second] = bridge_split(inc, dt, stream);
  const SdeState mid = advance(state, m, first, dt / 2, floor, depth + 1, max_depth, stream);
  return advance(mid, m, second, dt / 2, floor, depth + 1, max_depth, stream);
}

DenseMatrix reorthonormalized(const DenseMatrix& frame) { return orthonormalize(frame); }

}  // namespace

void SdeConfig::validate() const {
  if (!(dt > 0) || !std::isfinite(dt)) throw InputError("sde config: dt must be positive");
  if (!(T >= 0) || !std::isfinite(T)) throw InputError("sde config: T must be >= 0");
  if (T > 0 && dt > T) throw InputError("sde config: dt exceeds T");
  if (reortho_every < 1) throw InputError("sde config: reortho_every must be >= 1");
  if (collision_floor && !(*collision_floor > 0)) {
    throw InputError("sde config: collision_floor must be positive");
  }
  if (m < 1) throw InputError("sde config: m must be positive");
  if (checkpoints < 1) throw InputError("sde config: checkpoints must be >= 1");
  if (max_halvings < 0) throw InputError("sde config: max_halvings must be >= 0");
}

double BrownianIncrements::beta(int j, int i) const {
  if (j == i) return diag[i];
  return j > i ? skew(j, i) : -skew(i, j);
}

DenseMatrix BrownianIncrements::assembled() const {
  DenseMatrix full = skew - skew.transpose();
  full.diagonal() = diag;
  return full;
}

BrownianIncrements BrownianIncrements::zero(int d) {
  return {DenseVector::Zero(d), DenseMatrix::Zero(d, d)};
}

BrownianIncrements BrownianIncrements::sample(int d, double dt, NormalStream& stream) {
  BrownianIncrements inc = zero(d);
  const double sd = std::sqrt(dt);
  for (int i = 0; i < d; ++i) inc.diag[i] = sd * stream.normal();
  for (int j = 1; j < d; ++j) {
    for (int i = 0; i < j; ++i) inc.skew(j, i) = sd * stream.normal();
  }
  return inc;
}

DenseVector drift_sigma(const DenseVector& sigma, int m) {
  const int d = static_cast<int>(sigma.size());
  DenseVector drift(d);
  for (int i = 0; i < d; ++i) {
    const double si = sigma[i];
    if (si == 0) throw NumericError("drift_sigma: sigma_" + std::to_string(i + 1) + " is zero");
    double interaction = 0.0;
    for (int j = 0; j < d; ++j) {
      if (j == i) continue;
      const double sj = sigma[j];
      const double den = si * si - sj * sj;
      if (den == 0) {
        throw NumericError("drift_sigma: sigma_" + std::to_string(i + 1) + " == sigma_" +
                           std::to_string(j + 1));
      }
      interaction += (si * si + sj * sj) / den;
    }
    drift[i] = interaction / (2.0 * si) + (m - 1) / (2.0 * si);
  }
  return drift;
}

SdeState euler_step(const SdeState& state, int m, const BrownianIncrements& inc, double dt) {
  const int d = static_cast<int>(state.sigma.size());
  if (inc.size() != d || state.frame.rows() != d || state.frame.cols() != d) {
    throw InputError("euler_step: increments do not match the state dimension");
  }
  SdeState next = state;
  next.t = state.t + dt;
  next.sigma = state.sigma + inc.diag + drift_sigma(state.sigma, m) * dt;

  // dV = V N with N(j, i) = c_ij d beta_ji for j != i and
  // N(i, i) = -(1/2) sum_{j != i} c_ij^2 dt.
  DenseMatrix n = DenseMatrix::Zero(d, d);
  for (int i = 0; i < d; ++i) {
    double c2sum = 0.0;
    for (int j = 0; j < d; ++j) {
      if (j == i) continue;
      const double c = cij(state.sigma[i], state.sigma[j]);
      n(j, i) = c * inc.beta(j, i);
      c2sum += c * c;
    }
    n(i, i) = -0.5 * c2sum * dt;
  }
  next.frame = state.frame + state.frame * n;
  return next;
}

double default_collision_floor(const DenseVector& sigma) {
  return 1e-3 * min_separation(sigma, nullptr);
}

SdeState step(const SdeState& state, const SdeConfig& cfg, const BrownianIncrements& inc,
              NormalStream& bridge) {
  if (!cfg.collision_floor) throw InputError("step: collision_floor is not set");
  SdeState next = advance(state, cfg.m, inc, cfg.dt, *cfg.collision_floor, 0,
                          cfg.max_halvings, bridge);
  next.step_count = state.step_count + 1;
  if (next.step_count % cfg.reortho_every == 0) next.frame = reorthonormalized(next.frame);
  return next;
}

std::vector<SdeState> simulate(const DenseMatrix& a, const SdeConfig& cfg) {
  cfg.validate();
  const auto f = svd(a);
  const int d = static_cast<int>(f.singular_values.size());

  SdeState state;
  state.sigma = f.singular_values;
  state.frame = f.right;
  const double floor = cfg.collision_floor.value_or(default_collision_floor(state.sigma));
  if (!(min_separation(state.sigma, nullptr) > floor)) {
    throw InputError("simulate: initial singular values (" + sigma_string(state.sigma) +
                     ") are not separated by more than the collision floor");
  }

  std::vector<SdeState> out{state};
  if (cfg.T == 0) return out;

  const long nsteps = std::max<long>(1, static_cast<long>(std::ceil(cfg.T / cfg.dt - 1e-9)));
  SdeConfig run = cfg;
  run.dt = cfg.T / static_cast<double>(nsteps);
  run.collision_floor = floor;

  NormalStream stream(cfg.seed);
  int next_checkpoint = 1;
  for (long s = 1; s <= nsteps; ++s) {
    const auto inc = BrownianIncrements::sample(d, run.dt, stream);
    state = step(state, run, inc, stream);
    if (s == nsteps) state.t = cfg.T;
    while (next_checkpoint <= cfg.checkpoints &&
           s == (static_cast<long>(next_checkpoint) * nsteps) / cfg.checkpoints) {
      SdeState recorded = state;
      recorded.frame = reorthonormalized(state.frame);
      out.push_back(std::move(recorded));
      ++next_checkpoint;
    }
  }
  return out;
}

DenseMatrix step_psi(const SdeState& state, const SpectralWeights& w,
                     const BrownianIncrements& inc, double dt) {
  const int d = static_cast<int>(state.sigma.size());
  if (w.size() != d || inc.size() != d) {
    throw InputError("step_psi: weights or increments do not match the state dimension");
  }
  const auto& g = w.gamma();
  // dPsi = V K V^T with K expressed in the frame's own basis.
  DenseMatrix k = DenseMatrix::Zero(d, d);
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) {
      if (j == i) continue;
      const double dg = g[i] * g[i] - g[j] * g[j];
      if (dg == 0) continue;
      const double c = cij(state.sigma[i], state.sigma[j]);
      if (!std::isfinite(c)) {
        throw CollisionError("step_psi: sigma_" + std::to_string(i + 1) + " == sigma_" +
                                 std::to_string(j + 1),
                             state.t, i + 1);
      }
      const double noise = dg * 0.5 * c * inc.beta(j, i);
      k(i, j) += noise;
      k(j, i) += noise;
      k(i, i) -= dg * c * c * dt;
    }
  }
  return symmetrize(state.frame * k * state.frame.transpose());
}

BrownianIncrements increments_from_matrix(const SvdFactors<double>& at, const DenseMatrix& db) {
  const int d = static_cast<int>(at.singular_values.size());
  if (db.rows() != at.left.rows() || db.cols() != d) {
    throw InputError("increments_from_matrix: increment shape does not match the factors");
  }
  const DenseMatrix x = at.left.transpose() * db * at.right;
  BrownianIncrements inc = BrownianIncrements::zero(d);
  inc.diag = x.diagonal();
  const auto& s = at.singular_values;
  for (int j = 1; j < d; ++j) {
    for (int i = 0; i < j; ++i) {
      const double c = cij(s[i], s[j]);
      if (!std::isfinite(c)) {
        throw NumericError("increments_from_matrix: repeated singular value at index " +
                           std::to_string(i + 1));
      }
      inc.skew(j, i) = (s[j] * x(j, i) + s[i] * x(i, j)) / ((s[i] * s[i] - s[j] * s[j]) * c);
    }
  }
  return inc;
}

std::vector<PathPoint> direct_path(const DenseMatrix& a, double T, int n_checkpoints,
                                   std::uint64_t seed) {
  if (!(T >= 0) || !std::isfinite(T)) throw InputError("direct_path: T must be >= 0");
  if (n_checkpoints < 1) throw InputError("direct_path: n_checkpoints must be >= 1");
  if (T == 0) return {PathPoint{0.0, svd(a)}};

  NormalStream stream(seed);
  const double dt = T / n_checkpoints;
  const double sd = std::sqrt(dt);
  DenseMatrix b = DenseMatrix::Zero(a.rows(), a.cols());
  std::vector<PathPoint> out;
  out.reserve(n_checkpoints);
  for (int j = 1; j <= n_checkpoints; ++j) {
    b += sd * gaussian_matrix(a.rows(), a.cols(), stream);
    const double t = j == n_checkpoints ? T : j * dt;
    out.push_back(PathPoint{t, svd(DenseMatrix(a + b))});
  }
  return out;
}

}  // namespace spectral
