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

// The Dyson-Bessel process: singular values and right singular vectors of
// Phi(t) = A + B(t) for an m x d matrix Brownian motion B.
//
//   d sigma_i = d beta_ii + [ (1 / 2 sigma_i) sum_{j != i} (s_i^2 + s_j^2) / (s_i^2 - s_j^2)
//                             + (m - 1) / (2 sigma_i) ] dt
//   d v_i     = sum_{j != i} v_j c_ij d beta_ji - (v_i / 2) sum_{j != i} c_ij^2 dt
//
// integrated with explicit Euler-Maruyama. The drivers d beta_ji (j != i) are
// skew-symmetric; the sampled variate is the entry (j, i) with j > i and
// d beta_ij = -d beta_ji. direct_path() simulates Phi(t) itself and serves as
// the exact-in-law reference for the SDE integrator.

#ifndef SPECTRAL_DYSON_BESSEL_HPP_
#define SPECTRAL_DYSON_BESSEL_HPP_

#include <cstdint>
#include <optional>
#include <vector>

#include "spectral/linalg.hpp"
#include "spectral/random.hpp"

namespace spectral {

struct SdeState {
  double t = 0.0;
  DenseVector sigma;  // strictly decreasing, positive
  DenseMatrix frame;  // right singular vectors as columns
  long step_count = 0;
};

struct SdeConfig {
  double dt = 1e-4;
  double T = 0.0;
  int reortho_every = 10;
  // Minimum separation between neighbouring singular values (and between
  // sigma_d and 0). Unset means 1e-3 times the smallest initial separation.
  std::optional<double> collision_floor;
  int m = 1;
  std::uint64_t seed = 0;
  int checkpoints = 1;
  int max_halvings = 12;

  void validate() const;
};

struct BrownianIncrements {
  DenseVector diag;  // d beta_ii
  DenseMatrix skew;  // strictly lower triangular: skew(j, i) = d beta_ji, j > i

  int size() const { return static_cast<int>(diag.size()); }
  // d beta_ji for any j != i (0-based), using d beta_ij = -d beta_ji.
  double beta(int j, int i) const;
  // diag(d beta_ii) + skew - skew^T.
  DenseMatrix assembled() const;

  static BrownianIncrements zero(int d);
  // Draw order: diag(0..d-1), then skew(j, i) for j = 1..d-1, i = 0..j-1.
  static BrownianIncrements sample(int d, double dt, NormalStream& stream);
};

// Drift of the singular values. Throws NumericError when two values coincide
// or one is zero.
DenseVector drift_sigma(const DenseVector& sigma, int m);

// One plain Euler-Maruyama step of size dt: no collision guard and no
// re-orthonormalization.
SdeState euler_step(const SdeState& state, int m, const BrownianIncrements& inc, double dt);

// One guarded step of size cfg.dt. A step that breaks the collision floor is
// split in two halves by Brownian bridge (extra variates from `bridge`) and
// retried, up to cfg.max_halvings times; past that a CollisionError is thrown.
// The frame is re-orthonormalized by QR every cfg.reortho_every steps.
// cfg.collision_floor must be set.
SdeState step(const SdeState& state, const SdeConfig& cfg, const BrownianIncrements& inc,
              NormalStream& bridge);

// Trajectory of svd(A) under the SDE from t = 0 to cfg.T. Returns the initial
// state followed by cfg.checkpoints equally spaced states; recorded frames
// are re-orthonormalized. The step is shortened to T / ceil(T / dt) so that
// the grid ends exactly at T. Randomness comes from NormalStream(cfg.seed).
std::vector<SdeState> simulate(const DenseMatrix& a, const SdeConfig& cfg);

double default_collision_floor(const DenseVector& sigma);

// d Psi for Psi = V diag(gamma^2) V^T:
//   sum_i sum_{j != i} (g_i^2 - g_j^2) [ (c_ij / 2) d beta_ji (v_i v_j^T + v_j v_i^T)
//                                       - c_ij^2 dt v_i v_i^T ].
DenseMatrix step_psi(const SdeState& state, const SpectralWeights& w,
                     const BrownianIncrements& inc, double dt);

// Drivers implied, to first order, by adding the matrix increment dB to a
// matrix with factors `at`: with X = U^T dB V,
//   d beta_ii = X_ii,  d beta_ji = (s_j X_ji + s_i X_ij) / ((s_i^2 - s_j^2) c_ij).
BrownianIncrements increments_from_matrix(const SvdFactors<double>& at, const DenseMatrix& db);

struct PathPoint {
  double t;
  SvdFactors<double> factors;
};

// Phi(t_j) = A + B(t_j), t_j = j T / n for j = 1..n, with N(0, T/n) entry
// increments drawn row-major from NormalStream(seed). For n = 1 this is
// bit-identical to perturb(A, {T, seed}). T = 0 returns svd(A) alone.
std::vector<PathPoint> direct_path(const DenseMatrix& a, double T, int n_checkpoints,
                                   std::uint64_t seed);

}  // namespace spectral

#endif  // SPECTRAL_DYSON_BESSEL_HPP_
