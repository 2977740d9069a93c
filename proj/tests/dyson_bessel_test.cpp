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
#include <vector>

#include <gtest/gtest.h>

#include "spectral/bounds.hpp"
#include "spectral/errors.hpp"
#include "spectral/mechanism.hpp"

namespace spectral {
namespace {

DenseVector vec(std::initializer_list<double> xs) {
  DenseVector v(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (double x : xs) v[i++] = x;
  return v;
}

DenseMatrix embedded_diag(int m, std::initializer_list<double> sigma) {
  DenseMatrix a = DenseMatrix::Zero(m, static_cast<Eigen::Index>(sigma.size()));
  Eigen::Index i = 0;
  for (double s : sigma) {
    a(i, i) = s;
    ++i;
  }
  return a;
}

SdeState state_of(const DenseVector& sigma) {
  SdeState s;
  s.sigma = sigma;
  s.frame = DenseMatrix::Identity(sigma.size(), sigma.size());
  return s;
}

struct Stats {
  double mean = 0;
  double var = 0;
  double stderr_ = 0;
};

Stats stats(const std::vector<double>& xs) {
  const double n = static_cast<double>(xs.size());
  Stats s;
  for (double x : xs) s.mean += x / n;
  for (double x : xs) s.var += (x - s.mean) * (x - s.mean) / (n - 1);
  s.stderr_ = std::sqrt(s.var / n);
  return s;
}

TEST(Drift, Examples) {
  const DenseVector drift = drift_sigma(vec({3, 1}), 3);
  EXPECT_NEAR(drift[0], (1.0 / 6) * (10.0 / 8) + 2.0 / 6, 1e-15);
  EXPECT_NEAR(drift[0], 0.54167, 1e-5);
  EXPECT_NEAR(drift[1], 0.5 * (10.0 / -8) + 1.0, 1e-15);
  EXPECT_NEAR(drift[1], 0.375, 1e-15);
  EXPECT_EQ(drift_sigma(vec({5}), 1)[0], 0.0);
  EXPECT_THROW(drift_sigma(vec({2, 2}), 3), NumericError);
  EXPECT_THROW(drift_sigma(vec({2, 0}), 3), NumericError);
}

TEST(Increments, SkewSymmetryAndVariance) {
  NormalStream rng(1);
  double sq = 0;
  int count = 0;
  for (int t = 0; t < 2000; ++t) {
    const auto inc = BrownianIncrements::sample(5, 0.01, rng);
    const DenseMatrix b = inc.assembled();
    DenseMatrix two_diag = DenseMatrix::Zero(5, 5);
    two_diag.diagonal() = 2 * inc.diag;
    EXPECT_EQ(b + b.transpose(), two_diag);
    for (int j = 0; j < 5; ++j) {
      for (int i = 0; i < 5; ++i) {
        EXPECT_EQ(inc.beta(j, i), b(j, i));
        sq += b(j, i) * b(j, i);
        ++count;
      }
    }
  }
  // Every entry has variance dt; 50000 draws.
  EXPECT_NEAR(sq / count / 0.01, 1.0, 4 * std::sqrt(2.0 / count));
}

TEST(EulerStep, ZeroIncrements) {
  const SdeState s = state_of(vec({3, 1}));
  const double dt = 1e-6;
  const SdeState next = euler_step(s, 3, BrownianIncrements::zero(2), dt);
  EXPECT_NEAR((next.sigma - s.sigma - drift_sigma(s.sigma, 3) * dt).norm(), 0.0, 1e-15);
  EXPECT_LE((orthonormalize(next.frame) - s.frame).norm(), 1e-12);
  EXPECT_LE((next.frame - s.frame).norm(), 10 * dt);
}

TEST(EulerStep, OneDimensional) {
  SdeState s = state_of(vec({2}));
  NormalStream rng(2);
  for (int i = 0; i < 100; ++i) {
    const auto inc = BrownianIncrements::sample(1, 1e-3, rng);
    const SdeState next = euler_step(s, 4, inc, 1e-3);
    EXPECT_EQ(next.frame(0, 0), 1.0);
    EXPECT_NEAR(next.sigma[0], s.sigma[0] + inc.diag[0] + 3.0 / (2 * s.sigma[0]) * 1e-3, 1e-15);
    s = next;
  }
}

TEST(EulerStep, PinnedSkewIncrement) {
  auto inc = BrownianIncrements::zero(2);
  inc.skew(1, 0) = 0.01;
  const SdeState next = euler_step(state_of(vec({3, 1})), 3, inc, 1e-4);
  const double c = std::sqrt(10.0) / 8;
  EXPECT_NEAR(next.frame(1, 0), c * 0.01, 1e-15);
  EXPECT_NEAR(next.frame(1, 0), 0.0039528, 1e-7);
  EXPECT_NEAR(next.frame(0, 1), -c * 0.01, 1e-15);
  EXPECT_NEAR(next.frame(0, 0), 1.0 - 0.5 * c * c * 1e-4, 1e-15);
}

TEST(EulerStep, DeterministicSkeletonIncreasesTopValue) {
  SdeState s = state_of(vec({4, 2, 1}));
  for (int i = 0; i < 1000; ++i) {
    const SdeState next = euler_step(s, 5, BrownianIncrements::zero(3), 1e-3);
    EXPECT_GT(next.sigma[0], s.sigma[0]);
    s = next;
  }
}

TEST(Step, RequiresFloorAndReorthonormalizes) {
  SdeConfig cfg;
  cfg.dt = 1e-3;
  cfg.m = 4;
  NormalStream rng(3);
  SdeState s = state_of(vec({3, 2, 1}));
  EXPECT_THROW(step(s, cfg, BrownianIncrements::zero(3), rng), InputError);
  cfg.collision_floor = 1e-3;
  cfg.reortho_every = 5;
  for (int i = 1; i <= 20; ++i) {
    s = step(s, cfg, BrownianIncrements::sample(3, cfg.dt, rng), rng);
    EXPECT_EQ(s.step_count, i);
    if (i % 5 == 0) EXPECT_LE(orthonormality_defect(s.frame), 1e-12);
  }
}

TEST(Step, CollisionErrorWhenRetriesExhausted) {
  SdeConfig cfg;
  cfg.dt = 0.05;
  cfg.m = 2;
  cfg.collision_floor = 0.009;
  cfg.max_halvings = 0;
  int collisions = 0;
  for (int seed = 0; seed < 20; ++seed) {
    NormalStream rng(seed);
    SdeState s = state_of(vec({1.0, 0.99}));
    try {
      for (int i = 0; i < 5; ++i) s = step(s, cfg, BrownianIncrements::sample(2, cfg.dt, rng), rng);
    } catch (const CollisionError& e) {
      ++collisions;
      EXPECT_GE(e.index(), 1);
      EXPECT_GE(e.time(), 0.0);
    }
  }
  EXPECT_GT(collisions, 0);
}

TEST(Step, HalvingRescuesSmallSteps) {
  // With halvings allowed the same configuration mostly completes.
  SdeConfig cfg;
  cfg.dt = 1e-4;
  cfg.m = 2;
  cfg.collision_floor = 1e-4;
  NormalStream rng(4);
  SdeState s = state_of(vec({1.0, 0.9}));
  for (int i = 0; i < 200; ++i) s = step(s, cfg, BrownianIncrements::sample(2, cfg.dt, rng), rng);
  EXPECT_GT(s.sigma[0] - s.sigma[1], 1e-4);
  EXPECT_NEAR(s.t, 200 * 1e-4, 1e-12);
}

TEST(Simulate, ZeroHorizon) {
  SdeConfig cfg;
  cfg.T = 0;
  cfg.m = 5;
  const auto traj = simulate(embedded_diag(5, {3, 1}), cfg);
  ASSERT_EQ(traj.size(), 1u);
  EXPECT_EQ(traj[0].t, 0.0);
  EXPECT_NEAR(traj[0].sigma[0], 3.0, 1e-14);
}

TEST(Simulate, CheckpointsAndDeterminism) {
  SdeConfig cfg;
  cfg.T = 0.01;
  cfg.dt = 3e-4;  // shortened to T / 34
  cfg.m = 20;
  cfg.seed = 5;
  cfg.checkpoints = 4;
  const DenseMatrix a = embedded_diag(20, {10, 4});
  const auto t1 = simulate(a, cfg);
  const auto t2 = simulate(a, cfg);
  ASSERT_EQ(t1.size(), 5u);
  EXPECT_EQ(t1.back().t, 0.01);
  EXPECT_EQ(t1.back().step_count, 34);
  for (std::size_t i = 0; i < t1.size(); ++i) {
    EXPECT_EQ(t1[i].sigma, t2[i].sigma);
    EXPECT_EQ(t1[i].frame, t2[i].frame);
    EXPECT_LE(orthonormality_defect(t1[i].frame), 1e-8);
    if (i > 0) {
      EXPECT_GT(t1[i].t, t1[i - 1].t);
      EXPECT_GT(t1[i].sigma[0], t1[i].sigma[1]);
    }
  }
}

TEST(Simulate, RejectsUnseparatedStart) {
  SdeConfig cfg;
  cfg.T = 0.01;
  cfg.dt = 1e-3;
  cfg.m = 5;
  EXPECT_THROW(simulate(embedded_diag(5, {2, 2}), cfg), InputError);
  EXPECT_THROW(simulate(embedded_diag(5, {2, 0}), cfg), InputError);
  cfg.collision_floor = 0.5;
  EXPECT_THROW(simulate(embedded_diag(5, {2, 1.8}), cfg), InputError);
  cfg.collision_floor.reset();
  cfg.dt = 0.1;
  EXPECT_THROW(simulate(embedded_diag(5, {2, 1}), cfg), InputError);
}

TEST(Simulate, AgreesWithDirectPathMean) {
  const DenseMatrix a = embedded_diag(20, {10, 4});
  SdeConfig cfg;
  cfg.T = 0.01;
  cfg.dt = 1e-3;
  cfg.m = 20;
  std::vector<double> sde1, sde2, dir1, dir2;
  for (int p = 0; p < 300; ++p) {
    cfg.seed = derive_seed(6, "sde", p);
    const auto s = simulate(a, cfg).back().sigma;
    sde1.push_back(s[0]);
    sde2.push_back(s[1]);
    const auto d = direct_path(a, 0.01, 1, derive_seed(6, "direct", p)).back();
    dir1.push_back(d.factors.singular_values[0]);
    dir2.push_back(d.factors.singular_values[1]);
  }
  for (auto [x, y] : {std::pair{&sde1, &dir1}, std::pair{&sde2, &dir2}}) {
    const auto sx = stats(*x), sy = stats(*y);
    EXPECT_LE(std::abs(sx.mean - sy.mean), 3 * std::hypot(sx.stderr_, sy.stderr_));
  }
}

TEST(StepPsi, ConstantWeightsGiveZero) {
  NormalStream rng(7);
  SdeState s = state_of(vec({4, 2, 1}));
  s.frame = orthonormalize(gaussian_matrix(3, 3, rng));
  const auto inc = BrownianIncrements::sample(3, 1e-3, rng);
  EXPECT_EQ(step_psi(s, SpectralWeights(vec({2, 2, 2}), 3), inc, 1e-3),
            DenseMatrix::Zero(3, 3));
}

TEST(StepPsi, SymmetricForRandomInputs) {
  NormalStream rng(8);
  for (int t = 0; t < 50; ++t) {
    SdeState s = state_of(vec({5, 3, 2, 1}));
    s.frame = orthonormalize(gaussian_matrix(4, 4, rng));
    const auto inc = BrownianIncrements::sample(4, 1e-2, rng);
    const DenseMatrix m = step_psi(s, SpectralWeights(vec({2, 1.5, 1, 0}), 3), inc, 1e-2);
    EXPECT_EQ(m, m.transpose());
  }
}

TEST(StepPsi, TwoByTwoMatchesFiniteDifference) {
  const SdeState s = state_of(vec({3, 1}));
  const SpectralWeights w(vec({1, 0}), 1);
  const double c = std::sqrt(10.0) / 8;
  for (double h : {1e-2, 1e-3, 1e-4}) {
    auto inc = BrownianIncrements::zero(2);
    inc.skew(1, 0) = h;
    const DenseMatrix dpsi = step_psi(s, w, inc, 0.0);
    DenseMatrix expected(2, 2);
    expected << 0, c * h, c * h, 0;
    EXPECT_NEAR((dpsi - expected).norm(), 0.0, 1e-15);
    const SdeState next = euler_step(s, 5, inc, 0.0);
    const DenseMatrix fd = weighted_gram(next.frame, w) - weighted_gram(s.frame, w);
    EXPECT_LE((fd - dpsi).norm(), 2 * c * c * h * h);
  }
}

TEST(StepPsi, EulerLocalErrorIsFirstOrder) {
  // ||Psi(V_euler) - Psi(V) - dPsi|| with increments sqrt(dt) Z for a fixed Z.
  NormalStream rng(9);
  SdeState s = state_of(vec({6, 3, 1.5}));
  s.frame = orthonormalize(gaussian_matrix(3, 3, rng));
  const auto z = BrownianIncrements::sample(3, 1.0, rng);
  const SpectralWeights w(vec({2, 1, 0}), 2);
  std::vector<double> lx, ly;
  for (double dt : {1e-3, 1e-4, 1e-5, 1e-6}) {
    BrownianIncrements inc{std::sqrt(dt) * z.diag, std::sqrt(dt) * z.skew};
    const SdeState next = euler_step(s, 10, inc, dt);
    const DenseMatrix resid = weighted_gram(next.frame, w) - weighted_gram(s.frame, w) -
                              step_psi(s, w, inc, dt);
    lx.push_back(std::log(dt));
    ly.push_back(std::log(resid.norm()));
  }
  const double slope = (ly.back() - ly.front()) / (lx.back() - lx.front());
  EXPECT_GE(slope, 0.9);
}

TEST(IncrementsFromMatrix, DiagonalAndShape) {
  NormalStream rng(10);
  const DenseMatrix a = embedded_diag(6, {5, 3, 1});
  const auto f = svd(a);
  const DenseMatrix db = 1e-3 * gaussian_matrix(6, 3, rng);
  const auto inc = increments_from_matrix(f, db);
  const DenseMatrix x = f.left.transpose() * db * f.right;
  for (int i = 0; i < 3; ++i) EXPECT_NEAR(inc.diag[i], x(i, i), 1e-15);
  // First-order singular value change equals the diagonal driver.
  const DenseVector s_new = svd(DenseMatrix(a + db)).singular_values;
  for (int i = 0; i < 3; ++i) EXPECT_NEAR(s_new[i] - f.singular_values[i], inc.diag[i], 1e-5);
  EXPECT_THROW(increments_from_matrix(f, DenseMatrix::Zero(5, 3)), InputError);
}

TEST(DirectPath, SingleCheckpointMatchesPerturb) {
  NormalStream rng(11);
  const DenseMatrix a = gaussian_matrix(7, 3, rng);
  const auto path = direct_path(a, 0.2, 1, 1234);
  ASSERT_EQ(path.size(), 1u);
  EXPECT_EQ(path[0].t, 0.2);
  const auto ref = svd(perturb(a, {0.2, 1234}));
  EXPECT_EQ(path[0].factors.singular_values, ref.singular_values);
  EXPECT_EQ(path[0].factors.right, ref.right);
}

TEST(DirectPath, ZeroHorizon) {
  const DenseMatrix a = embedded_diag(4, {3, 1});
  const auto path = direct_path(a, 0.0, 5, 1);
  ASSERT_EQ(path.size(), 1u);
  EXPECT_EQ(path[0].t, 0.0);
  EXPECT_NEAR(path[0].factors.singular_values[0], 3.0, 1e-14);
}

TEST(DirectPath, IncrementsIndependentAcrossCheckpoints) {
  const DenseMatrix a = embedded_diag(4, {3, 2, 1});
  std::vector<double> x, y;
  for (int p = 0; p < 2000; ++p) {
    const auto path = direct_path(a, 1.0, 2, derive_seed(12, "indep", p));
    auto phi = [](const SvdFactors<double>& f) {
      return DenseMatrix(f.left * f.singular_values.asDiagonal() * f.right.transpose());
    };
    const DenseMatrix b1 = phi(path[0].factors) - a;
    const DenseMatrix b2 = phi(path[1].factors) - a - b1;
    x.push_back(b1(0, 0));
    y.push_back(b2(0, 0));
  }
  const auto sx = stats(x), sy = stats(y);
  double cov = 0;
  for (std::size_t i = 0; i < x.size(); ++i) cov += (x[i] - sx.mean) * (y[i] - sy.mean);
  const double corr = cov / (x.size() - 1) / std::sqrt(sx.var * sy.var);
  EXPECT_LE(std::abs(corr), 3.0 / std::sqrt(double(x.size())));
  EXPECT_NEAR(sx.var, 0.5, 0.5 * 4 * std::sqrt(2.0 / 2000));
}

}  // namespace
}  // namespace spectral
