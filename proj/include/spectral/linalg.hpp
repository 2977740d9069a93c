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

// Dense linear algebra shared by every module: a sign-canonical SVD, top-k
// projectors, weighted Grams V diag(gamma^2) V^T and the distances between
// them. Everything is templated on the scalar type; the library instantiates
// it with double.

#ifndef SPECTRAL_LINALG_HPP_
#define SPECTRAL_LINALG_HPP_

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <sstream>
#include <string>
#include <type_traits>
#include <utility>

#include "spectral/errors.hpp"

namespace spectral {

template <typename Scalar>
using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

using DenseMatrix = Matrix<double>;
using DenseVector = Vector<double>;

// Orthonormality tolerance for factor matrices, measured as ||Q^T Q - I||_F.
template <typename Scalar>
constexpr Scalar ortho_tol() {
  return std::is_same_v<Scalar, float> ? Scalar(1e-4) : Scalar(1e-8);
}

// Relative reconstruction tolerance ||A - U S V^T||_F / ||A||_F.
template <typename Scalar>
constexpr Scalar recon_tol() {
  return std::is_same_v<Scalar, float> ? Scalar(1e-5) : Scalar(1e-10);
}

template <typename Scalar>
struct SvdFactors {
  Matrix<Scalar> left;             // m x d, orthonormal columns
  Vector<Scalar> singular_values;  // nonincreasing, nonnegative
  Matrix<Scalar> right;            // d x d orthogonal
};

template <typename Derived>
bool all_finite(const Eigen::MatrixBase<Derived>& a) {
  return a.allFinite();
}

inline std::string shape_string(Eigen::Index rows, Eigen::Index cols) {
  std::ostringstream os;
  os << rows << "x" << cols;
  return os.str();
}

template <typename Derived>
typename Derived::Scalar orthonormality_defect(
    const Eigen::MatrixBase<Derived>& q) {
  using Scalar = typename Derived::Scalar;
  const auto n = q.cols();
  return (q.transpose() * q - Matrix<Scalar>::Identity(n, n)).norm();
}

// Nonincreasing, nonnegative weights gamma with gamma_i = 0 past index k.
// k is 1-based and lies in [1, d].
template <typename Scalar>
class BasicSpectralWeights {
 public:
  BasicSpectralWeights(Vector<Scalar> gamma, int k)
      : gamma_(std::move(gamma)), k_(k) {
    const auto d = gamma_.size();
    if (d < 1) throw InputError("spectral weights: empty gamma");
    if (k_ < 1 || k_ > d) {
      throw InputError("spectral weights: k=" + std::to_string(k_) +
                       " outside [1, " + std::to_string(d) + "]");
    }
    if (!gamma_.allFinite()) throw InputError("spectral weights: non-finite gamma");
    for (Eigen::Index i = 0; i < d; ++i) {
      if (gamma_[i] < 0) throw InputError("spectral weights: negative gamma");
      if (i + 1 < d && gamma_[i] < gamma_[i + 1]) {
        throw InputError("spectral weights: gamma must be nonincreasing");
      }
      if (i >= k_ && gamma_[i] != 0) {
        throw InputError("spectral weights: gamma_i must vanish for i > k");
      }
    }
  }

  // gamma = (1, ..., 1, 0, ..., 0) with k ones: weighted_gram == projector.
  static BasicSpectralWeights indicator(int d, int k) {
    if (k < 1 || k > d) throw InputError("spectral weights: k out of range");
    Vector<Scalar> g = Vector<Scalar>::Zero(d);
    g.head(k).setOnes();
    return BasicSpectralWeights(std::move(g), k);
  }

  // gamma = (sigma_1, ..., sigma_k, 0, ..., 0).
  static BasicSpectralWeights truncated(const Vector<Scalar>& sigma, int k) {
    const auto d = static_cast<int>(sigma.size());
    if (k < 1 || k > d) throw InputError("spectral weights: k out of range");
    Vector<Scalar> g = Vector<Scalar>::Zero(d);
    g.head(k) = sigma.head(k);
    return BasicSpectralWeights(std::move(g), k);
  }

  const Vector<Scalar>& gamma() const { return gamma_; }
  int k() const { return k_; }
  int size() const { return static_cast<int>(gamma_.size()); }

 private:
  Vector<Scalar> gamma_;
  int k_;
};

using SpectralWeights = BasicSpectralWeights<double>;

namespace detail {

// Flip each right-singular vector (and its left partner) so that its entry of
// largest magnitude is nonnegative; ties resolve to the lowest index.
template <typename Scalar>
void canonicalize_signs(SvdFactors<Scalar>& f) {
  for (Eigen::Index j = 0; j < f.right.cols(); ++j) {
    Eigen::Index arg = 0;
    Scalar best = Scalar(-1);
    for (Eigen::Index i = 0; i < f.right.rows(); ++i) {
      const Scalar a = std::abs(f.right(i, j));
      if (a > best) {
        best = a;
        arg = i;
      }
    }
    if (f.right(arg, j) < 0) {
      f.right.col(j) *= Scalar(-1);
      if (j < f.left.cols()) f.left.col(j) *= Scalar(-1);
    }
  }
}

}  // namespace detail

// Thin SVD of a tall (rows >= cols) matrix. Singular values come out sorted
// nonincreasing and signs are canonicalized. When singular values repeat the
// individual vectors are whatever the factorization produced; only projector
// level quantities are meaningful then.
template <typename Derived>
SvdFactors<typename Derived::Scalar> svd(const Eigen::MatrixBase<Derived>& a) {
  using Scalar = typename Derived::Scalar;
  if (a.rows() < 1 || a.cols() < 1) throw InputError("svd: empty matrix");
  if (a.rows() < a.cols()) {
    throw InputError("svd: expected rows >= cols, got " +
                     shape_string(a.rows(), a.cols()));
  }
  if (!a.allFinite()) throw InputError("svd: non-finite entries");

  const Matrix<Scalar> dense = a;
  Eigen::JacobiSVD<Matrix<Scalar>, Eigen::ColPivHouseholderQRPreconditioner> solver(
      dense, Eigen::ComputeThinU | Eigen::ComputeThinV);

  SvdFactors<Scalar> f{solver.matrixU(), solver.singularValues(), solver.matrixV()};
  detail::canonicalize_signs(f);

  const Scalar scale = std::max(dense.norm(), std::numeric_limits<Scalar>::min());
  const Scalar recon =
      (dense - f.left * f.singular_values.asDiagonal() * f.right.transpose()).norm();
  if (!(recon <= recon_tol<Scalar>() * scale) ||
      !(orthonormality_defect(f.right) <= ortho_tol<Scalar>())) {
    throw NumericError("svd: factorization of " + shape_string(a.rows(), a.cols()) +
                       " matrix failed to converge");
  }
  return f;
}

// V_k V_k^T for the first k columns of v.
// Blocked products are not exactly symmetric; average with the transpose.
template <typename Scalar>
Matrix<Scalar> symmetrized(const Matrix<Scalar>& x) {
  return Scalar(0.5) * (x + x.transpose());
}

template <typename Derived>
Matrix<typename Derived::Scalar> projector(const Eigen::MatrixBase<Derived>& v, int k) {
  if (v.rows() != v.cols()) throw InputError("projector: frame must be square");
  if (k < 1 || k > v.cols()) {
    throw InputError("projector: k=" + std::to_string(k) + " outside [1, " +
                     std::to_string(v.cols()) + "]");
  }
  const auto vk = v.leftCols(k);
  Matrix<typename Derived::Scalar> p = vk * vk.transpose();
  return symmetrized(p);
}

// V diag(gamma^2) V^T.
template <typename Derived, typename Scalar>
Matrix<Scalar> weighted_gram(const Eigen::MatrixBase<Derived>& v,
                             const BasicSpectralWeights<Scalar>& w) {
  if (v.rows() != v.cols() || v.cols() != w.size()) {
    throw InputError("weighted_gram: frame " + shape_string(v.rows(), v.cols()) +
                     " does not match " + std::to_string(w.size()) + " weights");
  }
  const auto vk = v.leftCols(w.k());
  const Vector<Scalar> g2 = w.gamma().head(w.k()).array().square();
  Matrix<Scalar> psi = vk * g2.asDiagonal() * vk.transpose();
  return symmetrized(psi);
}

template <typename DerivedX, typename DerivedY>
typename DerivedX::Scalar frobenius_distance(const Eigen::MatrixBase<DerivedX>& x,
                                             const Eigen::MatrixBase<DerivedY>& y) {
  if (x.rows() != y.rows() || x.cols() != y.cols()) {
    throw InputError("frobenius_distance: shape mismatch " +
                     shape_string(x.rows(), x.cols()) + " vs " +
                     shape_string(y.rows(), y.cols()));
  }
  return (x - y).norm();
}

// Largest singular value. Accepts wide matrices by transposing.
template <typename Derived>
typename Derived::Scalar spectral_norm(const Eigen::MatrixBase<Derived>& x) {
  using Scalar = typename Derived::Scalar;
  if (!x.allFinite()) throw InputError("spectral_norm: non-finite entries");
  if (x.size() == 0) return Scalar(0);
  const Matrix<Scalar> tall =
      x.rows() >= x.cols() ? Matrix<Scalar>(x) : Matrix<Scalar>(x.transpose());
  Eigen::JacobiSVD<Matrix<Scalar>, Eigen::ColPivHouseholderQRPreconditioner> solver(tall);
  return solver.singularValues()(0);
}

// Orthonormal basis for the columns of a tall matrix via Householder QR, with
// the sign convention diag(R) >= 0. Applied to a Gaussian matrix this yields a
// Haar-distributed frame.
template <typename Derived>
Matrix<typename Derived::Scalar> orthonormalize(const Eigen::MatrixBase<Derived>& a) {
  using Scalar = typename Derived::Scalar;
  if (a.rows() < a.cols()) throw InputError("orthonormalize: expected rows >= cols");
  const Matrix<Scalar> dense = a;
  Eigen::HouseholderQR<Matrix<Scalar>> qr(dense);
  Matrix<Scalar> q = qr.householderQ() * Matrix<Scalar>::Identity(a.rows(), a.cols());
  const Matrix<Scalar>& r = qr.matrixQR();
  for (Eigen::Index j = 0; j < a.cols(); ++j) {
    if (r(j, j) < 0) q.col(j) *= Scalar(-1);
  }
  return q;
}

template <typename Derived>
Matrix<typename Derived::Scalar> symmetrize(const Eigen::MatrixBase<Derived>& x) {
  return (x + x.transpose()) / typename Derived::Scalar(2);
}

}  // namespace spectral

#endif  // SPECTRAL_LINALG_HPP_
