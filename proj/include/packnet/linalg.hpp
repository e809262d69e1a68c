#pragma once

// Iterative symmetric eigensolvers over Eigen sparse matrices. Templated on
// the scalar so they can run in float for quick looks or in long double for
// reference runs; the library itself instantiates them with double.

#include <cmath>
#include <cstdint>
#include <optional>
#include <random>

#include <Eigen/Dense>
#include <Eigen/SparseCore>

namespace packnet::linalg {

template <typename Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
template <typename Scalar>
using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

/// Fixes the sign of an eigenvector: positive component sum, or, when the
/// sum vanishes, a positive first non-negligible component.
template <typename Derived>
void orient(Eigen::MatrixBase<Derived>& v) {
  using Scalar = typename Derived::Scalar;
  const Scalar eps = Scalar(1e-10) * std::max(Scalar(1), v.template lpNorm<Eigen::Infinity>());
  const Scalar sum = v.sum();
  if (std::abs(sum) > eps) {
    if (sum < 0) v = -v;
    return;
  }
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (std::abs(v[i]) > eps) {
      if (v[i] < 0) v = -v;
      return;
    }
  }
}

/// Orthonormal basis of the column span of `x` (thin Householder QR).
template <typename Derived>
Matrix<typename Derived::Scalar> orthonormalize(const Eigen::MatrixBase<Derived>& x) {
  using Scalar = typename Derived::Scalar;
  Eigen::HouseholderQR<Matrix<Scalar>> qr(x);
  return qr.householderQ() * Matrix<Scalar>::Identity(x.rows(), x.cols());
}

template <typename Scalar>
struct PowerResult {
  Scalar value{};
  Vector<Scalar> vector;
  int iterations = 0;
  bool converged = false;
};

/// Shifted power iteration for the algebraically largest eigenpair of a
/// symmetric matrix. Iterates with (A + shift I) from `start`; stops once
/// successive Rayleigh quotients differ by less than `tol` and the residual
/// |Av - lv| is at most tol (1 + |l|).
template <typename Scalar, int Options, typename Index>
PowerResult<Scalar> power_iteration(const Eigen::SparseMatrix<Scalar, Options, Index>& a, const Vector<Scalar>& start,
                                    Scalar shift, Scalar tol, int max_iter) {
  PowerResult<Scalar> out;
  Vector<Scalar> v = start.normalized();
  Vector<Scalar> w(v.size());
  std::optional<Scalar> previous;
  for (int it = 1; it <= max_iter; ++it) {
    w.noalias() = a * v;
    const Scalar rho = v.dot(w);
    const Scalar residual = (w - rho * v).norm();
    out.value = rho;
    out.iterations = it;
    if (previous && std::abs(rho - *previous) < tol && residual <= tol * (1 + std::abs(rho))) {
      out.converged = true;
      break;
    }
    previous = rho;
    w += shift * v;
    const Scalar norm = w.norm();
    if (!(norm > 0)) break;
    v = w / norm;
  }
  out.vector = std::move(v);
  return out;
}

template <typename Scalar>
struct SubspaceResult {
  Vector<Scalar> values;   // descending
  Matrix<Scalar> vectors;  // orthonormal columns
  int iterations = 0;
  bool converged = false;
};

/// Block orthogonal iteration with Rayleigh-Ritz projection for the `k`
/// algebraically largest eigenpairs of a symmetric matrix. `shift` must make
/// A + shift I positive semi-definite so the dominant subspace is the top one.
/// The block carries extra guard vectors to speed up the trailing pairs.
template <typename Scalar, int Options, typename Index>
SubspaceResult<Scalar> subspace_iteration(const Eigen::SparseMatrix<Scalar, Options, Index>& a, int k, Scalar shift,
                                          Scalar tol, int max_iter, std::uint64_t seed) {
  const Eigen::Index n = a.rows();
  const Eigen::Index p = std::min<Eigen::Index>(n, std::max(k + 8, 2 * k));

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss;
  Matrix<Scalar> x(n, p);
  for (Eigen::Index j = 0; j < p; ++j)
    for (Eigen::Index i = 0; i < n; ++i) x(i, j) = static_cast<Scalar>(gauss(rng));
  x = orthonormalize(x);

  SubspaceResult<Scalar> out;
  Matrix<Scalar> y(n, p);
  Vector<Scalar> previous;
  for (int it = 1; it <= max_iter; ++it) {
    y.noalias() = a * x;
    Matrix<Scalar> h = x.transpose() * y;
    h = Scalar(0.5) * (h + h.transpose()).eval();
    Eigen::SelfAdjointEigenSolver<Matrix<Scalar>> ritz(h);
    // Descending order.
    const Vector<Scalar> theta = ritz.eigenvalues().reverse();
    const Matrix<Scalar> w = ritz.eigenvectors().rowwise().reverse();
    x = x * w;
    y = y * w;

    bool done = previous.size() == p;
    for (int i = 0; i < k && done; ++i) {
      const Scalar residual = (y.col(i) - theta[i] * x.col(i)).norm();
      done = residual <= tol * (1 + std::abs(theta[i])) && std::abs(theta[i] - previous[i]) < tol;
    }
    out.iterations = it;
    if (done || p == n) {
      // With p == n the projection is exact after a single step.
      out.converged = true;
      out.values = theta.head(k);
      out.vectors = x.leftCols(k);
      return out;
    }
    previous = theta;
    x = orthonormalize(y + shift * x);
  }
  out.values = previous.head(std::min<Eigen::Index>(k, previous.size()));
  out.vectors = x.leftCols(k);
  return out;
}

}  // namespace packnet::linalg
