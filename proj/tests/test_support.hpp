#pragma once

#include "qnet/network.hpp"
#include "qnet/operator.hpp"
#include "qnet/slh.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/QR>

#include <cmath>
#include <random>

namespace qnet::testing {

/// Seeded generator so every property run is reproducible.
class Gen {
 public:
  explicit Gen(std::uint64_t seed = 20240611) : rng_(seed) {}

  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }
  double normal() { return std::normal_distribution<double>(0.0, 1.0)(rng_); }
  Index integer(Index lo, Index hi) {
    return std::uniform_int_distribution<Index>(lo, hi)(rng_);
  }
  Complex complex() { return {normal(), normal()}; }

  Matrix matrix(Index rows, Index cols) {
    Matrix m(rows, cols);
    for (Index i = 0; i < rows; ++i) {
      for (Index j = 0; j < cols; ++j) m(i, j) = complex();
    }
    return m;
  }

  Matrix hermitian(Index d) {
    const Matrix a = matrix(d, d);
    return 0.5 * (a + a.adjoint());
  }

  /// Haar-like unitary from the QR factor of a Gaussian matrix.
  Matrix unitary(Index d) {
    const Matrix a = matrix(d, d);
    Eigen::HouseholderQR<Matrix> qr(a);
    Matrix q = qr.householderQ();
    const Matrix r = qr.matrixQR();
    for (Index j = 0; j < d; ++j) {
      const Complex diag = r(j, j);
      q.col(j) *= diag / std::abs(diag);
    }
    return q;
  }

  /// Random density matrix: A A^dag / Tr.
  Matrix density(Index d) {
    const Matrix a = matrix(d, d);
    Matrix rho = a * a.adjoint();
    return rho / rho.trace();
  }

  /// A valid SLH triple built directly from a random unitary, random L and a
  /// random Hermitian H (independent of the Cayley transform).
  SLHTriple slh(Index n, Index d, double l_scale = 1.0) {
    return SLHTriple(OperatorMatrix(n, n, d, unitary(n * d)),
                     OperatorMatrix(n, 1, d, l_scale * matrix(n * d, d)), Operator(hermitian(d)));
  }

  std::mt19937_64& engine() { return rng_; }

 private:
  std::mt19937_64 rng_;
};

/// Element-by-element Kronecker product, `a` slow.
inline Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Index i = 0; i < a.rows(); ++i) {
    for (Index j = 0; j < a.cols(); ++j) {
      for (Index k = 0; k < b.rows(); ++k) {
        for (Index l = 0; l < b.cols(); ++l) {
          out(i * b.rows() + k, j * b.cols() + l) = a(i, j) * b(k, l);
        }
      }
    }
  }
  return out;
}

inline Matrix eye(Index d) { return Matrix::Identity(d, d); }

inline double max_diff(const Matrix& a, const Matrix& b) { return (a - b).cwiseAbs().maxCoeff(); }

inline double triple_diff(const SLHTriple& a, const SLHTriple& b) {
  return std::max({max_diff(a.S().flat(), b.S().flat()), max_diff(a.L().flat(), b.L().flat()),
                   max_diff(a.H().matrix(), b.H().matrix())});
}

/// Unitary exp(iH) via the spectral decomposition of Hermitian H.
inline Matrix expi(const Matrix& h) {
  Eigen::SelfAdjointEigenSolver<Matrix> eig(h);
  const Eigen::VectorXd lam = eig.eigenvalues();
  Eigen::VectorXcd phases(lam.size());
  for (Index k = 0; k < lam.size(); ++k) phases(k) = std::polar(1.0, lam(k));
  return eig.eigenvectors() * phases.asDiagonal() * eig.eigenvectors().adjoint();
}

}  // namespace qnet::testing
