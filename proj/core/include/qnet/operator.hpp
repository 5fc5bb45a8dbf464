#pragma once

#include <Eigen/Dense>

#include <complex>
#include <cstddef>
#include <string_view>

namespace qnet {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Index = Eigen::Index;

inline constexpr std::size_t kMaxDimension = 4096;
inline constexpr double kDefaultTol = 1e-10;

/// Largest absolute entry; the deviation metric used throughout.
double max_abs(const Matrix& m);

/// A bounded operator on a finite-dimensional Hilbert space: a square matrix
/// with finite entries. Immutable once built.
class Operator {
 public:
  /// Throws DimensionError for empty/non-square input and InvariantError for
  /// NaN/Inf entries.
  explicit Operator(Matrix entries);

  static Operator identity(Index dim);
  static Operator zero(Index dim);
  static Operator scalar(Complex value);

  Index dim() const noexcept { return entries_.rows(); }
  const Matrix& matrix() const noexcept { return entries_; }
  Complex operator()(Index row, Index col) const { return entries_(row, col); }

  Operator operator-() const;
  friend Operator operator+(const Operator& a, const Operator& b);
  friend Operator operator-(const Operator& a, const Operator& b);
  friend Operator operator*(const Operator& a, const Operator& b);
  friend Operator operator*(Complex s, const Operator& a);
  friend Operator operator*(const Operator& a, Complex s) { return s * a; }

 private:
  Matrix entries_;
};

/// Kronecker product with `a` as the slow index.
Operator tensor(const Operator& a, const Operator& b, std::size_t max_dim = kMaxDimension);
Operator dagger(const Operator& a);
Complex trace(const Operator& a);

enum class BracketKind { commutator, anticommutator };

Operator bracket(BracketKind kind, const Operator& a, const Operator& b);
inline Operator commutator(const Operator& a, const Operator& b) {
  return bracket(BracketKind::commutator, a, b);
}
inline Operator anticommutator(const Operator& a, const Operator& b) {
  return bracket(BracketKind::anticommutator, a, b);
}

enum class Property { hermitian, unitary, positive_semidefinite, unit_trace };

std::string_view to_string(Property p);

struct PropertyReport {
  Property property;
  double deviation = 0.0;
  bool passed = false;
};

/// Residual-based property check. Deviations:
///   hermitian             max|A - A^dag|
///   unitary               max|A^dag A - I|
///   positive_semidefinite max(hermitian deviation, -lambda_min of (A + A^dag)/2)
///   unit_trace            |Tr A - 1|
PropertyReport check(const Operator& a, Property property, double tol = kDefaultTol);

/// Result of a conditioned inverse.
struct Inverse {
  Matrix value;
  double condition = 0.0;  // 1-norm condition number
};

/// Dense LU inverse with its 1-norm condition number. A singular input (or a
/// non-finite inverse) reports condition = +inf; callers apply their own
/// rejection threshold.
Inverse conditioned_inverse(const Matrix& m);

/// Operator-valued matrix stored as one (rows*dim) x (cols*dim) dense block
/// matrix. Used for S (n x n), L (n x 1) and generator blocks.
class OperatorMatrix {
 public:
  OperatorMatrix(Index rows, Index cols, Index dim);
  OperatorMatrix(Index rows, Index cols, Index dim, Matrix flat);

  static OperatorMatrix identity(Index n, Index dim);
  static OperatorMatrix column(Index n, Index dim) { return OperatorMatrix(n, 1, dim); }

  Index rows() const noexcept { return rows_; }
  Index cols() const noexcept { return cols_; }
  Index dim() const noexcept { return dim_; }

  Operator block(Index i, Index j) const;
  Operator operator[](Index i) const { return block(i, 0); }
  void set_block(Index i, Index j, const Operator& op);

  const Matrix& flat() const noexcept { return flat_; }

 private:
  Index rows_;
  Index cols_;
  Index dim_;
  Matrix flat_;
};

/// Block-wise adjoint: result block (i,j) = dagger(block(j,i)). This is the
/// ordinary conjugate transpose of the flat matrix.
OperatorMatrix adjoint(const OperatorMatrix& m);

/// Operator-matrix product with operator-valued entries.
OperatorMatrix operator*(const OperatorMatrix& a, const OperatorMatrix& b);
OperatorMatrix operator+(const OperatorMatrix& a, const OperatorMatrix& b);
OperatorMatrix operator-(const OperatorMatrix& a, const OperatorMatrix& b);

/// Im(A) := (A - A^dag) / (2i), Hermitian for any square A.
Matrix imaginary_part(const Matrix& a);

}  // namespace qnet
