#include "qnet/operator.hpp"

#include "qnet/errors.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <string>

namespace qnet {

namespace {

void require_same_dim(const Operator& a, const Operator& b, const char* what) {
  if (a.dim() != b.dim()) {
    std::ostringstream os;
    os << what << ": dimension mismatch (" << a.dim() << " vs " << b.dim() << ")";
    throw DimensionError(os.str());
  }
}

void require_same_shape(const OperatorMatrix& a, const OperatorMatrix& b, const char* what) {
  if (a.rows() != b.rows() || a.cols() != b.cols() || a.dim() != b.dim()) {
    throw DimensionError(std::string(what) + ": operator-matrix shape mismatch");
  }
}

}  // namespace

double max_abs(const Matrix& m) {
  if (m.size() == 0) return 0.0;
  return m.cwiseAbs().maxCoeff();
}

Operator::Operator(Matrix entries) : entries_(std::move(entries)) {
  if (entries_.rows() == 0 || entries_.rows() != entries_.cols()) {
    std::ostringstream os;
    os << "operator must be square and non-empty, got " << entries_.rows() << "x"
       << entries_.cols();
    throw DimensionError(os.str());
  }
  if (!entries_.allFinite()) throw InvariantError("operator has non-finite entries");
}

Operator Operator::identity(Index dim) { return Operator(Matrix::Identity(dim, dim)); }
Operator Operator::zero(Index dim) { return Operator(Matrix::Zero(dim, dim)); }
Operator Operator::scalar(Complex value) { return Operator(Matrix::Constant(1, 1, value)); }

Operator Operator::operator-() const { return Operator(-entries_); }

Operator operator+(const Operator& a, const Operator& b) {
  require_same_dim(a, b, "operator+");
  return Operator(a.entries_ + b.entries_);
}

Operator operator-(const Operator& a, const Operator& b) {
  require_same_dim(a, b, "operator-");
  return Operator(a.entries_ - b.entries_);
}

Operator operator*(const Operator& a, const Operator& b) {
  require_same_dim(a, b, "operator*");
  return Operator(a.entries_ * b.entries_);
}

Operator operator*(Complex s, const Operator& a) { return Operator(s * a.entries_); }

Operator tensor(const Operator& a, const Operator& b, std::size_t max_dim) {
  const auto da = static_cast<std::size_t>(a.dim());
  const auto db = static_cast<std::size_t>(b.dim());
  if (da > max_dim / db) {
    std::ostringstream os;
    os << "tensor dimension " << da << "*" << db << " exceeds limit " << max_dim;
    throw DimensionLimitError(os.str());
  }
  const Index nb = b.dim();
  Matrix out(a.dim() * nb, a.dim() * nb);
  for (Index i = 0; i < a.dim(); ++i) {
    for (Index j = 0; j < a.dim(); ++j) {
      out.block(i * nb, j * nb, nb, nb) = a(i, j) * b.matrix();
    }
  }
  return Operator(std::move(out));
}

Operator dagger(const Operator& a) { return Operator(a.matrix().adjoint()); }

Complex trace(const Operator& a) { return a.matrix().trace(); }

Operator bracket(BracketKind kind, const Operator& a, const Operator& b) {
  require_same_dim(a, b, "bracket");
  const Matrix ab = a.matrix() * b.matrix();
  const Matrix ba = b.matrix() * a.matrix();
  return Operator(kind == BracketKind::commutator ? Matrix(ab - ba) : Matrix(ab + ba));
}

std::string_view to_string(Property p) {
  switch (p) {
    case Property::hermitian: return "hermitian";
    case Property::unitary: return "unitary";
    case Property::positive_semidefinite: return "positive_semidefinite";
    case Property::unit_trace: return "unit_trace";
  }
  return "unknown";
}

PropertyReport check(const Operator& a, Property property, double tol) {
  if (!(tol > 0.0)) throw InvariantError("check: tolerance must be positive");
  const Matrix& m = a.matrix();
  double deviation = 0.0;
  switch (property) {
    case Property::hermitian:
      deviation = max_abs(m - m.adjoint());
      break;
    case Property::unitary:
      deviation = max_abs(m.adjoint() * m - Matrix::Identity(m.rows(), m.cols()));
      break;
    case Property::positive_semidefinite: {
      const Matrix herm = 0.5 * (m + m.adjoint());
      Eigen::SelfAdjointEigenSolver<Matrix> eig(herm, Eigen::EigenvaluesOnly);
      deviation = std::max(max_abs(m - m.adjoint()), std::max(0.0, -eig.eigenvalues().minCoeff()));
      break;
    }
    case Property::unit_trace:
      deviation = std::abs(m.trace() - Complex(1.0, 0.0));
      break;
  }
  return PropertyReport{property, deviation, deviation <= tol};
}

Inverse conditioned_inverse(const Matrix& m) {
  constexpr double inf = std::numeric_limits<double>::infinity();
  Eigen::PartialPivLU<Matrix> lu(m);
  const auto& lu_matrix = lu.matrixLU();
  for (Index k = 0; k < lu_matrix.rows(); ++k) {
    if (lu_matrix(k, k) == Complex(0.0, 0.0)) return Inverse{Matrix(), inf};
  }
  Matrix inv = lu.inverse();
  if (!inv.allFinite()) return Inverse{Matrix(), inf};
  auto norm1 = [](const Matrix& x) { return x.cwiseAbs().colwise().sum().maxCoeff(); };
  const double condition = norm1(m) * norm1(inv);
  return Inverse{std::move(inv), condition};
}

OperatorMatrix::OperatorMatrix(Index rows, Index cols, Index dim)
    : rows_(rows), cols_(cols), dim_(dim), flat_(Matrix::Zero(rows * dim, cols * dim)) {
  if (rows <= 0 || cols <= 0 || dim <= 0) {
    throw DimensionError("operator matrix needs positive rows, cols and dim");
  }
}

OperatorMatrix::OperatorMatrix(Index rows, Index cols, Index dim, Matrix flat)
    : rows_(rows), cols_(cols), dim_(dim), flat_(std::move(flat)) {
  if (rows <= 0 || cols <= 0 || dim <= 0) {
    throw DimensionError("operator matrix needs positive rows, cols and dim");
  }
  if (flat_.rows() != rows * dim || flat_.cols() != cols * dim) {
    std::ostringstream os;
    os << "operator matrix flat storage is " << flat_.rows() << "x" << flat_.cols()
       << ", expected " << rows * dim << "x" << cols * dim;
    throw DimensionError(os.str());
  }
  if (!flat_.allFinite()) throw InvariantError("operator matrix has non-finite entries");
}

OperatorMatrix OperatorMatrix::identity(Index n, Index dim) {
  return OperatorMatrix(n, n, dim, Matrix::Identity(n * dim, n * dim));
}

Operator OperatorMatrix::block(Index i, Index j) const {
  if (i < 0 || i >= rows_ || j < 0 || j >= cols_) {
    throw DimensionError("operator matrix block index out of range");
  }
  return Operator(flat_.block(i * dim_, j * dim_, dim_, dim_));
}

void OperatorMatrix::set_block(Index i, Index j, const Operator& op) {
  if (i < 0 || i >= rows_ || j < 0 || j >= cols_) {
    throw DimensionError("operator matrix block index out of range");
  }
  if (op.dim() != dim_) throw DimensionError("operator matrix block has wrong dimension");
  flat_.block(i * dim_, j * dim_, dim_, dim_) = op.matrix();
}

OperatorMatrix adjoint(const OperatorMatrix& m) {
  return OperatorMatrix(m.cols(), m.rows(), m.dim(), m.flat().adjoint());
}

OperatorMatrix operator*(const OperatorMatrix& a, const OperatorMatrix& b) {
  if (a.cols() != b.rows() || a.dim() != b.dim()) {
    throw DimensionError("operator-matrix product: incompatible shapes");
  }
  return OperatorMatrix(a.rows(), b.cols(), a.dim(), a.flat() * b.flat());
}

OperatorMatrix operator+(const OperatorMatrix& a, const OperatorMatrix& b) {
  require_same_shape(a, b, "operator-matrix sum");
  return OperatorMatrix(a.rows(), a.cols(), a.dim(), a.flat() + b.flat());
}

OperatorMatrix operator-(const OperatorMatrix& a, const OperatorMatrix& b) {
  require_same_shape(a, b, "operator-matrix difference");
  return OperatorMatrix(a.rows(), a.cols(), a.dim(), a.flat() - b.flat());
}

Matrix imaginary_part(const Matrix& a) {
  // (A - A^dag) / (2i) = -(i/2)(A - A^dag)
  return Complex(0.0, -0.5) * (a - a.adjoint());
}

}  // namespace qnet
