#include "qnet/standard_ops.hpp"

#include "qnet/errors.hpp"

#include <cmath>

namespace qnet::ops {

namespace {

Matrix m2(Complex a, Complex b, Complex c, Complex d) {
  Matrix m(2, 2);
  m << a, b, c, d;
  return m;
}

}  // namespace

Operator sigma_x() { return Operator(m2(0.0, 1.0, 1.0, 0.0)); }
Operator sigma_y() { return Operator(m2(0.0, Complex(0, -1), Complex(0, 1), 0.0)); }
Operator sigma_z() { return Operator(m2(1.0, 0.0, 0.0, -1.0)); }
Operator sigma_minus() { return Operator(m2(0.0, 0.0, 1.0, 0.0)); }
Operator sigma_plus() { return Operator(m2(0.0, 1.0, 0.0, 0.0)); }

Operator ket_bra(Index dim, Index row, Index col) {
  if (row < 0 || row >= dim || col < 0 || col >= dim) {
    throw DimensionError("ket_bra: index out of range");
  }
  Matrix m = Matrix::Zero(dim, dim);
  m(row, col) = 1.0;
  return Operator(std::move(m));
}

Operator annihilation(Index levels) {
  Matrix m = Matrix::Zero(levels, levels);
  for (Index k = 1; k < levels; ++k) m(k - 1, k) = std::sqrt(static_cast<double>(k));
  return Operator(std::move(m));
}

Operator creation(Index levels) { return dagger(annihilation(levels)); }

Operator number(Index levels) {
  Matrix m = Matrix::Zero(levels, levels);
  for (Index k = 0; k < levels; ++k) m(k, k) = static_cast<double>(k);
  return Operator(std::move(m));
}

Operator position(Index levels) {
  const Matrix a = annihilation(levels).matrix();
  return Operator((a + a.adjoint()) / std::sqrt(2.0));
}

Operator momentum(Index levels) {
  const Matrix a = annihilation(levels).matrix();
  return Operator(Complex(0.0, 1.0) * (a.adjoint() - a) / std::sqrt(2.0));
}

Eigen::VectorXcd coherent_state(Index levels, Complex alpha) {
  Eigen::VectorXcd v(levels);
  Complex amp = 1.0;
  for (Index k = 0; k < levels; ++k) {
    if (k > 0) amp *= alpha / std::sqrt(static_cast<double>(k));
    v(k) = amp;
  }
  return v / v.norm();
}

}  // namespace qnet::ops
