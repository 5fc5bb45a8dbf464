#include <doctest.h>

#include "qnet/errors.hpp"
#include "qnet/operator.hpp"
#include "qnet/slh.hpp"
#include "qnet/standard_ops.hpp"
#include "test_support.hpp"

#include <limits>

using namespace qnet;
using qnet::testing::Gen;
using qnet::testing::eye;
using qnet::testing::kron;
using qnet::testing::max_diff;

TEST_CASE("tensor of identities is the identity") {
  const Operator i4 = tensor(Operator::identity(2), Operator::identity(2));
  CHECK(i4.dim() == 4);
  CHECK(max_diff(i4.matrix(), eye(4)) == 0.0);
}

TEST_CASE("tensor places the first factor on the slow index") {
  const Operator x = tensor(ops::sigma_x(), Operator::identity(2));
  Matrix expected = Matrix::Zero(4, 4);
  expected(0, 2) = expected(1, 3) = expected(2, 0) = expected(3, 1) = 1.0;
  CHECK(max_diff(x.matrix(), expected) == 0.0);
}

TEST_CASE("tensor matches an element-wise Kronecker oracle") {
  Gen gen(1);
  for (int trial = 0; trial < 20; ++trial) {
    const Index da = gen.integer(1, 4);
    const Index db = gen.integer(1, 4);
    const Matrix ma = gen.matrix(da, da);
    const Matrix mb = gen.matrix(db, db);
    CHECK(max_diff(tensor(Operator(ma), Operator(mb)).matrix(), kron(ma, mb)) == 0.0);
  }
}

TEST_CASE("tensor mixed-product property") {
  Gen gen(2);
  for (int trial = 0; trial < 50; ++trial) {
    const Operator a(gen.matrix(2, 2)), b(gen.matrix(2, 2)), c(gen.matrix(2, 2)),
        d(gen.matrix(2, 2));
    const Matrix lhs = (tensor(a, b) * tensor(c, d)).matrix();
    const Matrix rhs = tensor(a * c, b * d).matrix();
    CHECK(max_diff(lhs, rhs) <= 1e-12);
  }
}

TEST_CASE("tensor is associative") {
  Gen gen(3);
  for (int trial = 0; trial < 50; ++trial) {
    const Index da = gen.integer(1, 4), db = gen.integer(1, 4), dc = gen.integer(1, 4);
    const Operator a(gen.matrix(da, da)), b(gen.matrix(db, db)), c(gen.matrix(dc, dc));
    CHECK(max_diff(tensor(tensor(a, b), c).matrix(), tensor(a, tensor(b, c)).matrix()) <= 1e-13);
  }
}

TEST_CASE("dagger commutes with tensor exactly") {
  Gen gen(4);
  for (int trial = 0; trial < 20; ++trial) {
    const Operator a(gen.matrix(3, 3)), b(gen.matrix(2, 2));
    CHECK(max_diff(dagger(tensor(a, b)).matrix(), tensor(dagger(a), dagger(b)).matrix()) == 0.0);
  }
}

TEST_CASE("tensor rejects dimensions above the limit") {
  CHECK_THROWS_AS(tensor(Operator::identity(65), Operator::identity(64)), DimensionLimitError);
  CHECK_NOTHROW(tensor(Operator::identity(2), Operator::identity(4), 8));
  CHECK_THROWS_AS(tensor(Operator::identity(4), Operator::identity(4), 8), DimensionLimitError);
}

TEST_CASE("dagger examples") {
  CHECK(max_diff(dagger(Operator::identity(3)).matrix(), eye(3)) == 0.0);
  Gen gen(5);
  const Operator a(gen.matrix(3, 3));
  CHECK(max_diff(dagger(dagger(a)).matrix(), a.matrix()) == 0.0);

  // |g><e| with |e> = index 0, |g> = index 1.
  Matrix lower = Matrix::Zero(2, 2);
  lower(1, 0) = 1.0;
  Matrix raise = Matrix::Zero(2, 2);
  raise(0, 1) = 1.0;
  CHECK(max_diff(ops::sigma_minus().matrix(), lower) == 0.0);
  CHECK(max_diff(dagger(ops::sigma_minus()).matrix(), raise) == 0.0);
  CHECK(max_diff(ops::sigma_plus().matrix(), raise) == 0.0);
}

TEST_CASE("bracket examples") {
  Gen gen(6);
  const Operator a(gen.matrix(3, 3));
  CHECK(max_abs(commutator(a, a).matrix()) == 0.0);

  Matrix sz(2, 2);
  sz << 1, 0, 0, -1;
  Matrix sm = Matrix::Zero(2, 2);
  sm(1, 0) = 1.0;
  const Matrix oracle = sz * sm - sm * sz;
  const Operator got = bracket(BracketKind::commutator, ops::sigma_z(), ops::sigma_minus());
  CHECK(max_diff(got.matrix(), oracle) == 0.0);
  CHECK(max_diff(got.matrix(), -2.0 * sm) == 0.0);

  const Operator c = ops::sigma_minus();
  CHECK(max_diff(anticommutator(c, dagger(c)).matrix(), eye(2)) == 0.0);

  CHECK_THROWS_AS(commutator(Operator::identity(2), Operator::identity(3)), DimensionError);
}

TEST_CASE("check examples") {
  const PropertyReport id = check(Operator::identity(3), Property::unitary, 1e-12);
  CHECK(id.passed);
  CHECK(id.deviation == 0.0);

  CHECK(check(ops::sigma_z(), Property::hermitian, 1e-12).passed);

  Matrix h(2, 2);
  h << 1, 1, 1, -1;
  h /= std::sqrt(2.0);
  const Matrix hh = h.adjoint() * h;
  const PropertyReport r = check(Operator(h), Property::unitary, 1e-12);
  CHECK(r.passed);
  CHECK(r.deviation == doctest::Approx(max_diff(hh, eye(2))).epsilon(1e-30));
}

TEST_CASE("check reports the max-abs residual and passed iff deviation <= tol") {
  Gen gen(7);
  for (int trial = 0; trial < 40; ++trial) {
    const Matrix m = gen.matrix(3, 3);
    const double tol = gen.uniform(0.0, 4.0);
    const PropertyReport herm = check(Operator(m), Property::hermitian, tol);
    CHECK(herm.deviation == doctest::Approx(max_diff(m, m.adjoint())));
    CHECK(herm.passed == (herm.deviation <= tol));
    const PropertyReport unit = check(Operator(m), Property::unitary, tol);
    CHECK(unit.deviation == doctest::Approx(max_diff(m.adjoint() * m, eye(3))));
    CHECK(unit.passed == (unit.deviation <= tol));
    const PropertyReport tr = check(Operator(m), Property::unit_trace, tol);
    CHECK(tr.deviation == doctest::Approx(std::abs(m.trace() - 1.0)));
  }
}

TEST_CASE("positive semidefinite check") {
  Gen gen(8);
  const Matrix rho = gen.density(4);
  CHECK(check(Operator(rho), Property::positive_semidefinite, 1e-12).passed);
  CHECK(check(Operator(rho), Property::unit_trace, 1e-12).passed);
  Matrix neg = Matrix::Identity(2, 2);
  neg(1, 1) = -0.25;
  const PropertyReport r = check(Operator(neg), Property::positive_semidefinite, 1e-12);
  CHECK_FALSE(r.passed);
  CHECK(r.deviation == doctest::Approx(0.25));
}

TEST_CASE("operator construction validates its input") {
  CHECK_THROWS_AS(Operator(Matrix(2, 3)), DimensionError);
  CHECK_THROWS_AS(Operator(Matrix(0, 0)), DimensionError);
  Matrix bad = Matrix::Identity(2, 2);
  bad(0, 1) = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(Operator{bad}, InvariantError);
  bad(0, 1) = std::numeric_limits<double>::infinity();
  CHECK_THROWS_AS(Operator{bad}, InvariantError);
}

TEST_CASE("conditioned inverse") {
  Gen gen(9);
  const Matrix m = gen.matrix(4, 4);
  const Inverse inv = conditioned_inverse(m);
  CHECK(max_diff(inv.value * m, eye(4)) <= 1e-12);
  const double norm1 = m.cwiseAbs().colwise().sum().maxCoeff();
  const double inv_norm1 = inv.value.cwiseAbs().colwise().sum().maxCoeff();
  CHECK(inv.condition == doctest::Approx(norm1 * inv_norm1));

  const Inverse singular = conditioned_inverse(Matrix::Zero(2, 2));
  CHECK(std::isinf(singular.condition));
}

TEST_CASE("Cayley transform of a Hermitian matrix is unitary") {
  Gen gen(10);
  for (int trial = 0; trial < 30; ++trial) {
    const Index d = gen.integer(1, 4);
    const StratonovichCoefficients c{OperatorMatrix(1, 1, d, gen.hermitian(d)),
                                     OperatorMatrix(1, 1, d), Operator::zero(d)};
    const SLHTriple g = stratonovich_to_ito(c);
    CHECK(check(g.S().block(0, 0), Property::unitary, 1e-10).passed);
  }
}

TEST_CASE("operator-matrix blocks and arithmetic") {
  Gen gen(11);
  const Matrix flat = gen.matrix(6, 6);
  const OperatorMatrix m(3, 3, 2, flat);
  CHECK(max_diff(m.block(1, 2).matrix(), flat.block(2, 4, 2, 2)) == 0.0);
  CHECK(max_diff(adjoint(m).flat(), flat.adjoint()) == 0.0);
  const OperatorMatrix p = m * m;
  CHECK(max_diff(p.flat(), flat * flat) <= 1e-12);
  OperatorMatrix z(2, 1, 2);
  z.set_block(1, 0, ops::sigma_x());
  CHECK(max_diff(z[1].matrix(), ops::sigma_x().matrix()) == 0.0);
  CHECK(max_abs(z[0].matrix()) == 0.0);
  CHECK_THROWS_AS(OperatorMatrix(2, 2, 2, Matrix(3, 4)), DimensionError);
}

TEST_CASE("imaginary part is Hermitian") {
  Gen gen(12);
  const Matrix a = gen.matrix(3, 3);
  const Matrix im = imaginary_part(a);
  CHECK(max_diff(im, im.adjoint()) <= 1e-15);
  CHECK(max_diff(im, (a - a.adjoint()) / Complex(0.0, 2.0)) <= 1e-15);
}
