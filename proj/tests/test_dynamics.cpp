#include <doctest.h>

#include "qnet/dynamics.hpp"
#include "qnet/errors.hpp"
#include "qnet/standard_ops.hpp"
#include "test_support.hpp"

using namespace qnet;
using qnet::testing::Gen;
using qnet::testing::eye;
using qnet::testing::max_diff;

namespace {

constexpr Complex kI{0.0, 1.0};

Matrix master_oracle_quadrature(const Matrix& e, const Matrix& h, const Matrix& rho) {
  const Matrix e2 = e * e;
  return e * rho * e - 0.5 * (e2 * rho + rho * e2) - kI * (h * rho - rho * h);
}

DensityMatrix plus_state() {
  Eigen::VectorXcd psi(2);
  psi << 1.0, 1.0;
  return DensityMatrix::pure(psi);
}

// Worst |rho01(t) - e^{-2t} rho01(0)| over a dephasing trajectory.
double dephasing_error(double dt, double t_end) {
  const SLHTriple g = embed_quadrature(ops::sigma_z(), Operator::zero(2));
  IntegrationOptions opt;
  opt.t_end = t_end;
  opt.dt = dt;
  const DensityMatrix rho0 = plus_state();
  const Trajectory traj = integrate_master(g, rho0, opt);
  double worst = 0.0;
  for (std::size_t k = 0; k < traj.times.size(); ++k) {
    const Complex exact = std::exp(-2.0 * traj.times[k]) * rho0.matrix()(0, 1);
    worst = std::max(worst, std::abs(traj.states[k].matrix()(0, 1) - exact));
  }
  return worst;
}

}  // namespace

TEST_CASE("density matrix invariants") {
  Gen gen(71);
  CHECK_NOTHROW(DensityMatrix(Operator(gen.density(3))));
  CHECK_THROWS_AS(DensityMatrix(Operator(2.0 * gen.density(3))), InvariantError);
  CHECK_THROWS_AS(DensityMatrix(Operator(gen.matrix(3, 3))), InvariantError);
  Matrix negative = Matrix::Zero(2, 2);
  negative(0, 0) = 1.5;
  negative(1, 1) = -0.5;
  CHECK_THROWS_AS(DensityMatrix(Operator(negative)), InvariantError);

  Eigen::VectorXcd psi(2);
  psi << 3.0, Complex(0.0, 4.0);
  const DensityMatrix pure = DensityMatrix::pure(psi);
  CHECK(std::abs(pure.matrix()(0, 0) - 9.0 / 25.0) <= 1e-15);
  CHECK(std::abs(pure.matrix()(0, 1) - Complex(0.0, -12.0) / 25.0) <= 1e-15);
  CHECK_THROWS_AS(DensityMatrix::pure(Eigen::VectorXcd::Zero(2)), InvariantError);
}

TEST_CASE("expectation") {
  Gen gen(72);
  const DensityMatrix rho(Operator(gen.density(3)));
  CHECK(std::abs(expectation(rho, Operator::identity(3)) - 1.0) <= 1e-14);

  Eigen::VectorXcd excited = Eigen::VectorXcd::Zero(2);
  excited(0) = 1.0;
  CHECK(expectation(DensityMatrix::pure(excited), ops::sigma_z()) == Complex(1.0, 0.0));

  for (int trial = 0; trial < 20; ++trial) {
    const Matrix x = gen.matrix(3, 3), y = gen.matrix(3, 3);
    const Complex a = gen.complex(), b = gen.complex();
    const Complex lhs = expectation(rho, Operator(a * x + b * y));
    const Complex rhs = a * (rho.matrix() * x).trace() + b * (rho.matrix() * y).trace();
    CHECK(std::abs(lhs - rhs) <= 1e-12);
  }
  CHECK_THROWS_AS(expectation(rho, Operator::identity(2)), DimensionError);
}

TEST_CASE("free evolution leaves the state unchanged") {
  Gen gen(73);
  const DensityMatrix rho0(Operator(gen.density(3)));
  IntegrationOptions opt;
  opt.t_end = 0.5;
  opt.dt = 0.01;
  opt.store_every = 10;
  const Trajectory traj = integrate_master(SLHTriple::identity(1, 3), rho0, opt);
  CHECK(traj.times.size() == 6);
  CHECK(traj.times.back() == doctest::Approx(0.5).epsilon(1e-15));
  for (const auto& s : traj.states) CHECK(max_diff(s.matrix(), rho0.matrix()) == 0.0);
}

TEST_CASE("dephasing decay") {
  CHECK(dephasing_error(1e-3, 1.0) <= 1e-6);
}

TEST_CASE("Poisson-kicked qubit") {
  const double nu = 0.75;
  const SLHTriple g = embed_poisson(ops::sigma_x(), nu);
  Eigen::VectorXcd psi(2);
  psi << std::cos(0.3), std::sin(0.3);
  const DensityMatrix rho0 = DensityMatrix::pure(psi);
  const Complex z0 = expectation(rho0, ops::sigma_z());
  IntegrationOptions opt;
  opt.t_end = 1.0;
  opt.dt = 1e-3;
  opt.store_every = 100;
  const Trajectory traj = integrate_master(g, rho0, opt, {{"sz", ops::sigma_z()}});
  REQUIRE(traj.observables.size() == 1);
  for (std::size_t k = 0; k < traj.times.size(); ++k) {
    const Complex exact = std::exp(-2.0 * nu * traj.times[k]) * z0;
    CHECK(std::abs(traj.observables[0].second[k] - exact) <= 1e-6);
  }
}

TEST_CASE("fourth-order convergence under step halving") {
  const double coarse = dephasing_error(0.1, 1.0);
  const double fine = dephasing_error(0.05, 1.0);
  CHECK(fine > 0.0);
  CHECK(coarse / fine >= 8.0);
  // Ratio close to 2^4 for a fourth-order scheme.
  CHECK(coarse / fine == doctest::Approx(16.0).epsilon(0.15));
}

TEST_CASE("trajectory invariants and purity") {
  Gen gen(74);
  const SLHTriple g = embed_quadrature(Operator(gen.hermitian(3)), Operator::zero(3));
  const DensityMatrix rho0(Operator(gen.density(3)));
  IntegrationOptions opt;
  opt.t_end = 2.0;
  opt.dt = 1e-3;
  opt.store_every = 50;
  const Trajectory traj = integrate_master(g, rho0, opt);
  double previous = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < traj.states.size(); ++k) {
    const Matrix& rho = traj.states[k].matrix();
    CHECK(std::abs(rho.trace() - 1.0) <= 1e-9);
    CHECK(max_diff(rho, rho.adjoint()) <= 1e-9);
    const double purity = (rho * rho).trace().real();
    CHECK(purity <= previous + 1e-12);
    previous = purity;
    if (k > 0) CHECK(traj.times[k] > traj.times[k - 1]);
  }
  CHECK(traj.min_eigenvalue >= -1e-7);
}

TEST_CASE("integration divergence is reported") {
  const SLHTriple g(OperatorMatrix::identity(1, 2), OperatorMatrix(1, 1, 2, 10.0 * ops::sigma_minus().matrix()),
                    Operator::zero(2));
  Eigen::VectorXcd excited = Eigen::VectorXcd::Zero(2);
  excited(0) = 1.0;
  IntegrationOptions opt;
  opt.t_end = 5.0;
  opt.dt = 0.5;
  try {
    integrate_master(g, DensityMatrix::pure(excited), opt);
    FAIL("expected IntegrationDivergedError");
  } catch (const IntegrationDivergedError& e) {
    CHECK(e.time() > 0.0);
    CHECK(e.time() <= 5.0);
  }
  IntegrationOptions bad;
  bad.dt = 0.0;
  CHECK_THROWS_AS(integrate_master(g, DensityMatrix::pure(excited), bad), InvariantError);
}

TEST_CASE("quadrature embedding") {
  SUBCASE("E = 0 is a pure Hamiltonian flow") {
    const SLHTriple g = embed_quadrature(Operator::zero(2), ops::sigma_x());
    CHECK(max_diff(g.S().flat(), eye(2)) == 0.0);
    CHECK(max_abs(g.L().flat()) == 0.0);
    CHECK(max_diff(g.H().matrix(), ops::sigma_x().matrix()) == 0.0);
  }
  SUBCASE("sigma_z gives the dephasing master equation") {
    const SLHTriple g = embed_quadrature(ops::sigma_z(), Operator::zero(2));
    Gen gen(75);
    const Matrix rho = gen.density(2);
    const Matrix sz = ops::sigma_z().matrix();
    CHECK(max_diff(lindblad_schrodinger(g, Operator(rho)).matrix(), sz * rho * sz - rho) <= 1e-15);
  }
  SUBCASE("damping term is E^2 / 2") {
    Matrix e = Matrix::Zero(2, 2);
    e(0, 0) = 1.0;
    e(1, 1) = 2.0;
    const SLHTriple g = embed_quadrature(Operator(e), Operator::zero(2));
    const Matrix l = g.L().flat();
    Matrix half_e2 = Matrix::Zero(2, 2);
    half_e2(0, 0) = 0.5;
    half_e2(1, 1) = 2.0;
    CHECK(max_diff(0.5 * l.adjoint() * l, half_e2) == 0.0);
  }
  SUBCASE("random master equation against the closed form") {
    Gen gen(76);
    for (int trial = 0; trial < 30; ++trial) {
      const Matrix e = gen.hermitian(3), h = gen.hermitian(3), rho = gen.density(3);
      const SLHTriple g = embed_quadrature(Operator(e), Operator(h));
      CHECK(max_diff(lindblad_schrodinger(g, Operator(rho)).matrix(), master_oracle_quadrature(e, h, rho)) <=
            1e-11);
    }
  }
  SUBCASE("non-Hermitian input") {
    CHECK_THROWS_AS(embed_quadrature(ops::sigma_minus(), Operator::zero(2)), InvariantError);
  }
}

TEST_CASE("Poisson embedding") {
  SUBCASE("S = I freezes the dynamics") {
    const SLHTriple g = embed_poisson(Operator::identity(2), 2.0);
    CHECK(max_abs(g.L().flat()) == 0.0);
    CHECK(max_abs(g.H().matrix()) == 0.0);
  }
  SUBCASE("sigma_x kicks") {
    Gen gen(77);
    const Matrix rho = gen.density(2);
    const Matrix sx = ops::sigma_x().matrix();
    const SLHTriple g = embed_poisson(ops::sigma_x(), 1.0);
    CHECK(max_diff(lindblad_schrodinger(g, Operator(rho)).matrix(), sx * rho * sx - rho) <= 1e-15);
  }
  SUBCASE("scalar phase on a one-dimensional space") {
    const Operator s(Matrix::Constant(1, 1, std::polar(1.0, 0.9)));
    const SLHTriple g = embed_poisson(s, 1.7);
    CHECK(std::abs(lindblad_schrodinger(g, Operator::identity(1))(0, 0)) <= 1e-15);
    CHECK(std::abs(g.H()(0, 0).imag()) <= 1e-15);
  }
  SUBCASE("master equation contract on random unitaries") {
    Gen gen(78);
    for (int trial = 0; trial < 30; ++trial) {
      const Matrix u = gen.unitary(3), rho = gen.density(3);
      const double nu = gen.uniform(0.1, 5.0);
      const SLHTriple g = embed_poisson(Operator(u), nu);
      CHECK(validate(g).passed());
      CHECK(max_diff(lindblad_schrodinger(g, Operator(rho)).matrix(), nu * (u * rho * u.adjoint() - rho)) <= 1e-11);
    }
  }
  SUBCASE("invalid input") {
    CHECK_THROWS_AS(embed_poisson(ops::sigma_minus(), 1.0), InvariantError);
    CHECK_THROWS_AS(embed_poisson(ops::sigma_x(), 0.0), InvariantError);
  }
}

TEST_CASE("diffusion embedding") {
  SUBCASE("no drift, no noise is free") {
    const SLHTriple g = embed_diffusion({}, {}, 10);
    CHECK(max_diff(g.S().flat(), eye(10)) == 0.0);
    CHECK(max_abs(g.L().flat()) == 0.0);
    CHECK(max_abs(g.H().matrix()) == 0.0);
  }
  SUBCASE("constant noise: the drift of q is w(q)") {
    const Index n = 20;
    const double lambda = 0.5, sigma = 0.3;
    const SLHTriple g = embed_diffusion({0.0, -lambda}, {sigma}, n);
    const Matrix q = ops::position(n).matrix();
    const Matrix lq = lindblad_heisenberg(g, ops::position(n)).matrix();
    const Index k = n - 3;
    CHECK(max_diff(lq.topLeftCorner(k, k), (-lambda * q).topLeftCorner(k, k)) <= 1e-12);
  }
  SUBCASE("state-dependent noise picks up the Ito correction") {
    // sigma(x) = s1 x: v = w + sigma' sigma / 2 = w + s1^2 x / 2.
    const Index n = 24;
    const double s1 = 0.4;
    const SLHTriple g = embed_diffusion({0.0}, {0.0, s1}, n);
    const Matrix q = ops::position(n).matrix();
    const Matrix lq = lindblad_heisenberg(g, ops::position(n)).matrix();
    const Index k = n - 4;
    CHECK(max_diff(lq.topLeftCorner(k, k), (0.5 * s1 * s1 * q).topLeftCorner(k, k)) <= 1e-12);
  }
  SUBCASE("Ornstein-Uhlenbeck mean") {
    const double lambda = 0.5, sigma = 0.3;
    const Index n = 40;
    const SLHTriple g = embed_diffusion({0.0, -lambda}, {sigma}, n);
    const DensityMatrix rho0 = DensityMatrix::pure(ops::coherent_state(n, 1.0 / std::sqrt(2.0)));
    IntegrationOptions opt;
    opt.t_end = 2.0;
    opt.dt = 1e-3;
    opt.store_every = 100;
    const Trajectory traj = integrate_master(g, rho0, opt, {{"q", ops::position(n)}});
    const auto& q = traj.observables[0].second;
    CHECK(std::abs(q[0] - 1.0) <= 1e-3);
    for (std::size_t k = 0; k < traj.times.size(); ++k) {
      CHECK(std::abs(q[k] - std::exp(-lambda * traj.times[k])) <= 1e-3);
    }
  }
  SUBCASE("invalid input") {
    CHECK_THROWS_AS(embed_diffusion({0.0}, {1.0}, 7), DimensionError);
    CHECK_THROWS_AS(embed_diffusion({0.0, 0.0, 0.0, 1.0}, {1.0}, 10), InvariantError);
    CHECK_THROWS_AS(embed_diffusion({std::nan("")}, {1.0}, 10), InvariantError);
  }
}
