#include "qnet/dynamics.hpp"

#include "qnet/errors.hpp"
#include "qnet/standard_ops.hpp"

#include <cmath>
#include <sstream>

namespace qnet {

namespace {

constexpr Complex kI{0.0, 1.0};

// Pre-extracted generator pieces so the inner loop avoids re-slicing L.
struct MasterGenerator {
  explicit MasterGenerator(const SLHTriple& g) : h(g.H().matrix()) {
    const Index d = g.dim();
    Matrix ldl = Matrix::Zero(d, d);
    for (Index i = 0; i < g.channels(); ++i) {
      Matrix li = g.L().flat().middleRows(i * d, d);
      if (max_abs(li) == 0.0) continue;
      ldl += li.adjoint() * li;
      ls.push_back(std::move(li));
    }
    // L*rho = sum L rho L^dag + K rho + rho K^dag with K = -iH - L^dag L / 2.
    k = -kI * h - 0.5 * ldl;
  }

  Matrix apply(const Matrix& rho) const {
    Matrix kr = k * rho;
    Matrix out = kr + kr.adjoint();
    for (const auto& l : ls) out.noalias() += l * rho * l.adjoint();
    return out;
  }

  Matrix h;
  Matrix k;
  std::vector<Matrix> ls;
};

double min_eigenvalue(const Matrix& rho) {
  Eigen::SelfAdjointEigenSolver<Matrix> eig(0.5 * (rho + rho.adjoint()), Eigen::EigenvaluesOnly);
  return eig.eigenvalues().minCoeff();
}

Matrix polynomial_of(const Polynomial& coeffs, const Matrix& x) {
  const Index n = x.rows();
  Matrix out = Matrix::Zero(n, n);
  Matrix power = Matrix::Identity(n, n);
  for (std::size_t k = 0; k < coeffs.size(); ++k) {
    if (k > 0) power = power * x;
    out += coeffs[k] * power;
  }
  return out;
}

}  // namespace

DensityMatrix::DensityMatrix(Operator rho, double tol) : rho_(std::move(rho)) {
  for (Property p : {Property::hermitian, Property::unit_trace, Property::positive_semidefinite}) {
    const PropertyReport r = check(rho_, p, tol);
    if (!r.passed) {
      std::ostringstream os;
      os << "density matrix not " << to_string(p) << " (deviation " << r.deviation << ")";
      throw InvariantError(os.str());
    }
  }
}

DensityMatrix DensityMatrix::pure(const Eigen::VectorXcd& psi) {
  const double n2 = psi.squaredNorm();
  if (!(n2 > 0.0)) throw InvariantError("pure state vector has zero norm");
  return DensityMatrix(Operator(psi * psi.adjoint() / n2));
}

Complex expectation(const DensityMatrix& rho, const Operator& x) {
  if (x.dim() != rho.dim()) throw DimensionError("expectation: dimension mismatch");
  // Tr(rho X) = sum_ij rho_ij X_ji
  return (rho.matrix().transpose().cwiseProduct(x.matrix())).sum();
}

Trajectory integrate_master(const SLHTriple& g, const DensityMatrix& rho0,
                            const IntegrationOptions& options,
                            const std::vector<NamedObservable>& observables) {
  if (rho0.dim() != g.dim()) throw DimensionError("integrate_master: state dimension mismatch");
  if (!(options.dt > 0.0) || !(options.t_end >= 0.0) || options.store_every == 0) {
    throw InvariantError("integrate_master: need dt > 0, t_end >= 0, store_every >= 1");
  }
  for (const auto& o : observables) {
    if (o.op.dim() != g.dim()) {
      throw DimensionError("observable '" + o.name + "' has the wrong dimension");
    }
  }

  const MasterGenerator gen(g);
  const auto steps =
      static_cast<std::size_t>(std::max<long long>(0, std::llround(options.t_end / options.dt)));
  const double dt = steps == 0 ? 0.0 : options.t_end / static_cast<double>(steps);

  Trajectory traj;
  for (const auto& o : observables) traj.observables.emplace_back(o.name, std::vector<Complex>{});
  traj.min_eigenvalue = min_eigenvalue(rho0.matrix());

  auto store = [&](double t, const Matrix& rho) {
    const double lam = min_eigenvalue(rho);
    traj.min_eigenvalue = std::min(traj.min_eigenvalue, lam);
    if (lam < options.positivity_floor) {
      std::ostringstream os;
      os << "positivity lost at t = " << t << " (min eigenvalue " << lam << ")";
      throw IntegrationDivergedError(os.str(), t);
    }
    traj.times.push_back(t);
    traj.states.emplace_back(Operator(rho), std::max(options.trace_tol, -options.positivity_floor));
    for (std::size_t k = 0; k < observables.size(); ++k) {
      traj.observables[k].second.push_back(
          (rho.transpose().cwiseProduct(observables[k].op.matrix())).sum());
    }
  };

  Matrix rho = rho0.matrix();
  store(0.0, rho);
  for (std::size_t step = 1; step <= steps; ++step) {
    const Matrix k1 = gen.apply(rho);
    const Matrix k2 = gen.apply(rho + 0.5 * dt * k1);
    const Matrix k3 = gen.apply(rho + 0.5 * dt * k2);
    const Matrix k4 = gen.apply(rho + dt * k3);
    rho += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);

    const double t = static_cast<double>(step) * dt;
    const double trace_dev = std::abs(rho.trace() - Complex(1.0, 0.0));
    const double herm_dev = max_abs(rho - rho.adjoint());
    if (!rho.allFinite() || trace_dev > options.trace_tol || herm_dev > options.hermiticity_tol) {
      std::ostringstream os;
      os << "integration diverged at t = " << t << " (trace deviation " << trace_dev
         << ", hermiticity deviation " << herm_dev << ")";
      throw IntegrationDivergedError(os.str(), t);
    }
    if (step % options.store_every == 0 || step == steps) store(t, rho);
  }
  return traj;
}

SLHTriple embed_quadrature(const Operator& e, const Operator& h, double tol) {
  if (e.dim() != h.dim()) throw DimensionError("embed_quadrature: E and H dimensions differ");
  for (const auto& [name, op] : {std::pair<const char*, const Operator*>{"E", &e}, {"H", &h}}) {
    const PropertyReport r = check(*op, Property::hermitian, tol);
    if (!r.passed) {
      std::ostringstream os;
      os << "embed_quadrature: " << name << " not hermitian (deviation " << r.deviation << ")";
      throw InvariantError(os.str());
    }
  }
  const Index d = e.dim();
  return SLHTriple(OperatorMatrix::identity(1, d), OperatorMatrix(1, 1, d, -kI * e.matrix()), h);
}

SLHTriple embed_poisson(const Operator& s, double nu, double tol) {
  if (!(nu > 0.0) || !std::isfinite(nu)) throw InvariantError("embed_poisson: rate must be positive");
  const PropertyReport r = check(s, Property::unitary, tol);
  if (!r.passed) {
    std::ostringstream os;
    os << "embed_poisson: S not unitary (deviation " << r.deviation << ")";
    throw InvariantError(os.str());
  }
  const Index d = s.dim();
  const Matrix& sm = s.matrix();
  Matrix l = std::sqrt(nu) * (sm - Matrix::Identity(d, d));
  Matrix h = (0.5 * nu) * kI * (sm - sm.adjoint());
  return SLHTriple(OperatorMatrix(1, 1, d, sm), OperatorMatrix(1, 1, d, std::move(l)),
                   Operator(std::move(h)));
}

SLHTriple embed_diffusion(const Polynomial& w, const Polynomial& sigma, Index levels) {
  if (levels < kMinDiffusionLevels) {
    std::ostringstream os;
    os << "embed_diffusion: truncation " << levels << " below minimum " << kMinDiffusionLevels;
    throw DimensionError(os.str());
  }
  if (w.size() > 3 || sigma.size() > 3) {
    throw InvariantError("embed_diffusion: drift and noise polynomials must have degree <= 2");
  }
  for (double c : w) {
    if (!std::isfinite(c)) throw InvariantError("embed_diffusion: non-finite drift coefficient");
  }
  for (double c : sigma) {
    if (!std::isfinite(c)) throw InvariantError("embed_diffusion: non-finite noise coefficient");
  }
  const Matrix q = ops::position(levels).matrix();
  const Matrix p = ops::momentum(levels).matrix();
  const Matrix wq = polynomial_of(w, q);
  const Matrix sq = polynomial_of(sigma, q);
  Matrix h = 0.5 * (p * wq + wq * p);
  Matrix e = 0.5 * (p * sq + sq * p);
  return embed_quadrature(Operator(0.5 * (e + e.adjoint())), Operator(0.5 * (h + h.adjoint())));
}

}  // namespace qnet
