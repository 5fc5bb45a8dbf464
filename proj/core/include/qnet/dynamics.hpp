#pragma once

#include "qnet/slh.hpp"

#include <string>
#include <utility>
#include <vector>

namespace qnet {

/// A density matrix: Hermitian, unit trace, positive semidefinite.
class DensityMatrix {
 public:
  /// Throws InvariantError if any of the three invariants fails within tol.
  explicit DensityMatrix(Operator rho, double tol = 1e-9);

  /// |psi><psi| / <psi|psi>.
  static DensityMatrix pure(const Eigen::VectorXcd& psi);

  const Operator& op() const noexcept { return rho_; }
  const Matrix& matrix() const noexcept { return rho_.matrix(); }
  Index dim() const noexcept { return rho_.dim(); }

 private:
  Operator rho_;
};

/// Tr(rho X).
Complex expectation(const DensityMatrix& rho, const Operator& x);

struct NamedObservable {
  std::string name;
  Operator op;
};

struct IntegrationOptions {
  double t_end = 1.0;
  double dt = 1e-3;
  /// Keep every `store_every`-th step (the initial and final states are always kept).
  std::size_t store_every = 1;
  /// Thresholds beyond which integration is declared diverged.
  double trace_tol = 1e-9;
  double hermiticity_tol = 1e-9;
  double positivity_floor = -1e-7;
};

struct Trajectory {
  std::vector<double> times;
  std::vector<DensityMatrix> states;
  std::vector<std::pair<std::string, std::vector<Complex>>> observables;
  /// Smallest eigenvalue seen across stored states (positivity drift).
  double min_eigenvalue = 0.0;
};

/// Fixed-step classical fourth-order Runge-Kutta integration of
/// d rho/dt = L* rho. The step count is round(t_end/dt); the step is then
/// adjusted to land exactly on t_end. Throws IntegrationDivergedError when
/// trace, Hermiticity or positivity leave their thresholds.
Trajectory integrate_master(const SLHTriple& g, const DensityMatrix& rho0,
                            const IntegrationOptions& options,
                            const std::vector<NamedObservable>& observables = {});

/// Wiener-noise embedding: (I, -iE, H). Its master equation is
/// E rho E - 1/2{E^2, rho} - i[H, rho].
SLHTriple embed_quadrature(const Operator& e, const Operator& h, double tol = kDefaultTol);

/// Poisson-kick embedding with rate nu: (S, sqrt(nu)(S - I), (i nu/2)(S - S^dag)),
/// whose master equation is nu(S rho S^dag - rho).
SLHTriple embed_poisson(const Operator& s, double nu, double tol = kDefaultTol);

inline constexpr Index kMinDiffusionLevels = 8;

/// Polynomial coefficients c0 + c1 x + c2 x^2 (degree <= 2).
using Polynomial = std::vector<double>;

/// Classical diffusion dx = v dt + sigma dW on an N-level truncated
/// oscillator: H = (p w(q) + w(q) p)/2, E = (p sigma(q) + sigma(q) p)/2,
/// embedded with `embed_quadrature`. The Heisenberg drift of q then carries
/// the Ito correction v = w + sigma' sigma / 2.
SLHTriple embed_diffusion(const Polynomial& w, const Polynomial& sigma, Index levels);

}  // namespace qnet
