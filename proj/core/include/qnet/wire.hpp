#pragma once

#include "qnet/operator.hpp"
#include "qnet/slh.hpp"

#include <functional>
#include <span>
#include <vector>

namespace qnet {

/// Phase picked up by a single quantum crossing a delta-kick of strength
/// epsilon: s = (1 - i eps/2) / (1 + i eps/2).
Complex delta_phase(double epsilon);

/// A single excitation on a 1-D wire, sampled on the nodes
/// x_k = -extent + (k + 1/2) h, k = 0..2K-1, so the origin sits midway
/// between nodes K-1 and K. Free motion is translation toward -x at unit
/// speed; the kick at the origin multiplies the crossing amplitude by
/// delta_phase(epsilon).
class WireState {
 public:
  /// `extent` must be a positive multiple of `spacing`.
  WireState(double extent, double spacing, double epsilon, std::vector<Complex> psi);

  /// Samples `profile` on the grid.
  static WireState sample(double extent, double spacing, double epsilon,
                          const std::function<Complex(double)>& profile);

  double extent() const noexcept { return extent_; }
  double spacing() const noexcept { return spacing_; }
  double epsilon() const noexcept { return epsilon_; }
  std::size_t size() const noexcept { return psi_.size(); }
  /// Index of the first node right of the origin.
  std::size_t origin_index() const noexcept { return psi_.size() / 2; }
  double position(std::size_t k) const;

  std::span<const Complex> psi() const noexcept { return psi_; }
  /// h-weighted squared norm.
  double norm_squared() const;

 private:
  friend WireState propagate_wavepacket(const WireState& state, double duration,
                                        double support_tol);

  double extent_;
  double spacing_;
  double epsilon_;
  std::vector<Complex> psi_;
};

/// Exact-shift propagation for `duration` (a multiple of the spacing): one
/// node per step toward -x, with the amplitude crossing the origin
/// multiplied by delta_phase(epsilon). Throws DomainExitError when
/// amplitude above `support_tol` would leave through the left boundary.
WireState propagate_wavepacket(const WireState& state, double duration,
                               double support_tol = 1e-12);

/// A passive linear component: internal modes a (m of them) with
/// L = C a, H = a^dag Omega a and constant scattering S (n x n).
struct LinearPassive {
  Matrix S;      // n x n, unitary
  Matrix C;      // n x m
  Matrix Omega;  // m x m, Hermitian

  Index channels() const noexcept { return S.rows(); }
  Index modes() const noexcept { return C.cols(); }
};

/// Shape, unitarity of S and Hermiticity of Omega; throws InvariantError or
/// DimensionError.
void validate(const LinearPassive& c, double tol = kDefaultTol);

/// Cascade c1 -> c2 at the mode level: modes (a1, a2), S = S2 S1,
/// C = [S2 C1, C2], Omega = [[Omega1, M^dag/(-2i)], [M/(2i), Omega2]] with
/// M = C2^dag S2 C1 -- the series product restricted to linear components.
LinearPassive series(const LinearPassive& c2, const LinearPassive& c1);

/// Operator-level realization on a Fock space truncated to `levels` per
/// mode (modes tensored in order, first mode slowest): S_ij = S_ij I,
/// L_i = sum_k C_ik a_k, H = sum_kl Omega_kl a_k^dag a_l.
SLHTriple to_slh(const LinearPassive& c, Index levels);

inline constexpr double kPoleConditionLimit = 1e10;

struct TransferPoint {
  double omega = 0.0;
  Matrix Xi;  // n x n
};

/// Steady-state frequency response for inputs ~ e^{-i omega t}:
///   Xi(omega) = S - C (i(Omega - omega) + C^dag C / 2)^-1 C^dag S.
/// Throws PoleError when the resolvent is singular at omega.
TransferPoint transfer_function(const LinearPassive& c, double omega);

/// Inclusive uniform grid of `steps` points (steps >= 2, or 1 for a single point).
std::vector<double> frequency_grid(double omega_min, double omega_max, std::size_t steps);

struct CascadeReport {
  double max_deviation = 0.0;  // max over grid of max|Xi_series - Xi2 Xi1|
  double worst_omega = 0.0;
  bool passed = false;
};

inline constexpr double kCascadeThreshold = 1e-8;

/// Compares the transfer function of series(c2, c1) with the product of the
/// individual transfer functions on `omega_grid`.
CascadeReport cascade_transfer(const LinearPassive& c1, const LinearPassive& c2,
                               std::span<const double> omega_grid,
                               double threshold = kCascadeThreshold);

}  // namespace qnet
