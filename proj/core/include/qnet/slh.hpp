#pragma once

#include "qnet/operator.hpp"

#include <string>
#include <vector>

namespace qnet {

/// Condition-number ceiling for the operator-matrix inverses in the
/// Stratonovich <-> Ito conversions.
inline constexpr double kTransformConditionLimit = 1e12;

/// An n-channel open quantum component in Ito form.
///
/// S is an n x n operator matrix, L an n x 1 operator column and H the
/// system Hamiltonian, all acting on one d-dimensional system space. The
/// constructor checks shapes only; `validate` checks unitarity of S and
/// Hermiticity of H.
class SLHTriple {
 public:
  SLHTriple(OperatorMatrix S, OperatorMatrix L, Operator H);

  /// (I_n, 0, 0) on a `dim`-dimensional space.
  static SLHTriple identity(Index n, Index dim);

  Index channels() const noexcept { return S_.rows(); }
  Index dim() const noexcept { return H_.dim(); }

  const OperatorMatrix& S() const noexcept { return S_; }
  const OperatorMatrix& L() const noexcept { return L_; }
  const Operator& H() const noexcept { return H_; }

 private:
  OperatorMatrix S_;
  OperatorMatrix L_;
  Operator H_;
};

/// One named invariant check.
struct InvariantCheck {
  std::string name;  // "S", "H", "E", ...
  PropertyReport report;
};

struct Validation {
  std::vector<InvariantCheck> checks;
  bool passed() const;
  /// First failing check, or nullptr.
  const InvariantCheck* first_failure() const;
};

/// Unitarity of S is checked in both orders (S^dag S and S S^dag).
Validation validate(const SLHTriple& g, double tol = kDefaultTol);
/// Throws InvariantError naming the first failing block.
void require_valid(const SLHTriple& g, double tol = kDefaultTol);

/// Hamiltonian-side (midpoint-rule) coefficients.
///
/// E is the n x n channel block, `Evec` the column of E_i0 and E00 the time
/// block. E_0j is never stored: it is E_j0^dag by construction.
struct StratonovichCoefficients {
  OperatorMatrix E;
  OperatorMatrix Evec;
  Operator E00;

  Index channels() const noexcept { return E.rows(); }
  Index dim() const noexcept { return E00.dim(); }
};

Validation validate(const StratonovichCoefficients& c, double tol = kDefaultTol);

/// Cayley transform: S = (1 - iE/2)(1 + iE/2)^-1, L = i(1 + iE/2)^-1 Evec,
/// H = E00 + 1/2 Evec^dag Im[(1 + iE/2)^-1] Evec with Im(A) = (A - A^dag)/2i.
///
/// Throws InvariantError if `c` violates its Hermiticity invariants and
/// SingularTransformError if 1 + iE/2 is ill-conditioned.
SLHTriple stratonovich_to_ito(const StratonovichCoefficients& c, double tol = kDefaultTol);

/// Inverse of `stratonovich_to_ito`. E = 2i(S - 1)(1 + S)^-1, then Evec and
/// E00 are recovered from the L and H relations. Throws
/// SingularTransformError when S has an eigenvalue at -1.
StratonovichCoefficients ito_to_stratonovich(const SLHTriple& g);

/// Coefficients of the Ito differentials dt, dB_j, dB_i^dag, dLambda_ij in
/// dU = (...) U, packed as an (n+1) x (n+1) operator matrix whose index 0 is
/// the time slot and indices 1..n are the channels:
///
///   G_00 = -(1/2 sum_i L_i^dag L_i + iH)   coefficient of dt
///   G_0j = -sum_i L_i^dag S_ij             coefficient of dB_j
///   G_i0 = L_i                             coefficient of dB_i^dag
///   G_ij = S_ij - delta_ij                 coefficient of dLambda_ij
///
/// With this packing the quantum Ito table reads dX_ab dX_cd = P_bc dX_ad,
/// P = diag(0, 1, ..., 1).
class GeneratorMatrix {
 public:
  explicit GeneratorMatrix(OperatorMatrix blocks);

  Index channels() const noexcept { return blocks_.rows() - 1; }
  Index dim() const noexcept { return blocks_.dim(); }

  Operator time() const { return blocks_.block(0, 0); }
  Operator annihilation(Index j) const { return blocks_.block(0, j + 1); }
  Operator creation(Index i) const { return blocks_.block(i + 1, 0); }
  Operator gauge(Index i, Index j) const { return blocks_.block(i + 1, j + 1); }

  const OperatorMatrix& blocks() const noexcept { return blocks_; }

 private:
  OperatorMatrix blocks_;
};

GeneratorMatrix generator_matrix(const SLHTriple& g);

/// Product of two differentials under the Ito table:
///   dB_i dB_j^dag = delta_ij dt,       dB_i dLambda_jk = delta_ij dB_k,
///   dLambda_ij dB_k^dag = delta_jk dB_i^dag,
///   dLambda_ij dLambda_kl = delta_jk dLambda_il, everything else zero.
GeneratorMatrix ito_product(const GeneratorMatrix& a, const GeneratorMatrix& b);

/// Coefficients of (dU)^dag = U^dag (...): conjugate transpose of the blocks,
/// since dX_ab^dag = dX_ba.
GeneratorMatrix adjoint(const GeneratorMatrix& g);

/// max-abs of G + G^dag + ito_product(G^dag, G); zero iff dU describes a
/// unitary evolution.
double unitarity_residual(const GeneratorMatrix& g);

/// Heisenberg-picture Lindblad generator
///   LX = 1/2 sum L_i^dag [X, L_i] + 1/2 sum [L_i^dag, X] L_i - i[X, H].
Operator lindblad_heisenberg(const SLHTriple& g, const Operator& x);

/// Schrodinger-picture (predual) generator
///   L*rho = sum L_i rho L_i^dag - 1/2 {L_i^dag L_i, rho} - i[H, rho].
Operator lindblad_schrodinger(const SLHTriple& g, const Operator& rho);

struct LangevinCoefficients {
  OperatorMatrix gauge;         // coefficient of dLambda_ij
  OperatorMatrix creation;      // coefficient of dB_i^dag
  OperatorMatrix annihilation;  // coefficient of dB_j
  Operator drift;               // coefficient of dt
};

/// Bose Langevin equation for dj_t(X).
LangevinCoefficients langevin_coefficients(const SLHTriple& g, const Operator& x);

/// Input-output relation dB_out = j_t(S) dB + j_t(L) dt.
struct IOCoefficients {
  OperatorMatrix S;
  OperatorMatrix L;
};

IOCoefficients io_coefficients(const SLHTriple& g);

}  // namespace qnet
