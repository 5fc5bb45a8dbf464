#pragma once

#include "qnet/network.hpp"
#include "qnet/slh.hpp"

#include <string>
#include <vector>

namespace qnet {

inline constexpr Index kMaxFermionModes = 6;

/// The Z2 grading of a system space, given by a parity operator eta with
/// eta^2 = I and eta = eta^dag.
class ParityContext {
 public:
  /// Throws InvariantError if eta is not a Hermitian involution within tol.
  explicit ParityContext(Operator eta, double tol = kDefaultTol);

  const Operator& eta() const noexcept { return eta_; }
  Index dim() const noexcept { return eta_.dim(); }

  /// eta X eta
  Operator conjugate(const Operator& x) const;

 private:
  Operator eta_;
};

enum class Parity { even, odd, mixed };

std::string_view to_string(Parity p);

struct ParityReport {
  Parity parity = Parity::mixed;
  double even_deviation = 0.0;  // max|eta X eta - X|
  double odd_deviation = 0.0;   // max|eta X eta + X|
};

ParityReport parity_of(const Operator& x, const ParityContext& ctx, double tol = kDefaultTol);

struct ParitySplit {
  Operator even;
  Operator odd;
};

/// X_even = (X + eta X eta)/2, X_odd = (X - eta X eta)/2.
ParitySplit split_parity(const Operator& x, const ParityContext& ctx);

struct FermionModes {
  std::vector<Operator> annihilators;  // c_1..c_m on dim 2^m
  Operator parity;                     // global parity eta
};

/// Jordan-Wigner chain: c_a = Z (x) ... (x) Z (x) c (x) I (x) ... (x) I with
/// c = [[0,1],[0,0]] and Z = diag(1,-1); eta = Z (x) ... (x) Z.
FermionModes fermion_modes(Index m, Index max_modes = kMaxFermionModes);

/// An SLH component whose coefficients carry a grading.
struct FermiSLH {
  SLHTriple triple;
  ParityContext ctx;
};

struct ParityEntry {
  std::string coefficient;  // "S[0][1]", "L[0]", "H", "E[0][0]", ...
  Parity required = Parity::even;
  Parity found = Parity::mixed;
  double deviation = 0.0;  // deviation from the required parity
  bool passed = false;
};

struct ParityDiagnostics {
  std::vector<ParityEntry> entries;
  bool passed() const;
  const ParityEntry* first_failure() const;
};

/// S_ij and H even, L_i odd.
ParityDiagnostics validate_fermi(const FermiSLH& g, double tol = kDefaultTol);
/// E_ij and E_00 even, E_i0 odd.
ParityDiagnostics validate_fermi(const StratonovichCoefficients& c, const ParityContext& ctx,
                                 double tol = kDefaultTol);

/// Graded Langevin equation, with eta(X) = eta X eta:
///   gauge_ij     = sum_k S_ki^dag X S_kj - delta_ij X
///   creation_i   = sum_j S_ji^dag (eta(X) L_j - L_j X)
///   annihilation_j = sum_i (L_i^dag eta(X) - X L_i^dag) S_ij
///   drift        = sum_i L_i^dag eta(X) L_i - 1/2 X L^dag L - 1/2 L^dag L X - i[X, H]
LangevinCoefficients fermi_langevin(const FermiSLH& g, const Operator& x);

struct FermiComposition {
  FermiSLH result;
  ParityDiagnostics diagnostics;
};

/// Series product on the shared graded space; the composite is revalidated.
FermiComposition fermi_series(const FermiSLH& g2, const FermiSLH& g1, double tol = kDefaultTol);
FermiComposition fermi_feedback_reduce(const FermiSLH& g, Index r0, Index s0,
                                       double tol = kDefaultTol);

}  // namespace qnet
