#pragma once

#include "qnet/operator.hpp"

/// Frequently used concrete operators.
///
/// Qubit convention: basis index 0 is the excited state |e>, index 1 the
/// ground state |g>, so sigma_z = |e><e| - |g><g| = diag(1, -1) and
/// sigma_minus = |g><e|.
namespace qnet::ops {

Operator sigma_x();
Operator sigma_y();
Operator sigma_z();
Operator sigma_minus();
Operator sigma_plus();

/// |row><col| on a `dim`-dimensional space.
Operator ket_bra(Index dim, Index row, Index col);

/// Truncated oscillator: a|k> = sqrt(k)|k-1>, k = 0..levels-1.
Operator annihilation(Index levels);
Operator creation(Index levels);
Operator number(Index levels);
/// q = (a + a^dag)/sqrt(2), p = i(a^dag - a)/sqrt(2).
Operator position(Index levels);
Operator momentum(Index levels);

/// Truncated coherent state |alpha> (renormalized after truncation).
Eigen::VectorXcd coherent_state(Index levels, Complex alpha);

}  // namespace qnet::ops
