#include "qnet/wire.hpp"

#include "qnet/errors.hpp"
#include "qnet/standard_ops.hpp"

#include <cmath>
#include <sstream>

namespace qnet {

namespace {

constexpr Complex kI{0.0, 1.0};

// Integer multiple of `unit`, or -1 when `value` is not one (relative 1e-9).
long long multiple_of(double value, double unit) {
  const double ratio = value / unit;
  const double rounded = std::round(ratio);
  if (std::abs(ratio - rounded) > 1e-9 * std::max(1.0, std::abs(ratio))) return -1;
  return static_cast<long long>(rounded);
}

}  // namespace

Complex delta_phase(double epsilon) {
  const Complex half{0.0, 0.5 * epsilon};
  return (1.0 - half) / (1.0 + half);
}

WireState::WireState(double extent, double spacing, double epsilon, std::vector<Complex> psi)
    : extent_(extent), spacing_(spacing), epsilon_(epsilon), psi_(std::move(psi)) {
  if (!(spacing > 0.0) || !(extent > 0.0)) {
    throw InvariantError("wire grid needs positive extent and spacing");
  }
  const long long half_nodes = multiple_of(extent, spacing);
  if (half_nodes <= 0) throw InvariantError("wire extent must be a multiple of the spacing");
  if (psi_.size() != static_cast<std::size_t>(2 * half_nodes)) {
    std::ostringstream os;
    os << "wire amplitude has " << psi_.size() << " nodes, grid needs " << 2 * half_nodes;
    throw DimensionError(os.str());
  }
  if (!std::isfinite(epsilon)) throw InvariantError("kick strength must be finite");
}

WireState WireState::sample(double extent, double spacing, double epsilon,
                            const std::function<Complex(double)>& profile) {
  const long long half_nodes = multiple_of(extent, spacing);
  if (half_nodes <= 0) throw InvariantError("wire extent must be a multiple of the spacing");
  std::vector<Complex> psi(static_cast<std::size_t>(2 * half_nodes));
  for (std::size_t k = 0; k < psi.size(); ++k) {
    psi[k] = profile(-extent + (static_cast<double>(k) + 0.5) * spacing);
  }
  return WireState(extent, spacing, epsilon, std::move(psi));
}

double WireState::position(std::size_t k) const {
  return -extent_ + (static_cast<double>(k) + 0.5) * spacing_;
}

double WireState::norm_squared() const {
  double sum = 0.0;
  for (const auto& a : psi_) sum += std::norm(a);
  return sum * spacing_;
}

WireState propagate_wavepacket(const WireState& state, double duration, double support_tol) {
  const long long steps = multiple_of(duration, state.spacing());
  if (steps < 0) throw InvariantError("propagation time must be a non-negative multiple of h");
  const auto shift = static_cast<std::size_t>(steps);
  const std::size_t n = state.size();
  const std::size_t origin = state.origin_index();
  const Complex s = delta_phase(state.epsilon());

  // Node j leaves through the left edge if j < shift.
  for (std::size_t j = 0; j < std::min(shift, n); ++j) {
    if (std::abs(state.psi_[j]) > support_tol) {
      std::ostringstream os;
      os << "wave packet leaves the grid (amplitude " << std::abs(state.psi_[j]) << " at x = "
         << state.position(j) << ")";
      throw DomainExitError(os.str());
    }
  }

  std::vector<Complex> out(n, Complex(0.0, 0.0));
  for (std::size_t k = 0; k + shift < n; ++k) {
    const std::size_t from = k + shift;
    const bool crosses = k < origin && from >= origin;
    out[k] = crosses ? s * state.psi_[from] : state.psi_[from];
  }
  return WireState(state.extent(), state.spacing(), state.epsilon(), std::move(out));
}

void validate(const LinearPassive& c, double tol) {
  const Index n = c.S.rows();
  const Index m = c.C.cols();
  if (n == 0 || c.S.cols() != n || c.C.rows() != n || c.Omega.rows() != m ||
      c.Omega.cols() != m) {
    throw DimensionError("linear component: S must be n x n, C n x m and Omega m x m");
  }
  if (!c.S.allFinite() || !c.C.allFinite() || !c.Omega.allFinite()) {
    throw InvariantError("linear component has non-finite entries");
  }
  const double sdev = max_abs(c.S.adjoint() * c.S - Matrix::Identity(n, n));
  if (sdev > tol) {
    std::ostringstream os;
    os << "S not unitary (deviation " << sdev << ")";
    throw InvariantError(os.str());
  }
  if (m > 0) {
    const double hdev = max_abs(c.Omega - c.Omega.adjoint());
    if (hdev > tol) {
      std::ostringstream os;
      os << "Omega not hermitian (deviation " << hdev << ")";
      throw InvariantError(os.str());
    }
  }
}

LinearPassive series(const LinearPassive& c2, const LinearPassive& c1) {
  if (c1.channels() != c2.channels()) {
    throw DimensionError("linear series: channel counts differ");
  }
  const Index n = c1.channels();
  const Index m1 = c1.modes();
  const Index m2 = c2.modes();
  LinearPassive out;
  out.S = c2.S * c1.S;
  out.C.resize(n, m1 + m2);
  out.C.leftCols(m1) = c2.S * c1.C;
  out.C.rightCols(m2) = c2.C;
  out.Omega = Matrix::Zero(m1 + m2, m1 + m2);
  out.Omega.topLeftCorner(m1, m1) = c1.Omega;
  out.Omega.bottomRightCorner(m2, m2) = c2.Omega;
  if (m1 > 0 && m2 > 0) {
    const Matrix cross = (c2.C.adjoint() * c2.S * c1.C) / (2.0 * kI);
    out.Omega.bottomLeftCorner(m2, m1) = cross;
    out.Omega.topRightCorner(m1, m2) = cross.adjoint();
  }
  return out;
}

SLHTriple to_slh(const LinearPassive& c, Index levels) {
  validate(c);
  const Index n = c.channels();
  const Index m = c.modes();
  if (levels < 2) throw DimensionError("to_slh: need at least two levels per mode");

  std::vector<Matrix> a;
  Index d = 1;
  for (Index k = 0; k < m; ++k) d *= levels;
  if (static_cast<std::size_t>(d) > kMaxDimension) {
    throw DimensionLimitError("to_slh: truncated Fock space exceeds the dimension limit");
  }
  for (Index k = 0; k < m; ++k) {
    Operator op = k == 0 ? ops::annihilation(levels) : Operator::identity(levels);
    for (Index j = 1; j < m; ++j) {
      op = tensor(op, j == k ? ops::annihilation(levels) : Operator::identity(levels));
    }
    a.push_back(op.matrix());
  }

  Matrix s = Matrix::Zero(n * d, n * d);
  Matrix l = Matrix::Zero(n * d, d);
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < n; ++j) {
      s.block(i * d, j * d, d, d) = c.S(i, j) * Matrix::Identity(d, d);
    }
    for (Index k = 0; k < m; ++k) l.middleRows(i * d, d) += c.C(i, k) * a[static_cast<std::size_t>(k)];
  }
  Matrix h = Matrix::Zero(d, d);
  for (Index k = 0; k < m; ++k) {
    for (Index q = 0; q < m; ++q) {
      h += c.Omega(k, q) * (a[static_cast<std::size_t>(k)].adjoint() * a[static_cast<std::size_t>(q)]);
    }
  }
  return SLHTriple(OperatorMatrix(n, n, d, std::move(s)), OperatorMatrix(n, 1, d, std::move(l)),
                   Operator(0.5 * (h + h.adjoint())));
}

TransferPoint transfer_function(const LinearPassive& c, double omega) {
  validate(c);
  const Index m = c.modes();
  if (m == 0) return TransferPoint{omega, c.S};
  const Matrix resolvent = kI * (c.Omega - omega * Matrix::Identity(m, m)) +
                           0.5 * (c.C.adjoint() * c.C);
  const Inverse inv = conditioned_inverse(resolvent);
  if (!(inv.condition <= kPoleConditionLimit)) {
    std::ostringstream os;
    os << "transfer function has a pole at omega = " << omega << " (condition " << inv.condition
       << ")";
    throw PoleError(os.str());
  }
  return TransferPoint{omega, c.S - c.C * inv.value * c.C.adjoint() * c.S};
}

std::vector<double> frequency_grid(double omega_min, double omega_max, std::size_t steps) {
  if (steps == 0 || !(omega_max >= omega_min)) {
    throw InvariantError("frequency grid needs steps >= 1 and omega_max >= omega_min");
  }
  if (steps == 1) return {omega_min};
  std::vector<double> grid(steps);
  const double step = (omega_max - omega_min) / static_cast<double>(steps - 1);
  for (std::size_t k = 0; k < steps; ++k) grid[k] = omega_min + static_cast<double>(k) * step;
  grid.back() = omega_max;
  return grid;
}

CascadeReport cascade_transfer(const LinearPassive& c1, const LinearPassive& c2,
                               std::span<const double> omega_grid, double threshold) {
  const LinearPassive cascaded = series(c2, c1);
  CascadeReport report;
  for (double omega : omega_grid) {
    const Matrix composite = transfer_function(cascaded, omega).Xi;
    const Matrix product = transfer_function(c2, omega).Xi * transfer_function(c1, omega).Xi;
    const double dev = max_abs(composite - product);
    if (dev >= report.max_deviation) {
      report.max_deviation = dev;
      report.worst_omega = omega;
    }
  }
  report.passed = report.max_deviation <= threshold;
  return report;
}

}  // namespace qnet
