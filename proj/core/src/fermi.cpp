#include "qnet/fermi.hpp"

#include "qnet/errors.hpp"

#include <sstream>

namespace qnet {

namespace {

constexpr Complex kI{0.0, 1.0};

std::string indexed(const char* name, Index i) {
  std::ostringstream os;
  os << name << "[" << i << "]";
  return os.str();
}

std::string indexed(const char* name, Index i, Index j) {
  std::ostringstream os;
  os << name << "[" << i << "][" << j << "]";
  return os.str();
}

ParityEntry entry(std::string name, const Operator& x, Parity required, const ParityContext& ctx,
                  double tol) {
  const ParityReport r = parity_of(x, ctx, tol);
  const double dev = required == Parity::even ? r.even_deviation : r.odd_deviation;
  return ParityEntry{std::move(name), required, r.parity, dev, dev <= tol};
}

void require_dim(const ParityContext& ctx, const Operator& x, const char* what) {
  if (x.dim() != ctx.dim()) {
    throw DimensionError(std::string(what) + ": operator and parity dimensions differ");
  }
}

}  // namespace

ParityContext::ParityContext(Operator eta, double tol) : eta_(std::move(eta)) {
  const Matrix& e = eta_.matrix();
  const double herm = max_abs(e - e.adjoint());
  const double invol = max_abs(e * e - Matrix::Identity(e.rows(), e.cols()));
  if (herm > tol || invol > tol) {
    std::ostringstream os;
    os << "eta is not a Hermitian involution (hermitian deviation " << herm
       << ", eta^2 - I deviation " << invol << ")";
    throw InvariantError(os.str());
  }
}

Operator ParityContext::conjugate(const Operator& x) const {
  require_dim(*this, x, "parity conjugation");
  return Operator(eta_.matrix() * x.matrix() * eta_.matrix());
}

std::string_view to_string(Parity p) {
  switch (p) {
    case Parity::even: return "even";
    case Parity::odd: return "odd";
    case Parity::mixed: return "mixed";
  }
  return "unknown";
}

ParityReport parity_of(const Operator& x, const ParityContext& ctx, double tol) {
  const Matrix c = ctx.conjugate(x).matrix();
  ParityReport r;
  r.even_deviation = max_abs(c - x.matrix());
  r.odd_deviation = max_abs(c + x.matrix());
  if (r.even_deviation <= tol) r.parity = Parity::even;
  else if (r.odd_deviation <= tol) r.parity = Parity::odd;
  else r.parity = Parity::mixed;
  return r;
}

ParitySplit split_parity(const Operator& x, const ParityContext& ctx) {
  const Matrix c = ctx.conjugate(x).matrix();
  Matrix even = 0.5 * (x.matrix() + c);
  // Computed as the remainder so that even + odd reproduces X exactly.
  Matrix odd = x.matrix() - even;
  return ParitySplit{Operator(std::move(even)), Operator(std::move(odd))};
}

FermionModes fermion_modes(Index m, Index max_modes) {
  if (m < 1 || m > max_modes) {
    std::ostringstream os;
    os << "fermion_modes: mode count " << m << " outside [1, " << max_modes << "]";
    throw DimensionLimitError(os.str());
  }
  Matrix c(2, 2);
  c << 0.0, 1.0, 0.0, 0.0;
  const Operator lower(c);
  const Operator z(Matrix(Eigen::Vector2cd(1.0, -1.0).asDiagonal()));
  const Operator id2 = Operator::identity(2);

  std::vector<Operator> annihilators;
  for (Index a = 0; a < m; ++a) {
    Operator op = a == 0 ? lower : z;
    for (Index k = 1; k < m; ++k) op = tensor(op, k < a ? z : (k == a ? lower : id2));
    annihilators.push_back(std::move(op));
  }
  Operator eta = z;
  for (Index k = 1; k < m; ++k) eta = tensor(eta, z);
  return FermionModes{std::move(annihilators), std::move(eta)};
}

bool ParityDiagnostics::passed() const { return first_failure() == nullptr; }

const ParityEntry* ParityDiagnostics::first_failure() const {
  for (const auto& e : entries) {
    if (!e.passed) return &e;
  }
  return nullptr;
}

ParityDiagnostics validate_fermi(const FermiSLH& g, double tol) {
  const SLHTriple& t = g.triple;
  if (t.dim() != g.ctx.dim()) throw DimensionError("validate_fermi: eta dimension mismatch");
  ParityDiagnostics d;
  for (Index i = 0; i < t.channels(); ++i) {
    for (Index j = 0; j < t.channels(); ++j) {
      d.entries.push_back(entry(indexed("S", i, j), t.S().block(i, j), Parity::even, g.ctx, tol));
    }
  }
  for (Index i = 0; i < t.channels(); ++i) {
    d.entries.push_back(entry(indexed("L", i), t.L()[i], Parity::odd, g.ctx, tol));
  }
  d.entries.push_back(entry("H", t.H(), Parity::even, g.ctx, tol));
  return d;
}

ParityDiagnostics validate_fermi(const StratonovichCoefficients& c, const ParityContext& ctx,
                                 double tol) {
  if (c.dim() != ctx.dim()) throw DimensionError("validate_fermi: eta dimension mismatch");
  ParityDiagnostics d;
  for (Index i = 0; i < c.channels(); ++i) {
    for (Index j = 0; j < c.channels(); ++j) {
      d.entries.push_back(entry(indexed("E", i, j), c.E.block(i, j), Parity::even, ctx, tol));
    }
  }
  for (Index i = 0; i < c.channels(); ++i) {
    d.entries.push_back(entry(indexed("Evec", i), c.Evec[i], Parity::odd, ctx, tol));
  }
  d.entries.push_back(entry("E00", c.E00, Parity::even, ctx, tol));
  return d;
}

LangevinCoefficients fermi_langevin(const FermiSLH& g, const Operator& x) {
  const SLHTriple& t = g.triple;
  require_dim(g.ctx, x, "fermi_langevin");
  if (t.dim() != g.ctx.dim()) throw DimensionError("fermi_langevin: eta dimension mismatch");
  const Index n = t.channels();
  const Index d = t.dim();
  const Matrix& xm = x.matrix();
  const Matrix ex = g.ctx.conjugate(x).matrix();
  const Matrix& s = t.S().flat();
  const Matrix& h = t.H().matrix();

  Matrix x_diag = Matrix::Zero(n * d, n * d);
  for (Index k = 0; k < n; ++k) x_diag.block(k * d, k * d, d, d) = xm;
  Matrix gauge = s.adjoint() * x_diag * s - x_diag;

  Matrix graded(n * d, d);  // eta(X) L_j - L_j X
  Matrix left(d, n * d);    // L_i^dag eta(X) - X L_i^dag
  Matrix ldl = Matrix::Zero(d, d);
  Matrix drift = -kI * (xm * h - h * xm);
  for (Index i = 0; i < n; ++i) {
    const Matrix li = t.L().flat().middleRows(i * d, d);
    const Matrix lid = li.adjoint();
    graded.middleRows(i * d, d) = ex * li - li * xm;
    left.middleCols(i * d, d) = lid * ex - xm * lid;
    ldl += lid * li;
    drift += lid * ex * li;
  }
  drift -= 0.5 * (xm * ldl + ldl * xm);

  Matrix creation = s.adjoint() * graded;
  const Matrix row = left * s;
  Matrix annihilation(n * d, d);
  for (Index j = 0; j < n; ++j) annihilation.middleRows(j * d, d) = row.middleCols(j * d, d);

  return LangevinCoefficients{OperatorMatrix(n, n, d, std::move(gauge)),
                              OperatorMatrix(n, 1, d, std::move(creation)),
                              OperatorMatrix(n, 1, d, std::move(annihilation)),
                              Operator(std::move(drift))};
}

FermiComposition fermi_series(const FermiSLH& g2, const FermiSLH& g1, double tol) {
  if (max_abs(g1.ctx.eta().matrix() - g2.ctx.eta().matrix()) > tol) {
    throw InvariantError("fermi_series: components use different parity operators");
  }
  FermiSLH out{series(g2.triple, g1.triple, SystemSpace::shared), g1.ctx};
  ParityDiagnostics diag = validate_fermi(out, tol);
  return FermiComposition{std::move(out), std::move(diag)};
}

FermiComposition fermi_feedback_reduce(const FermiSLH& g, Index r0, Index s0, double tol) {
  FermiSLH out{feedback_reduce(g.triple, r0, s0), g.ctx};
  ParityDiagnostics diag = validate_fermi(out, tol);
  return FermiComposition{std::move(out), std::move(diag)};
}

}  // namespace qnet
