#include "qnet/slh.hpp"

#include "qnet/errors.hpp"

#include <sstream>

namespace qnet {

namespace {

constexpr Complex kI{0.0, 1.0};

Matrix hermitize(const Matrix& m) { return 0.5 * (m + m.adjoint()); }

std::string format_deviation(const InvariantCheck& c) {
  std::ostringstream os;
  os << c.name << " not " << to_string(c.report.property) << " (deviation " << c.report.deviation
     << ")";
  return os.str();
}

InvariantCheck residual_check(std::string name, Property property, double deviation, double tol) {
  return InvariantCheck{std::move(name), PropertyReport{property, deviation, deviation <= tol}};
}

void require_dim(const SLHTriple& g, const Operator& x, const char* what) {
  if (x.dim() != g.dim()) {
    std::ostringstream os;
    os << what << ": operator dimension " << x.dim() << " does not match system dimension "
       << g.dim();
    throw DimensionError(os.str());
  }
}

// Block (i, 0) of a stacked column as a dense view-copy.
Matrix col_block(const OperatorMatrix& m, Index i) {
  const Index d = m.dim();
  return m.flat().block(i * d, 0, d, d);
}

}  // namespace

SLHTriple::SLHTriple(OperatorMatrix S, OperatorMatrix L, Operator H)
    : S_(std::move(S)), L_(std::move(L)), H_(std::move(H)) {
  if (S_.rows() != S_.cols()) throw DimensionError("S must be a square operator matrix");
  if (L_.cols() != 1 || L_.rows() != S_.rows()) {
    throw DimensionError("L must be an operator column with one entry per channel");
  }
  if (S_.dim() != H_.dim() || L_.dim() != H_.dim()) {
    throw DimensionError("S, L and H must act on the same system dimension");
  }
}

SLHTriple SLHTriple::identity(Index n, Index dim) {
  return SLHTriple(OperatorMatrix::identity(n, dim), OperatorMatrix::column(n, dim),
                   Operator::zero(dim));
}

bool Validation::passed() const { return first_failure() == nullptr; }

const InvariantCheck* Validation::first_failure() const {
  for (const auto& c : checks) {
    if (!c.report.passed) return &c;
  }
  return nullptr;
}

Validation validate(const SLHTriple& g, double tol) {
  const Matrix& s = g.S().flat();
  const Matrix id = Matrix::Identity(s.rows(), s.cols());
  const double dev =
      std::max(max_abs(s.adjoint() * s - id), max_abs(s * s.adjoint() - id));
  Validation v;
  v.checks.push_back(residual_check("S", Property::unitary, dev, tol));
  v.checks.push_back(InvariantCheck{"H", check(g.H(), Property::hermitian, tol)});
  return v;
}

void require_valid(const SLHTriple& g, double tol) {
  const Validation v = validate(g, tol);
  if (const auto* bad = v.first_failure()) throw InvariantError(format_deviation(*bad));
}

Validation validate(const StratonovichCoefficients& c, double tol) {
  if (c.E.rows() != c.E.cols() || c.Evec.cols() != 1 || c.Evec.rows() != c.E.rows() ||
      c.E.dim() != c.E00.dim() || c.Evec.dim() != c.E00.dim()) {
    throw DimensionError("Stratonovich coefficients have inconsistent shapes");
  }
  const Matrix& e = c.E.flat();
  Validation v;
  v.checks.push_back(residual_check("E", Property::hermitian, max_abs(e - e.adjoint()), tol));
  v.checks.push_back(InvariantCheck{"E00", check(c.E00, Property::hermitian, tol)});
  return v;
}

SLHTriple stratonovich_to_ito(const StratonovichCoefficients& c, double tol) {
  const Validation v = validate(c, tol);
  if (const auto* bad = v.first_failure()) throw InvariantError(format_deviation(*bad));

  const Index n = c.channels();
  const Index d = c.dim();
  const Matrix& e = c.E.flat();
  const Matrix id = Matrix::Identity(e.rows(), e.cols());

  const Inverse inv = conditioned_inverse(id + 0.5 * kI * e);
  if (!(inv.condition <= kTransformConditionLimit)) {
    std::ostringstream os;
    os << "1 + (i/2)E is singular or ill-conditioned (condition " << inv.condition << ")";
    throw SingularTransformError(os.str());
  }

  Matrix s = (id - 0.5 * kI * e) * inv.value;
  Matrix l = kI * (inv.value * c.Evec.flat());
  const Matrix& evec = c.Evec.flat();
  Matrix h = c.E00.matrix() + 0.5 * (evec.adjoint() * (imaginary_part(inv.value) * evec));

  return SLHTriple(OperatorMatrix(n, n, d, std::move(s)), OperatorMatrix(n, 1, d, std::move(l)),
                   Operator(hermitize(h)));
}

StratonovichCoefficients ito_to_stratonovich(const SLHTriple& g) {
  const Index n = g.channels();
  const Index d = g.dim();
  const Matrix& s = g.S().flat();
  const Matrix id = Matrix::Identity(s.rows(), s.cols());

  const Inverse inv = conditioned_inverse(id + s);
  if (!(inv.condition <= kTransformConditionLimit)) {
    std::ostringstream os;
    os << "no Stratonovich form: 1 + S is singular or ill-conditioned (condition "
       << inv.condition << ")";
    throw SingularTransformError(os.str());
  }

  // With M = 1 + (i/2)E one has M = 2(1 + S)^-1, hence M^-1 = (1 + S)/2.
  Matrix e = 2.0 * kI * (s - id) * inv.value;
  Matrix evec = -2.0 * kI * (inv.value * g.L().flat());
  const Matrix m_inv = 0.5 * (id + s);
  Matrix e00 = g.H().matrix() - 0.5 * (evec.adjoint() * (imaginary_part(m_inv) * evec));

  return StratonovichCoefficients{OperatorMatrix(n, n, d, hermitize(e)),
                                  OperatorMatrix(n, 1, d, std::move(evec)),
                                  Operator(hermitize(e00))};
}

GeneratorMatrix::GeneratorMatrix(OperatorMatrix blocks) : blocks_(std::move(blocks)) {
  if (blocks_.rows() != blocks_.cols() || blocks_.rows() < 2) {
    throw DimensionError("generator matrix must be (n+1)x(n+1) with n >= 1");
  }
}

GeneratorMatrix generator_matrix(const SLHTriple& g) {
  const Index n = g.channels();
  const Index d = g.dim();
  const Matrix& s = g.S().flat();
  const Matrix& l = g.L().flat();

  Matrix blocks = Matrix::Zero((n + 1) * d, (n + 1) * d);
  blocks.block(0, 0, d, d) = -(0.5 * (l.adjoint() * l) + kI * g.H().matrix());
  blocks.block(0, d, d, n * d) = -(l.adjoint() * s);
  blocks.block(d, 0, n * d, d) = l;
  blocks.block(d, d, n * d, n * d) = s - Matrix::Identity(n * d, n * d);
  return GeneratorMatrix(OperatorMatrix(n + 1, n + 1, d, std::move(blocks)));
}

GeneratorMatrix ito_product(const GeneratorMatrix& a, const GeneratorMatrix& b) {
  if (a.channels() != b.channels() || a.dim() != b.dim()) {
    throw DimensionError("ito_product: generator shapes differ");
  }
  const Index d = a.dim();
  const Index n = a.channels();
  // (A P B) with P projecting out the time slot.
  const Matrix& fa = a.blocks().flat();
  const Matrix& fb = b.blocks().flat();
  Matrix out = fa.middleCols(d, n * d) * fb.middleRows(d, n * d);
  return GeneratorMatrix(OperatorMatrix(n + 1, n + 1, d, std::move(out)));
}

GeneratorMatrix adjoint(const GeneratorMatrix& g) { return GeneratorMatrix(adjoint(g.blocks())); }

double unitarity_residual(const GeneratorMatrix& g) {
  const GeneratorMatrix gd = adjoint(g);
  const Matrix sum = g.blocks().flat() + gd.blocks().flat() + ito_product(gd, g).blocks().flat();
  return max_abs(sum);
}

Operator lindblad_heisenberg(const SLHTriple& g, const Operator& x) {
  require_dim(g, x, "lindblad_heisenberg");
  const Matrix& xm = x.matrix();
  Matrix out = -kI * (xm * g.H().matrix() - g.H().matrix() * xm);
  for (Index i = 0; i < g.channels(); ++i) {
    const Matrix li = col_block(g.L(), i);
    const Matrix lid = li.adjoint();
    out += 0.5 * (lid * (xm * li - li * xm)) + 0.5 * ((lid * xm - xm * lid) * li);
  }
  return Operator(std::move(out));
}

Operator lindblad_schrodinger(const SLHTriple& g, const Operator& rho) {
  require_dim(g, rho, "lindblad_schrodinger");
  const Matrix& r = rho.matrix();
  const Matrix& h = g.H().matrix();
  Matrix out = -kI * (h * r - r * h);
  for (Index i = 0; i < g.channels(); ++i) {
    const Matrix li = col_block(g.L(), i);
    const Matrix ldl = li.adjoint() * li;
    out += li * r * li.adjoint() - 0.5 * (ldl * r + r * ldl);
  }
  return Operator(std::move(out));
}

LangevinCoefficients langevin_coefficients(const SLHTriple& g, const Operator& x) {
  require_dim(g, x, "langevin_coefficients");
  const Index n = g.channels();
  const Index d = g.dim();
  const Matrix& xm = x.matrix();
  const Matrix& s = g.S().flat();

  Matrix x_diag = Matrix::Zero(n * d, n * d);
  for (Index k = 0; k < n; ++k) x_diag.block(k * d, k * d, d, d) = xm;
  Matrix gauge = s.adjoint() * x_diag * s - x_diag;

  Matrix comm(n * d, d);  // [X, L_j] stacked
  Matrix left(d, n * d);  // [L_i^dag, X] as a block row
  for (Index i = 0; i < n; ++i) {
    const Matrix li = col_block(g.L(), i);
    comm.block(i * d, 0, d, d) = xm * li - li * xm;
    left.block(0, i * d, d, d) = li.adjoint() * xm - xm * li.adjoint();
  }
  Matrix creation = s.adjoint() * comm;
  const Matrix row = left * s;
  Matrix annihilation(n * d, d);
  for (Index j = 0; j < n; ++j) annihilation.block(j * d, 0, d, d) = row.block(0, j * d, d, d);

  return LangevinCoefficients{OperatorMatrix(n, n, d, std::move(gauge)),
                              OperatorMatrix(n, 1, d, std::move(creation)),
                              OperatorMatrix(n, 1, d, std::move(annihilation)),
                              lindblad_heisenberg(g, x)};
}

IOCoefficients io_coefficients(const SLHTriple& g) { return IOCoefficients{g.S(), g.L()}; }

}  // namespace qnet
