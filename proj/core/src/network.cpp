#include "qnet/network.hpp"

#include "qnet/errors.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

namespace qnet {

namespace {

Matrix lift_blocks(const Matrix& flat, Index rows, Index cols, Index d, Index left, Index right) {
  const Index nd = left * d * right;
  if (static_cast<std::size_t>(nd) > kMaxDimension) {
    std::ostringstream os;
    os << "joint system dimension " << nd << " exceeds limit " << kMaxDimension;
    throw DimensionLimitError(os.str());
  }
  Matrix out = Matrix::Zero(rows * nd, cols * nd);
  for (Index bi = 0; bi < rows; ++bi) {
    for (Index bj = 0; bj < cols; ++bj) {
      const auto x = flat.block(bi * d, bj * d, d, d);
      auto dst = out.block(bi * nd, bj * nd, nd, nd);
      for (Index l = 0; l < left; ++l) {
        for (Index i = 0; i < d; ++i) {
          for (Index j = 0; j < d; ++j) {
            for (Index r = 0; r < right; ++r) {
              dst((l * d + i) * right + r, (l * d + j) * right + r) = x(i, j);
            }
          }
        }
      }
    }
  }
  return out;
}

std::pair<SLHTriple, SLHTriple> joint(const SLHTriple& first, const SLHTriple& second,
                                      SystemSpace space) {
  if (space == SystemSpace::shared) {
    if (first.dim() != second.dim()) {
      std::ostringstream os;
      os << "shared system space needs equal dimensions (" << first.dim() << " vs "
         << second.dim() << ")";
      throw DimensionError(os.str());
    }
    return {first, second};
  }
  return {promote(first, 1, second.dim()), promote(second, first.dim(), 1)};
}

std::string port_name(const PortRef& p, const char* direction) {
  std::ostringstream os;
  os << p.component << "." << direction << "[" << p.port << "]";
  return os.str();
}

}  // namespace

SLHTriple promote(const SLHTriple& g, Index left_dim, Index right_dim) {
  if (left_dim <= 0 || right_dim <= 0) throw DimensionError("promote: dimensions must be positive");
  if (left_dim == 1 && right_dim == 1) return g;
  const Index n = g.channels();
  const Index d = g.dim();
  const Index nd = left_dim * d * right_dim;
  return SLHTriple(OperatorMatrix(n, n, nd, lift_blocks(g.S().flat(), n, n, d, left_dim, right_dim)),
                   OperatorMatrix(n, 1, nd, lift_blocks(g.L().flat(), n, 1, d, left_dim, right_dim)),
                   Operator(lift_blocks(g.H().matrix(), 1, 1, d, left_dim, right_dim)));
}

SLHTriple concatenate(const SLHTriple& g1, const SLHTriple& g2, SystemSpace space) {
  const auto [a, b] = joint(g1, g2, space);
  const Index n1 = a.channels();
  const Index n2 = b.channels();
  const Index d = a.dim();
  Matrix s = Matrix::Zero((n1 + n2) * d, (n1 + n2) * d);
  s.topLeftCorner(n1 * d, n1 * d) = a.S().flat();
  s.bottomRightCorner(n2 * d, n2 * d) = b.S().flat();
  Matrix l((n1 + n2) * d, d);
  l.topRows(n1 * d) = a.L().flat();
  l.bottomRows(n2 * d) = b.L().flat();
  return SLHTriple(OperatorMatrix(n1 + n2, n1 + n2, d, std::move(s)),
                   OperatorMatrix(n1 + n2, 1, d, std::move(l)), a.H() + b.H());
}

SLHTriple series(const SLHTriple& g2, const SLHTriple& g1, SystemSpace space) {
  if (g1.channels() != g2.channels()) {
    std::ostringstream os;
    os << "series: channel counts differ (" << g2.channels() << " vs " << g1.channels() << ")";
    throw DimensionError(os.str());
  }
  const auto [first, second] = joint(g1, g2, space);
  const Index n = first.channels();
  const Index d = first.dim();
  const Matrix& s2 = second.S().flat();
  const Matrix& l2 = second.L().flat();

  Matrix s = s2 * first.S().flat();
  const Matrix s2l1 = s2 * first.L().flat();
  Matrix l = l2 + s2l1;
  Matrix h = (first.H().matrix() + second.H().matrix()) + imaginary_part(l2.adjoint() * s2l1);
  return SLHTriple(OperatorMatrix(n, n, d, std::move(s)), OperatorMatrix(n, 1, d, std::move(l)),
                   Operator(std::move(h)));
}

FeedbackReduction feedback_reduce_traced(const SLHTriple& g, Index r0, Index s0) {
  const Index n = g.channels();
  const Index d = g.dim();
  if (n < 2) throw DimensionError("feedback_reduce needs at least two channels");
  if (r0 < 0 || r0 >= n || s0 < 0 || s0 >= n) {
    throw DimensionError("feedback_reduce: port index out of range");
  }
  const Matrix& s = g.S().flat();
  const Matrix& l = g.L().flat();
  const Matrix loop = Matrix::Identity(d, d) - s.block(s0 * d, r0 * d, d, d);
  const Inverse inv = conditioned_inverse(loop);
  if (!(inv.condition <= kLoopConditionLimit)) {
    std::ostringstream os;
    os << "algebraic loop: 1 - S[" << s0 << "][" << r0 << "] singular or ill-conditioned (condition "
       << inv.condition << ")";
    throw AlgebraicLoopError(os.str());
  }

  // K_s = S_{s r0} (1 - S_{s0 r0})^-1 for every output s.
  const Matrix k = s.middleCols(r0 * d, d) * inv.value;
  const Matrix l_s0 = l.middleRows(s0 * d, d);

  Matrix s_red((n - 1) * d, (n - 1) * d);
  Matrix l_red((n - 1) * d, d);
  Matrix h = g.H().matrix();
  for (Index so = 0, ro_out = 0; so < n; ++so) {
    const Matrix k_s = k.middleRows(so * d, d);
    const Matrix kl = k_s * l_s0;
    h = h + imaginary_part(l.middleRows(so * d, d).adjoint() * kl);
    if (so == s0) continue;
    for (Index ri = 0, ri_out = 0; ri < n; ++ri) {
      if (ri == r0) continue;
      s_red.block(ro_out * d, ri_out * d, d, d) =
          s.block(so * d, ri * d, d, d) + k_s * s.block(s0 * d, ri * d, d, d);
      ++ri_out;
    }
    l_red.middleRows(ro_out * d, d) = l.middleRows(so * d, d) + kl;
    ++ro_out;
  }
  return FeedbackReduction{
      SLHTriple(OperatorMatrix(n - 1, n - 1, d, std::move(s_red)),
                OperatorMatrix(n - 1, 1, d, std::move(l_red)), Operator(std::move(h))),
      inv.condition};
}

SLHTriple permute_channels(const SLHTriple& g, std::span<const Index> input_perm,
                           std::span<const Index> output_perm) {
  const Index n = g.channels();
  const Index d = g.dim();
  auto check_perm = [n](std::span<const Index> p, const char* which) {
    std::vector<bool> seen(static_cast<std::size_t>(n), false);
    bool ok = static_cast<Index>(p.size()) == n;
    for (Index v : p) {
      if (!ok) break;
      if (v < 0 || v >= n || seen[static_cast<std::size_t>(v)]) ok = false;
      else seen[static_cast<std::size_t>(v)] = true;
    }
    if (!ok) throw DimensionError(std::string("permute_channels: malformed ") + which + " permutation");
  };
  check_perm(input_perm, "input");
  check_perm(output_perm, "output");

  const Matrix& s = g.S().flat();
  const Matrix& l = g.L().flat();
  Matrix ps(n * d, n * d);
  Matrix pl(n * d, d);
  for (Index i = 0; i < n; ++i) {
    const Index src_row = output_perm[static_cast<std::size_t>(i)];
    pl.middleRows(i * d, d) = l.middleRows(src_row * d, d);
    for (Index j = 0; j < n; ++j) {
      const Index src_col = input_perm[static_cast<std::size_t>(j)];
      ps.block(i * d, j * d, d, d) = s.block(src_row * d, src_col * d, d, d);
    }
  }
  return SLHTriple(OperatorMatrix(n, n, d, std::move(ps)), OperatorMatrix(n, 1, d, std::move(pl)),
                   g.H());
}

std::string to_string(const Edge& e) {
  return port_name(e.source, "out") + " -> " + port_name(e.target, "in");
}

void validate(const NetworkSpec& spec) {
  if (spec.components.empty()) throw NetworkError("network has no components");
  std::map<std::string, const SLHTriple*> by_name;
  for (const auto& c : spec.components) {
    if (!by_name.emplace(c.name, &c.triple).second) {
      throw NetworkError("duplicate component name '" + c.name + "'");
    }
  }
  if (spec.space == SystemSpace::shared) {
    const Index d = spec.components.front().triple.dim();
    for (const auto& c : spec.components) {
      if (c.triple.dim() != d) {
        throw NetworkError("component '" + c.name + "' has a different system dimension");
      }
    }
  }

  auto check_port = [&](const PortRef& p, const char* direction) {
    auto it = by_name.find(p.component);
    if (it == by_name.end()) {
      throw NetworkError("unknown component '" + p.component + "' in " + port_name(p, direction));
    }
    if (p.port < 0 || p.port >= it->second->channels()) {
      throw NetworkError("port " + port_name(p, direction) + " does not exist");
    }
  };

  using Key = std::pair<std::string, Index>;
  std::set<Key> used_out;
  std::set<Key> used_in;
  for (const auto& e : spec.internal_edges) {
    check_port(e.source, "out");
    check_port(e.target, "in");
    if (!used_out.emplace(e.source.component, e.source.port).second) {
      throw NetworkError("output " + port_name(e.source, "out") + " used by more than one edge");
    }
    if (!used_in.emplace(e.target.component, e.target.port).second) {
      throw NetworkError("input " + port_name(e.target, "in") + " used by more than one edge");
    }
  }

  auto check_external = [&](const std::vector<PortRef>& ports, const std::set<Key>& internal,
                            const char* direction) {
    std::set<Key> declared;
    for (const auto& p : ports) {
      check_port(p, direction);
      if (internal.count({p.component, p.port})) {
        throw NetworkError("external port " + port_name(p, direction) + " is also internal");
      }
      if (!declared.emplace(p.component, p.port).second) {
        throw NetworkError("external port " + port_name(p, direction) + " listed twice");
      }
    }
    for (const auto& c : spec.components) {
      for (Index k = 0; k < c.triple.channels(); ++k) {
        if (!internal.count({c.name, k}) && !declared.count({c.name, k})) {
          throw NetworkError("port " + port_name(PortRef{c.name, k}, direction) +
                             " is neither connected nor declared external");
        }
      }
    }
  };
  check_external(spec.external_inputs, used_in, "in");
  check_external(spec.external_outputs, used_out, "out");
  if (spec.external_inputs.empty()) throw NetworkError("network has no external ports");
}

ReducedNetwork reduce_network(const NetworkSpec& spec,
                              std::span<const std::size_t> elimination_order) {
  validate(spec);

  std::vector<std::size_t> order;
  if (elimination_order.empty()) {
    order.resize(spec.internal_edges.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
  } else {
    order.assign(elimination_order.begin(), elimination_order.end());
    std::vector<std::size_t> sorted = order;
    std::sort(sorted.begin(), sorted.end());
    bool ok = sorted.size() == spec.internal_edges.size();
    for (std::size_t i = 0; ok && i < sorted.size(); ++i) ok = sorted[i] == i;
    if (!ok) throw NetworkError("elimination order must be a permutation of the edge indices");
  }

  SLHTriple joint_triple = spec.components.front().triple;
  std::vector<PortRef> outputs;
  for (Index k = 0; k < joint_triple.channels(); ++k) {
    outputs.push_back(PortRef{spec.components.front().name, k});
  }
  for (std::size_t c = 1; c < spec.components.size(); ++c) {
    const auto& comp = spec.components[c];
    joint_triple = concatenate(joint_triple, comp.triple, spec.space);
    for (Index k = 0; k < comp.triple.channels(); ++k) outputs.push_back(PortRef{comp.name, k});
  }
  std::vector<PortRef> inputs = outputs;

  auto index_of = [](const std::vector<PortRef>& ports, const PortRef& p) {
    return static_cast<Index>(std::find(ports.begin(), ports.end(), p) - ports.begin());
  };

  ReductionTrace trace;
  for (std::size_t idx : order) {
    const Edge& e = spec.internal_edges[idx];
    const Index s0 = index_of(outputs, e.source);
    const Index r0 = index_of(inputs, e.target);
    try {
      auto step = feedback_reduce_traced(joint_triple, r0, s0);
      joint_triple = std::move(step.triple);
      trace.steps.push_back(ReductionStep{e, step.condition, joint_triple.channels()});
    } catch (const AlgebraicLoopError& err) {
      throw AlgebraicLoopError("eliminating edge " + to_string(e) + ": " + err.what());
    }
    outputs.erase(outputs.begin() + s0);
    inputs.erase(inputs.begin() + r0);
  }

  std::vector<Index> input_perm;
  std::vector<Index> output_perm;
  for (const auto& p : spec.external_inputs) input_perm.push_back(index_of(inputs, p));
  for (const auto& p : spec.external_outputs) output_perm.push_back(index_of(outputs, p));
  return ReducedNetwork{permute_channels(joint_triple, input_perm, output_perm), std::move(trace)};
}

}  // namespace qnet
