#pragma once

#include "qnet/slh.hpp"

#include <span>
#include <string>
#include <vector>

namespace qnet {

/// How two components' system spaces are combined.
///   tensor  each component owns its space; the joint space is h1 (x) h2 with
///           the first-listed (upstream) component as the slow index.
///   shared  both components already act on one common space.
enum class SystemSpace { tensor, shared };

/// Condition-number ceiling for (1 - S_{s0 r0}) in feedback elimination.
inline constexpr double kLoopConditionLimit = 1e10;

/// Lift every operator block X of `g` to I_left (x) X (x) I_right.
SLHTriple promote(const SLHTriple& g, Index left_dim, Index right_dim);

/// Channel-wise stacking: S = diag(S1, S2), L = (L1, L2), H = H1 + H2.
SLHTriple concatenate(const SLHTriple& g1, const SLHTriple& g2,
                      SystemSpace space = SystemSpace::tensor);

/// Cascade g1 -> g2:
///   S = S2 S1,  L = L2 + S2 L1,  H = H1 + H2 + Im{L2^dag S2 L1}.
/// In tensor mode g1 is the slow factor of the joint space, matching
/// concatenate(g1, g2).
SLHTriple series(const SLHTriple& g2, const SLHTriple& g1,
                 SystemSpace space = SystemSpace::tensor);

struct FeedbackReduction {
  SLHTriple triple;
  double condition = 0.0;  // condition number of 1 - S_{s0 r0}
};

/// Feed output `s0` back into input `r0`, leaving n-1 channels:
///   S'_sr = S_sr + S_{s r0} (1 - S_{s0 r0})^-1 S_{s0 r}
///   L'_s  = L_s  + S_{s r0} (1 - S_{s0 r0})^-1 L_{s0}
///   H'    = H + sum_s Im{L_s^dag S_{s r0} (1 - S_{s0 r0})^-1 L_{s0}}
/// where the H sum runs over every output channel, s0 included. Retained
/// channels keep their relative order. Throws AlgebraicLoopError when
/// 1 - S_{s0 r0} is singular or worse conditioned than kLoopConditionLimit.
FeedbackReduction feedback_reduce_traced(const SLHTriple& g, Index r0, Index s0);

inline SLHTriple feedback_reduce(const SLHTriple& g, Index r0, Index s0) {
  return feedback_reduce_traced(g, r0, s0).triple;
}

/// New output row i is old row output_perm[i]; new input column j is old
/// column input_perm[j].
SLHTriple permute_channels(const SLHTriple& g, std::span<const Index> input_perm,
                           std::span<const Index> output_perm);

struct PortRef {
  std::string component;
  Index port = 0;

  friend bool operator==(const PortRef&, const PortRef&) = default;
};

/// Internal connection from a component output to a component input.
struct Edge {
  PortRef source;
  PortRef target;
};

struct NamedComponent {
  std::string name;
  SLHTriple triple;
};

struct NetworkSpec {
  std::vector<NamedComponent> components;
  std::vector<Edge> internal_edges;
  std::vector<PortRef> external_inputs;
  std::vector<PortRef> external_outputs;
  SystemSpace space = SystemSpace::tensor;
};

/// Structural checks; throws NetworkError describing the first problem.
void validate(const NetworkSpec& spec);

std::string to_string(const Edge& e);

struct ReductionStep {
  Edge edge;
  double condition = 0.0;
  Index channels_after = 0;
};

struct ReductionTrace {
  std::vector<ReductionStep> steps;
};

struct ReducedNetwork {
  SLHTriple triple;
  ReductionTrace trace;
};

/// Concatenate all components in declaration order, then eliminate the
/// internal edges one by one. `elimination_order` lists edge indices; empty
/// means declaration order. The result's ports follow the declared external
/// port order.
ReducedNetwork reduce_network(const NetworkSpec& spec,
                              std::span<const std::size_t> elimination_order = {});

}  // namespace qnet
