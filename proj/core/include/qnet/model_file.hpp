#pragma once

#include "qnet/dynamics.hpp"
#include "qnet/fermi.hpp"
#include "qnet/network.hpp"
#include "qnet/slh.hpp"
#include "qnet/wire.hpp"

#include <filesystem>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

/// JSON model files.
///
/// Every matrix is a nested array of rows, each entry an [re, im] pair.
/// Operator matrices (S, L, E, Evec) are stored flat: S is (n*dim) x (n*dim),
/// L is (n*dim) x dim. A file holds exactly one top-level model block:
///
///   {"version": 1, "slh":          {"n", "dim", "S", "L", "H"}}
///   {"version": 1, "stratonovich": {"n", "dim", "E", "Evec", "E00"}}
///   {"version": 1, "fermi":        {"slh": {...}, "eta"}}
///   {"version": 1, "network":      {"components": {name: slh block, ...},
///                                   "edges": [[[c, "out", k], [c, "in", j]], ...],
///                                   "inputs": [[c, j], ...], "outputs": [[c, k], ...],
///                                   "space": "tensor" | "shared"}}
///   {"version": 1, "linear":       {"n", "modes", "S", "C", "Omega"}}
///
/// Ports and channels are 0-based. "version" may be omitted and defaults to 1.
namespace qnet::io {

inline constexpr int kFormatVersion = 1;

enum class ModelKind { slh, stratonovich, fermi, network, linear };

std::string_view to_string(ModelKind kind);

struct ModelFile {
  int version = kFormatVersion;
  std::variant<SLHTriple, StratonovichCoefficients, FermiSLH, NetworkSpec, LinearPassive> model;

  ModelKind kind() const { return static_cast<ModelKind>(model.index()); }
};

/// Parse and validate. Throws ParseError (syntax, with line/column, or a
/// malformed field named by its JSON path), DimensionError, or
/// InvariantError naming the offending block, e.g. "slh.S not unitary".
ModelFile parse_model(const std::filesystem::path& path, double tol = kDefaultTol);
ModelFile parse_model_text(std::string_view text, double tol = kDefaultTol,
                           std::string_view source = "<input>");

/// {"observables": {"name": matrix, ...}} in declaration order.
std::vector<NamedObservable> parse_observables(const std::filesystem::path& path);
std::vector<NamedObservable> parse_observables_text(std::string_view text,
                                                    std::string_view source = "<input>");

/// {"rho0": matrix} or {"psi0": [[re, im], ...]}.
DensityMatrix parse_state(const std::filesystem::path& path);
DensityMatrix parse_state_text(std::string_view text, std::string_view source = "<input>");

/// Shortest round-trip decimal form; negative zero prints as "0".
std::string format_number(double value);

std::string write_model(const SLHTriple& g);
std::string write_model(const StratonovichCoefficients& c);

/// CSV with header `block,row,col,re,im`, one line per entry of the flat
/// S, L and H matrices.
std::string write_csv(const SLHTriple& g);
/// Same layout with blocks E, Evec and E00.
std::string write_csv(const StratonovichCoefficients& c);

}  // namespace qnet::io
