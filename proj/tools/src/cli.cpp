#include "cli.hpp"

#include <CLI11.hpp>

#include "qnet/errors.hpp"
#include "qnet/model_file.hpp"

#include <cmath>
#include <fstream>
#include <optional>
#include <sstream>

namespace qnet::cli {

namespace {

struct Options {
  double tol = kDefaultTol;
  std::string out_path;
  std::string format = "json";

  std::vector<std::string> files;
  bool shared = false;

  std::vector<std::size_t> order;
  bool trace = false;

  std::string rho0_path;
  std::string observables_path;
  double t_end = 1.0;
  double dt = 1e-3;
  std::size_t every = 1;

  double omega_min = -10.0;
  double omega_max = 10.0;
  std::size_t steps = 401;

  double epsilon = 0.0;
  double center = 5.0;
  double width = 0.5;
  double momentum = 0.0;
  double extent = 20.0;
  double spacing = 0.01;
  std::vector<double> times;
};

void emit(const Options& opt, std::ostream& out, const std::string& text) {
  if (opt.out_path.empty()) {
    out << text;
    return;
  }
  std::ofstream file(opt.out_path, std::ios::binary);
  if (!file) throw ParseError(opt.out_path + ": cannot open for writing");
  file << text;
  if (!file) throw ParseError(opt.out_path + ": write failed");
}

template <class T>
const T& expect(const io::ModelFile& f, io::ModelKind kind, const std::string& path) {
  if (f.kind() != kind) {
    throw ParseError(path + ": expected a " + std::string(io::to_string(kind)) + " block, found " +
                     std::string(io::to_string(f.kind())));
  }
  return std::get<T>(f.model);
}

SLHTriple load_slh(const std::string& path, double tol) {
  const io::ModelFile f = io::parse_model(path, tol);
  return expect<SLHTriple>(f, io::ModelKind::slh, path);
}

LinearPassive load_linear(const std::string& path, double tol) {
  const io::ModelFile f = io::parse_model(path, tol);
  return expect<LinearPassive>(f, io::ModelKind::linear, path);
}

std::string render(const SLHTriple& g, const Options& opt) {
  return opt.format == "csv" ? io::write_csv(g) : io::write_model(g);
}

std::string render(const StratonovichCoefficients& c, const Options& opt) {
  return opt.format == "csv" ? io::write_csv(c) : io::write_model(c);
}

std::string summary(const io::ModelFile& f) {
  std::ostringstream os;
  os << "ok: " << io::to_string(f.kind());
  std::visit(
      [&os](const auto& m) {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, SLHTriple>) {
          os << " n=" << m.channels() << " dim=" << m.dim();
        } else if constexpr (std::is_same_v<T, StratonovichCoefficients>) {
          os << " n=" << m.channels() << " dim=" << m.dim();
        } else if constexpr (std::is_same_v<T, FermiSLH>) {
          os << " n=" << m.triple.channels() << " dim=" << m.triple.dim();
        } else if constexpr (std::is_same_v<T, NetworkSpec>) {
          os << " components=" << m.components.size() << " edges=" << m.internal_edges.size()
             << " inputs=" << m.external_inputs.size() << " outputs=" << m.external_outputs.size();
        } else {
          os << " n=" << m.channels() << " modes=" << m.modes();
        }
      },
      f.model);
  os << "\n";
  return os.str();
}

int cmd_validate(const Options& opt, std::ostream& out) {
  const io::ModelFile f = io::parse_model(opt.files.at(0), opt.tol);
  emit(opt, out, summary(f));
  return kOk;
}

int cmd_ito(const Options& opt, std::ostream& out) {
  const io::ModelFile f = io::parse_model(opt.files.at(0), opt.tol);
  const auto& c = expect<StratonovichCoefficients>(f, io::ModelKind::stratonovich, opt.files[0]);
  emit(opt, out, render(stratonovich_to_ito(c, opt.tol), opt));
  return kOk;
}

int cmd_stratonovich(const Options& opt, std::ostream& out) {
  emit(opt, out, render(ito_to_stratonovich(load_slh(opt.files.at(0), opt.tol)), opt));
  return kOk;
}

int cmd_series(const Options& opt, std::ostream& out) {
  const SLHTriple g2 = load_slh(opt.files.at(0), opt.tol);
  const SLHTriple g1 = load_slh(opt.files.at(1), opt.tol);
  const auto space = opt.shared ? SystemSpace::shared : SystemSpace::tensor;
  emit(opt, out, render(series(g2, g1, space), opt));
  return kOk;
}

int cmd_concat(const Options& opt, std::ostream& out) {
  const SLHTriple g1 = load_slh(opt.files.at(0), opt.tol);
  const SLHTriple g2 = load_slh(opt.files.at(1), opt.tol);
  const auto space = opt.shared ? SystemSpace::shared : SystemSpace::tensor;
  emit(opt, out, render(concatenate(g1, g2, space), opt));
  return kOk;
}

int cmd_reduce(const Options& opt, std::ostream& out, std::ostream& err) {
  const io::ModelFile f = io::parse_model(opt.files.at(0), opt.tol);
  const auto& spec = expect<NetworkSpec>(f, io::ModelKind::network, opt.files[0]);
  const ReducedNetwork r = reduce_network(spec, opt.order);
  if (opt.trace) {
    for (const auto& step : r.trace.steps) {
      err << "eliminated " << to_string(step.edge) << " condition "
          << io::format_number(step.condition) << " channels " << step.channels_after << "\n";
    }
  }
  emit(opt, out, render(r.triple, opt));
  return kOk;
}

int cmd_evolve(const Options& opt, std::ostream& out) {
  const SLHTriple g = load_slh(opt.files.at(0), opt.tol);
  const DensityMatrix rho0 = io::parse_state(opt.rho0_path);
  std::vector<NamedObservable> observables;
  if (!opt.observables_path.empty()) observables = io::parse_observables(opt.observables_path);

  IntegrationOptions io_opt;
  io_opt.t_end = opt.t_end;
  io_opt.dt = opt.dt;
  io_opt.store_every = opt.every;
  const Trajectory traj = integrate_master(g, rho0, io_opt, observables);

  std::string csv = "t";
  for (const auto& [name, series] : traj.observables) csv += "," + name + "_re," + name + "_im";
  csv += "\n";
  for (std::size_t k = 0; k < traj.times.size(); ++k) {
    csv += io::format_number(traj.times[k]);
    for (const auto& [name, series] : traj.observables) {
      csv += "," + io::format_number(series[k].real()) + "," + io::format_number(series[k].imag());
    }
    csv += "\n";
  }
  emit(opt, out, csv);
  return kOk;
}

int cmd_sweep(const Options& opt, std::ostream& out, std::ostream& err) {
  LinearPassive c = load_linear(opt.files.at(0), opt.tol);
  const std::vector<double> grid = frequency_grid(opt.omega_min, opt.omega_max, opt.steps);
  if (opt.files.size() == 2) {
    const LinearPassive c2 = load_linear(opt.files[1], opt.tol);
    const CascadeReport report = cascade_transfer(c, c2, grid);
    err << "cascade max deviation " << io::format_number(report.max_deviation) << " at omega "
        << io::format_number(report.worst_omega) << "\n";
    c = series(c2, c);
  }
  const Index n = c.channels();
  std::string csv = "omega";
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < n; ++j) {
      const std::string tag = "Xi_" + std::to_string(i) + "_" + std::to_string(j);
      csv += "," + tag + "_re," + tag + "_im";
    }
  }
  csv += "\n";
  for (double omega : grid) {
    const TransferPoint p = transfer_function(c, omega);
    csv += io::format_number(omega);
    for (Index i = 0; i < n; ++i) {
      for (Index j = 0; j < n; ++j) {
        csv += "," + io::format_number(p.Xi(i, j).real()) + "," +
               io::format_number(p.Xi(i, j).imag());
      }
    }
    csv += "\n";
  }
  emit(opt, out, csv);
  return kOk;
}

int cmd_wire(const Options& opt, std::ostream& out) {
  if (!(opt.width > 0.0)) throw InvariantError("wire: --width must be positive");
  const double norm = std::pow(2.0 * M_PI * opt.width * opt.width, -0.25);
  const auto profile = [&opt, norm](double x) {
    const double u = (x - opt.center) / opt.width;
    return norm * std::exp(Complex(-0.25 * u * u, opt.momentum * x));
  };
  const WireState initial = WireState::sample(opt.extent, opt.spacing, opt.epsilon, profile);

  std::vector<double> times = opt.times.empty() ? std::vector<double>{0.0} : opt.times;
  std::vector<WireState> snapshots;
  double now = 0.0;
  WireState current = initial;
  for (double t : times) {
    if (t < now) throw InvariantError("wire: --times must be non-decreasing and non-negative");
    current = propagate_wavepacket(current, t - now);
    now = t;
    snapshots.push_back(current);
  }

  std::string csv = "x";
  for (double t : times) csv += ",t=" + io::format_number(t);
  csv += "\n";
  for (std::size_t k = 0; k < initial.size(); ++k) {
    csv += io::format_number(initial.position(k));
    for (const auto& s : snapshots) csv += "," + io::format_number(std::abs(s.psi()[k]));
    csv += "\n";
  }
  emit(opt, out, csv);
  return kOk;
}

int cmd_parity(const Options& opt, std::ostream& out, std::ostream& err) {
  const io::ModelFile f = io::parse_model(opt.files.at(0), opt.tol);
  const auto& g = expect<FermiSLH>(f, io::ModelKind::fermi, opt.files[0]);
  const ParityDiagnostics diag = validate_fermi(g, opt.tol);
  std::string csv = "coefficient,required,found,deviation,passed\n";
  for (const auto& e : diag.entries) {
    csv += e.coefficient + "," + std::string(to_string(e.required)) + "," +
           std::string(to_string(e.found)) + "," + io::format_number(e.deviation) + "," +
           (e.passed ? "yes" : "no") + "\n";
  }
  emit(opt, out, csv);
  if (const auto* bad = diag.first_failure()) {
    err << "ParityError: " << bad->coefficient << " must be " << to_string(bad->required)
        << " (deviation " << bad->deviation << ")\n";
    return kModelError;
  }
  return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Options opt;
  CLI::App app{"Open quantum network toolkit: SLH models, composition and dynamics", "qnet"};
  app.require_subcommand(1);
  app.option_defaults()->always_capture_default();
  app.add_option("--tol", opt.tol, "Invariant tolerance")->check(CLI::PositiveNumber);
  app.add_option("--out", opt.out_path, "Write results to this file instead of stdout");
  app.add_option("--format", opt.format, "Output format for models")
      ->check(CLI::IsMember({"json", "csv"}));

  auto files = [&opt](CLI::App* sub, int count, const char* what) {
    sub->fallthrough();
    sub->add_option("files", opt.files, what)->required()->expected(count)->check(CLI::ExistingFile);
  };

  auto* validate_cmd = app.add_subcommand("validate", "Parse and validate a model file");
  files(validate_cmd, 1, "Model file");

  auto* ito_cmd = app.add_subcommand("ito", "Convert Stratonovich coefficients to an SLH triple");
  files(ito_cmd, 1, "Stratonovich model file");

  auto* strat_cmd =
      app.add_subcommand("stratonovich", "Convert an SLH triple to Stratonovich coefficients");
  files(strat_cmd, 1, "SLH model file");

  auto* series_cmd = app.add_subcommand("series", "Series product: feed G1 into G2");
  files(series_cmd, 2, "G2 then G1");
  series_cmd->add_flag("--shared", opt.shared, "Components act on one common system space");

  auto* concat_cmd = app.add_subcommand("concat", "Concatenate two components");
  files(concat_cmd, 2, "G1 then G2");
  concat_cmd->add_flag("--shared", opt.shared, "Components act on one common system space");

  auto* reduce_cmd = app.add_subcommand("reduce", "Reduce a network to a single SLH triple");
  files(reduce_cmd, 1, "Network file");
  reduce_cmd->add_option("--order", opt.order, "Edge elimination order (0-based edge indices)")
      ->delimiter(',');
  reduce_cmd->add_flag("--trace", opt.trace, "Print elimination steps to stderr");

  auto* evolve_cmd = app.add_subcommand("evolve", "Integrate the master equation");
  files(evolve_cmd, 1, "SLH model file");
  evolve_cmd->add_option("--rho0", opt.rho0_path, "Initial state file")
      ->required()
      ->check(CLI::ExistingFile);
  evolve_cmd->add_option("--observables", opt.observables_path, "Observable list file")
      ->check(CLI::ExistingFile);
  evolve_cmd->add_option("--t-end", opt.t_end, "Final time")->check(CLI::NonNegativeNumber);
  evolve_cmd->add_option("--dt", opt.dt, "Step size")->check(CLI::PositiveNumber);
  evolve_cmd->add_option("--every", opt.every, "Store every k-th step")
      ->check(CLI::PositiveNumber);

  auto* sweep_cmd = app.add_subcommand("sweep", "Frequency response of linear components");
  sweep_cmd->fallthrough();
  sweep_cmd->add_option("files", opt.files, "Linear component, optionally followed by a second")
      ->required()
      ->expected(1, 2)
      ->check(CLI::ExistingFile);
  sweep_cmd->add_option("--omega-min", opt.omega_min, "Lowest frequency");
  sweep_cmd->add_option("--omega-max", opt.omega_max, "Highest frequency");
  sweep_cmd->add_option("--steps", opt.steps, "Number of grid points")->check(CLI::PositiveNumber);

  auto* wire_cmd = app.add_subcommand("wire", "Scatter a Gaussian packet off a delta kick");
  wire_cmd->fallthrough();
  wire_cmd->add_option("--epsilon", opt.epsilon, "Kick strength");
  wire_cmd->add_option("--center", opt.center, "Initial packet center");
  wire_cmd->add_option("--width", opt.width, "Packet width")->check(CLI::PositiveNumber);
  wire_cmd->add_option("--momentum", opt.momentum, "Packet carrier wavenumber");
  wire_cmd->add_option("--extent", opt.extent, "Grid half-width X")->check(CLI::PositiveNumber);
  wire_cmd->add_option("--spacing", opt.spacing, "Grid spacing h")->check(CLI::PositiveNumber);
  wire_cmd->add_option("--times", opt.times, "Snapshot times (multiples of h)")->delimiter(',');

  auto* parity_cmd = app.add_subcommand("parity", "Check the parity table of a Fermi model");
  files(parity_cmd, 1, "Fermi model file");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    err << "UsageError: " << e.what() << "\n";
    return kUsage;
  }

  try {
    if (validate_cmd->parsed()) return cmd_validate(opt, out);
    if (ito_cmd->parsed()) return cmd_ito(opt, out);
    if (strat_cmd->parsed()) return cmd_stratonovich(opt, out);
    if (series_cmd->parsed()) return cmd_series(opt, out);
    if (concat_cmd->parsed()) return cmd_concat(opt, out);
    if (reduce_cmd->parsed()) return cmd_reduce(opt, out, err);
    if (evolve_cmd->parsed()) return cmd_evolve(opt, out);
    if (sweep_cmd->parsed()) return cmd_sweep(opt, out, err);
    if (wire_cmd->parsed()) return cmd_wire(opt, out);
    if (parity_cmd->parsed()) return cmd_parity(opt, out, err);
  } catch (const Error& e) {
    err << e.error_class() << ": " << e.what() << "\n";
    return e.kind() == ErrorKind::model ? kModelError : kNumericalError;
  } catch (const std::exception& e) {
    err << "InternalError: " << e.what() << "\n";
    return kNumericalError;
  }
  err << "UsageError: no subcommand given\n";
  return kUsage;
}

}  // namespace qnet::cli
