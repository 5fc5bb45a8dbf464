#include "qnet/model_file.hpp"

#include "qnet/errors.hpp"

#include <json.hpp>

#include <array>
#include <charconv>
#include <fstream>
#include <sstream>

namespace qnet::io {

namespace {

using Json = nlohmann::ordered_json;

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError(path.string() + ": cannot open file");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Json parse_json(std::string_view text, std::string_view source) {
  try {
    return Json::parse(text.begin(), text.end());
  } catch (const nlohmann::json::parse_error& e) {
    // Translate the byte offset into line/column.
    std::size_t line = 1;
    std::size_t col = 1;
    const std::size_t stop = std::min<std::size_t>(e.byte == 0 ? 0 : e.byte - 1, text.size());
    for (std::size_t i = 0; i < stop; ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    std::ostringstream os;
    os << source << ":" << line << ":" << col << ": invalid JSON";
    throw ParseError(os.str());
  }
}

// Field access with error messages that carry the JSON path.
class Reader {
 public:
  Reader(std::string source, double tol) : source_(std::move(source)), tol_(tol) {}

  [[noreturn]] void fail(const std::string& path, const std::string& what) const {
    throw ParseError(source_ + ": " + path + ": " + what);
  }

  const Json& field(const Json& obj, const std::string& path, const char* key) const {
    if (!obj.is_object()) fail(path, "expected an object");
    auto it = obj.find(key);
    if (it == obj.end()) fail(path + "." + key, "missing field");
    return *it;
  }

  Index positive_int(const Json& obj, const std::string& path, const char* key,
                     Index min = 1) const {
    const Json& v = field(obj, path, key);
    if (!v.is_number_integer() || v.get<long long>() < min) {
      fail(path + "." + key, "expected an integer >= " + std::to_string(min));
    }
    return static_cast<Index>(v.get<long long>());
  }

  Complex pair(const Json& v, const std::string& path) const {
    if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number()) {
      fail(path, "expected an [re, im] number pair");
    }
    return Complex(v[0].get<double>(), v[1].get<double>());
  }

  Matrix matrix(const Json& v, const std::string& path, Index rows, Index cols) const {
    if (!v.is_array() || static_cast<Index>(v.size()) != rows) {
      std::ostringstream os;
      os << "expected " << rows << " rows of " << cols << " [re, im] pairs";
      fail(path, os.str());
    }
    Matrix m(rows, cols);
    for (Index i = 0; i < rows; ++i) {
      const Json& row = v[static_cast<std::size_t>(i)];
      const std::string row_path = path + "[" + std::to_string(i) + "]";
      if (!row.is_array() || static_cast<Index>(row.size()) != cols) {
        std::ostringstream os;
        os << "expected " << cols << " entries, got "
           << (row.is_array() ? std::to_string(row.size()) : std::string("a non-array"));
        fail(row_path, os.str());
      }
      for (Index j = 0; j < cols; ++j) {
        m(i, j) = pair(row[static_cast<std::size_t>(j)], row_path + "[" + std::to_string(j) + "]");
      }
    }
    if (!m.allFinite()) fail(path, "non-finite entry");
    return m;
  }

  void require(const Validation& v, const std::string& path) const {
    if (const auto* bad = v.first_failure()) {
      std::ostringstream os;
      os << source_ << ": " << path << "." << bad->name << " not "
         << qnet::to_string(bad->report.property) << " (deviation " << bad->report.deviation
         << ")";
      throw InvariantError(os.str());
    }
  }

  SLHTriple slh(const Json& obj, const std::string& path) const {
    const Index n = positive_int(obj, path, "n");
    const Index d = positive_int(obj, path, "dim");
    if (static_cast<std::size_t>(n * d) > kMaxDimension) fail(path, "n * dim exceeds limit");
    Matrix s = matrix(field(obj, path, "S"), path + ".S", n * d, n * d);
    Matrix l = matrix(field(obj, path, "L"), path + ".L", n * d, d);
    Matrix h = matrix(field(obj, path, "H"), path + ".H", d, d);
    SLHTriple g(OperatorMatrix(n, n, d, std::move(s)), OperatorMatrix(n, 1, d, std::move(l)),
                Operator(std::move(h)));
    require(validate(g, tol_), path);
    return g;
  }

  StratonovichCoefficients stratonovich(const Json& obj, const std::string& path) const {
    const Index n = positive_int(obj, path, "n");
    const Index d = positive_int(obj, path, "dim");
    if (static_cast<std::size_t>(n * d) > kMaxDimension) fail(path, "n * dim exceeds limit");
    StratonovichCoefficients c{
        OperatorMatrix(n, n, d, matrix(field(obj, path, "E"), path + ".E", n * d, n * d)),
        OperatorMatrix(n, 1, d, matrix(field(obj, path, "Evec"), path + ".Evec", n * d, d)),
        Operator(matrix(field(obj, path, "E00"), path + ".E00", d, d))};
    require(validate(c, tol_), path);
    return c;
  }

  FermiSLH fermi(const Json& obj, const std::string& path) const {
    SLHTriple g = slh(field(obj, path, "slh"), path + ".slh");
    Matrix eta = matrix(field(obj, path, "eta"), path + ".eta", g.dim(), g.dim());
    try {
      return FermiSLH{std::move(g), ParityContext(Operator(std::move(eta)), tol_)};
    } catch (const InvariantError& e) {
      throw InvariantError(source_ + ": " + path + ".eta: " + e.what());
    }
  }

  PortRef port(const Json& v, const std::string& path, const char* direction) const {
    // Accepts [comp, k] or [comp, "in"/"out", k].
    if (!v.is_array() || (v.size() != 2 && v.size() != 3) || !v[0].is_string()) {
      fail(path, "expected [component, port] or [component, \"in\"|\"out\", port]");
    }
    if (v.size() == 3 && (!v[1].is_string() || v[1].get<std::string>() != direction)) {
      fail(path, std::string("expected direction \"") + direction + "\"");
    }
    const Json& k = v[v.size() - 1];
    if (!k.is_number_integer() || k.get<long long>() < 0) fail(path, "port must be an integer >= 0");
    return PortRef{v[0].get<std::string>(), static_cast<Index>(k.get<long long>())};
  }

  std::vector<PortRef> ports(const Json& obj, const std::string& path, const char* key,
                             const char* direction) const {
    const Json& arr = field(obj, path, key);
    if (!arr.is_array()) fail(path + "." + key, "expected an array of ports");
    std::vector<PortRef> out;
    for (std::size_t i = 0; i < arr.size(); ++i) {
      out.push_back(port(arr[i], path + "." + key + "[" + std::to_string(i) + "]", direction));
    }
    return out;
  }

  NetworkSpec network(const Json& obj, const std::string& path) const {
    NetworkSpec spec;
    const Json& comps = field(obj, path, "components");
    if (!comps.is_object() || comps.empty()) fail(path + ".components", "expected a non-empty object");
    for (auto it = comps.begin(); it != comps.end(); ++it) {
      spec.components.push_back(
          NamedComponent{it.key(), slh(it.value(), path + ".components." + it.key())});
    }
    const Json& edges = field(obj, path, "edges");
    if (!edges.is_array()) fail(path + ".edges", "expected an array");
    for (std::size_t i = 0; i < edges.size(); ++i) {
      const std::string ep = path + ".edges[" + std::to_string(i) + "]";
      const Json& e = edges[i];
      if (!e.is_array() || e.size() != 2) fail(ep, "expected [[comp, \"out\", k], [comp, \"in\", j]]");
      spec.internal_edges.push_back(Edge{port(e[0], ep + "[0]", "out"), port(e[1], ep + "[1]", "in")});
    }
    spec.external_inputs = ports(obj, path, "inputs", "in");
    spec.external_outputs = ports(obj, path, "outputs", "out");
    if (auto it = obj.find("space"); it != obj.end()) {
      if (*it == "tensor") spec.space = SystemSpace::tensor;
      else if (*it == "shared") spec.space = SystemSpace::shared;
      else fail(path + ".space", "expected \"tensor\" or \"shared\"");
    }
    try {
      validate(spec);
    } catch (const NetworkError& e) {
      throw NetworkError(source_ + ": " + path + ": " + e.what());
    }
    return spec;
  }

  LinearPassive linear(const Json& obj, const std::string& path) const {
    const Index n = positive_int(obj, path, "n");
    const Index m = positive_int(obj, path, "modes", 0);
    LinearPassive c;
    c.S = matrix(field(obj, path, "S"), path + ".S", n, n);
    c.C = matrix(field(obj, path, "C"), path + ".C", n, m);
    c.Omega = matrix(field(obj, path, "Omega"), path + ".Omega", m, m);
    try {
      validate(c, tol_);
    } catch (const InvariantError& e) {
      throw InvariantError(source_ + ": " + path + "." + e.what());
    }
    return c;
  }

  const std::string& source() const { return source_; }

 private:
  std::string source_;
  double tol_;
};

constexpr std::array<const char*, 5> kKindKeys = {"slh", "stratonovich", "fermi", "network",
                                                  "linear"};

void append_number(std::string& out, double v) { out += format_number(v); }

void append_matrix(std::string& out, const Matrix& m, const char* indent) {
  out += "[";
  for (Index i = 0; i < m.rows(); ++i) {
    out += i == 0 ? "\n" : ",\n";
    out += indent;
    out += "  [";
    for (Index j = 0; j < m.cols(); ++j) {
      if (j > 0) out += ", ";
      out += "[";
      append_number(out, m(i, j).real());
      out += ", ";
      append_number(out, m(i, j).imag());
      out += "]";
    }
    out += "]";
  }
  out += "\n";
  out += indent;
  out += "]";
}

std::string write_block(const char* kind, Index n, Index d,
                        std::initializer_list<std::pair<const char*, const Matrix*>> fields) {
  std::string out = "{\n  \"version\": 1,\n  \"";
  out += kind;
  out += "\": {\n    \"n\": " + std::to_string(n) + ",\n    \"dim\": " + std::to_string(d);
  for (const auto& [name, m] : fields) {
    out += ",\n    \"";
    out += name;
    out += "\": ";
    append_matrix(out, *m, "    ");
  }
  out += "\n  }\n}\n";
  return out;
}

}  // namespace

std::string_view to_string(ModelKind kind) { return kKindKeys[static_cast<std::size_t>(kind)]; }

ModelFile parse_model_text(std::string_view text, double tol, std::string_view source) {
  const Json doc = parse_json(text, source);
  Reader r(std::string(source), tol);
  if (!doc.is_object()) r.fail("$", "expected a JSON object");

  if (auto it = doc.find("version"); it != doc.end()) {
    if (!it->is_number_integer() || it->get<int>() != kFormatVersion) {
      r.fail("version", "unsupported format version (expected 1)");
    }
  }
  std::size_t found = 0;
  std::size_t which = 0;
  for (std::size_t k = 0; k < kKindKeys.size(); ++k) {
    if (doc.contains(kKindKeys[k])) {
      ++found;
      which = k;
    }
  }
  if (found != 1) {
    r.fail("$", "expected exactly one of \"slh\", \"stratonovich\", \"fermi\", \"network\", \"linear\"");
  }
  for (auto it = doc.begin(); it != doc.end(); ++it) {
    if (it.key() != "version" && it.key() != kKindKeys[which]) r.fail(it.key(), "unknown field");
  }

  const Json& block = doc[kKindKeys[which]];
  const std::string path = kKindKeys[which];
  switch (static_cast<ModelKind>(which)) {
    case ModelKind::slh: return ModelFile{kFormatVersion, r.slh(block, path)};
    case ModelKind::stratonovich: return ModelFile{kFormatVersion, r.stratonovich(block, path)};
    case ModelKind::fermi: return ModelFile{kFormatVersion, r.fermi(block, path)};
    case ModelKind::network: return ModelFile{kFormatVersion, r.network(block, path)};
    case ModelKind::linear: break;
  }
  return ModelFile{kFormatVersion, r.linear(block, path)};
}

ModelFile parse_model(const std::filesystem::path& path, double tol) {
  return parse_model_text(read_file(path), tol, path.string());
}

std::vector<NamedObservable> parse_observables_text(std::string_view text,
                                                    std::string_view source) {
  const Json doc = parse_json(text, source);
  Reader r(std::string(source), kDefaultTol);
  const Json& obs = r.field(doc, "$", "observables");
  if (!obs.is_object()) r.fail("observables", "expected an object of named matrices");
  std::vector<NamedObservable> out;
  for (auto it = obs.begin(); it != obs.end(); ++it) {
    const std::string p = "observables." + it.key();
    const Json& m = it.value();
    if (!m.is_array() || m.empty()) r.fail(p, "expected a square matrix");
    const auto d = static_cast<Index>(m.size());
    out.push_back(NamedObservable{it.key(), Operator(r.matrix(m, p, d, d))});
  }
  return out;
}

std::vector<NamedObservable> parse_observables(const std::filesystem::path& path) {
  return parse_observables_text(read_file(path), path.string());
}

DensityMatrix parse_state_text(std::string_view text, std::string_view source) {
  const Json doc = parse_json(text, source);
  Reader r(std::string(source), kDefaultTol);
  if (!doc.is_object()) r.fail("$", "expected a JSON object");
  if (auto it = doc.find("rho0"); it != doc.end()) {
    if (!it->is_array() || it->empty()) r.fail("rho0", "expected a square matrix");
    const auto d = static_cast<Index>(it->size());
    try {
      return DensityMatrix(Operator(r.matrix(*it, "rho0", d, d)));
    } catch (const InvariantError& e) {
      throw InvariantError(std::string(source) + ": rho0: " + e.what());
    }
  }
  if (auto it = doc.find("psi0"); it != doc.end()) {
    if (!it->is_array() || it->empty()) r.fail("psi0", "expected a vector of [re, im] pairs");
    Eigen::VectorXcd psi(static_cast<Index>(it->size()));
    for (std::size_t k = 0; k < it->size(); ++k) {
      psi(static_cast<Index>(k)) = r.pair((*it)[k], "psi0[" + std::to_string(k) + "]");
    }
    return DensityMatrix::pure(psi);
  }
  r.fail("$", "expected \"rho0\" or \"psi0\"");
}

DensityMatrix parse_state(const std::filesystem::path& path) {
  return parse_state_text(read_file(path), path.string());
}

std::string format_number(double value) {
  if (value == 0.0) return "0";
  std::array<char, 32> buf{};
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), value);
  return std::string(buf.data(), res.ptr);
}

std::string write_model(const SLHTriple& g) {
  return write_block("slh", g.channels(), g.dim(),
                     {{"S", &g.S().flat()}, {"L", &g.L().flat()}, {"H", &g.H().matrix()}});
}

std::string write_model(const StratonovichCoefficients& c) {
  return write_block("stratonovich", c.channels(), c.dim(),
                     {{"E", &c.E.flat()}, {"Evec", &c.Evec.flat()}, {"E00", &c.E00.matrix()}});
}

namespace {

void append_csv(std::string& out, const char* name, const Matrix& m) {
  for (Index i = 0; i < m.rows(); ++i) {
    for (Index j = 0; j < m.cols(); ++j) {
      out += name;
      out += "," + std::to_string(i) + "," + std::to_string(j) + ",";
      out += format_number(m(i, j).real());
      out += ",";
      out += format_number(m(i, j).imag());
      out += "\n";
    }
  }
}

}  // namespace

std::string write_csv(const SLHTriple& g) {
  std::string out = "block,row,col,re,im\n";
  append_csv(out, "S", g.S().flat());
  append_csv(out, "L", g.L().flat());
  append_csv(out, "H", g.H().matrix());
  return out;
}

std::string write_csv(const StratonovichCoefficients& c) {
  std::string out = "block,row,col,re,im\n";
  append_csv(out, "E", c.E.flat());
  append_csv(out, "Evec", c.Evec.flat());
  append_csv(out, "E00", c.E00.matrix());
  return out;
}

}  // namespace qnet::io
