#include "chanres/serialize.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

namespace chanres {

namespace {

using nlohmann::json;

json complex_to_json(const Complex& z) { return json::array({z.real(), z.imag()}); }

Complex complex_from_json(const json& j) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
    throw ParseError("complex scalar must be [re, im]");
  return Complex(j[0].get<double>(), j[1].get<double>());
}

json matrix_to_json(const Matrix& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j)
      row.push_back(complex_to_json(m(i, j)));
    rows.push_back(std::move(row));
  }
  return rows;
}

Matrix matrix_from_json(const json& j) {
  if (!j.is_array() || j.empty()) throw ParseError("matrix must be a 2d array");
  const Eigen::Index rows = Eigen::Index(j.size());
  const Eigen::Index cols = Eigen::Index(j[0].size());
  Matrix m(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    if (!j[r].is_array() || Eigen::Index(j[r].size()) != cols)
      throw ParseError("matrix rows must have equal length");
    for (Eigen::Index c = 0; c < cols; ++c)
      m(r, c) = complex_from_json(j[r][c]);
  }
  return m;
}

json parse_document(const std::string& text) {
  json j = json::parse(text, nullptr, /*allow_exceptions=*/false);
  if (j.is_discarded()) throw ParseError("invalid JSON document");
  return j;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ParseError("cannot write file: " + path);
  out << text;
}

}  // namespace

std::string channel_to_json(const Channel& c) {
  json j;
  j["version"] = 1;
  j["dim_in"] = c.dim_in();
  j["dim_out"] = c.dim_out();
  j["repr"] = "choi";
  j["data"] = matrix_to_json(c.choi());
  if (!c.label().empty()) j["label"] = c.label();
  return j.dump(2) + "\n";
}

std::string repr_to_json(const ChannelRepr& repr, const std::string& label) {
  json j;
  j["version"] = 1;
  if (const auto* k = std::get_if<KrausRepr>(&repr)) {
    j["dim_in"] = int(k->operators.front().cols());
    j["dim_out"] = int(k->operators.front().rows());
    j["repr"] = "kraus";
    json ops = json::array();
    for (const Matrix& m : k->operators) ops.push_back(matrix_to_json(m));
    j["data"] = std::move(ops);
  } else if (const auto* u = std::get_if<UnitaryRepr>(&repr)) {
    j["dim_in"] = int(u->u.rows());
    j["dim_out"] = int(u->u.rows());
    j["repr"] = "unitary";
    j["data"] = matrix_to_json(u->u);
  } else if (const auto* cq = std::get_if<CqRepr>(&repr)) {
    j["dim_in"] = int(cq->outputs.size());
    j["dim_out"] = int(cq->outputs.front().rows());
    j["repr"] = "cq";
    json outs = json::array();
    for (const Matrix& m : cq->outputs) outs.push_back(matrix_to_json(m));
    j["data"] = std::move(outs);
  } else {
    const auto& ch = std::get<ChoiRepr>(repr);
    j["dim_in"] = ch.dim_in;
    j["dim_out"] = ch.dim_out;
    j["repr"] = "choi";
    j["data"] = matrix_to_json(ch.choi);
  }
  if (!label.empty()) j["label"] = label;
  return j.dump(2) + "\n";
}

Channel channel_from_json(const std::string& text) {
  json j = parse_document(text);
  if (!j.is_object()) throw ParseError("channel document must be an object");
  if (j.value("version", 0) != 1)
    throw ParseError("unsupported channel file version");
  for (const char* field : {"dim_in", "dim_out", "repr", "data"})
    if (!j.contains(field))
      throw ParseError(std::string("missing field: ") + field);
  const int din = j["dim_in"].get<int>();
  const int dout = j["dim_out"].get<int>();
  if (din < 1 || dout < 1) throw ParseError("dimensions must be positive");
  const std::string repr = j["repr"].get<std::string>();
  const std::string label = j.value("label", std::string{});

  auto expect_dims = [&](const Matrix& m, Eigen::Index r, Eigen::Index c,
                         const char* what) {
    if (m.rows() != r || m.cols() != c)
      throw ParseError(std::string(what) + ": data shape mismatch");
  };

  if (repr == "choi") {
    Matrix m = matrix_from_json(j["data"]);
    expect_dims(m, Eigen::Index(din) * dout, Eigen::Index(din) * dout, "choi");
    return Channel(din, dout, std::move(m), label);
  }
  if (repr == "unitary") {
    Matrix m = matrix_from_json(j["data"]);
    expect_dims(m, din, din, "unitary");
    if (din != dout) throw ParseError("unitary requires dim_in == dim_out");
    return Channel::from_unitary(m, label);
  }
  if (repr == "kraus") {
    if (!j["data"].is_array() || j["data"].empty())
      throw ParseError("kraus data must be a nonempty array");
    std::vector<Matrix> ops;
    for (const json& op : j["data"]) {
      Matrix m = matrix_from_json(op);
      expect_dims(m, dout, din, "kraus");
      ops.push_back(std::move(m));
    }
    return Channel::from_kraus(ops, label);
  }
  if (repr == "cq") {
    if (!j["data"].is_array() || Eigen::Index(j["data"].size()) != din)
      throw ParseError("cq data must hold dim_in output states");
    std::vector<Matrix> outs;
    for (const json& st : j["data"]) {
      Matrix m = matrix_from_json(st);
      expect_dims(m, dout, dout, "cq");
      outs.push_back(std::move(m));
    }
    return Channel::from_cq(outs, label);
  }
  throw ParseError("unknown repr: " + repr);
}

void save_channel(const Channel& c, const std::string& path) {
  write_file(path, channel_to_json(c));
}

void save_repr(const ChannelRepr& repr, const std::string& label,
               const std::string& path) {
  write_file(path, repr_to_json(repr, label));
}

Channel load_channel(const std::string& path) {
  return channel_from_json(read_file(path));
}

namespace {

json functional_to_json(const LinearFunctional& f) {
  json row;
  json triplets = json::array();
  for (const HermTriplet& t : f.k)
    triplets.push_back(
        json::array({t.row, t.col, t.value.real(), t.value.imag()}));
  row["k"] = std::move(triplets);
  row["rhs"] = f.rhs;
  return row;
}

LinearFunctional functional_from_json(const json& j) {
  LinearFunctional f;
  if (!j.contains("k") || !j["k"].is_array())
    throw ParseError("functional needs a triplet list 'k'");
  for (const json& t : j["k"]) {
    if (!t.is_array() || t.size() != 4)
      throw ParseError("functional triplet must be [row, col, re, im]");
    f.k.push_back({t[0].get<int>(), t[1].get<int>(),
                   Complex(t[2].get<double>(), t[3].get<double>())});
  }
  f.rhs = j.value("rhs", 0.0);
  return f;
}

}  // namespace

std::string spec_to_json(const FreeSetSpec& spec) {
  json j;
  j["version"] = 1;
  j["kind"] = to_string(spec.kind());
  j["dim_in"] = spec.dim_in();
  j["dim_out"] = spec.dim_out();
  switch (spec.kind()) {
    case FreeSetKind::GibbsPreserving:
      j["beta"] = spec.beta();
      j["hamiltonian"] = matrix_to_json(spec.hamiltonian_in());
      if ((spec.hamiltonian_in() - spec.hamiltonian_out()).norm() > 0.0)
        j["hamiltonian_out"] = matrix_to_json(spec.hamiltonian_out());
      break;
    case FreeSetKind::ConstantFixed:
      j["target"] = matrix_to_json(spec.target());
      break;
    case FreeSetKind::Custom: {
      json eqs = json::array();
      for (const LinearFunctional& f : spec.custom_equalities())
        eqs.push_back(functional_to_json(f));
      j["equalities"] = std::move(eqs);
      json ineqs = json::array();
      for (const LinearFunctional& f : spec.custom_inequalities())
        ineqs.push_back(functional_to_json(f));
      j["inequalities"] = std::move(ineqs);
      break;
    }
    default:
      break;
  }
  return j.dump(2) + "\n";
}

FreeSetSpec spec_from_json(const std::string& text) {
  json j = parse_document(text);
  if (!j.is_object()) throw ParseError("spec document must be an object");
  if (j.value("version", 0) != 1)
    throw ParseError("unsupported spec file version");
  const std::string kind = j.value("kind", std::string{});
  const int din = j.value("dim_in", 0);
  const int dout = j.value("dim_out", 0);
  if (din < 1 || dout < 1) throw ParseError("spec dimensions must be positive");

  if (kind == "constant") return FreeSetSpec::constant(din, dout);
  if (kind == "mio") return FreeSetSpec::mio(din, dout);
  if (kind == "maxmixed") return FreeSetSpec::max_mixed_preserving(din, dout);
  if (kind == "gibbs") {
    if (!j.contains("hamiltonian") || !j.contains("beta"))
      throw ParseError("gibbs spec needs 'hamiltonian' and 'beta'");
    Matrix h_in = matrix_from_json(j["hamiltonian"]);
    Matrix h_out =
        j.contains("hamiltonian_out") ? matrix_from_json(j["hamiltonian_out"])
                                      : h_in;
    FreeSetSpec s = FreeSetSpec::gibbs(h_in, h_out, j["beta"].get<double>());
    if (s.dim_in() != din || s.dim_out() != dout)
      throw ParseError("gibbs Hamiltonian dimensions disagree with dims");
    return s;
  }
  if (kind == "constant-to") {
    if (!j.contains("target")) throw ParseError("constant-to needs 'target'");
    return FreeSetSpec::constant_to(
        DensityMatrix(matrix_from_json(j["target"])), din);
  }
  if (kind == "custom") {
    std::vector<LinearFunctional> eqs, ineqs;
    for (const json& f : j.value("equalities", json::array()))
      eqs.push_back(functional_from_json(f));
    for (const json& f : j.value("inequalities", json::array()))
      ineqs.push_back(functional_from_json(f));
    return FreeSetSpec::custom(din, dout, std::move(eqs), std::move(ineqs));
  }
  throw ParseError("unknown free-set kind: " + kind);
}

void save_spec(const FreeSetSpec& spec, const std::string& path) {
  write_file(path, spec_to_json(spec));
}

FreeSetSpec load_spec(const std::string& path) {
  return spec_from_json(read_file(path));
}

std::string matrix_to_json_text(const Matrix& m) {
  return matrix_to_json(m).dump(2) + "\n";
}

Matrix matrix_from_json_text(const std::string& text) {
  return matrix_from_json(parse_document(text));
}

void save_matrix(const Matrix& m, const std::string& path) {
  write_file(path, matrix_to_json_text(m));
}

Matrix load_matrix(const std::string& path) {
  return matrix_from_json_text(read_file(path));
}

}  // namespace chanres
