#include "bgpc/instance_io.hpp"

#include <fstream>
#include <sstream>

namespace bgpc {

using nlohmann::json;

namespace {

template <class T>
T field(const json& j, const char* key) {
  if (!j.contains(key)) throw SchemaError(std::string("missing field '") + key + "'");
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw SchemaError(std::string("bad field '") + key + "': " + e.what());
  }
}

}  // namespace

json complex_to_json(Complex z) { return json::array({z.real(), z.imag()}); }

Complex complex_from_json(const json& j) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
    throw SchemaError("complex entries must be [re, im]");
  return {j[0].get<double>(), j[1].get<double>()};
}

json vector_to_json(const CVector& v) {
  json a = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(complex_to_json(v(i)));
  return a;
}

CVector vector_from_json(const json& j) {
  if (!j.is_array()) throw SchemaError("vector must be an array");
  CVector v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) v(static_cast<Eigen::Index>(i)) = complex_from_json(j[i]);
  return v;
}

json matrix_to_json(const CMatrix& M) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < M.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index k = 0; k < M.cols(); ++k) row.push_back(complex_to_json(M(i, k)));
    rows.push_back(std::move(row));
  }
  return rows;
}

CMatrix matrix_from_json(const json& j) {
  if (!j.is_array() || j.empty()) throw SchemaError("matrix must be a nonempty array of rows");
  const std::size_t cols = j[0].is_array() ? j[0].size() : 0;
  CMatrix M(static_cast<Eigen::Index>(j.size()), static_cast<Eigen::Index>(cols));
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_array() || j[i].size() != cols) throw SchemaError("matrix rows must have equal length");
    for (std::size_t k = 0; k < cols; ++k)
      M(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) = complex_from_json(j[i][k]);
  }
  return M;
}

json basis_to_json(const BasisDescriptor& b) {
  json params = json::object();
  using K = BasisDescriptor::Kind;
  switch (b.kind) {
    case K::Dense: params["matrix"] = matrix_to_json(b.dense); break;
    case K::DftColumns:
      params["n"] = b.n;
      params["columns"] = b.columns;
      params["scale"] = complex_to_json(b.scale);
      break;
    case K::Haar4: break;
    default: params["n"] = b.n; break;
  }
  return {{"kind", to_string(b.kind)}, {"params", params}};
}

BasisDescriptor basis_from_json(const json& j) {
  if (!j.is_object()) throw SchemaError("basis must be an object");
  const auto kind = basis_kind_from_string(field<std::string>(j, "kind"));
  const json params = j.value("params", json::object());
  using K = BasisDescriptor::Kind;
  switch (kind) {
    case K::Dense:
      if (!params.contains("matrix")) throw SchemaError("dense basis needs params.matrix");
      return BasisDescriptor::dense_matrix(matrix_from_json(params["matrix"]));
    case K::Dft: return BasisDescriptor::dft(field<int>(params, "n"));
    case K::DftColumns:
      return BasisDescriptor::dft_columns(field<int>(params, "n"), field<std::vector<int>>(params, "columns"),
                                          params.contains("scale") ? complex_from_json(params["scale"])
                                                                   : Complex(1.0, 0.0));
    case K::Dft2: return BasisDescriptor::dft2(field<int>(params, "n"));
    case K::FdInvDft: return BasisDescriptor::fd_inv_dft(field<int>(params, "n"));
    case K::Identity: return BasisDescriptor::identity(field<int>(params, "n"));
    case K::Haar4: return BasisDescriptor::haar4();
  }
  throw SchemaError("unknown basis kind");
}

json instance_to_json(const ProblemInstance& inst) {
  json j;
  j["schema_version"] = kInstanceSchemaVersion;
  j["model"] = to_string(inst.model);
  j["n"] = inst.n;
  j["m_or_s"] = inst.m_or_s;
  j["N"] = inst.N;
  j["basis"] = basis_to_json(inst.basis);
  j["lambda0"] = vector_to_json(inst.lambda0);
  j["X0"] = matrix_to_json(inst.X0);
  if (inst.support) j["support"] = inst.support->members();
  j["seed"] = inst.seed ? json(*inst.seed) : json(nullptr);
  j["rng"] = inst.rng;
  j["Y"] = matrix_to_json(inst.Y);
  return j;
}

ProblemInstance instance_from_json(const json& j) {
  if (!j.is_object()) throw SchemaError("instance must be a JSON object");
  const int version = field<int>(j, "schema_version");
  if (version != kInstanceSchemaVersion)
    throw SchemaError("unsupported schema_version " + std::to_string(version));

  const Model model = model_from_string(field<std::string>(j, "model"));
  const int n = field<int>(j, "n");
  const int m_or_s = field<int>(j, "m_or_s");
  const int N = field<int>(j, "N");
  if (!j.contains("basis") || !j.contains("lambda0") || !j.contains("X0"))
    throw SchemaError("instance needs basis, lambda0 and X0");
  BasisDescriptor basis = basis_from_json(j["basis"]);
  CVector lambda0 = vector_from_json(j["lambda0"]);
  CMatrix X0 = matrix_from_json(j["X0"]);

  std::optional<IndexSet> support;
  if (j.contains("support") && !j["support"].is_null()) support = IndexSet(n, field<std::vector<int>>(j, "support"));
  std::optional<std::uint64_t> seed;
  if (j.contains("seed") && !j["seed"].is_null()) seed = field<std::uint64_t>(j, "seed");

  ProblemInstance inst;
  try {
    inst = make_instance(model, m_or_s, std::move(basis), std::move(lambda0), std::move(X0), seed, support);
  } catch (const SchemaError&) {
    throw;
  } catch (const Error& e) {
    throw SchemaError(std::string("invalid instance: ") + e.what());
  }
  if (inst.n != n || inst.N != N) throw SchemaError("n or N disagrees with the stored matrices");
  if (j.contains("rng") && j["rng"].is_string()) inst.rng = j["rng"].get<std::string>();

  if (j.contains("Y") && !j["Y"].is_null()) {
    const CMatrix stored = matrix_from_json(j["Y"]);
    if (stored.rows() != inst.Y.rows() || stored.cols() != inst.Y.cols() ||
        max_abs(CMatrix(stored - inst.Y)) > kConstructionTol * std::max(1.0, max_abs(inst.Y)))
      throw SchemaError("stored Y does not match diag(lambda0) A X0");
  }
  return inst;
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  // Write to a sibling temp file first so an interrupted run leaves no partial output.
  const auto tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot open " + tmp + " for writing");
    out << text;
    if (!out) throw Error("write to " + tmp + " failed");
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw Error("cannot move " + tmp + " to " + path.string() + ": " + ec.message());
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void save_instance(const ProblemInstance& inst, const std::filesystem::path& path) {
  write_text_file(path, dump(instance_to_json(inst)));
}

ProblemInstance load_instance(const std::filesystem::path& path) {
  json j;
  try {
    j = json::parse(read_text_file(path));
  } catch (const json::parse_error& e) {
    throw SchemaError(path.string() + ": " + e.what());
  }
  return instance_from_json(j);
}

}  // namespace bgpc
