#include "htype/io.hpp"

#include <cerrno>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace htype {

using json = nlohmann::ordered_json;

namespace {

json vector_json(const Vector& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v[i]);
  return out;
}

json matrix_rows_json(const Matrix& m) {
  json out = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) out.push_back(vector_json(m.row(r).transpose()));
  return out;
}

json matrix_columns_json(const Matrix& m) {
  json out = json::array();
  for (Eigen::Index c = 0; c < m.cols(); ++c) out.push_back(vector_json(m.col(c)));
  return out;
}

json flat_json(const Matrix& m) {
  json out = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) out.push_back(m(r, c));
  }
  return out;
}

Vector vector_from(const json& j) {
  Vector v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) v[static_cast<Eigen::Index>(i)] = j.at(i).get<double>();
  return v;
}

Matrix matrix_from_rows(const json& j) {
  const auto rows = static_cast<Eigen::Index>(j.size());
  const auto cols = rows == 0 ? Eigen::Index{0} : static_cast<Eigen::Index>(j.at(0).size());
  Matrix m(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    const json& row = j.at(static_cast<std::size_t>(r));
    if (static_cast<Eigen::Index>(row.size()) != cols) throw ParseError("ragged matrix row " + std::to_string(r));
    for (Eigen::Index c = 0; c < cols; ++c) m(r, c) = row.at(static_cast<std::size_t>(c)).get<double>();
  }
  return m;
}

Matrix matrix_from_columns(const json& j) { return matrix_from_rows(j).transpose(); }

Matrix matrix_from_flat(const json& j, int dim, const char* field) {
  if (!j.is_array() || j.size() != static_cast<std::size_t>(dim) * dim) {
    throw ParseError(std::string(field) + " must be an array of " + std::to_string(dim * dim) + " numbers");
  }
  Matrix m(dim, dim);
  for (int r = 0; r < dim; ++r) {
    for (int c = 0; c < dim; ++c) m(r, c) = j.at(static_cast<std::size_t>(r) * dim + c).get<double>();
  }
  return m;
}

json parse_json(std::string_view text) {
  try {
    return json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    throw ParseError(e.what());
  }
}

template <class F>
auto with_json_errors(F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const json::exception& e) {
    throw ParseError(e.what());
  }
}

json verdict_json(const HTypeVerdict& v) {
  json out;
  out["status"] = std::string(to_string(v.status));
  out["bracket_containment_defect"] = v.bracket_containment_defect;
  out["polarized_isometry_defect"] = v.polarized_isometry_defect;
  out["norm"] = "frobenius";
  out["center_dim"] = v.center_dim;
  out["complement_dim"] = v.complement_dim;
  if (v.containment_witness) {
    out["containment_witness"] = {{"u", vector_json(v.containment_witness->u)},
                                  {"v", vector_json(v.containment_witness->v)},
                                  {"off_center_norm", v.containment_witness->off_center_norm}};
  }
  if (v.isometry_witness) {
    out["isometry_witness"] = {{"z", vector_json(v.isometry_witness->z)},
                               {"defect", v.isometry_witness->defect}};
  }
  out["tolerance_used"] = v.tolerance_used;
  return out;
}

HTypeVerdict verdict_from(const json& j) {
  HTypeVerdict v;
  const std::string status = j.at("status").get<std::string>();
  bool known = false;
  for (VerdictStatus s : {VerdictStatus::h_type, VerdictStatus::not_h_type, VerdictStatus::degenerate}) {
    if (to_string(s) == status) {
      v.status = s;
      known = true;
    }
  }
  if (!known) throw ParseError("unknown verdict status '" + status + "'");
  v.bracket_containment_defect = j.at("bracket_containment_defect").get<double>();
  v.polarized_isometry_defect = j.at("polarized_isometry_defect").get<double>();
  v.center_dim = j.at("center_dim").get<int>();
  v.complement_dim = j.at("complement_dim").get<int>();
  if (j.contains("containment_witness")) {
    const json& w = j.at("containment_witness");
    v.containment_witness = HTypeVerdict::ContainmentWitness{vector_from(w.at("u")), vector_from(w.at("v")),
                                                             w.at("off_center_norm").get<double>()};
  }
  if (j.contains("isometry_witness")) {
    const json& w = j.at("isometry_witness");
    v.isometry_witness = HTypeVerdict::IsometryWitness{vector_from(w.at("z")), w.at("defect").get<double>()};
  }
  v.tolerance_used = j.at("tolerance_used").get<double>();
  return v;
}

}  // namespace

std::string_view to_string(Classification::Kind kind) {
  switch (kind) {
    case Classification::Kind::classification:
      return "classification";
    case Classification::Kind::obstruction:
      return "obstruction";
    case Classification::Kind::verdict:
      return "verdict";
  }
  return "unknown";
}

double default_tolerance() {
  const char* env = std::getenv("HTYPE_TOL");
  if (env == nullptr || *env == '\0') return kDefaultTolerance;
  char* end = nullptr;
  errno = 0;
  const double value = std::strtod(env, &end);
  if (errno != 0 || end == env || *end != '\0' || !(value > 0.0)) {
    throw InputError(std::string("HTYPE_TOL is not a positive decimal number: '") + env + "'");
  }
  return value;
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_text_file(const std::filesystem::path& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw InputError("cannot write '" + path.string() + "'");
  out << text;
  if (!out) throw InputError("failed writing '" + path.string() + "'");
}

AlgebraDocument parse_algebra(std::string_view text, const LoadOptions& options) {
  const json doc = parse_json(text);
  AlgebraDocument out = with_json_errors([&] {
    if (!doc.is_object()) throw ParseError("algebra document must be a JSON object");
    for (const auto& [key, _] : doc.items()) {
      if (key != "format_tag" && key != "dim" && key != "structure_constants" && key != "gram" &&
          key != "complex_structure" && key != "metadata") {
        throw ParseError("unknown field '" + key + "' (only sparse structure_constants are accepted)");
      }
    }
    const std::string tag = doc.at("format_tag").get<std::string>();
    if (tag != kAlgebraFormat) throw ParseError("unsupported format_tag '" + tag + "'");
    const int dim = doc.at("dim").get<int>();
    if (dim < 1) throw ParseError("dim must be positive");

    std::vector<StructureConstant> sc;
    for (const json& e : doc.at("structure_constants")) {
      sc.push_back({e.at("i").get<int>(), e.at("j").get<int>(), e.at("k").get<int>(), e.at("c").get<double>()});
    }
    Matrix gram = matrix_from_flat(doc.at("gram"), dim, "gram");

    AlgebraDocument d{{MetricLieAlgebra(dim, std::move(sc), std::move(gram)), std::nullopt}, {}};
    if (doc.contains("complex_structure")) {
      d.value.complex = ComplexStructure{matrix_from_flat(doc.at("complex_structure"), dim, "complex_structure")};
    }
    if (doc.contains("metadata")) {
      for (const auto& [key, value] : doc.at("metadata").items()) d.metadata[key] = value.get<std::string>();
    }
    return d;
  });

  if (options.validate) {
    for (const Defect& d : validate_algebra(out.value.algebra, options.tol)) {
      throw ValidationError(d.name, d.magnitude);
    }
    if (out.value.complex) {
      for (const Defect& d : validate_complex_structure(out.value.algebra, *out.value.complex, options.tol)) {
        throw ValidationError(d.name, d.magnitude);
      }
    }
  }
  return out;
}

std::string serialize_algebra(const StructuredAlgebra& value, const Metadata& metadata) {
  const MetricLieAlgebra& alg = value.algebra;
  json doc;
  doc["format_tag"] = std::string(kAlgebraFormat);
  doc["dim"] = alg.dim();
  json sc = json::array();
  for (const auto& e : alg.structure_constants()) sc.push_back({{"i", e.i}, {"j", e.j}, {"k", e.k}, {"c", e.c}});
  doc["structure_constants"] = std::move(sc);
  doc["gram"] = flat_json(alg.gram());
  if (value.complex) doc["complex_structure"] = flat_json(value.complex->matrix);
  if (!metadata.empty()) {
    json meta = json::object();
    for (const auto& [key, v] : metadata) meta[key] = v;
    doc["metadata"] = std::move(meta);
  }
  return doc.dump(2) + "\n";
}

AlgebraDocument load_algebra(const std::filesystem::path& path, const LoadOptions& options) {
  return parse_algebra(read_text_file(path), options);
}

void save_algebra(const StructuredAlgebra& value, const std::filesystem::path& path, const Metadata& metadata) {
  write_text_file(path, serialize_algebra(value, metadata));
}

std::string serialize_certificate(const Classification& c, double tol) {
  json doc;
  doc["format_tag"] = std::string(kCertificateFormat);
  doc["kind"] = std::string(to_string(c.kind()));
  doc["tolerance_used"] = tol;
  doc["tool_version"] = std::string(kToolVersion);

  json payload;
  if (c.result) {
    const ClassificationResult& r = *c.result;
    payload["n"] = r.n;
    payload["pivot_rule"] = std::string(to_string(r.pivot));
    payload["standard_basis"] = matrix_columns_json(r.standard_basis);
    payload["iso_matrix"] = matrix_rows_json(r.iso_matrix);
    payload["residuals"] = {{"bracket", r.residuals.bracket},
                            {"metric", r.residuals.metric},
                            {"complex_structure", r.residuals.complex_structure}};
    payload["condition_number"] = r.condition_number;
    payload["step_orthonormality"] = r.step_orthonormality;
  } else if (c.obstruction) {
    const ObstructionWitness& w = *c.obstruction;
    payload["obstruction_kind"] = std::string(to_string(w.kind));
    payload["z"] = vector_json(w.z);
    payload["w"] = vector_json(w.w);
    payload["product_norm"] = w.product_norm;
    payload["isometry_defect"] = w.isometry_defect;
  }
  payload["verdict"] = verdict_json(c.verdict);
  if (!c.diagnostic.empty()) payload["diagnostic"] = c.diagnostic;
  doc["payload"] = std::move(payload);
  return doc.dump(2) + "\n";
}

CertificateDocument parse_certificate(std::string_view text) {
  const json doc = parse_json(text);
  return with_json_errors([&] {
    const std::string tag = doc.at("format_tag").get<std::string>();
    if (tag != kCertificateFormat) throw ParseError("unsupported format_tag '" + tag + "'");
    CertificateDocument out;
    const std::string kind = doc.at("kind").get<std::string>();
    out.tolerance_used = doc.at("tolerance_used").get<double>();
    out.tool_version = doc.at("tool_version").get<std::string>();
    const json& payload = doc.at("payload");
    out.content.verdict = verdict_from(payload.at("verdict"));
    if (payload.contains("diagnostic")) out.content.diagnostic = payload.at("diagnostic").get<std::string>();

    if (kind == "classification") {
      out.kind = Classification::Kind::classification;
      ClassificationResult r;
      r.n = payload.at("n").get<int>();
      r.pivot = parse_pivot_rule(payload.at("pivot_rule").get<std::string>());
      r.standard_basis = matrix_from_columns(payload.at("standard_basis"));
      r.iso_matrix = matrix_from_rows(payload.at("iso_matrix"));
      const json& res = payload.at("residuals");
      r.residuals = {res.at("bracket").get<double>(), res.at("metric").get<double>(),
                     res.at("complex_structure").get<double>()};
      r.condition_number = payload.at("condition_number").get<double>();
      r.step_orthonormality = payload.at("step_orthonormality").get<std::vector<double>>();
      r.tolerance_used = out.tolerance_used;
      out.content.result = std::move(r);
    } else if (kind == "obstruction") {
      out.kind = Classification::Kind::obstruction;
      ObstructionWitness w;
      const std::string k = payload.at("obstruction_kind").get<std::string>();
      bool known = false;
      for (ObstructionKind candidate :
           {ObstructionKind::center_dim, ObstructionKind::isometry_failure, ObstructionKind::containment_failure}) {
        if (to_string(candidate) == k) {
          w.kind = candidate;
          known = true;
        }
      }
      if (!known) throw ParseError("unknown obstruction kind '" + k + "'");
      w.z = vector_from(payload.at("z"));
      w.w = vector_from(payload.at("w"));
      w.product_norm = payload.at("product_norm").get<double>();
      w.isometry_defect = payload.at("isometry_defect").get<double>();
      out.content.obstruction = std::move(w);
    } else if (kind == "verdict") {
      out.kind = Classification::Kind::verdict;
    } else {
      throw ParseError("unknown certificate kind '" + kind + "'");
    }
    return out;
  });
}

CertificateDocument load_certificate(const std::filesystem::path& path) {
  return parse_certificate(read_text_file(path));
}

}  // namespace htype
