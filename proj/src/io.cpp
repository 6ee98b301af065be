#include "qcoex/io.hpp"

#include <cstdint>
#include <fstream>
#include <set>
#include <sstream>

#include "qcoex/linalg.hpp"

namespace qcoex {
namespace io {

namespace {

void require_fields(const json& obj, const std::set<std::string>& required,
                    const std::set<std::string>& optional, const std::string& context) {
  if (!obj.is_object()) throw ParseError(context + ": expected a JSON object");
  for (const auto& [key, value] : obj.items()) {
    if (!required.count(key) && !optional.count(key))
      throw ParseError(context + ": unknown field '" + key + "'");
  }
  for (const auto& key : required) {
    if (!obj.contains(key))
      throw ParseError(context + ": missing required field '" + key + "'");
  }
}

void check_schema_version(const json& doc, const std::string& context) {
  if (!doc.at("schema_version").is_string() ||
      doc.at("schema_version").get<std::string>() != kSchemaVersion)
    throw ParseError(context + ": unsupported schema_version");
}

std::size_t read_dim(const json& doc, const std::string& context) {
  const json& j = doc.at("dim");
  if (!j.is_number_integer() || j.get<long long>() <= 0)
    throw ParseError(context + ": 'dim' must be a positive integer");
  return static_cast<std::size_t>(j.get<long long>());
}

complexd complex_from_json(const json& j, const std::string& context) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
    throw ParseError(context + ": complex scalar must be a [re, im] pair");
  return complexd(j[0].get<double>(), j[1].get<double>());
}

CMatrix square_matrix_from_json(const json& j, std::size_t dim,
                                const std::string& context) {
  CMatrix m = matrix_from_json(j, context);
  if (m.rows() != dim || m.cols() != dim)
    throw ParseError(context + ": matrix shape does not match 'dim'");
  return m;
}

// Clip Choi eigenvalues within 10x tol and renormalize the trace bound.
Operation repair_choi(std::size_t dim, const CMatrix& choi, double tol,
                      std::string* note) {
  std::ostringstream repairs;
  CMatrix xi = hermitize(choi);
  if (hermiticity_residual(choi) > tol) {
    if (hermiticity_residual(choi) > 10.0 * tol)
      throw InvalidOperation("Choi operator is not Hermitian within lenient tolerance");
    repairs << "symmetrized Choi operator; ";
  }
  const double min_eig = min_eigenvalue(xi);
  if (min_eig < 0.0) {
    if (min_eig < -10.0 * tol * std::max(1.0, xi.frobenius_norm()))
      throw InvalidOperation("Choi operator is not positive within lenient tolerance");
    xi = psd_part(xi);
    repairs << "clipped negative Choi eigenvalues; ";
  }
  const CMatrix margin =
      CMatrix::identity(dim) - partial_trace_first(xi, dim) * complexd(dim, 0.0);
  const double worst = -min_eigenvalue(margin);
  if (worst > 0.0) {
    if (worst > 10.0 * tol) throw TraceBoundViolated("trace bound violated beyond lenient tolerance");
    xi = xi * complexd(1.0 / (1.0 + worst), 0.0);
    repairs << "rescaled to restore the trace bound; ";
  }
  if (note) *note = repairs.str();
  return Operation::from_choi(dim, xi, tol);
}

}  // namespace

json matrix_to_json(const CMatrix& m) {
  json rows = json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (std::size_t j = 0; j < m.cols(); ++j)
      row.push_back(json::array({m(i, j).real(), m(i, j).imag()}));
    rows.push_back(std::move(row));
  }
  return rows;
}

CMatrix matrix_from_json(const json& j, const std::string& context) {
  if (!j.is_array() || j.empty()) throw ParseError(context + ": matrix must be a nonempty array of rows");
  const std::size_t rows = j.size();
  if (!j[0].is_array() || j[0].empty())
    throw ParseError(context + ": matrix rows must be nonempty arrays");
  const std::size_t cols = j[0].size();
  CMatrix m(rows, cols);
  for (std::size_t i = 0; i < rows; ++i) {
    if (!j[i].is_array() || j[i].size() != cols)
      throw ParseError(context + ": ragged matrix rows");
    for (std::size_t k = 0; k < cols; ++k)
      m(i, k) = complex_from_json(j[i][k], context);
  }
  if (!m.all_finite()) throw ParseError(context + ": non-finite matrix entry");
  return m;
}

Operation operation_from_document(const json& doc, bool lenient, std::string* repair_note) {
  require_fields(doc, {"schema_version", "dim"}, {"kraus", "choi", "constructor"},
                 "operation document");
  check_schema_version(doc, "operation document");
  const std::size_t dim = read_dim(doc, "operation document");
  const int sources = static_cast<int>(doc.contains("kraus")) +
                      static_cast<int>(doc.contains("choi")) +
                      static_cast<int>(doc.contains("constructor"));
  if (sources != 1)
    throw ParseError(
        "operation document: exactly one of 'kraus', 'choi', 'constructor' required");

  const double tol = kOpTol * 10;

  if (doc.contains("kraus")) {
    const json& jk = doc.at("kraus");
    if (!jk.is_array() || jk.empty())
      throw ParseError("operation document: 'kraus' must be a nonempty array");
    std::vector<CMatrix> kraus;
    for (const auto& jm : jk) kraus.push_back(square_matrix_from_json(jm, dim, "kraus"));
    if (!lenient) return Operation::from_kraus(kraus, tol);
    return repair_choi(dim, Operation::from_kraus(kraus, 1.0).choi(), tol, repair_note);
  }
  if (doc.contains("choi")) {
    CMatrix xi = matrix_from_json(doc.at("choi"), "choi");
    if (xi.rows() != dim * dim || xi.cols() != dim * dim)
      throw ParseError("choi: matrix shape must be dim^2 x dim^2");
    if (!lenient) return Operation::from_choi(dim, xi, tol);
    return repair_choi(dim, xi, tol, repair_note);
  }

  const json& ctor = doc.at("constructor");
  require_fields(ctor, {"kind"}, {"effect", "state", "unitary", "lambda", "operation"},
                 "constructor");
  if (!ctor.at("kind").is_string()) throw ParseError("constructor: 'kind' must be a string");
  const std::string kind = ctor.at("kind").get<std::string>();
  if (kind == "luders") {
    require_fields(ctor, {"kind", "effect"}, {}, "luders constructor");
    return luders(Effect(dim, square_matrix_from_json(ctor.at("effect"), dim, "effect"), tol));
  }
  if (kind == "preparator") {
    require_fields(ctor, {"kind", "effect", "state"}, {}, "preparator constructor");
    return preparator(
        Effect(dim, square_matrix_from_json(ctor.at("effect"), dim, "effect"), tol),
        DensityState(dim, square_matrix_from_json(ctor.at("state"), dim, "state"), tol));
  }
  if (kind == "unitary") {
    require_fields(ctor, {"kind", "unitary"}, {}, "unitary constructor");
    return unitary_channel(square_matrix_from_json(ctor.at("unitary"), dim, "unitary"), tol);
  }
  if (kind == "null") {
    require_fields(ctor, {"kind"}, {}, "null constructor");
    return null_operation(dim);
  }
  if (kind == "scaled") {
    require_fields(ctor, {"kind", "lambda", "operation"}, {}, "scaled constructor");
    if (!ctor.at("lambda").is_number())
      throw ParseError("scaled constructor: 'lambda' must be a number");
    return scale(operation_from_document(ctor.at("operation"), lenient, repair_note),
                 ctor.at("lambda").get<double>());
  }
  throw ParseError("constructor: unknown kind '" + kind + "'");
}

Operation load_operation_file(const std::string& path, bool lenient,
                              std::string* repair_note) {
  return operation_from_document(parse_file(path), lenient, repair_note);
}

json operation_to_choi_document(const Operation& op) {
  json doc;
  doc["schema_version"] = kSchemaVersion;
  doc["dim"] = op.dim();
  doc["choi"] = matrix_to_json(op.choi());
  return doc;
}

json operation_to_kraus_document(const Operation& op) {
  json doc;
  doc["schema_version"] = kSchemaVersion;
  doc["dim"] = op.dim();
  json kraus = json::array();
  for (const auto& x : op.to_kraus()) kraus.push_back(matrix_to_json(x));
  doc["kraus"] = std::move(kraus);
  return doc;
}

DensityState state_from_document(const json& doc) {
  require_fields(doc, {"schema_version", "dim", "matrix"}, {}, "state document");
  check_schema_version(doc, "state document");
  const std::size_t dim = read_dim(doc, "state document");
  return DensityState(dim, square_matrix_from_json(doc.at("matrix"), dim, "state matrix"),
                      10 * kOpTol);
}

DensityState load_state_file(const std::string& path) {
  return state_from_document(parse_file(path));
}

json state_to_document(const DensityState& rho) {
  json doc;
  doc["schema_version"] = kSchemaVersion;
  doc["dim"] = rho.dim();
  doc["matrix"] = matrix_to_json(rho.matrix());
  return doc;
}

json effect_to_document(const Effect& a) {
  json doc;
  doc["schema_version"] = kSchemaVersion;
  doc["dim"] = a.dim();
  doc["matrix"] = matrix_to_json(a.matrix());
  return doc;
}

json instrument_to_document(const Instrument& instrument) {
  json doc;
  doc["schema_version"] = kSchemaVersion;
  doc["dim"] = instrument.dim();
  json outcomes = json::array();
  for (const auto& [label, op] : instrument.outcomes()) {
    json entry;
    entry["label"] = label;
    entry["operation"] = operation_to_choi_document(op);
    outcomes.push_back(std::move(entry));
  }
  doc["outcomes"] = std::move(outcomes);
  return doc;
}

json decision_to_document(const CoexistenceDecision& dec, const DecisionContext& ctx,
                          bool include_witness) {
  json doc;
  doc["schema_version"] = kSchemaVersion;
  doc["verdict"] = to_string(dec.verdict);
  doc["method"] = dec.method;
  doc["tolerances"] = {{"tol_feas", ctx.options.tol_feas},
                       {"tol_infeas", ctx.options.tol_infeas},
                       {"max_iter", ctx.options.max_iter}};
  doc["iterations"] = dec.evidence.iterations;
  doc["residual"] = dec.evidence.residual;
  doc["gap_estimate"] = dec.evidence.gap_estimate;
  doc["violated_constraint"] = dec.evidence.violated_constraint;
  if (include_witness && dec.witness) doc["witness"] = instrument_to_document(*dec.witness);
  doc["provenance"] = {{"tool_version", kToolVersion},
                       {"input_a_digest", ctx.input_a_digest},
                       {"input_b_digest", ctx.input_b_digest}};
  return doc;
}

json parse_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open file: " + path);
  json doc;
  try {
    doc = json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string("JSON parse error in ") + path + ": " + e.what());
  }
  return doc;
}

void write_file(const std::string& path, const json& doc) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write file: " + path);
  out << doc.dump(2) << "\n";
}

std::string file_digest(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open file: " + path);
  std::uint64_t h = 1469598103934665603ull;
  char c;
  while (in.get(c)) {
    h ^= static_cast<unsigned char>(c);
    h *= 1099511628211ull;
  }
  std::ostringstream os;
  os << "fnv1a64:" << std::hex << h;
  return os.str();
}

}  // namespace io
}  // namespace qcoex
