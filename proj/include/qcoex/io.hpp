#pragma once

#include <optional>
#include <string>

#include <json.hpp>

#include "qcoex/coexistence.hpp"
#include "qcoex/operation.hpp"

namespace qcoex {
namespace io {

using json = nlohmann::ordered_json;

inline constexpr const char* kSchemaVersion = "1";
inline constexpr const char* kToolVersion = "qcoex 0.1.0";

/// Complex scalars encode as [re, im]; matrices as row-major nested arrays.
json matrix_to_json(const CMatrix& m);
CMatrix matrix_from_json(const json& j, const std::string& context);

/// Strict document parsing: unknown fields are rejected (ParseError).
/// With lenient = true, eigenvalues within 10x the validation tolerance are
/// clipped and the trace bound renormalized; the repair is reported.
Operation operation_from_document(const json& doc, bool lenient = false,
                                  std::string* repair_note = nullptr);
Operation load_operation_file(const std::string& path, bool lenient = false,
                              std::string* repair_note = nullptr);

json operation_to_choi_document(const Operation& op);
json operation_to_kraus_document(const Operation& op);

DensityState state_from_document(const json& doc);
DensityState load_state_file(const std::string& path);
json state_to_document(const DensityState& rho);
json effect_to_document(const Effect& a);

json instrument_to_document(const Instrument& instrument);

struct DecisionContext {
  SolverOptions options;
  std::string input_a_digest;
  std::string input_b_digest;
};
json decision_to_document(const CoexistenceDecision& dec, const DecisionContext& ctx,
                          bool include_witness = true);

json parse_file(const std::string& path);
void write_file(const std::string& path, const json& doc);

/// FNV-1a 64-bit digest of the file bytes, as "fnv1a64:<hex>".
std::string file_digest(const std::string& path);

}  // namespace io
}  // namespace qcoex
