#include <cstdio>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "qcoex/coexistence.hpp"
#include "qcoex/io.hpp"
#include "qcoex/linalg.hpp"

namespace {

using qcoex::io::json;

// Stable exit-code contract.
constexpr int kExitFeasible = 0;
constexpr int kExitInfeasible = 1;
constexpr int kExitInvalidObject = 2;
constexpr int kExitParseError = 3;
constexpr int kExitUndecided = 4;
constexpr int kExitDimensionMismatch = 5;

int exit_code_for(const qcoex::Verdict v) {
  switch (v) {
    case qcoex::Verdict::Feasible:
      return kExitFeasible;
    case qcoex::Verdict::Infeasible:
      return kExitInfeasible;
    default:
      return kExitUndecided;
  }
}

struct Flags {
  double tol_feas = 1e-7;
  double tol_infeas = 1e-5;
  long max_iter = 20000;
  bool lenient = false;
  std::string method = "auto";
  std::string witness_path;
  bool effects_only = false;
  std::string batch_manifest;
};

qcoex::DecisionMethod parse_method(const std::string& m) {
  if (m == "auto") return qcoex::DecisionMethod::Auto;
  if (m == "closed-form-only") return qcoex::DecisionMethod::ClosedFormOnly;
  if (m == "solver-only") return qcoex::DecisionMethod::SolverOnly;
  throw qcoex::ParseError("unknown method: " + m);
}

int cmd_validate(const std::string& input, bool lenient) {
  const json doc = qcoex::io::parse_file(input);
  std::string repair;
  const qcoex::Operation op = qcoex::io::operation_from_document(doc, lenient, &repair);

  double herm_residual = 0.0;
  if (doc.is_object() && doc.contains("choi"))
    herm_residual =
        qcoex::hermiticity_residual(qcoex::io::matrix_from_json(doc.at("choi"), "choi"));
  const double min_choi_eig = qcoex::min_eigenvalue(op.choi());
  const qcoex::CMatrix margin =
      qcoex::CMatrix::identity(op.dim()) -
      qcoex::partial_trace_first(op.choi(), op.dim()) * qcoex::complexd(op.dim(), 0.0);

  std::printf("valid operation (dim = %zu, kraus rank = %zu)\n", op.dim(), op.kraus_rank());
  std::printf("  hermiticity residual : %.6e\n", herm_residual);
  std::printf("  min Choi eigenvalue  : %.6e\n", min_choi_eig);
  std::printf("  trace-bound margin   : %.6e\n", qcoex::min_eigenvalue(margin));
  if (lenient && !repair.empty()) std::printf("  lenient repairs      : %s\n", repair.c_str());
  return 0;
}

int cmd_convert(const std::string& input, const std::string& to, const std::string& output,
                bool lenient) {
  const qcoex::Operation op = qcoex::io::load_operation_file(input, lenient);
  if (to == "kraus") {
    qcoex::io::write_file(output, qcoex::io::operation_to_kraus_document(op));
  } else if (to == "choi") {
    qcoex::io::write_file(output, qcoex::io::operation_to_choi_document(op));
  } else {
    throw qcoex::ParseError("convert target must be 'kraus' or 'choi'");
  }
  return 0;
}

int cmd_effect(const std::string& input, const std::string& output, bool lenient) {
  const qcoex::Operation op = qcoex::io::load_operation_file(input, lenient);
  const json doc = qcoex::io::effect_to_document(op.induced_effect());
  if (output.empty())
    std::cout << doc.dump(2) << "\n";
  else
    qcoex::io::write_file(output, doc);
  return 0;
}

int cmd_apply(const std::string& input, const std::string& state_path,
              const std::string& output, bool lenient) {
  const qcoex::Operation op = qcoex::io::load_operation_file(input, lenient);
  const qcoex::DensityState rho = qcoex::io::load_state_file(state_path);
  const auto result = op.apply(rho);
  std::printf("probability = %.12g\n", result.probability);
  if (result.conditional) {
    const json doc = qcoex::io::state_to_document(*result.conditional);
    if (output.empty())
      std::cout << doc.dump(2) << "\n";
    else
      qcoex::io::write_file(output, doc);
  } else {
    std::printf("no conditional state (probability below floor)\n");
  }
  return 0;
}

int coexist_pair(const std::string& path_a, const std::string& path_b, const Flags& flags,
                 json* out_doc) {
  const qcoex::Operation a = qcoex::io::load_operation_file(path_a, flags.lenient);
  const qcoex::Operation b = qcoex::io::load_operation_file(path_b, flags.lenient);
  if (a.dim() != b.dim())
    throw qcoex::DimensionMismatch("input operations have different dimensions");

  qcoex::SolverOptions options;
  options.tol_feas = flags.tol_feas;
  options.tol_infeas = flags.tol_infeas;
  options.max_iter = flags.max_iter;

  qcoex::CoexistenceDecision dec;
  if (flags.effects_only) {
    dec = qcoex::effects_coexistent(a.induced_effect(), b.induced_effect(), options);
  } else {
    dec = qcoex::operations_coexistent(a, b, parse_method(flags.method), options);
  }

  qcoex::io::DecisionContext ctx;
  ctx.options = options;
  ctx.input_a_digest = qcoex::io::file_digest(path_a);
  ctx.input_b_digest = qcoex::io::file_digest(path_b);
  *out_doc = qcoex::io::decision_to_document(dec, ctx);

  if (!flags.witness_path.empty() && dec.witness)
    qcoex::io::write_file(flags.witness_path, qcoex::io::instrument_to_document(*dec.witness));
  return exit_code_for(dec.verdict);
}

int cmd_coexist(const std::string& path_a, const std::string& path_b, const Flags& flags) {
  if (!flags.batch_manifest.empty()) {
    const json manifest = qcoex::io::parse_file(flags.batch_manifest);
    if (!manifest.is_object() || !manifest.contains("pairs") ||
        !manifest.at("pairs").is_array())
      throw qcoex::ParseError("batch manifest must contain a 'pairs' array");
    std::printf("%-4s %-28s %-28s %-11s %s\n", "#", "a", "b", "verdict", "method");
    std::size_t index = 0;
    for (const auto& pair : manifest.at("pairs")) {
      std::string verdict = "error";
      std::string method;
      try {
        if (!pair.is_object() || !pair.contains("a") || !pair.contains("b"))
          throw qcoex::ParseError("each pair needs 'a' and 'b' paths");
        json doc;
        coexist_pair(pair.at("a").get<std::string>(), pair.at("b").get<std::string>(),
                     flags, &doc);
        verdict = doc.at("verdict").get<std::string>();
        method = doc.at("method").get<std::string>();
      } catch (const std::exception& e) {
        method = e.what();
      }
      std::printf("%-4zu %-28s %-28s %-11s %s\n", index,
                  pair.value("a", std::string("?")).c_str(),
                  pair.value("b", std::string("?")).c_str(), verdict.c_str(),
                  method.c_str());
      ++index;
    }
    return 0;
  }
  if (path_a.empty() || path_b.empty())
    throw qcoex::ParseError("coexist needs two operation files (or --batch)");
  json doc;
  const int code = coexist_pair(path_a, path_b, flags, &doc);
  std::cout << doc.dump(2) << "\n";
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"qcoex: quantum operation representations and coexistence decisions"};
  app.require_subcommand(1);

  Flags flags;
  app.add_option("--tol-feas", flags.tol_feas, "feasibility tolerance");
  app.add_option("--tol-infeas", flags.tol_infeas, "infeasibility gap threshold");
  app.add_option("--max-iter", flags.max_iter, "solver iteration cap");
  app.add_flag("--lenient", flags.lenient, "clip small invariant violations on load");
  app.fallthrough();

  std::string input, input_b, state_path, output, to;

  auto* validate = app.add_subcommand("validate", "check an operation document");
  validate->add_option("input", input)->required();

  auto* convert = app.add_subcommand("convert", "convert between kraus and choi form");
  convert->add_option("input", input)->required();
  convert->add_option("--to", to, "target representation: kraus|choi")->required();
  convert->add_option("--output,-o", output, "output path")->required();

  auto* effect = app.add_subcommand("effect", "extract the induced effect");
  effect->add_option("input", input)->required();
  effect->add_option("--output,-o", output, "output path (default: stdout)");

  auto* apply = app.add_subcommand("apply", "apply an operation to a state");
  apply->add_option("input", input)->required();
  apply->add_option("state", state_path)->required();
  apply->add_option("--out", output, "conditional state output path");

  auto* coexist = app.add_subcommand("coexist", "decide coexistence of two operations");
  coexist->add_option("input_a", input);
  coexist->add_option("input_b", input_b);
  coexist->add_option("--method", flags.method, "auto|closed-form-only|solver-only");
  coexist->add_option("--witness", flags.witness_path, "write witness instrument here");
  coexist->add_flag("--effects-only", flags.effects_only,
                    "decide coexistence of the induced effects instead");
  coexist->add_option("--batch", flags.batch_manifest, "manifest of input pairs");

  CLI11_PARSE(app, argc, argv);

  try {
    if (validate->parsed()) return cmd_validate(input, flags.lenient);
    if (convert->parsed()) return cmd_convert(input, to, output, flags.lenient);
    if (effect->parsed()) return cmd_effect(input, output, flags.lenient);
    if (apply->parsed()) return cmd_apply(input, state_path, output, flags.lenient);
    if (coexist->parsed()) return cmd_coexist(input, input_b, flags);
  } catch (const qcoex::ParseError& e) {
    std::fprintf(stderr, "parse error: %s\n", e.what());
    return kExitParseError;
  } catch (const qcoex::DimensionMismatch& e) {
    std::fprintf(stderr, "dimension mismatch: %s\n", e.what());
    return kExitDimensionMismatch;
  } catch (const qcoex::Error& e) {
    std::fprintf(stderr, "invalid input: %s\n", e.what());
    return kExitInvalidObject;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitInvalidObject;
  }
  return 0;
}
