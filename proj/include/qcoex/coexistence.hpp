#pragma once

#include <optional>
#include <string>
#include <vector>

#include "qcoex/operation.hpp"

namespace qcoex {

enum class Verdict { Feasible, Infeasible, Undecided };

std::string to_string(Verdict v);

/// Diagnostics attached to every decision.
struct Evidence {
  double residual = 0.0;
  long iterations = 0;
  double gap_estimate = 0.0;
  std::string violated_constraint;
};

/// Verdict record; Feasible decisions carry a four-outcome witness instrument.
struct CoexistenceDecision {
  Verdict verdict;
  std::string method;  // trivial-sum | trivial-diff | pure-closed-form | luders |
                       // unitary | effects-necessary | solver | oracle
  std::optional<Instrument> witness;
  Evidence evidence;
};

enum class DecisionMethod { Auto, ClosedFormOnly, SolverOnly };

/// Tolerances and iteration budget for the feasibility solver.
struct SolverOptions {
  double tol_feas = 1e-7;
  double tol_infeas = 1e-5;
  long max_iter = 20000;
};

/// Convex feasibility problem for a Hermitian n x n variable X:
///   X >= L_i for each lower bound, X <= U_i for each upper bound, and
///   optionally tr_1(X) >= trace_lower (X then lives on H (x) H, dim d^2).
struct FeasibilitySpec {
  std::size_t n = 0;
  std::vector<CMatrix> lower_bounds;
  std::vector<CMatrix> upper_bounds;
  std::optional<CMatrix> trace_lower;  // d x d; requires n == d * d
  std::size_t trace_dim = 0;
  SolverOptions options;
};

struct FeasibilityOutcome {
  Verdict status;
  std::optional<CMatrix> point;
  double residual = 0.0;
  long iterations = 0;
  double gap_estimate = 0.0;
  std::string violated_constraint;
};

/// Cyclic Dykstra projections over the constraint sets.
FeasibilityOutcome solve_feasibility(const FeasibilitySpec& spec);

/// Exact Frobenius projection onto { X : tr_1(X) >= lower }:
/// X + (1/d) I (x) psd_part(lower - tr_1(X)).
CMatrix project_trace_lower(const CMatrix& x, const CMatrix& lower, std::size_t d);

/// (T1): Phi + Psi is an operation, i.e. A + B <= I.
bool is_sum_operation(const Operation& phi, const Operation& psi, double tol = kOpTol);

/// Operation partial order: Psi <= Phi iff Xi_Phi - Xi_Psi >= 0.
bool is_difference_operation(const Operation& phi, const Operation& psi,
                             double tol = kOpTol);

/// (T1)/(T2) shortcut; absent result means "not trivially coexistent", not a
/// negative verdict.
std::optional<CoexistenceDecision> trivially_coexistent(const Operation& phi,
                                                        const Operation& psi,
                                                        double tol = kOpTol);

/// Definitive verdict for two rank-1 operations: Feasible iff A + B <= I or
/// the single Kraus operators are proportional. Throws NotPure.
CoexistenceDecision pure_coexistent(const Operation& phi, const Operation& psi);

/// Closed form for Luders operations: Feasible iff A + B <= I (disjoint) or
/// A is proportional to B.
CoexistenceDecision luders_coexistent(const Effect& a, const Effect& b);

/// An operation coexists with a unitary channel only if its Choi operator is
/// lambda times the channel's, lambda in [0, 1].
CoexistenceDecision unitary_coexistent(const CMatrix& u, const Operation& phi,
                                       const SolverOptions& options = {});

/// Effect coexistence: exists G with 0 <= G <= A, G <= B, A + B - I <= G.
/// Feasible verdicts carry the preparator witness instrument with xi = I/d.
CoexistenceDecision effects_coexistent(const Effect& a, const Effect& b,
                                       const SolverOptions& options = {});

/// Full decision pipeline for two operations.
CoexistenceDecision operations_coexistent(const Operation& phi, const Operation& psi,
                                          DecisionMethod method = DecisionMethod::Auto,
                                          const SolverOptions& options = {});

/// Four-outcome witness from a feasible point xi1:
/// J1 = xi1, J2 = Xi_Phi - xi1, J3 = Xi_Psi - xi1 (PSD-clipped), and J4 a
/// single-Kraus completion restoring the channel normalization.
Instrument build_witness(const CMatrix& xi1, const Operation& phi, const Operation& psi,
                         double tol_feas = 1e-7);

/// Least-squares proportionality fit b ~= lambda * a; lambda real.
/// Returns the fitted scalar when the residual is below
/// 1e-9 * max(1, ||b||_F), absent otherwise.
std::optional<double> proportionality_factor(const CMatrix& a, const CMatrix& b);

}  // namespace qcoex
