#include "qcoex/coexistence.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <functional>
#include <numeric>

namespace qcoex {

namespace {

constexpr double kPropTol = 1e-9;

// Deterministic total order on equally shaped matrices, used to canonicalize
// the constraint order of the solver so decisions are argument-symmetric.
bool lex_less(const CMatrix& a, const CMatrix& b) {
  for (std::size_t i = 0; i < a.data().size(); ++i) {
    const complexd x = a.data()[i], y = b.data()[i];
    if (x.real() != y.real()) return x.real() < y.real();
    if (x.imag() != y.imag()) return x.imag() < y.imag();
  }
  return false;
}

std::optional<complexd> complex_proportionality(const CMatrix& a, const CMatrix& b) {
  const double na = a.frobenius_norm();
  if (na <= 1e-14) {
    if (b.frobenius_norm() <= kPropTol) return complexd(0.0, 0.0);
    return std::nullopt;
  }
  const complexd c = (a.adjoint() * b).trace() / complexd(na * na, 0.0);
  if (frobenius_distance(b, a * c) <= kPropTol * std::max(1.0, b.frobenius_norm()))
    return c;
  return std::nullopt;
}

double lower_violation(const CMatrix& x, const CMatrix& l) {
  return std::max(0.0, -min_eigenvalue(x - l));
}

double upper_violation(const CMatrix& x, const CMatrix& u) {
  return std::max(0.0, -min_eigenvalue(u - x));
}

CMatrix project_lower(const CMatrix& x, const CMatrix& l) {
  return l + psd_part(x - l);
}

CMatrix project_upper(const CMatrix& x, const CMatrix& u) {
  return u - psd_part(u - x);
}

struct ConstraintSet {
  std::string name;
  std::function<CMatrix(const CMatrix&)> project;
  std::function<double(const CMatrix&)> violation;
};

Instrument swap_outcomes_2_3(const Instrument& w) {
  auto out = w.outcomes();
  std::swap(out[1].second, out[2].second);
  return Instrument(w.dim(), std::move(out), 1e-5);
}

Effect induced(const Operation& op) { return op.induced_effect(); }

CoexistenceDecision closed_form_feasible(std::string method, Instrument witness) {
  CoexistenceDecision dec;
  dec.verdict = Verdict::Feasible;
  dec.method = std::move(method);
  dec.witness = std::move(witness);
  return dec;
}

}  // namespace

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::Feasible:
      return "feasible";
    case Verdict::Infeasible:
      return "infeasible";
    default:
      return "undecided";
  }
}

std::optional<double> proportionality_factor(const CMatrix& a, const CMatrix& b) {
  const auto c = complex_proportionality(a, b);
  if (!c) return std::nullopt;
  if (std::abs(c->imag()) > kPropTol * std::max(1.0, std::abs(c->real())))
    return std::nullopt;
  return c->real();
}

CMatrix project_trace_lower(const CMatrix& x, const CMatrix& lower, std::size_t d) {
  const CMatrix k = lower - partial_trace_first(x, d);
  const CMatrix corr = psd_part(k);
  if (corr.frobenius_norm() == 0.0) return x;
  return x + tensor(CMatrix::identity(d), corr) * complexd(1.0 / d, 0.0);
}

FeasibilityOutcome solve_feasibility(const FeasibilitySpec& spec) {
  const std::size_t n = spec.n;
  if (n == 0) throw MalformedSpec("feasibility spec has zero dimension");
  std::vector<ConstraintSet> sets;
  for (std::size_t i = 0; i < spec.lower_bounds.size(); ++i) {
    const CMatrix& l = spec.lower_bounds[i];
    if (l.rows() != n || l.cols() != n || hermiticity_residual(l) > 1e-8)
      throw MalformedSpec("lower bound is not a Hermitian n x n matrix");
    sets.push_back({"lower-bound-" + std::to_string(i),
                    [l](const CMatrix& x) { return project_lower(x, l); },
                    [l](const CMatrix& x) { return lower_violation(x, l); }});
  }
  for (std::size_t i = 0; i < spec.upper_bounds.size(); ++i) {
    const CMatrix& u = spec.upper_bounds[i];
    if (u.rows() != n || u.cols() != n || hermiticity_residual(u) > 1e-8)
      throw MalformedSpec("upper bound is not a Hermitian n x n matrix");
    sets.push_back({"upper-bound-" + std::to_string(i),
                    [u](const CMatrix& x) { return project_upper(x, u); },
                    [u](const CMatrix& x) { return upper_violation(x, u); }});
  }
  if (spec.trace_lower) {
    const std::size_t d = spec.trace_dim;
    if (d * d != n) throw MalformedSpec("trace bound dimension does not match variable");
    const CMatrix l = *spec.trace_lower;
    if (l.rows() != d || l.cols() != d || hermiticity_residual(l) > 1e-8)
      throw MalformedSpec("trace bound is not a Hermitian d x d matrix");
    sets.push_back({"trace-bound",
                    [l, d](const CMatrix& x) { return project_trace_lower(x, l, d); },
                    [l, d](const CMatrix& x) {
                      return std::max(0.0, -min_eigenvalue(partial_trace_first(x, d) - l));
                    }});
  }
  if (sets.empty()) throw MalformedSpec("feasibility spec has no constraints");

  const auto worst = [&](const CMatrix& x) {
    double v = 0.0;
    std::string name;
    for (const auto& s : sets) {
      const double vi = s.violation(x);
      if (vi > v) {
        v = vi;
        name = s.name;
      }
    }
    return std::pair<double, std::string>(v, name);
  };

  FeasibilityOutcome out;

  // Exact candidate roster before iterating. The zero matrix settles specs
  // whose bounds already admit it, and each upper bound settles degenerate
  // ordered instances where the feasible set is a low-rank face that the
  // projection iteration approaches only sublinearly. Every candidate is
  // verified against all constraints, so acceptance stays sound.
  std::vector<CMatrix> candidates;
  candidates.push_back(CMatrix::zero(n, n));
  for (const CMatrix& u : spec.upper_bounds) candidates.push_back(hermitize(u));
  for (const CMatrix& c : candidates) {
    const auto [vc, name_c] = worst(c);
    if (vc <= spec.options.tol_feas) {
      out.status = Verdict::Feasible;
      out.point = c;
      out.residual = vc;
      out.iterations = 0;
      return out;
    }
  }

  CMatrix x = CMatrix::zero(n, n);

  std::vector<CMatrix> increments(sets.size(), CMatrix::zero(n, n));
  std::vector<double> history;
  const long window = 200;
  // Violations are evaluated on a fixed stride; each evaluation costs as much
  // as a projection cycle, and the stall statistics only need samples.
  const long stride = 5;

  for (long cycle = 1; cycle <= spec.options.max_iter; ++cycle) {
    for (std::size_t i = 0; i < sets.size(); ++i) {
      const CMatrix w = x + increments[i];
      x = hermitize(sets[i].project(w));
      increments[i] = w - x;
    }
    if (cycle % stride != 0 && cycle != spec.options.max_iter) continue;
    auto [v, name] = worst(x);
    history.push_back(v);
    if (v <= spec.options.tol_feas) {
      out.status = Verdict::Feasible;
      out.point = x;
      out.residual = v;
      out.iterations = cycle;
      return out;
    }
    // Stalled above tol_infeas: the per-cycle violation estimates the
    // inter-set gap, so report infeasibility. Window averages are taken over
    // the sampled history covering 200-cycle spans.
    const long wsamples = window / stride;
    if (cycle >= 2 * window && cycle % window == 0 &&
        history.size() >= static_cast<std::size_t>(2 * wsamples)) {
      const double a1 =
          std::accumulate(history.end() - wsamples, history.end(), 0.0) / wsamples;
      const double a0 = std::accumulate(history.end() - 2 * wsamples,
                                        history.end() - wsamples, 0.0) /
                        wsamples;
      if (std::abs(a1 - a0) < 1e-3 * std::max(a0, 1e-300) &&
          a1 > spec.options.tol_infeas) {
        out.status = Verdict::Infeasible;
        out.residual = v;
        out.iterations = cycle;
        out.gap_estimate = a1;
        out.violated_constraint = name;
        return out;
      }
    }
    out.residual = v;
    out.iterations = cycle;
    out.violated_constraint = name;
  }
  out.status = Verdict::Undecided;
  if (!history.empty()) {
    const long w = std::min<long>(window / stride, static_cast<long>(history.size()));
    out.gap_estimate = std::accumulate(history.end() - w, history.end(), 0.0) / w;
  }
  return out;
}

bool is_sum_operation(const Operation& phi, const Operation& psi, double tol) {
  if (phi.dim() != psi.dim()) throw DimensionMismatch("operation dimension mismatch");
  const CMatrix sum = induced(phi).matrix() + induced(psi).matrix();
  return is_psd(CMatrix::identity(phi.dim()) - sum, tol);
}

bool is_difference_operation(const Operation& phi, const Operation& psi, double tol) {
  if (phi.dim() != psi.dim()) throw DimensionMismatch("operation dimension mismatch");
  return is_psd(phi.choi() - psi.choi(), tol);
}

std::optional<CoexistenceDecision> trivially_coexistent(const Operation& phi,
                                                        const Operation& psi,
                                                        double tol) {
  if (phi.dim() != psi.dim()) throw DimensionMismatch("operation dimension mismatch");
  const std::size_t n = phi.dim() * phi.dim();
  if (is_sum_operation(phi, psi, tol)) {
    return closed_form_feasible("trivial-sum",
                                build_witness(CMatrix::zero(n, n), phi, psi));
  }
  if (is_difference_operation(phi, psi, tol)) {  // psi <= phi
    return closed_form_feasible("trivial-diff", build_witness(psi.choi(), phi, psi));
  }
  if (is_difference_operation(psi, phi, tol)) {  // phi <= psi
    return closed_form_feasible("trivial-diff", build_witness(phi.choi(), phi, psi));
  }
  return std::nullopt;
}

CoexistenceDecision pure_coexistent(const Operation& phi, const Operation& psi) {
  if (phi.dim() != psi.dim()) throw DimensionMismatch("operation dimension mismatch");
  if (phi.kraus_rank() != 1 || psi.kraus_rank() != 1)
    throw NotPure("pure_coexistent expects Kraus-rank-1 operations");
  const std::size_t n = phi.dim() * phi.dim();
  if (is_sum_operation(phi, psi)) {
    auto dec = closed_form_feasible("pure-closed-form",
                                    build_witness(CMatrix::zero(n, n), phi, psi));
    return dec;
  }
  const CMatrix v = phi.to_kraus().front();
  const CMatrix w = psi.to_kraus().front();
  if (const auto c = complex_proportionality(v, w)) {
    const double lambda = std::norm(*c);
    const CMatrix& xi1 = lambda <= 1.0 ? psi.choi() : phi.choi();
    return closed_form_feasible("pure-closed-form", build_witness(xi1, phi, psi));
  }
  CoexistenceDecision dec;
  dec.verdict = Verdict::Infeasible;
  dec.method = "pure-closed-form";
  dec.evidence.violated_constraint = "neither disjoint nor proportional";
  return dec;
}

CoexistenceDecision luders_coexistent(const Effect& a, const Effect& b) {
  if (a.dim() != b.dim()) throw DimensionMismatch("effect dimension mismatch");
  const Operation la = luders(a);
  const Operation lb = luders(b);
  const std::size_t n = a.dim() * a.dim();
  if (is_sum_operation(la, lb)) {
    auto dec = closed_form_feasible("luders", build_witness(CMatrix::zero(n, n), la, lb));
    return dec;
  }
  const auto b_of_a = proportionality_factor(a.matrix(), b.matrix());
  const auto a_of_b = proportionality_factor(b.matrix(), a.matrix());
  if (b_of_a || a_of_b) {
    // B = lambda A scales the Luders Choi operators by the same lambda.
    const bool b_smaller = b_of_a && *b_of_a <= 1.0;
    const CMatrix& xi1 = b_smaller ? lb.choi() : la.choi();
    return closed_form_feasible("luders", build_witness(xi1, la, lb));
  }
  CoexistenceDecision dec;
  dec.verdict = Verdict::Infeasible;
  dec.method = "luders";
  dec.evidence.violated_constraint = "A + B > I and effects not proportional";
  return dec;
}

CoexistenceDecision unitary_coexistent(const CMatrix& u, const Operation& phi,
                                       const SolverOptions& options) {
  (void)options;
  const Operation chan = unitary_channel(u);
  if (chan.dim() != phi.dim()) throw DimensionMismatch("operation dimension mismatch");
  const auto lambda = proportionality_factor(chan.choi(), phi.choi());
  if (lambda && *lambda >= -kPropTol && *lambda <= 1.0 + kPropTol) {
    const double lam = std::clamp(*lambda, 0.0, 1.0);
    return closed_form_feasible(
        "unitary", build_witness(chan.choi() * complexd(lam, 0.0), chan, phi));
  }
  CoexistenceDecision dec;
  dec.verdict = Verdict::Infeasible;
  dec.method = "unitary";
  dec.evidence.violated_constraint = "Choi operator not proportional to the channel's";
  return dec;
}

namespace {

Instrument effect_witness(const Effect& a, const Effect& b, const CMatrix& g,
                          double tol_feas) {
  const std::size_t d = a.dim();
  const DensityState mixed(d, CMatrix::identity(d) * complexd(1.0 / d, 0.0));
  const Operation pa = preparator(a, mixed);
  const Operation pb = preparator(b, mixed);
  const CMatrix xi1 =
      tensor(mixed.matrix(), g.transpose()) * complexd(1.0 / d, 0.0);
  return build_witness(xi1, pa, pb, tol_feas);
}

}  // namespace

CoexistenceDecision effects_coexistent(const Effect& a, const Effect& b,
                                       const SolverOptions& options) {
  if (a.dim() != b.dim()) throw DimensionMismatch("effect dimension mismatch");
  const std::size_t d = a.dim();
  const CMatrix id = CMatrix::identity(d);

  // Closed-form cases: trivial effect, disjoint pair, ordered pair.
  const auto a_triv = proportionality_factor(id, a.matrix());
  if (a_triv) {
    const CMatrix g = b.matrix() * complexd(*a_triv, 0.0);
    return closed_form_feasible("effects-necessary", effect_witness(a, b, g, 1e-7));
  }
  const auto b_triv = proportionality_factor(id, b.matrix());
  if (b_triv) {
    const CMatrix g = a.matrix() * complexd(*b_triv, 0.0);
    return closed_form_feasible("effects-necessary", effect_witness(a, b, g, 1e-7));
  }
  if (is_psd(id - a.matrix() - b.matrix(), kOpTol)) {
    return closed_form_feasible("effects-necessary",
                                effect_witness(a, b, CMatrix::zero(d, d), 1e-7));
  }
  if (is_psd(b.matrix() - a.matrix(), kOpTol)) {
    return closed_form_feasible("effects-necessary", effect_witness(a, b, a.matrix(), 1e-7));
  }
  if (is_psd(a.matrix() - b.matrix(), kOpTol)) {
    return closed_form_feasible("effects-necessary", effect_witness(a, b, b.matrix(), 1e-7));
  }

  FeasibilitySpec spec;
  spec.n = d;
  spec.lower_bounds = {CMatrix::zero(d, d), a.matrix() + b.matrix() - id};
  spec.upper_bounds = lex_less(a.matrix(), b.matrix())
                          ? std::vector<CMatrix>{a.matrix(), b.matrix()}
                          : std::vector<CMatrix>{b.matrix(), a.matrix()};
  spec.options = options;
  const FeasibilityOutcome out = solve_feasibility(spec);

  CoexistenceDecision dec;
  dec.verdict = out.status;
  dec.method = "solver";
  dec.evidence.residual = out.residual;
  dec.evidence.iterations = out.iterations;
  dec.evidence.gap_estimate = out.gap_estimate;
  dec.evidence.violated_constraint = out.violated_constraint;
  if (out.status == Verdict::Feasible)
    dec.witness = effect_witness(a, b, hermitize(*out.point), options.tol_feas);
  return dec;
}

CoexistenceDecision operations_coexistent(const Operation& phi, const Operation& psi,
                                          DecisionMethod method,
                                          const SolverOptions& options) {
  if (phi.dim() != psi.dim()) throw DimensionMismatch("operation dimension mismatch");
  const std::size_t d = phi.dim();

  if (method != DecisionMethod::SolverOnly) {
    // Necessary condition: coexistent operations have coexistent effects.
    const CoexistenceDecision eff =
        effects_coexistent(induced(phi), induced(psi), options);
    if (eff.verdict == Verdict::Infeasible) {
      CoexistenceDecision dec;
      dec.verdict = Verdict::Infeasible;
      dec.method = "effects-necessary";
      dec.evidence = eff.evidence;
      dec.evidence.violated_constraint = "induced effects are not coexistent";
      return dec;
    }
    if (auto trivial = trivially_coexistent(phi, psi)) return *trivial;
    const std::size_t rank_phi = phi.kraus_rank();
    const std::size_t rank_psi = psi.kraus_rank();
    if (rank_phi == 1 && rank_psi == 1) return pure_coexistent(phi, psi);
    if (rank_phi == 1 && phi.is_channel()) {
      return unitary_coexistent(phi.to_kraus().front(), psi, options);
    }
    if (rank_psi == 1 && psi.is_channel()) {
      CoexistenceDecision dec = unitary_coexistent(psi.to_kraus().front(), phi, options);
      if (dec.witness) dec.witness = swap_outcomes_2_3(*dec.witness);
      return dec;
    }
    if (method == DecisionMethod::ClosedFormOnly) {
      CoexistenceDecision dec;
      dec.verdict = Verdict::Undecided;
      dec.method = "solver";
      dec.evidence.violated_constraint = "closed-form stages exhausted";
      return dec;
    }
  }

  // General reduction: find Xi1 with 0 <= Xi1 <= Xi_Phi, Xi1 <= Xi_Psi and
  // d tr_1(Xi_Phi + Xi_Psi - Xi1) <= I; the remaining instrument outcomes
  // then exist in closed form (build_witness).
  const bool phi_first = lex_less(phi.choi(), psi.choi());
  const CMatrix& first = phi_first ? phi.choi() : psi.choi();
  const CMatrix& second = phi_first ? psi.choi() : phi.choi();

  FeasibilitySpec spec;
  spec.n = d * d;
  spec.lower_bounds = {CMatrix::zero(d * d, d * d)};
  spec.upper_bounds = {first, second};
  spec.trace_lower = hermitize(partial_trace_first(phi.choi() + psi.choi(), d) -
                               CMatrix::identity(d) * complexd(1.0 / d, 0.0));
  spec.trace_dim = d;
  spec.options = options;
  const FeasibilityOutcome out = solve_feasibility(spec);

  CoexistenceDecision dec;
  dec.verdict = out.status;
  dec.method = "solver";
  dec.evidence.residual = out.residual;
  dec.evidence.iterations = out.iterations;
  dec.evidence.gap_estimate = out.gap_estimate;
  dec.evidence.violated_constraint = out.violated_constraint;
  if (out.status == Verdict::Feasible)
    dec.witness = build_witness(*out.point, phi, psi, options.tol_feas);
  return dec;
}

Instrument build_witness(const CMatrix& xi1_in, const Operation& phi,
                         const Operation& psi, double tol_feas) {
  if (phi.dim() != psi.dim()) throw DimensionMismatch("operation dimension mismatch");
  const std::size_t d = phi.dim();
  const double slack = 10.0 * tol_feas;

  const CMatrix xi1 = psd_part(hermitize(xi1_in));
  const CMatrix xi2 = psd_part(phi.choi() - xi1);
  const CMatrix xi3 = psd_part(psi.choi() - xi1);

  if (frobenius_distance(xi1 + xi2, phi.choi()) > slack)
    throw InfeasiblePoint("witness margin violated for the first operation");
  if (frobenius_distance(xi1 + xi3, psi.choi()) > slack)
    throw InfeasiblePoint("witness margin violated for the second operation");

  CMatrix m = hermitize(CMatrix::identity(d) -
                        partial_trace_first(xi1 + xi2 + xi3, d) * complexd(d, 0.0));
  if (min_eigenvalue(m) < -slack)
    throw InfeasiblePoint("completion residual I - d tr_1(Xi1+Xi2+Xi3) is not positive");
  m = psd_part(m);

  const double op_tol = std::max(100.0 * tol_feas, 1e-8);
  std::vector<std::pair<std::string, Operation>> outcomes;
  outcomes.emplace_back("J1", Operation::from_choi(d, xi1, op_tol));
  outcomes.emplace_back("J2", Operation::from_choi(d, xi2, op_tol));
  outcomes.emplace_back("J3", Operation::from_choi(d, xi3, op_tol));
  // Single-Kraus completion sqrt(M^T): keeps the total Kraus count across the
  // four outcomes at 3d^2 + 1 or fewer.
  if (m.frobenius_norm() <= 1e-13) {
    outcomes.emplace_back("J4", null_operation(d));
  } else {
    outcomes.emplace_back(
        "J4", Operation::from_kraus({sqrt_psd(m.transpose(), op_tol)}, op_tol));
  }
  return Instrument(d, std::move(outcomes), slack);
}

}  // namespace qcoex
