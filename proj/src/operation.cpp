#include "qcoex/operation.hpp"

#include <algorithm>
#include <cmath>

namespace qcoex {

namespace {

// Row-major vectorization matching the (j,k) -> j*d + k product ordering:
// for a single Kraus operator X, (X (x) I) psi+ has component X[a,b]/sqrt(d)
// at index a*d + b.
CMatrix choi_from_kraus(const std::vector<CMatrix>& kraus, std::size_t d) {
  CMatrix choi(d * d, d * d);
  for (const auto& x : kraus) {
    for (std::size_t a = 0; a < d; ++a)
      for (std::size_t b = 0; b < d; ++b) {
        const complexd va = x(a, b);
        if (va == complexd(0.0, 0.0)) continue;
        for (std::size_t c = 0; c < d; ++c)
          for (std::size_t e = 0; e < d; ++e)
            choi(a * d + b, c * d + e) += va * std::conj(x(c, e));
      }
  }
  return choi * complexd(1.0 / static_cast<double>(d), 0.0);
}

}  // namespace

Effect::Effect(std::size_t dim, CMatrix matrix, double tol) : dim_(dim) {
  if (matrix.rows() != dim || matrix.cols() != dim)
    throw DimensionMismatch("effect matrix has wrong shape");
  if (hermiticity_residual(matrix) > tol)
    throw InvalidEffect("effect matrix is not Hermitian within tolerance");
  matrix_ = hermitize(matrix);
  if (!is_psd(matrix_, tol)) throw InvalidEffect("effect is not positive");
  if (!is_psd(CMatrix::identity(dim) - matrix_, tol))
    throw InvalidEffect("effect is not bounded by the identity");
}

DensityState::DensityState(std::size_t dim, CMatrix matrix, double tol) : dim_(dim) {
  if (matrix.rows() != dim || matrix.cols() != dim)
    throw DimensionMismatch("state matrix has wrong shape");
  if (hermiticity_residual(matrix) > tol)
    throw InvalidState("state matrix is not Hermitian within tolerance");
  matrix_ = hermitize(matrix);
  if (!is_psd(matrix_, tol)) throw InvalidState("state is not positive");
  if (std::abs(matrix_.trace().real() - 1.0) > std::max(tol, tol * static_cast<double>(dim)))
    throw InvalidState("state trace differs from one");
}

Operation Operation::from_choi(std::size_t dim, CMatrix choi, double tol) {
  if (choi.rows() != dim * dim || choi.cols() != dim * dim)
    throw DimensionMismatch("Choi operator has wrong shape");
  if (!choi.all_finite()) throw InvalidOperation("Choi operator has non-finite entries");
  if (hermiticity_residual(choi) > tol)
    throw InvalidOperation("Choi operator is not Hermitian within tolerance");
  CMatrix xi = hermitize(choi);
  if (!is_psd(xi, tol)) throw InvalidOperation("Choi operator is not positive");
  const CMatrix margin =
      CMatrix::identity(dim) - partial_trace_first(xi, dim) * complexd(dim, 0.0);
  if (!is_psd(margin, tol))
    throw TraceBoundViolated("operation is trace increasing: d tr_1(Xi) > I");
  return Operation(dim, std::move(xi));
}

Operation Operation::from_kraus(const std::vector<CMatrix>& kraus, double tol) {
  if (kraus.empty()) throw InvalidOperation("empty Kraus list");
  const std::size_t d = kraus.front().rows();
  CMatrix sum(d, d);
  for (const auto& x : kraus) {
    if (x.rows() != d || x.cols() != d)
      throw DimensionMismatch("Kraus operators must be square with equal dimension");
    sum = sum + x.adjoint() * x;
  }
  if (!is_psd(CMatrix::identity(d) - sum, tol))
    throw TraceBoundViolated("Kraus set violates sum X^dag X <= I");
  Operation op(d, choi_from_kraus(kraus, d));
  op.kraus_cache_ = kraus;
  return op;
}

std::vector<CMatrix> Operation::to_kraus(double rank_tol) const {
  // The construction cache is returned only when already minimal; otherwise
  // a minimal decomposition is rebuilt from the Choi spectrum.
  if (kraus_cache_ && kraus_cache_->size() == kraus_rank(rank_tol)) return *kraus_cache_;
  const auto eig = herm_eig(choi_);
  const std::size_t n = dim_ * dim_;
  std::vector<CMatrix> kraus;
  for (std::size_t k = 0; k < n; ++k) {
    const double lam = eig.eigenvalues[k];
    if (lam <= rank_tol) continue;
    // Deterministic global phase: largest-magnitude component real positive.
    std::size_t imax = 0;
    double amax = -1.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double a = std::abs(eig.eigenvectors(i, k));
      if (a > amax + 1e-15) {
        amax = a;
        imax = i;
      }
    }
    const complexd pivot = eig.eigenvectors(imax, k);
    const complexd phase = std::abs(pivot) > 0.0 ? std::conj(pivot) / std::abs(pivot)
                                                 : complexd(1.0, 0.0);
    const double w = std::sqrt(lam * static_cast<double>(dim_));
    CMatrix x(dim_, dim_);
    for (std::size_t a = 0; a < dim_; ++a)
      for (std::size_t b = 0; b < dim_; ++b)
        x(a, b) = w * phase * eig.eigenvectors(a * dim_ + b, k);
    kraus.push_back(std::move(x));
  }
  if (kraus.empty()) kraus.push_back(CMatrix::zero(dim_, dim_));
  kraus_cache_ = kraus;
  return kraus;
}

Effect Operation::induced_effect() const {
  CMatrix a = (partial_trace_first(choi_, dim_) * complexd(dim_, 0.0)).transpose();
  return Effect(dim_, hermitize(a), 100 * kOpTol);
}

Operation::ApplyResult Operation::apply(const DensityState& rho, double prob_floor) const {
  if (rho.dim() != dim_) throw DimensionMismatch("apply: state dimension mismatch");
  // Phi(rho) = d * tr_2[(I (x) rho^T) Xi] under the first-factor-major ordering.
  const CMatrix out = partial_trace_second(
      tensor(CMatrix::identity(dim_), rho.matrix().transpose()) * choi_, dim_) *
      complexd(dim_, 0.0);
  const double p = std::clamp(out.trace().real(), 0.0, 1.0 + 1e-9);
  ApplyResult result{p, std::nullopt};
  if (p > prob_floor) {
    result.conditional =
        DensityState(dim_, hermitize(out * complexd(1.0 / p, 0.0)), 1e-6);
  }
  return result;
}

std::size_t Operation::kraus_rank(double rank_tol) const {
  const auto eig = herm_eig(choi_);
  std::size_t r = 0;
  for (double lam : eig.eigenvalues)
    if (lam > rank_tol) ++r;
  return r;
}

bool Operation::is_channel(double tol) const {
  const CMatrix a = partial_trace_first(choi_, dim_) * complexd(dim_, 0.0);
  return frobenius_distance(a, CMatrix::identity(dim_)) <=
         tol * std::max(1.0, static_cast<double>(dim_));
}

Operation luders(const Effect& a) {
  return Operation::from_kraus({sqrt_psd(a.matrix())});
}

Operation preparator(const Effect& a, const DensityState& xi) {
  if (a.dim() != xi.dim()) throw DimensionMismatch("preparator: dimension mismatch");
  const std::size_t d = a.dim();
  return Operation::from_choi(
      d, tensor(xi.matrix(), a.matrix().transpose()) * complexd(1.0 / d, 0.0),
      100 * kOpTol);
}

Operation unitary_channel(const CMatrix& u, double tol) {
  if (!u.is_square()) throw NotUnitary("unitary_channel expects a square matrix");
  const std::size_t d = u.rows();
  if (frobenius_distance(u.adjoint() * u, CMatrix::identity(d)) >
      tol * std::max(1.0, static_cast<double>(d)))
    throw NotUnitary("matrix is not unitary within tolerance");
  return Operation::from_kraus({u});
}

Operation scale(const Operation& op, double lambda) {
  if (lambda < 0.0 || lambda > 1.0) throw OutOfRange("scale: lambda must lie in [0, 1]");
  return Operation::from_choi(op.dim(), op.choi() * complexd(lambda, 0.0), 100 * kOpTol);
}

Operation null_operation(std::size_t dim) {
  return Operation::from_choi(dim, CMatrix::zero(dim * dim, dim * dim));
}

Operation identity_operation(std::size_t dim) {
  return Operation::from_kraus({CMatrix::identity(dim)});
}

Instrument::Instrument(std::size_t dim,
                       std::vector<std::pair<std::string, Operation>> outcomes,
                       double tol)
    : dim_(dim), outcomes_(std::move(outcomes)) {
  if (outcomes_.empty()) throw InvalidInstrument("instrument needs at least one outcome");
  CMatrix omega(dim * dim, dim * dim);
  for (const auto& [label, op] : outcomes_) {
    if (op.dim() != dim) throw DimensionMismatch("instrument outcome dimension mismatch");
    omega = omega + op.choi();
  }
  const CMatrix norm = partial_trace_first(omega, dim) * complexd(dim, 0.0);
  if (frobenius_distance(norm, CMatrix::identity(dim)) > tol)
    throw InvalidInstrument("instrument does not sum to a channel");
}

CMatrix Instrument::total_choi() const {
  CMatrix omega(dim_ * dim_, dim_ * dim_);
  for (const auto& [label, op] : outcomes_) omega = omega + op.choi();
  return omega;
}

}  // namespace qcoex
