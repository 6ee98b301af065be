#include "qcoex/oracle.hpp"

#include <algorithm>
#include <cmath>

namespace qcoex {
namespace oracle {

namespace {

constexpr double kDiagTol = 1e-12;

// Closed-form smallest eigenvalue of a 2x2 Hermitian matrix; deliberately
// independent of the Jacobi eigensolver used by the decision engine.
double min_eig_2x2(double h11, double h22, complexd h12) {
  const double t = h11 + h22;
  const double disc = std::sqrt((h11 - h22) * (h11 - h22) + 4.0 * std::norm(h12));
  return 0.5 * (t - disc);
}

}  // namespace

void validate(const DiagonalInstance& inst) {
  const std::size_t d = inst.d;
  if (d == 0 || inst.p.size() != d * d || inst.q.size() != d * d)
    throw MalformedInstance("diagonal instance vectors must have length d^2");
  for (const auto& vec : {inst.p, inst.q}) {
    for (double v : vec)
      if (!(v >= -kDiagTol) || !std::isfinite(v))
        throw MalformedInstance("diagonal entries must be nonnegative");
    for (std::size_t k = 0; k < d; ++k) {
      double col = 0.0;
      for (std::size_t j = 0; j < d; ++j) col += vec[j * d + k];
      if (d * col > 1.0 + 1e-9)
        throw MalformedInstance("diagonal instance violates the trace bound");
    }
  }
}

bool diagonal_effects_oracle(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size()) throw MalformedInstance("effect vectors differ in length");
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] < -kDiagTol || a[i] > 1.0 + kDiagTol || b[i] < -kDiagTol ||
        b[i] > 1.0 + kDiagTol)
      throw OutOfRange("effect eigenvalues must lie in [0, 1]");
    if (std::max(0.0, a[i] + b[i] - 1.0) > std::min(a[i], b[i]) + kDiagTol) return false;
  }
  return true;
}

bool diagonal_operations_oracle(const DiagonalInstance& inst) {
  validate(inst);
  const std::size_t d = inst.d;
  for (std::size_t k = 0; k < d; ++k) {
    double col = 0.0;
    for (std::size_t j = 0; j < d; ++j)
      col += std::max(inst.p[j * d + k], inst.q[j * d + k]);
    if (d * col > 1.0 + kDiagTol) return false;
  }
  return true;
}

bool grid_search_effects(const Effect& a, const Effect& b, std::size_t steps) {
  if (a.dim() != 2 || b.dim() != 2)
    throw UnsupportedDimension("grid search supports d = 2 only");
  if (steps < 2) throw OutOfRange("grid search needs at least 2 steps per axis");

  const CMatrix& ma = a.matrix();
  const CMatrix& mb = b.matrix();
  const CMatrix sum = ma + mb;
  const double spacing = 1.0 / static_cast<double>(steps - 1);
  const double slack = spacing;

  const auto feasible = [&](double x, double y, complexd od) {
    // G >= 0
    if (min_eig_2x2(x, y, od) < -slack) return false;
    // A - G >= 0, B - G >= 0
    if (min_eig_2x2(ma(0, 0).real() - x, ma(1, 1).real() - y, ma(0, 1) - od) < -slack)
      return false;
    if (min_eig_2x2(mb(0, 0).real() - x, mb(1, 1).real() - y, mb(0, 1) - od) < -slack)
      return false;
    // G - (A + B - I) >= 0
    if (min_eig_2x2(x - sum(0, 0).real() + 1.0, y - sum(1, 1).real() + 1.0,
                    od - sum(0, 1)) < -slack)
      return false;
    return true;
  };

  for (std::size_t ix = 0; ix < steps; ++ix) {
    const double x = ix * spacing;
    for (std::size_t iy = 0; iy < steps; ++iy) {
      const double y = iy * spacing;
      for (std::size_t iu = 0; iu < steps; ++iu) {
        const double u = -0.5 + iu * spacing;
        for (std::size_t iv = 0; iv < steps; ++iv) {
          const double v = -0.5 + iv * spacing;
          if (feasible(x, y, complexd(u, v))) return true;
        }
      }
    }
  }
  return false;
}

}  // namespace oracle
}  // namespace qcoex
