#include "qcoex/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace qcoex {

namespace {

double offdiag_norm(const CMatrix& a) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j)
      if (i != j) s += std::norm(a(i, j));
  return std::sqrt(s);
}

// Cyclic Jacobi sweeps with complex plane rotations; eigenvector accumulation
// is optional because order-statistics queries (min eigenvalue, PSD tests)
// only need the diagonal.
void jacobi_diagonalize(CMatrix& a_mat, CMatrix* v_mat, double scale) {
  const std::size_t n = a_mat.rows();
  const double target = 1e-14 * scale;
  const double skip = target / (2.0 * static_cast<double>(n));
  complexd* a = a_mat.data().data();
  complexd* v = v_mat ? v_mat->data().data() : nullptr;

  const int max_sweeps = 100;
  for (int sweep = 0; sweep < max_sweeps && offdiag_norm(a_mat) > target; ++sweep) {
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const complexd z = a[p * n + q];
        const double az = std::abs(z);
        if (az <= skip) continue;

        const complexd phase = z / az;  // e^{i arg z}
        const double app = a[p * n + p].real();
        const double aqq = a[q * n + q].real();
        const double tau = (aqq - app) / (2.0 * az);
        const double t = tau >= 0.0 ? 1.0 / (tau + std::sqrt(1.0 + tau * tau))
                                    : 1.0 / (tau - std::sqrt(1.0 + tau * tau));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;

        // Unitary block W = [[c, s], [-conj(phase)*s, conj(phase)*c]].
        const complexd wqp = -std::conj(phase) * s;
        const complexd wqq = std::conj(phase) * c;
        const complexd cwqp = std::conj(wqp);
        const complexd cwqq = std::conj(wqq);

        for (std::size_t i = 0; i < n; ++i) {  // A <- A * W
          complexd* row = a + i * n;
          const complexd aip = row[p], aiq = row[q];
          row[p] = c * aip + wqp * aiq;
          row[q] = s * aip + wqq * aiq;
        }
        if (v) {
          for (std::size_t i = 0; i < n; ++i) {  // V <- V * W
            complexd* row = v + i * n;
            const complexd vip = row[p], viq = row[q];
            row[p] = c * vip + wqp * viq;
            row[q] = s * vip + wqq * viq;
          }
        }
        complexd* rp = a + p * n;
        complexd* rq = a + q * n;
        for (std::size_t j = 0; j < n; ++j) {  // A <- W^dagger * A
          const complexd apj = rp[j], aqj = rq[j];
          rp[j] = c * apj + cwqp * aqj;
          rq[j] = s * apj + cwqq * aqj;
        }
        rp[q] = 0.0;
        rq[p] = 0.0;
        rp[p] = complexd(rp[p].real(), 0.0);
        rq[q] = complexd(rq[q].real(), 0.0);
      }
    }
  }
}

void check_hermitian_input(const CMatrix& m, double tol_herm, const char* who) {
  if (!m.is_square()) throw NotSquare(std::string(who) + " expects a square matrix");
  if (!m.all_finite()) throw NotHermitian(std::string(who) + " expects finite entries");
  if (hermiticity_residual(m) > tol_herm)
    throw NotHermitian(std::string(who) + ": matrix is not Hermitian within tolerance");
}

double smallest_diagonal(const CMatrix& a) {
  double lo = a(0, 0).real();
  for (std::size_t i = 1; i < a.rows(); ++i) lo = std::min(lo, a(i, i).real());
  return lo;
}

}  // namespace

CMatrix hermitize(const CMatrix& m) {
  return (m + m.adjoint()) * complexd(0.5, 0.0);
}

double hermiticity_residual(const CMatrix& m) {
  if (!m.is_square()) throw NotSquare("hermiticity residual of non-square matrix");
  return (m - m.adjoint()).frobenius_norm() / std::max(1.0, m.frobenius_norm());
}

HermEig herm_eig(const CMatrix& m, double tol_herm) {
  check_hermitian_input(m, tol_herm, "herm_eig");

  const std::size_t n = m.rows();
  CMatrix a = hermitize(m);
  CMatrix v = CMatrix::identity(n);
  jacobi_diagonalize(a, &v, std::max(a.frobenius_norm(), 1e-300));

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) {
    return a(i, i).real() < a(j, j).real();
  });

  HermEig out;
  out.eigenvalues.resize(n);
  out.eigenvectors = CMatrix(n, n);
  for (std::size_t k = 0; k < n; ++k) {
    out.eigenvalues[k] = a(order[k], order[k]).real();
    for (std::size_t i = 0; i < n; ++i) out.eigenvectors(i, k) = v(i, order[k]);
  }
  return out;
}

double min_eigenvalue(const CMatrix& m, double tol_herm) {
  check_hermitian_input(m, tol_herm, "min_eigenvalue");
  CMatrix a = hermitize(m);
  jacobi_diagonalize(a, nullptr, std::max(a.frobenius_norm(), 1e-300));
  return smallest_diagonal(a);
}

bool is_psd(const CMatrix& m, double tol) {
  return min_eigenvalue(m, std::max(tol, kDefaultHermTol)) >=
         -tol * std::max(1.0, m.frobenius_norm());
}

CMatrix psd_part(const CMatrix& m, double tol_herm) {
  const auto eig = herm_eig(m, tol_herm);
  const std::size_t n = m.rows();
  CMatrix out(n, n);
  for (std::size_t k = 0; k < n; ++k) {
    const double lam = eig.eigenvalues[k];
    if (lam <= 0.0) continue;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        out(i, j) += lam * eig.eigenvectors(i, k) * std::conj(eig.eigenvectors(j, k));
  }
  return out;
}

CMatrix sqrt_psd(const CMatrix& m, double tol) {
  const auto eig = herm_eig(m, std::max(tol, kDefaultHermTol));
  const double floor = -tol * std::max(1.0, m.frobenius_norm());
  if (eig.eigenvalues.front() < floor)
    throw NotPSD("sqrt_psd: matrix is not PSD within tolerance");
  const std::size_t n = m.rows();
  CMatrix out(n, n);
  for (std::size_t k = 0; k < n; ++k) {
    const double lam = std::max(eig.eigenvalues[k], 0.0);
    if (lam == 0.0) continue;
    const double r = std::sqrt(lam);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        out(i, j) += r * eig.eigenvectors(i, k) * std::conj(eig.eigenvectors(j, k));
  }
  return out;
}

}  // namespace qcoex
