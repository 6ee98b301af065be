#pragma once

#include <vector>

#include "qcoex/matrix.hpp"

namespace qcoex {

inline constexpr double kDefaultHermTol = 1e-10;

/// Spectral decomposition of a Hermitian matrix.
/// Eigenvalues ascending; eigenvector columns orthonormal.
struct HermEig {
  std::vector<double> eigenvalues;
  CMatrix eigenvectors;
};

/// Symmetrized copy (M + M^dagger) / 2.
CMatrix hermitize(const CMatrix& m);

/// Relative Hermiticity residual ||M - M^dagger||_F / max(1, ||M||_F).
double hermiticity_residual(const CMatrix& m);

/// Full spectral decomposition via cyclic complex Jacobi rotations.
/// Deterministic for identical input. Throws NotSquare / NotHermitian.
HermEig herm_eig(const CMatrix& m, double tol_herm = kDefaultHermTol);

/// Smallest eigenvalue of a Hermitian matrix.
double min_eigenvalue(const CMatrix& m, double tol_herm = kDefaultHermTol);

/// True iff min eigenvalue >= -tol * max(1, ||M||_F).
bool is_psd(const CMatrix& m, double tol = kDefaultHermTol);

/// Frobenius-nearest PSD matrix: clip negative eigenvalues to zero.
CMatrix psd_part(const CMatrix& m, double tol_herm = kDefaultHermTol);

/// Hermitian PSD square root. Throws NotPSD when M is not PSD within tol.
CMatrix sqrt_psd(const CMatrix& m, double tol = kDefaultHermTol);

}  // namespace qcoex
