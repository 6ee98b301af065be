#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "qcoex/linalg.hpp"
#include "qcoex/matrix.hpp"

namespace qcoex {

/// Validation tolerance for operator-inequality membership tests.
inline constexpr double kOpTol = 1e-9;
/// Absolute eigenvalue threshold for numerical rank of Choi operators.
inline constexpr double kRankTol = 1e-9;
/// Probabilities below this floor yield no conditional state.
inline constexpr double kProbFloor = 1e-12;

/// Hermitian operator A with 0 <= A <= I.
class Effect {
 public:
  Effect(std::size_t dim, CMatrix matrix, double tol = kOpTol);
  std::size_t dim() const { return dim_; }
  const CMatrix& matrix() const { return matrix_; }

 private:
  std::size_t dim_;
  CMatrix matrix_;
};

/// Positive trace-one operator.
class DensityState {
 public:
  DensityState(std::size_t dim, CMatrix matrix, double tol = kOpTol);
  std::size_t dim() const { return dim_; }
  const CMatrix& matrix() const { return matrix_; }

 private:
  std::size_t dim_;
  CMatrix matrix_;
};

/// Completely positive trace-non-increasing map, stored canonically as its
/// Choi operator Xi = (Phi (x) id)(|psi+><psi+|) on H (x) H, with the map
/// acting on the first tensor factor.
class Operation {
 public:
  /// Validates Xi >= 0 and d * tr_1(Xi) <= I within tol.
  static Operation from_choi(std::size_t dim, CMatrix choi, double tol = kOpTol);

  /// Builds the Choi operator from a Kraus set; requires sum X^dag X <= I.
  static Operation from_kraus(const std::vector<CMatrix>& kraus, double tol = kOpTol);

  std::size_t dim() const { return dim_; }
  const CMatrix& choi() const { return choi_; }

  /// Minimal Kraus decomposition from the spectral decomposition of the Choi
  /// operator; list length equals the numerical Choi rank.
  std::vector<CMatrix> to_kraus(double rank_tol = kRankTol) const;

  /// The unique effect A = (d * tr_1(Xi))^T with tr[Phi(rho)] = tr[rho A].
  Effect induced_effect() const;

  struct ApplyResult {
    double probability;
    std::optional<DensityState> conditional;
  };
  /// Probability tr[Phi(rho)] and normalized conditional output state.
  ApplyResult apply(const DensityState& rho, double prob_floor = kProbFloor) const;

  std::size_t kraus_rank(double rank_tol = kRankTol) const;
  bool is_null(double tol = kOpTol) const { return choi_.frobenius_norm() <= tol; }
  /// True iff the induced effect is I within tol (deterministic transformation).
  bool is_channel(double tol = kOpTol) const;

 private:
  Operation(std::size_t dim, CMatrix choi) : dim_(dim), choi_(std::move(choi)) {}

  std::size_t dim_;
  CMatrix choi_;
  mutable std::optional<std::vector<CMatrix>> kraus_cache_;
};

/// Luders operation rho -> sqrt(A) rho sqrt(A); Choi rank 1.
Operation luders(const Effect& a);

/// Conditional state preparator rho -> tr[rho A] xi; Choi (1/d) xi (x) A^T.
Operation preparator(const Effect& a, const DensityState& xi);

/// Unitary channel rho -> U rho U^dagger. Throws NotUnitary.
Operation unitary_channel(const CMatrix& u, double tol = kOpTol);

/// Choi scaled by lambda in [0, 1]. Throws OutOfRange.
Operation scale(const Operation& op, double lambda);

Operation null_operation(std::size_t dim);
Operation identity_operation(std::size_t dim);

/// Finite list of labeled operations whose Choi sum is a channel.
class Instrument {
 public:
  Instrument(std::size_t dim, std::vector<std::pair<std::string, Operation>> outcomes,
             double tol = kOpTol);
  std::size_t dim() const { return dim_; }
  const std::vector<std::pair<std::string, Operation>>& outcomes() const {
    return outcomes_;
  }
  CMatrix total_choi() const;

 private:
  std::size_t dim_;
  std::vector<std::pair<std::string, Operation>> outcomes_;
};

}  // namespace qcoex
