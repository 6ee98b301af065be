#pragma once

#include <complex>
#include <cstddef>
#include <vector>

#include "qcoex/errors.hpp"

namespace qcoex {

using complexd = std::complex<double>;

/// Dense complex matrix, row-major storage.
///
/// Operators on a bipartite space H (x) H of dimension d*d use the index
/// convention (j, k) -> j*d + k: the first tensor factor is the major index.
class CMatrix {
 public:
  CMatrix() = default;
  CMatrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), data_(rows * cols) {}

  static CMatrix zero(std::size_t rows, std::size_t cols) {
    return CMatrix(rows, cols);
  }
  static CMatrix identity(std::size_t n);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool is_square() const { return rows_ == cols_; }

  complexd& operator()(std::size_t i, std::size_t j) {
    return data_[i * cols_ + j];
  }
  const complexd& operator()(std::size_t i, std::size_t j) const {
    return data_[i * cols_ + j];
  }

  const std::vector<complexd>& data() const { return data_; }
  std::vector<complexd>& data() { return data_; }

  CMatrix operator+(const CMatrix& other) const;
  CMatrix operator-(const CMatrix& other) const;
  CMatrix operator-() const;
  CMatrix operator*(const CMatrix& other) const;
  CMatrix operator*(complexd scalar) const;

  CMatrix adjoint() const;
  CMatrix transpose() const;
  CMatrix conjugate() const;

  complexd trace() const;
  double frobenius_norm() const;
  bool all_finite() const;

  bool same_shape(const CMatrix& other) const {
    return rows_ == other.rows_ && cols_ == other.cols_;
  }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<complexd> data_;
};

inline CMatrix operator*(complexd scalar, const CMatrix& m) {
  return m * scalar;
}
inline CMatrix operator*(double scalar, const CMatrix& m) {
  return m * complexd(scalar, 0.0);
}

/// Kronecker product; ordering consistent with partial_trace_first so that
/// partial_trace_first(tensor(X, Y), d) == tr(X) * Y for square d x d X.
CMatrix tensor(const CMatrix& x, const CMatrix& y);

/// Trace over the first tensor factor: N[k,l] = sum_j M[(j,k),(j,l)].
CMatrix partial_trace_first(const CMatrix& m, std::size_t d);

/// Trace over the second tensor factor: N[j,l] = sum_k M[(j,k),(l,k)].
CMatrix partial_trace_second(const CMatrix& m, std::size_t d);

/// Frobenius distance between equally shaped matrices.
double frobenius_distance(const CMatrix& a, const CMatrix& b);

}  // namespace qcoex
