#include "qcoex/matrix.hpp"

#include <cmath>

namespace qcoex {

CMatrix CMatrix::identity(std::size_t n) {
  CMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

CMatrix CMatrix::operator+(const CMatrix& other) const {
  if (!same_shape(other)) throw DimensionMismatch("matrix addition shape mismatch");
  CMatrix out(rows_, cols_);
  for (std::size_t i = 0; i < data_.size(); ++i) out.data_[i] = data_[i] + other.data_[i];
  return out;
}

CMatrix CMatrix::operator-(const CMatrix& other) const {
  if (!same_shape(other)) throw DimensionMismatch("matrix subtraction shape mismatch");
  CMatrix out(rows_, cols_);
  for (std::size_t i = 0; i < data_.size(); ++i) out.data_[i] = data_[i] - other.data_[i];
  return out;
}

CMatrix CMatrix::operator-() const {
  CMatrix out(rows_, cols_);
  for (std::size_t i = 0; i < data_.size(); ++i) out.data_[i] = -data_[i];
  return out;
}

CMatrix CMatrix::operator*(const CMatrix& other) const {
  if (cols_ != other.rows_) throw DimensionMismatch("matrix product shape mismatch");
  CMatrix out(rows_, other.cols_);
  for (std::size_t i = 0; i < rows_; ++i) {
    for (std::size_t k = 0; k < cols_; ++k) {
      const complexd aik = (*this)(i, k);
      if (aik == complexd(0.0, 0.0)) continue;
      for (std::size_t j = 0; j < other.cols_; ++j) {
        out(i, j) += aik * other(k, j);
      }
    }
  }
  return out;
}

CMatrix CMatrix::operator*(complexd scalar) const {
  CMatrix out(rows_, cols_);
  for (std::size_t i = 0; i < data_.size(); ++i) out.data_[i] = data_[i] * scalar;
  return out;
}

CMatrix CMatrix::adjoint() const {
  CMatrix out(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) out(j, i) = std::conj((*this)(i, j));
  return out;
}

CMatrix CMatrix::transpose() const {
  CMatrix out(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) out(j, i) = (*this)(i, j);
  return out;
}

CMatrix CMatrix::conjugate() const {
  CMatrix out(rows_, cols_);
  for (std::size_t i = 0; i < data_.size(); ++i) out.data_[i] = std::conj(data_[i]);
  return out;
}

complexd CMatrix::trace() const {
  if (!is_square()) throw NotSquare("trace of non-square matrix");
  complexd t = 0.0;
  for (std::size_t i = 0; i < rows_; ++i) t += (*this)(i, i);
  return t;
}

double CMatrix::frobenius_norm() const {
  double s = 0.0;
  for (const auto& z : data_) s += std::norm(z);
  return std::sqrt(s);
}

bool CMatrix::all_finite() const {
  for (const auto& z : data_) {
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return false;
  }
  return true;
}

CMatrix tensor(const CMatrix& x, const CMatrix& y) {
  CMatrix out(x.rows() * y.rows(), x.cols() * y.cols());
  for (std::size_t i = 0; i < x.rows(); ++i)
    for (std::size_t j = 0; j < x.cols(); ++j) {
      const complexd xij = x(i, j);
      if (xij == complexd(0.0, 0.0)) continue;
      for (std::size_t k = 0; k < y.rows(); ++k)
        for (std::size_t l = 0; l < y.cols(); ++l)
          out(i * y.rows() + k, j * y.cols() + l) = xij * y(k, l);
    }
  return out;
}

CMatrix partial_trace_first(const CMatrix& m, std::size_t d) {
  if (m.rows() != d * d || m.cols() != d * d)
    throw DimensionMismatch("partial trace expects a d^2 x d^2 matrix");
  CMatrix out(d, d);
  for (std::size_t k = 0; k < d; ++k)
    for (std::size_t l = 0; l < d; ++l) {
      complexd s = 0.0;
      for (std::size_t j = 0; j < d; ++j) s += m(j * d + k, j * d + l);
      out(k, l) = s;
    }
  return out;
}

CMatrix partial_trace_second(const CMatrix& m, std::size_t d) {
  if (m.rows() != d * d || m.cols() != d * d)
    throw DimensionMismatch("partial trace expects a d^2 x d^2 matrix");
  CMatrix out(d, d);
  for (std::size_t j = 0; j < d; ++j)
    for (std::size_t l = 0; l < d; ++l) {
      complexd s = 0.0;
      for (std::size_t k = 0; k < d; ++k) s += m(j * d + k, l * d + k);
      out(j, l) = s;
    }
  return out;
}

double frobenius_distance(const CMatrix& a, const CMatrix& b) {
  return (a - b).frobenius_norm();
}

}  // namespace qcoex
