#include "subspace_bounds/matrix.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace sbounds {

ComplexMatrix::ComplexMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), data_(rows * cols, Complex{0.0, 0.0}) {}

ComplexMatrix ComplexMatrix::identity(std::size_t n) {
  ComplexMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

ComplexMatrix ComplexMatrix::adjoint() const {
  ComplexMatrix t(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) t(j, i) = std::conj((*this)(i, j));
  return t;
}

double ComplexMatrix::frobenius_norm() const {
  double s = 0.0;
  for (const auto& z : data_) s += std::norm(z);
  return std::sqrt(s);
}

double ComplexMatrix::max_abs() const {
  double m = 0.0;
  for (const auto& z : data_) m = std::max(m, std::abs(z));
  return m;
}

ComplexMatrix& ComplexMatrix::operator+=(const ComplexMatrix& other) {
  if (rows_ != other.rows_ || cols_ != other.cols_)
    throw std::invalid_argument("matrix addition: shape mismatch");
  for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += other.data_[k];
  return *this;
}

ComplexMatrix& ComplexMatrix::operator-=(const ComplexMatrix& other) {
  if (rows_ != other.rows_ || cols_ != other.cols_)
    throw std::invalid_argument("matrix subtraction: shape mismatch");
  for (std::size_t k = 0; k < data_.size(); ++k) data_[k] -= other.data_[k];
  return *this;
}

ComplexMatrix& ComplexMatrix::operator*=(double s) {
  for (auto& z : data_) z *= s;
  return *this;
}

ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.cols_ != b.rows_) throw std::invalid_argument("matrix product: shape mismatch");
  ComplexMatrix c(a.rows_, b.cols_);
  for (std::size_t i = 0; i < a.rows_; ++i)
    for (std::size_t k = 0; k < a.cols_; ++k) {
      const Complex aik = a(i, k);
      if (aik == Complex{}) continue;
      for (std::size_t j = 0; j < b.cols_; ++j) c(i, j) += aik * b(k, j);
    }
  return c;
}

HermitianMatrix::HermitianMatrix(ComplexMatrix m, double rel_tol) {
  if (m.rows() == 0 || m.rows() != m.cols())
    throw std::invalid_argument("Hermitian matrix must be square with dim >= 1");
  const std::size_t n = m.rows();
  const double scale = m.max_abs();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j) {
      const double asym = std::abs(m(i, j) - std::conj(m(j, i)));
      if (!std::isfinite(asym) || asym > rel_tol * scale) {
        std::ostringstream msg;
        msg << "matrix is not Hermitian at (" << i << ", " << j << "): asymmetry " << asym;
        throw std::invalid_argument(msg.str());
      }
    }
  for (std::size_t i = 0; i < n; ++i) {
    m(i, i) = Complex{m(i, i).real(), 0.0};
    for (std::size_t j = i + 1; j < n; ++j) {
      const Complex h = 0.5 * (m(i, j) + std::conj(m(j, i)));
      m(i, j) = h;
      m(j, i) = std::conj(h);
    }
  }
  m_ = std::move(m);
}

HermitianMatrix HermitianMatrix::zero(std::size_t dim) {
  if (dim == 0) throw std::invalid_argument("Hermitian matrix must have dim >= 1");
  return HermitianMatrix(ComplexMatrix(dim, dim), Trusted{});
}

HermitianMatrix HermitianMatrix::diagonal(std::span<const double> values) {
  if (values.empty()) throw std::invalid_argument("Hermitian matrix must have dim >= 1");
  ComplexMatrix m(values.size(), values.size());
  for (std::size_t i = 0; i < values.size(); ++i) m(i, i) = values[i];
  return HermitianMatrix(std::move(m), Trusted{});
}

HermitianMatrix HermitianMatrix::operator+(const HermitianMatrix& other) const {
  // conj(a) + conj(b) == conj(a + b) exactly, so the sum stays Hermitian.
  return HermitianMatrix(m_ + other.m_, Trusted{});
}

HermitianMatrix HermitianMatrix::operator-(const HermitianMatrix& other) const {
  return HermitianMatrix(m_ - other.m_, Trusted{});
}

HermitianMatrix HermitianMatrix::scaled(double s) const { return HermitianMatrix(m_ * s, Trusted{}); }

namespace {

// Hermitian part of a matrix that is Hermitian up to roundoff.
HermitianMatrix symmetrized(ComplexMatrix m) { return HermitianMatrix(std::move(m), 1.0); }

}  // namespace

HermitianMatrix unitary_congruence(const ComplexMatrix& u, std::span<const double> values) {
  const std::size_t n = u.rows();
  if (u.cols() != values.size() || n != values.size())
    throw std::invalid_argument("unitary_congruence: shape mismatch");
  ComplexMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j) {
      Complex s{};
      for (std::size_t k = 0; k < n; ++k) s += u(i, k) * values[k] * std::conj(u(j, k));
      m(i, j) = s;
      m(j, i) = std::conj(s);
    }
  return symmetrized(std::move(m));
}

HermitianMatrix unitary_congruence(const ComplexMatrix& u, const HermitianMatrix& m) {
  return symmetrized(u * m.matrix() * u.adjoint());
}

}  // namespace sbounds
