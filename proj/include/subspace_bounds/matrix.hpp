#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace sbounds {

using Complex = std::complex<double>;

/// Dense row-major complex matrix. Only what the small-dimension
/// eigenproblems in this library need.
class ComplexMatrix {
 public:
  ComplexMatrix() = default;
  ComplexMatrix(std::size_t rows, std::size_t cols);

  static ComplexMatrix identity(std::size_t n);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  Complex& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const Complex& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  std::span<const Complex> data() const { return data_; }

  ComplexMatrix adjoint() const;
  double frobenius_norm() const;
  double max_abs() const;

  ComplexMatrix& operator+=(const ComplexMatrix& other);
  ComplexMatrix& operator-=(const ComplexMatrix& other);
  ComplexMatrix& operator*=(double s);

  friend ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b) { return a += b; }
  friend ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b) { return a -= b; }
  friend ComplexMatrix operator*(ComplexMatrix a, double s) { return a *= s; }
  friend ComplexMatrix operator*(double s, ComplexMatrix a) { return a *= s; }
  friend ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b);

  friend bool operator==(const ComplexMatrix&, const ComplexMatrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Complex> data_;
};

/// Square complex matrix equal to its conjugate transpose.
///
/// Construction checks |m(i,j) - conj(m(j,i))| <= rel_tol * max|m| and then
/// replaces the matrix by its exact Hermitian part, so every instance is
/// exactly Hermitian (real diagonal, mirrored off-diagonal).
class HermitianMatrix {
 public:
  static constexpr double kSymmetryTolerance = 1e-12;

  explicit HermitianMatrix(ComplexMatrix m, double rel_tol = kSymmetryTolerance);

  static HermitianMatrix zero(std::size_t dim);
  static HermitianMatrix diagonal(std::span<const double> values);

  std::size_t dim() const { return m_.rows(); }
  const Complex& operator()(std::size_t i, std::size_t j) const { return m_(i, j); }
  const ComplexMatrix& matrix() const { return m_; }

  HermitianMatrix operator+(const HermitianMatrix& other) const;
  HermitianMatrix operator-(const HermitianMatrix& other) const;
  HermitianMatrix scaled(double s) const;

  friend bool operator==(const HermitianMatrix&, const HermitianMatrix&) = default;

 private:
  struct Trusted {};
  HermitianMatrix(ComplexMatrix m, Trusted) : m_(std::move(m)) {}

  ComplexMatrix m_;
};

/// U * diag(values) * U^*.
HermitianMatrix unitary_congruence(const ComplexMatrix& u, std::span<const double> values);

/// U * M * U^* for a Hermitian M; result is re-symmetrized.
HermitianMatrix unitary_congruence(const ComplexMatrix& u, const HermitianMatrix& m);

}  // namespace sbounds
