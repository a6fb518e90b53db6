#pragma once

#include "kdyn/rational.hpp"

#include <Eigen/Dense>

#include <cstddef>
#include <initializer_list>
#include <string>
#include <vector>

namespace kdyn {

/// Dense matrix over exact rationals, row-major.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols);
  Matrix(std::initializer_list<std::initializer_list<Rational>> rows);

  static Matrix identity(std::size_t n);
  static Matrix diagonal(const RVector& entries);
  static Matrix from_columns(const std::vector<RVector>& columns, std::size_t rows);
  static Matrix kronecker(const Matrix& a, const Matrix& b);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool is_square() const { return rows_ == cols_; }

  Rational& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const Rational& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  RVector column(std::size_t c) const;

  Matrix operator*(const Matrix& other) const;
  Matrix operator+(const Matrix& other) const;
  Matrix operator-(const Matrix& other) const;
  Matrix operator*(const Rational& scalar) const;
  RVector operator*(const RVector& v) const;
  bool operator==(const Matrix& other) const = default;

  Matrix transpose() const;
  Rational trace() const;
  bool is_integral() const;
  bool is_identity() const;

  /// Fraction-free (Bareiss) determinant.
  Rational determinant() const;
  /// Gauss-Jordan inverse; throws Error when singular.
  Matrix inverse() const;
  /// Integer power; negative exponents use the inverse.
  Matrix pow(long long exponent) const;
  std::size_t rank() const;
  /// Indices of a maximal set of linearly independent columns, in order.
  std::vector<std::size_t> pivot_columns() const;

  Eigen::MatrixXd to_eigen() const;
  /// Stable textual key for hashing and dedup.
  std::string key() const;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Rational> data_;
};

Eigen::VectorXd to_eigen(const RVector& v);
bool is_zero(const RVector& v);

}  // namespace kdyn
