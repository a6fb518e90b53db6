#include "kdyn/matrix.hpp"

#include "kdyn/errors.hpp"

#include <utility>

namespace kdyn {

Matrix::Matrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), data_(rows * cols, Rational(0)) {}

Matrix::Matrix(std::initializer_list<std::initializer_list<Rational>> rows) {
  rows_ = rows.size();
  cols_ = rows_ == 0 ? 0 : rows.begin()->size();
  data_.reserve(rows_ * cols_);
  for (const auto& row : rows) {
    if (row.size() != cols_) throw DimensionError("ragged matrix literal");
    data_.insert(data_.end(), row.begin(), row.end());
  }
}

Matrix Matrix::identity(std::size_t n) {
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
  return m;
}

Matrix Matrix::diagonal(const RVector& entries) {
  Matrix m(entries.size(), entries.size());
  for (std::size_t i = 0; i < entries.size(); ++i) m(i, i) = entries[i];
  return m;
}

Matrix Matrix::from_columns(const std::vector<RVector>& columns, std::size_t rows) {
  Matrix m(rows, columns.size());
  for (std::size_t c = 0; c < columns.size(); ++c) {
    if (columns[c].size() != rows) throw DimensionError("column length mismatch");
    for (std::size_t r = 0; r < rows; ++r) m(r, c) = columns[c][r];
  }
  return m;
}

Matrix Matrix::kronecker(const Matrix& a, const Matrix& b) {
  Matrix m(a.rows_ * b.rows_, a.cols_ * b.cols_);
  for (std::size_t i = 0; i < a.rows_; ++i)
    for (std::size_t j = 0; j < a.cols_; ++j) {
      if (a(i, j) == 0) continue;
      for (std::size_t k = 0; k < b.rows_; ++k)
        for (std::size_t l = 0; l < b.cols_; ++l) m(i * b.rows_ + k, j * b.cols_ + l) = a(i, j) * b(k, l);
    }
  return m;
}

RVector Matrix::column(std::size_t c) const {
  RVector out(rows_);
  for (std::size_t r = 0; r < rows_; ++r) out[r] = (*this)(r, c);
  return out;
}

Matrix Matrix::operator*(const Matrix& other) const {
  if (cols_ != other.rows_) throw DimensionError("matrix product shape mismatch");
  Matrix out(rows_, other.cols_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t k = 0; k < cols_; ++k) {
      const Rational& a = (*this)(i, k);
      if (a == 0) continue;
      for (std::size_t j = 0; j < other.cols_; ++j) {
        const Rational& b = other(k, j);
        if (b != 0) out(i, j) += a * b;
      }
    }
  return out;
}

Matrix Matrix::operator+(const Matrix& other) const {
  if (rows_ != other.rows_ || cols_ != other.cols_) throw DimensionError("matrix sum shape mismatch");
  Matrix out = *this;
  for (std::size_t i = 0; i < data_.size(); ++i) out.data_[i] += other.data_[i];
  return out;
}

Matrix Matrix::operator-(const Matrix& other) const {
  if (rows_ != other.rows_ || cols_ != other.cols_) throw DimensionError("matrix difference shape mismatch");
  Matrix out = *this;
  for (std::size_t i = 0; i < data_.size(); ++i) out.data_[i] -= other.data_[i];
  return out;
}

Matrix Matrix::operator*(const Rational& scalar) const {
  Matrix out = *this;
  for (auto& x : out.data_) x *= scalar;
  return out;
}

RVector Matrix::operator*(const RVector& v) const {
  if (v.size() != cols_) throw DimensionError("matrix-vector shape mismatch");
  RVector out(rows_, Rational(0));
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j)
      if ((*this)(i, j) != 0 && v[j] != 0) out[i] += (*this)(i, j) * v[j];
  return out;
}

Matrix Matrix::transpose() const {
  Matrix out(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) out(j, i) = (*this)(i, j);
  return out;
}

Rational Matrix::trace() const {
  if (!is_square()) throw DimensionError("trace of non-square matrix");
  Rational t = 0;
  for (std::size_t i = 0; i < rows_; ++i) t += (*this)(i, i);
  return t;
}

bool Matrix::is_integral() const {
  for (const auto& x : data_)
    if (!kdyn::is_integer(x)) return false;
  return true;
}

bool Matrix::is_identity() const {
  if (!is_square()) return false;
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j)
      if ((*this)(i, j) != (i == j ? 1 : 0)) return false;
  return true;
}

Rational Matrix::determinant() const {
  if (!is_square()) throw DimensionError("determinant of non-square matrix");
  const std::size_t n = rows_;
  if (n == 0) return 1;
  Matrix a = *this;
  Rational prev = 1;
  int sign = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (a(k, k) == 0) {
      std::size_t p = k + 1;
      while (p < n && a(p, k) == 0) ++p;
      if (p == n) return 0;
      for (std::size_t j = 0; j < n; ++j) std::swap(a(k, j), a(p, j));
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      for (std::size_t j = k + 1; j < n; ++j) a(i, j) = (a(i, j) * a(k, k) - a(i, k) * a(k, j)) / prev;
      a(i, k) = 0;
    }
    prev = a(k, k);
  }
  return sign < 0 ? Rational(-a(n - 1, n - 1)) : a(n - 1, n - 1);
}

Matrix Matrix::inverse() const {
  if (!is_square()) throw DimensionError("inverse of non-square matrix");
  const std::size_t n = rows_;
  Matrix a = *this;
  Matrix inv = identity(n);
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t p = col;
    while (p < n && a(p, col) == 0) ++p;
    if (p == n) throw Error("singular matrix has no inverse");
    if (p != col)
      for (std::size_t j = 0; j < n; ++j) {
        std::swap(a(p, j), a(col, j));
        std::swap(inv(p, j), inv(col, j));
      }
    const Rational pivot = a(col, col);
    for (std::size_t j = 0; j < n; ++j) {
      a(col, j) /= pivot;
      inv(col, j) /= pivot;
    }
    for (std::size_t i = 0; i < n; ++i) {
      if (i == col || a(i, col) == 0) continue;
      const Rational f = a(i, col);
      for (std::size_t j = 0; j < n; ++j) {
        if (a(col, j) != 0) a(i, j) -= f * a(col, j);
        if (inv(col, j) != 0) inv(i, j) -= f * inv(col, j);
      }
    }
  }
  return inv;
}

Matrix Matrix::pow(long long exponent) const {
  if (!is_square()) throw DimensionError("power of non-square matrix");
  Matrix base = exponent < 0 ? inverse() : *this;
  unsigned long long e = exponent < 0 ? static_cast<unsigned long long>(-exponent)
                                      : static_cast<unsigned long long>(exponent);
  Matrix result = identity(rows_);
  while (e > 0) {
    if (e & 1ULL) result = result * base;
    e >>= 1ULL;
    if (e > 0) base = base * base;
  }
  return result;
}

std::vector<std::size_t> Matrix::pivot_columns() const {
  Matrix a = *this;
  std::vector<std::size_t> pivots;
  std::size_t row = 0;
  for (std::size_t col = 0; col < cols_ && row < rows_; ++col) {
    std::size_t p = row;
    while (p < rows_ && a(p, col) == 0) ++p;
    if (p == rows_) continue;
    if (p != row)
      for (std::size_t j = 0; j < cols_; ++j) std::swap(a(p, j), a(row, j));
    for (std::size_t i = row + 1; i < rows_; ++i) {
      if (a(i, col) == 0) continue;
      const Rational f = a(i, col) / a(row, col);
      for (std::size_t j = col; j < cols_; ++j)
        if (a(row, j) != 0) a(i, j) -= f * a(row, j);
    }
    pivots.push_back(col);
    ++row;
  }
  return pivots;
}

std::size_t Matrix::rank() const { return pivot_columns().size(); }

Eigen::MatrixXd Matrix::to_eigen() const {
  Eigen::MatrixXd out(rows_, cols_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) out(i, j) = to_double((*this)(i, j));
  return out;
}

std::string Matrix::key() const {
  std::string out = std::to_string(rows_) + "x" + std::to_string(cols_) + ":";
  for (const auto& x : data_) {
    out += format_rational(x);
    out += ',';
  }
  return out;
}

Eigen::VectorXd to_eigen(const RVector& v) {
  Eigen::VectorXd out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out(i) = to_double(v[i]);
  return out;
}

bool is_zero(const RVector& v) {
  for (const auto& x : v)
    if (x != 0) return false;
  return true;
}

}  // namespace kdyn
