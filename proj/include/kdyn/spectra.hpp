#pragma once

#include "kdyn/matrix.hpp"
#include "kdyn/polynomial.hpp"

#include <complex>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace kdyn {

enum class EntropyClass { null, positive };

std::string to_string(EntropyClass c);

struct SpectralResult {
  double radius = 0.0;
  /// |radius - true spectral radius| <= error_bound.
  double error_bound = 0.0;
  Polynomial char_poly;
  EntropyClass entropy_class = EntropyClass::null;
  /// True when entropy_class comes from the exact cyclotomic test.
  bool exact_class = false;
};

/// Roots of a polynomial by Aberth iteration, refined in extended precision
/// until every inclusion radius is below tol (or precision is exhausted).
/// radii[i] is an inclusion radius for roots[i].
struct RootApproximation {
  std::vector<std::complex<double>> roots;
  std::vector<double> radii;
  /// Bound on |max |root| - max |approx||.
  double modulus_error = 0.0;
};
RootApproximation polynomial_roots(const Polynomial& p, double tol);

/// Max root modulus of char_poly(m) with a certified error bound.
/// Throws ParameterError for tol <= 0, DimensionError for non-square input.
SpectralResult spectral_radius(const Matrix& m, double tol = 1e-9);

struct NullEntropyResult {
  bool null_entropy = false;
  /// False when the input was not integral unimodular and a numeric test was used.
  bool exact = false;
  std::vector<std::pair<unsigned long, int>> cyclotomic_factors;
  Polynomial char_poly;
  double radius = 0.0;
};

/// Kronecker test: char_poly(m) is a product of cyclotomic polynomials.
NullEntropyResult null_entropy_test(const Matrix& m, double tol = 1e-9);
bool is_null_entropy(const Matrix& m);

/// Smallest N with m^N unipotent, when m is certified null-entropy.
std::optional<long long> unipotent_power(const Matrix& m);
bool is_unipotent(const Matrix& m);

/// log of the spectral radius.
double entropy(const Matrix& m, double tol = 1e-9);

struct EntropyInequality {
  double rho = 0.0;
  double rho_inverse = 0.0;
  int dimension = 0;
  /// rho(m^-1) <= rho(m)^(n-1)
  bool inverse_bounded = false;
  /// rho(m) <= rho(m^-1)^(n-1)
  bool forward_bounded = false;
  bool holds() const { return inverse_bounded && forward_bounded; }
};

EntropyInequality entropy_inequality_check(const Matrix& m, int n, double tol = 1e-9);

}  // namespace kdyn
