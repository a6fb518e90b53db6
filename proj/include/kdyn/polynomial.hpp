#pragma once

#include "kdyn/rational.hpp"

#include <string>
#include <utility>
#include <vector>

namespace kdyn {

/// Univariate polynomial with exact rational coefficients, lowest degree first.
/// The zero polynomial has no coefficients and degree -1.
class Polynomial {
 public:
  Polynomial() = default;
  explicit Polynomial(std::vector<Rational> ascending);

  static Polynomial monomial(std::size_t degree, Rational coeff = 1);
  /// Product of (x - root) over the given roots.
  static Polynomial from_roots(const RVector& roots);

  int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
  bool is_zero() const { return coeffs_.empty(); }
  const std::vector<Rational>& coefficients() const { return coeffs_; }
  Rational coeff(std::size_t k) const { return k < coeffs_.size() ? coeffs_[k] : Rational(0); }
  const Rational& leading() const { return coeffs_.back(); }

  Polynomial operator+(const Polynomial& o) const;
  Polynomial operator-(const Polynomial& o) const;
  Polynomial operator*(const Polynomial& o) const;
  Polynomial operator*(const Rational& s) const;
  bool operator==(const Polynomial& o) const = default;

  /// Quotient and remainder; throws Error on division by zero.
  std::pair<Polynomial, Polynomial> divmod(const Polynomial& divisor) const;
  Polynomial derivative() const;
  Polynomial monic() const;
  /// p(-x).
  Polynomial reflect() const;
  bool is_integral() const;

  Rational evaluate(const Rational& x) const;
  long double evaluate(long double x) const;

  /// Human form, e.g. "x^2 - 3*x + 1".
  std::string to_string() const;

 private:
  void trim();
  std::vector<Rational> coeffs_;
};

/// Monic gcd (zero when both inputs vanish).
Polynomial gcd(Polynomial a, Polynomial b);
/// p / gcd(p, p'), monic.
Polynomial squarefree_part(const Polynomial& p);

unsigned long euler_phi(unsigned long n);
/// k-th cyclotomic polynomial; cached, safe for concurrent use.
const Polynomial& cyclotomic(unsigned long k);
/// All k >= 1 with phi(k) <= degree, ascending.
std::vector<unsigned long> cyclotomic_indices_up_to_degree(int degree);

struct CyclotomicFactorization {
  /// (k, multiplicity) for each Phi_k dividing p.
  std::vector<std::pair<unsigned long, int>> factors;
  /// p divided by all cyclotomic factors, monic.
  Polynomial cofactor;
  bool fully_cyclotomic() const { return cofactor.degree() == 0; }
};

/// Exact trial division of a monic rational polynomial by cyclotomics.
CyclotomicFactorization cyclotomic_factorization(const Polynomial& p);

/// Number of distinct real roots in the open interval (lo, hi), by Sturm sequence.
int count_real_roots(const Polynomial& p, const Rational& lo, const Rational& hi);
/// Number of distinct negative real roots.
int count_negative_real_roots(const Polynomial& p);

}  // namespace kdyn
