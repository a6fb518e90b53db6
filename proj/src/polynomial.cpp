#include "kdyn/polynomial.hpp"

#include "kdyn/errors.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <numeric>
#include <sstream>

namespace kdyn {

Polynomial::Polynomial(std::vector<Rational> ascending) : coeffs_(std::move(ascending)) { trim(); }

void Polynomial::trim() {
  while (!coeffs_.empty() && coeffs_.back() == 0) coeffs_.pop_back();
}

Polynomial Polynomial::monomial(std::size_t degree, Rational coeff) {
  std::vector<Rational> c(degree + 1, Rational(0));
  c[degree] = std::move(coeff);
  return Polynomial(std::move(c));
}

Polynomial Polynomial::from_roots(const RVector& roots) {
  Polynomial p = monomial(0);
  for (const auto& r : roots) p = p * Polynomial({Rational(-r), Rational(1)});
  return p;
}

Polynomial Polynomial::operator+(const Polynomial& o) const {
  std::vector<Rational> c(std::max(coeffs_.size(), o.coeffs_.size()), Rational(0));
  for (std::size_t i = 0; i < coeffs_.size(); ++i) c[i] += coeffs_[i];
  for (std::size_t i = 0; i < o.coeffs_.size(); ++i) c[i] += o.coeffs_[i];
  return Polynomial(std::move(c));
}

Polynomial Polynomial::operator-(const Polynomial& o) const { return *this + o * Rational(-1); }

Polynomial Polynomial::operator*(const Polynomial& o) const {
  if (is_zero() || o.is_zero()) return {};
  std::vector<Rational> c(coeffs_.size() + o.coeffs_.size() - 1, Rational(0));
  for (std::size_t i = 0; i < coeffs_.size(); ++i) {
    if (coeffs_[i] == 0) continue;
    for (std::size_t j = 0; j < o.coeffs_.size(); ++j)
      if (o.coeffs_[j] != 0) c[i + j] += coeffs_[i] * o.coeffs_[j];
  }
  return Polynomial(std::move(c));
}

Polynomial Polynomial::operator*(const Rational& s) const {
  std::vector<Rational> c = coeffs_;
  for (auto& x : c) x *= s;
  return Polynomial(std::move(c));
}

std::pair<Polynomial, Polynomial> Polynomial::divmod(const Polynomial& divisor) const {
  if (divisor.is_zero()) throw Error("polynomial division by zero");
  std::vector<Rational> rem = coeffs_;
  const int dd = divisor.degree();
  if (degree() < dd) return {Polynomial(), *this};
  std::vector<Rational> quot(static_cast<std::size_t>(degree() - dd + 1), Rational(0));
  const Rational& lead = divisor.leading();
  for (int k = degree() - dd; k >= 0; --k) {
    const Rational q = rem[static_cast<std::size_t>(k + dd)] / lead;
    quot[static_cast<std::size_t>(k)] = q;
    if (q == 0) continue;
    for (int j = 0; j <= dd; ++j) rem[static_cast<std::size_t>(k + j)] -= q * divisor.coeffs_[static_cast<std::size_t>(j)];
  }
  return {Polynomial(std::move(quot)), Polynomial(std::move(rem))};
}

Polynomial Polynomial::derivative() const {
  if (coeffs_.size() <= 1) return {};
  std::vector<Rational> c(coeffs_.size() - 1);
  for (std::size_t i = 1; i < coeffs_.size(); ++i) c[i - 1] = coeffs_[i] * static_cast<long>(i);
  return Polynomial(std::move(c));
}

Polynomial Polynomial::monic() const {
  if (is_zero()) return {};
  return *this * (Rational(1) / leading());
}

Polynomial Polynomial::reflect() const {
  std::vector<Rational> c = coeffs_;
  for (std::size_t i = 1; i < c.size(); i += 2) c[i] = -c[i];
  return Polynomial(std::move(c));
}

bool Polynomial::is_integral() const {
  for (const auto& c : coeffs_)
    if (!is_integer(c)) return false;
  return true;
}

Rational Polynomial::evaluate(const Rational& x) const {
  Rational acc = 0;
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * x + *it;
  return acc;
}

long double Polynomial::evaluate(long double x) const {
  long double acc = 0;
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * x + it->convert_to<long double>();
  return acc;
}

std::string Polynomial::to_string() const {
  if (is_zero()) return "0";
  std::ostringstream out;
  bool first = true;
  for (int k = degree(); k >= 0; --k) {
    const Rational& c = coeffs_[static_cast<std::size_t>(k)];
    if (c == 0) continue;
    const bool negative = c < 0;
    const Rational mag = negative ? Rational(-c) : c;
    if (first) {
      if (negative) out << "-";
    } else {
      out << (negative ? " - " : " + ");
    }
    first = false;
    const bool unit = mag == 1;
    if (k == 0) {
      out << format_rational(mag);
      continue;
    }
    if (!unit) out << format_rational(mag) << "*";
    out << "x";
    if (k > 1) out << "^" << k;
  }
  return out.str();
}

Polynomial gcd(Polynomial a, Polynomial b) {
  while (!b.is_zero()) {
    Polynomial r = a.divmod(b).second;
    a = std::move(b);
    b = std::move(r);
  }
  return a.monic();
}

Polynomial squarefree_part(const Polynomial& p) {
  if (p.degree() <= 0) return p.monic();
  const Polynomial g = gcd(p, p.derivative());
  return p.divmod(g).first.monic();
}

unsigned long euler_phi(unsigned long n) {
  unsigned long result = n;
  for (unsigned long p = 2; p * p <= n; ++p) {
    if (n % p != 0) continue;
    while (n % p == 0) n /= p;
    result -= result / p;
  }
  if (n > 1) result -= result / n;
  return result;
}

const Polynomial& cyclotomic(unsigned long k) {
  static std::mutex mutex;
  static std::map<unsigned long, Polynomial> cache;
  {
    std::lock_guard<std::mutex> lock(mutex);
    auto it = cache.find(k);
    if (it != cache.end()) return it->second;
  }
  if (k == 0) throw ParameterError("cyclotomic index must be positive");
  // Phi_k = (x^k - 1) / prod_{d | k, d < k} Phi_d
  Polynomial p = Polynomial::monomial(k) - Polynomial::monomial(0);
  for (unsigned long d = 1; d < k; ++d)
    if (k % d == 0) p = p.divmod(cyclotomic(d)).first;
  std::lock_guard<std::mutex> lock(mutex);
  return cache.emplace(k, std::move(p)).first->second;
}

std::vector<unsigned long> cyclotomic_indices_up_to_degree(int degree) {
  std::vector<unsigned long> out;
  if (degree < 1) return out;
  // Rosser-Schoenfeld: phi(k) > k / (e^gamma ln ln k + 3 / ln ln k) for k >= 3.
  const auto lower = [](double k) {
    const double ll = std::log(std::log(k));
    return k / (1.7810724179901979 * ll + 3.0 / ll);
  };
  unsigned long bound = 100;
  while (lower(static_cast<double>(bound)) <= degree) bound += 10;
  for (unsigned long k = 1; k <= bound; ++k)
    if (euler_phi(k) <= static_cast<unsigned long>(degree)) out.push_back(k);
  return out;
}

CyclotomicFactorization cyclotomic_factorization(const Polynomial& p) {
  if (p.is_zero()) throw Error("cyclotomic factorization of the zero polynomial");
  CyclotomicFactorization out;
  Polynomial rest = p.monic();
  for (unsigned long k : cyclotomic_indices_up_to_degree(rest.degree())) {
    const Polynomial& phi = cyclotomic(k);
    if (phi.degree() > rest.degree()) continue;
    int mult = 0;
    while (phi.degree() <= rest.degree()) {
      auto [q, r] = rest.divmod(phi);
      if (!r.is_zero()) break;
      rest = std::move(q);
      ++mult;
    }
    if (mult > 0) out.factors.emplace_back(k, mult);
    if (rest.degree() == 0) break;
  }
  out.cofactor = rest.monic();
  return out;
}

namespace {

int sign_changes_at(const std::vector<Polynomial>& chain, const Rational& x) {
  int changes = 0;
  int last = 0;
  for (const auto& p : chain) {
    const Rational v = p.evaluate(x);
    const int s = v > 0 ? 1 : (v < 0 ? -1 : 0);
    if (s == 0) continue;
    if (last != 0 && s != last) ++changes;
    last = s;
  }
  return changes;
}

int sign_changes_at_minus_infinity(const std::vector<Polynomial>& chain) {
  int changes = 0;
  int last = 0;
  for (const auto& p : chain) {
    if (p.is_zero()) continue;
    int s = p.leading() > 0 ? 1 : -1;
    if (p.degree() % 2 == 1) s = -s;
    if (last != 0 && s != last) ++changes;
    last = s;
  }
  return changes;
}

std::vector<Polynomial> sturm_chain(const Polynomial& p) {
  std::vector<Polynomial> chain{squarefree_part(p)};
  chain.push_back(chain[0].derivative());
  while (!chain.back().is_zero()) {
    Polynomial r = chain[chain.size() - 2].divmod(chain.back()).second * Rational(-1);
    if (r.is_zero()) break;
    chain.push_back(std::move(r));
  }
  return chain;
}

}  // namespace

int count_real_roots(const Polynomial& p, const Rational& lo, const Rational& hi) {
  if (p.degree() <= 0) return 0;
  const auto chain = sturm_chain(p);
  int count = sign_changes_at(chain, lo) - sign_changes_at(chain, hi);
  if (chain[0].evaluate(hi) == 0) --count;
  return count;
}

int count_negative_real_roots(const Polynomial& p) {
  if (p.degree() <= 0) return 0;
  const auto chain = sturm_chain(p);
  // Roots in (-inf, 0): V(-inf) - V(0), minus a root sitting exactly at 0.
  int count = sign_changes_at_minus_infinity(chain) - sign_changes_at(chain, Rational(0));
  if (chain[0].evaluate(Rational(0)) == 0) --count;
  return count;
}

}  // namespace kdyn
