#include "kdyn/spectra.hpp"

#include "kdyn/errors.hpp"
#include "kdyn/exact_linalg.hpp"

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <boost/multiprecision/cpp_complex.hpp>

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>

namespace kdyn {

namespace mp = boost::multiprecision;

std::string to_string(EntropyClass c) { return c == EntropyClass::null ? "null" : "positive"; }

namespace {

template <class Real>
Real to_real(const Rational& q) {
  return Real(mp::numerator(q)) / Real(mp::denominator(q));
}

template <>
long double to_real<long double>(const Rational& q) {
  return static_cast<long double>(mp::cpp_bin_float_50(mp::numerator(q)) / mp::cpp_bin_float_50(mp::denominator(q)));
}

template <class Real, class Cplx>
struct Aberth {
  std::vector<Real> a;  // monic, ascending
  int d = 0;

  explicit Aberth(const Polynomial& p) {
    const Polynomial m = p.monic();
    d = m.degree();
    for (const auto& c : m.coefficients()) a.push_back(to_real<Real>(c));
  }

  void eval(const Cplx& z, Cplx& p, Cplx& dp) const {
    p = Cplx(a[static_cast<std::size_t>(d)]);
    dp = Cplx(0);
    for (int k = d - 1; k >= 0; --k) {
      dp = dp * z + p;
      p = p * z + Cplx(a[static_cast<std::size_t>(k)]);
    }
  }

  Real fujiwara() const {
    using std::abs;
    using std::pow;
    Real best = 0;
    for (int k = 1; k <= d; ++k) {
      Real c = abs(a[static_cast<std::size_t>(d - k)]);
      if (k == d) c /= 2;
      const Real r = pow(c, Real(1) / Real(k));
      if (r > best) best = r;
    }
    return 2 * best;
  }

  void iterate(std::vector<Cplx>& z, Real eps, int max_iter) const {
    using std::abs;
    for (int it = 0; it < max_iter; ++it) {
      Real largest = 0;
      for (int i = 0; i < d; ++i) {
        Cplx p, dp;
        eval(z[static_cast<std::size_t>(i)], p, dp);
        if (p == Cplx(0)) continue;
        Cplx s(0);
        for (int j = 0; j < d; ++j)
          if (j != i) s += Cplx(1) / (z[static_cast<std::size_t>(i)] - z[static_cast<std::size_t>(j)]);
        const Cplx ratio = p / dp;
        const Cplx w = ratio / (Cplx(1) - ratio * s);
        z[static_cast<std::size_t>(i)] -= w;
        const Real scale = std::max(Real(1), Real(abs(z[static_cast<std::size_t>(i)])));
        largest = std::max(largest, Real(abs(w)) / scale);
      }
      if (largest < eps) return;
    }
  }

  // Inclusion radii: the union of disks D(z_i, r_i) contains every root and
  // each connected component holds as many roots as disks.
  std::vector<Real> radii(const std::vector<Cplx>& z) const {
    using std::abs;
    std::vector<Real> r(static_cast<std::size_t>(d));
    for (int i = 0; i < d; ++i) {
      Cplx p, dp;
      eval(z[static_cast<std::size_t>(i)], p, dp);
      Cplx denom(1);
      for (int j = 0; j < d; ++j)
        if (j != i) denom *= z[static_cast<std::size_t>(i)] - z[static_cast<std::size_t>(j)];
      r[static_cast<std::size_t>(i)] = abs(denom) == 0 ? Real(1e300) : Real(d) * Real(abs(p)) / Real(abs(denom));
    }
    return r;
  }
};

template <class Real, class Cplx>
RootApproximation finish(const std::vector<Cplx>& z, const std::vector<Real>& r) {
  using std::abs;
  RootApproximation out;
  const std::size_t d = z.size();
  std::vector<double> mod(d);
  for (std::size_t i = 0; i < d; ++i) {
    out.roots.emplace_back(static_cast<double>(Real(z[i].real())), static_cast<double>(Real(z[i].imag())));
    out.radii.push_back(static_cast<double>(r[i]));
    mod[i] = static_cast<double>(Real(abs(z[i])));
  }
  if (d == 0) return out;
  // Components of overlapping disks.
  std::vector<std::size_t> comp(d);
  std::iota(comp.begin(), comp.end(), 0);
  std::function<std::size_t(std::size_t)> find = [&](std::size_t x) { return comp[x] == x ? x : comp[x] = find(comp[x]); };
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = i + 1; j < d; ++j)
      if (Real(abs(z[i] - z[j])) <= r[i] + r[j]) comp[find(i)] = find(j);
  const std::size_t top = static_cast<std::size_t>(std::max_element(mod.begin(), mod.end()) - mod.begin());
  double upper = 0;
  for (std::size_t i = 0; i < d; ++i) upper = std::max(upper, mod[i] + out.radii[i]);
  double lower = mod[top];
  for (std::size_t i = 0; i < d; ++i)
    if (find(i) == find(top)) lower = std::min(lower, mod[i] - out.radii[i]);
  out.modulus_error = std::max({upper - mod[top], mod[top] - lower, 4 * std::numeric_limits<double>::epsilon() * mod[top]});
  return out;
}

template <class Real, class Cplx>
RootApproximation refine(const Polynomial& p, const std::vector<std::complex<double>>* start, Real eps) {
  Aberth<Real, Cplx> solver(p);
  std::vector<Cplx> z;
  if (start) {
    for (const auto& s : *start) z.emplace_back(Real(s.real()), Real(s.imag()));
  } else {
    const Real radius = solver.fujiwara() / 2;
    const double two_pi = 6.283185307179586;
    for (int k = 0; k < solver.d; ++k) {
      const double angle = two_pi * k / solver.d + 0.4;
      z.emplace_back(radius * Real(std::cos(angle)), radius * Real(std::sin(angle)));
    }
  }
  solver.iterate(z, eps, start ? 200 : 2000);
  return finish<Real, Cplx>(z, solver.radii(z));
}

}  // namespace

RootApproximation polynomial_roots(const Polynomial& p, double tol) {
  if (tol <= 0) throw ParameterError("tolerance must be positive");
  if (p.degree() < 1) return {};
  const Polynomial sq = squarefree_part(p);
  if (sq.degree() == 1) {
    RootApproximation out;
    out.roots.emplace_back(to_double(-sq.coeff(0)), 0.0);
    out.radii.push_back(0.0);
    return out;
  }
  RootApproximation r = refine<long double, std::complex<long double>>(sq, nullptr, 1e-18L);
  if (r.modulus_error <= tol * 0.5) return r;
  r = refine<mp::cpp_bin_float_50, mp::cpp_complex_50>(sq, &r.roots, mp::cpp_bin_float_50(1e-45));
  if (r.modulus_error <= tol * 0.5) return r;
  return refine<mp::cpp_bin_float_100, mp::cpp_complex_100>(sq, &r.roots, mp::cpp_bin_float_100(1e-90));
}

namespace {

// Removes the factor x^k; returns k.
int strip_zero_roots(Polynomial& p) {
  int k = 0;
  while (p.degree() > 0 && p.coeff(0) == 0) {
    std::vector<Rational> c(p.coefficients().begin() + 1, p.coefficients().end());
    p = Polynomial(std::move(c));
    ++k;
  }
  return k;
}

}  // namespace

SpectralResult spectral_radius(const Matrix& m, double tol) {
  if (!(tol > 0)) throw ParameterError("tolerance must be positive");
  SpectralResult out;
  out.char_poly = char_poly(m);
  Polynomial p = out.char_poly;
  strip_zero_roots(p);
  if (p.degree() == 0) {
    out.entropy_class = EntropyClass::null;
    out.exact_class = true;
    return out;
  }
  if (p.is_integral()) {
    const auto fact = cyclotomic_factorization(p);
    out.exact_class = true;
    if (fact.fully_cyclotomic()) {
      out.radius = 1.0;
      out.entropy_class = EntropyClass::null;
      return out;
    }
    const auto roots = polynomial_roots(fact.cofactor, tol);
    for (const auto& z : roots.roots) out.radius = std::max(out.radius, std::abs(z));
    out.error_bound = roots.modulus_error;
    out.entropy_class = EntropyClass::positive;
    return out;
  }
  const auto roots = polynomial_roots(p, tol);
  for (const auto& z : roots.roots) out.radius = std::max(out.radius, std::abs(z));
  out.error_bound = roots.modulus_error;
  out.entropy_class =
      std::abs(out.radius - 1.0) <= std::max(out.error_bound, tol) ? EntropyClass::null : EntropyClass::positive;
  return out;
}

NullEntropyResult null_entropy_test(const Matrix& m, double tol) {
  NullEntropyResult out;
  out.char_poly = char_poly(m);
  const Rational det = m.determinant();
  if (m.is_integral() && (det == 1 || det == -1)) {
    const auto fact = cyclotomic_factorization(out.char_poly);
    out.exact = true;
    out.null_entropy = fact.fully_cyclotomic();
    out.cyclotomic_factors = fact.factors;
    out.radius = out.null_entropy ? 1.0 : spectral_radius(m, tol).radius;
    return out;
  }
  const auto sr = spectral_radius(m, tol);
  out.exact = false;
  out.radius = sr.radius;
  out.null_entropy = std::abs(sr.radius - 1.0) <= std::max(sr.error_bound, tol);
  return out;
}

bool is_null_entropy(const Matrix& m) { return null_entropy_test(m).null_entropy; }

bool is_unipotent(const Matrix& m) {
  const Polynomial p = char_poly(m);
  RVector ones(m.rows(), Rational(1));
  return p == Polynomial::from_roots(ones);
}

std::optional<long long> unipotent_power(const Matrix& m) {
  const auto test = null_entropy_test(m);
  if (!test.exact || !test.null_entropy) return std::nullopt;
  long long order = 1;
  for (const auto& [k, mult] : test.cyclotomic_factors) order = std::lcm(order, static_cast<long long>(k));
  if (!is_unipotent(m.pow(order)))
    throw InconsistencyError("power " + std::to_string(order) + " of a cyclotomic matrix is not unipotent");
  return order;
}

double entropy(const Matrix& m, double tol) { return std::log(spectral_radius(m, tol).radius); }

EntropyInequality entropy_inequality_check(const Matrix& m, int n, double tol) {
  if (n < 2) throw ParameterError("complex dimension must be at least 2");
  const auto fwd = spectral_radius(m, tol);
  const auto bwd = spectral_radius(m.inverse(), tol);
  EntropyInequality out;
  out.rho = fwd.radius;
  out.rho_inverse = bwd.radius;
  out.dimension = n;
  const auto bound = [&](double base, double base_err) {
    const double value = std::pow(base, n - 1);
    const double slack = (n - 1) * std::pow(base + base_err, std::max(0, n - 2)) * base_err;
    return value + slack;
  };
  const double fwd_err = std::max(fwd.error_bound, tol);
  const double bwd_err = std::max(bwd.error_bound, tol);
  out.inverse_bounded = out.rho_inverse <= bound(out.rho, fwd_err) + bwd_err;
  out.forward_bounded = out.rho <= bound(out.rho_inverse, bwd_err) + fwd_err;
  return out;
}

}  // namespace kdyn
