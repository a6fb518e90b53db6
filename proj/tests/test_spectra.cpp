#include "doctest.h"

#include "kdyn/errors.hpp"
#include "kdyn/exact_linalg.hpp"
#include "kdyn/spectra.hpp"

#include <cmath>
#include <random>

using namespace kdyn;

namespace {

const double kPhi2 = 2.6180339887498949;

Matrix companion(const std::vector<long long>& ascending) {
  const std::size_t n = ascending.size() - 1;
  Matrix m(n, n);
  for (std::size_t i = 1; i < n; ++i) m(i, i - 1) = 1;
  for (std::size_t i = 0; i < n; ++i) m(i, n - 1) = -ascending[i];
  return m;
}

// Random product of elementary and signed permutation matrices.
Matrix random_unimodular(std::size_t n, std::mt19937_64& rng) {
  Matrix m = Matrix::identity(n);
  std::uniform_int_distribution<std::size_t> idx(0, n - 1);
  std::uniform_int_distribution<int> coef(-2, 2), kind(0, 3);
  for (int s = 0; s < 6; ++s) {
    Matrix e = Matrix::identity(n);
    const auto i = idx(rng), j = idx(rng);
    if (kind(rng) == 0 || i == j) {
      e(i, i) = -1;
    } else {
      e(i, j) = coef(rng);
    }
    m = m * e;
  }
  return m;
}

}  // namespace

TEST_SUITE("spectra") {
  TEST_CASE("spectral radius values") {
    const auto id = spectral_radius(Matrix::identity(3));
    CHECK(id.radius == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(id.entropy_class == EntropyClass::null);
    CHECK(id.exact_class);

    const auto f2 = spectral_radius(Matrix{{2, 1}, {1, 1}});
    CHECK(std::abs(f2.radius - kPhi2) <= 1e-9);
    CHECK(f2.error_bound <= 1e-9);
    CHECK(f2.entropy_class == EntropyClass::positive);

    const auto lehmer = spectral_radius(companion({1, 1, 0, -1, -1, -1, -1, -1, 0, 1, 1}));
    CHECK(std::abs(lehmer.radius - 1.1762808182599176) <= 1e-9);
    CHECK(lehmer.entropy_class == EntropyClass::positive);

    const auto k = spectral_radius(Matrix{{0, 1, 0}, {0, 3, 1}, {1, 0, 3}});
    CHECK(std::abs(k.radius - 3.5320888862379562) <= 1e-9);
    CHECK_THROWS_AS(spectral_radius(Matrix::identity(2), 0.0), ParameterError);
  }

  TEST_CASE("null entropy decisions") {
    CHECK(is_null_entropy(Matrix{{1, 1}, {0, 1}}));
    CHECK(is_null_entropy(Matrix{{0, -1}, {1, 0}}));
    CHECK_FALSE(is_null_entropy(Matrix{{2, 1}, {1, 1}}));
    const auto j = null_entropy_test(Matrix{{0, -1}, {1, 0}});
    CHECK(j.exact);
    REQUIRE(j.cyclotomic_factors.size() == 1);
    CHECK(j.cyclotomic_factors.front().first == 4);
    const auto numeric = null_entropy_test(Matrix::diagonal({2, Rational(1, 2)}));
    CHECK_FALSE(numeric.exact);
    CHECK_FALSE(numeric.null_entropy);
  }

  TEST_CASE("null entropy agrees with the radius on random unimodular matrices") {
    std::mt19937_64 rng(2024);
    for (int t = 0; t < 150; ++t) {
      const auto m = random_unimodular(2 + t % 11, rng);
      const bool null = is_null_entropy(m);
      const double r = spectral_radius(m, 1e-9).radius;
      CHECK(null == (std::abs(r - 1.0) <= 1e-6));
      if (null) {
        CHECK(unipotent_power(m).has_value());
        CHECK(is_unipotent(m.pow(*unipotent_power(m))));
        CHECK(is_null_entropy(m.pow(3)));
      }
    }
  }

  TEST_CASE("radius of powers") {
    const Matrix k{{1, 1, 2}, {2, 4, 7}, {1, 2, 4}};
    const double r = spectral_radius(k).radius;
    for (int p = 1; p <= 5; ++p) CHECK(spectral_radius(k.pow(p)).radius == doctest::Approx(std::pow(r, p)).epsilon(1e-9));
  }

  TEST_CASE("entropy inequality") {
    const auto id = entropy_inequality_check(Matrix::identity(3), 3);
    CHECK(id.holds());
    CHECK(id.rho == doctest::Approx(1.0));
    const auto f2 = entropy_inequality_check(Matrix{{2, 1}, {1, 1}}, 2);
    CHECK(f2.holds());
    CHECK(std::abs(f2.rho_inverse - kPhi2) <= 1e-9);
    const auto k = entropy_inequality_check(Matrix{{0, 1, 0}, {0, 3, 1}, {1, 0, 3}}, 3);
    CHECK(k.holds());
    CHECK(std::abs(k.rho_inverse - 8.2908593693815895) <= 1e-8);
    CHECK(k.rho_inverse <= k.rho * k.rho);
  }

  TEST_CASE("polynomial roots carry inclusion radii") {
    RVector c{Rational(-2), Rational(0), Rational(1)};  // x^2 - 2
    const auto roots = polynomial_roots(Polynomial(c), 1e-12);
    REQUIRE(roots.roots.size() == 2);
    for (std::size_t i = 0; i < 2; ++i) {
      CHECK(std::abs(std::abs(roots.roots[i]) - std::sqrt(2.0)) <= roots.radii[i] + 1e-15);
      CHECK(roots.radii[i] <= 1e-12);
    }
  }
}
