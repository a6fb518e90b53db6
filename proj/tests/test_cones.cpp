#include "doctest.h"

#include "kdyn/cones.hpp"
#include "kdyn/spectra.hpp"

#include <cmath>

using namespace kdyn;

namespace {

const double kPhi = 1.6180339887498949;
const double kPhi2 = 2.6180339887498949;

Eigen::VectorXd vec(std::initializer_list<double> v) {
  Eigen::VectorXd out(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double x : v) out(i++) = x;
  return out;
}

bool same_ray(const Eigen::VectorXd& a, const Eigen::VectorXd& b, double tol) {
  return (a / a.norm() - b / b.norm()).norm() <= tol;
}

ConeSpec lorentz() { return ConeSpec::lorentzian(Matrix{{2, -1}, {-1, -2}}, {1, 0}); }

}  // namespace

TEST_SUITE("cones") {
  TEST_CASE("validate_cone") {
    const auto orthant = validate_cone(ConeSpec::orthant(3));
    CHECK(orthant.ok);
    CHECK(orthant.full_dimensional);

    const auto line = validate_cone(ConeSpec::polyhedral({vec({1, 0}), vec({-1, 0})}));
    CHECK_FALSE(line.ok);
    REQUIRE_FALSE(line.violations.empty());
    CHECK(same_ray(line.violations.front().witness.cwiseAbs(), vec({1, 0}), 1e-9));

    const auto lor = validate_cone(lorentz());
    CHECK(lor.ok);
    CHECK(lor.positive == 1);
    CHECK(lor.negative == 1);
    CHECK(lor.zero == 0);
  }

  TEST_CASE("membership") {
    const auto o = ConeSpec::orthant(3);
    CHECK(membership(o, vec({1, 1, 1})) == Membership::interior);
    CHECK(membership(o, vec({1, 0, 0})) == Membership::boundary);
    CHECK(membership(o, vec({-1, 0, 0})) == Membership::outside);
    CHECK(membership(lorentz(), vec({1, 0})) == Membership::interior);
    CHECK(membership(lorentz(), vec({1, kPhi - 1})) == Membership::boundary);
    CHECK(membership(lorentz(), vec({-1, 0})) == Membership::outside);
  }

  TEST_CASE("preserves_cone") {
    CHECK(preserves_cone(Matrix{{2, 1}, {1, 1}}, ConeSpec::orthant(2)).preserved);
    const auto neg = preserves_cone(Matrix::identity(2) * Rational(-1), ConeSpec::orthant(2));
    CHECK_FALSE(neg.preserved);
    REQUIRE(neg.witness.has_value());
    CHECK(same_ray(*neg.witness, vec({1, 0}), 1e-9));
    CHECK(preserves_cone(Matrix{{2, 1}, {1, 1}}, lorentz()).preserved);
    CHECK_FALSE(preserves_cone(Matrix{{0, 1}, {1, 0}}, lorentz()).preserved);
  }

  TEST_CASE("bpf eigenvectors") {
    const auto id = bpf_eigenvector(Matrix::identity(3), ConeSpec::orthant(3));
    CHECK(id.eigenvalue == doctest::Approx(1.0));
    CHECK(id.membership != Membership::outside);

    const Matrix f2{{2, 1}, {1, 1}};
    const auto r = bpf_eigenvector(f2, ConeSpec::orthant(2));
    CHECK(same_ray(r.vector, vec({kPhi, 1}), 1e-9));
    CHECK(std::abs(r.eigenvalue - kPhi2) <= 2e-9);
    CHECK(r.residual <= 1e-9);
    CHECK(std::abs(r.vector.cwiseAbs().maxCoeff() - 1.0) <= 1e-12);

    const auto l = bpf_eigenvector(f2, lorentz());
    CHECK(same_ray(l.vector, vec({1, kPhi - 1}), 1e-8));
    CHECK(std::abs(l.eigenvalue - kPhi2) <= 2e-9);
    CHECK(l.membership == Membership::boundary);
  }

  TEST_CASE("bpf eigenvalue matches spectral radius") {
    const std::vector<Matrix> ms{Matrix{{2, 1}, {1, 1}}, Matrix{{1, 1}, {1, 2}}, Matrix{{3, 2}, {1, 1}},
                                 Matrix{{1, 1, 0}, {0, 1, 1}, {1, 0, 1}}};
    for (const auto& m : ms) {
      const auto spec = ConeSpec::orthant(m.rows());
      const auto r = bpf_eigenvector(m, spec);
      CHECK(std::abs(r.eigenvalue - spectral_radius(m).radius) <= 2e-9);
      CHECK(r.residual <= 1e-9);
      // ray invariance
      const Eigen::VectorXd img = m.to_eigen() * r.vector;
      CHECK(same_ray(img, r.vector, 1e-8));
    }
  }

  TEST_CASE("common invariant rays") {
    const Matrix f2{{2, 1}, {1, 1}};
    const auto single = common_invariant_ray({f2}, ConeSpec::orthant(2));
    REQUIRE(single.ray.has_value());
    CHECK(same_ray(single.ray->vector, bpf_eigenvector(f2, ConeSpec::orthant(2)).vector, 1e-9));

    const auto pair = common_invariant_ray({f2, f2 * f2}, ConeSpec::orthant(2));
    REQUIRE(pair.ray.has_value());
    CHECK(same_ray(pair.ray->vector, vec({kPhi, 1}), 1e-9));
    CHECK(pair.ray->eigenvalues[1] == doctest::Approx(kPhi2 * kPhi2));

    const auto none = common_invariant_ray({f2, Matrix{{0, -1}, {1, 0}}}, ConeSpec::orthant(2));
    CHECK_FALSE(none.ray.has_value());
    CHECK(none.reason == NotFound::certified_infeasible);
  }

  TEST_CASE("joint eigenrays of the cubic pair") {
    const Matrix k{{0, 1, 0}, {0, 3, 1}, {1, 0, 3}};
    const Matrix kp{{1, 1, 2}, {2, 4, 7}, {1, 2, 4}};
    const auto rays = joint_eigenrays({k, kp}, ConeSpec::orthant(3));
    // the cubic's eigenbasis is not in the orthant except for the Perron ray
    CHECK(rays.size() == 1);
    const auto c = common_invariant_ray({k, kp}, ConeSpec::orthant(3));
    REQUIRE(c.ray.has_value());
    CHECK(c.ray->eigenvalues[0] == doctest::Approx(3.5320888862379562));
    CHECK(c.ray->eigenvalues[0] <= spectral_radius(k).radius + 2e-9);
    CHECK(c.ray->eigenvalues[1] <= spectral_radius(kp).radius + 2e-9);
  }
}
