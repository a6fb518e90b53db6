#include "doctest.h"

#include "kdyn/errors.hpp"
#include "kdyn/exact_linalg.hpp"
#include "kdyn/models.hpp"

#include <random>

using namespace kdyn;

namespace {

Polynomial poly(std::initializer_list<long long> ascending) {
  RVector c;
  for (auto v : ascending) c.emplace_back(v);
  return Polynomial(c);
}

Matrix random_integer(std::size_t n, std::mt19937_64& rng, int range = 4) {
  std::uniform_int_distribution<int> d(-range, range);
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) m(i, j) = d(rng);
  return m;
}

}  // namespace

TEST_SUITE("exact_linalg") {
  TEST_CASE("char_poly of small matrices") {
    CHECK(char_poly(Matrix::identity(2)) == poly({1, -2, 1}));
    CHECK(char_poly(Matrix{{2, 1}, {1, 1}}) == poly({1, -3, 1}));
    CHECK(char_poly(Matrix{{0, -1}, {1, 0}}) == poly({1, 0, 1}));
    // x^3 - 6x^2 + 9x - 1
    CHECK(char_poly(Matrix{{0, 1, 0}, {0, 3, 1}, {1, 0, 3}}) == poly({-1, 9, -6, 1}));
    CHECK_THROWS_AS(char_poly(Matrix(2, 3)), DimensionError);
  }

  TEST_CASE("hessenberg and trace recursion agree") {
    std::mt19937_64 rng(7);
    for (int t = 0; t < 40; ++t) {
      const auto m = random_integer(1 + t % 7, rng);
      CHECK(char_poly(m) == char_poly_trace_recursion(m));
    }
  }

  TEST_CASE("char_poly(MN) = char_poly(NM)") {
    std::mt19937_64 rng(11);
    for (int t = 0; t < 30; ++t) {
      const std::size_t n = 2 + t % 5;
      const auto a = random_integer(n, rng), b = random_integer(n, rng);
      CHECK(char_poly(a * b) == char_poly(b * a));
    }
  }

  TEST_CASE("unimodular integer matrices have constant term +-1") {
    const Matrix k{{1, 1, 2}, {2, 4, 7}, {1, 2, 4}};
    const auto p = char_poly(k * k);
    CHECK(p.is_integral());
    CHECK(abs(p.coeff(0)) == 1);
    CHECK(abs(char_poly(k).coeff(0)) == 1);
  }

  TEST_CASE("squarefree induced action") {
    const auto model = squarefree_algebra(3);
    CHECK(induced_action(Matrix::identity(3), model, 2) == Matrix::identity(3));
    // piece 2 basis e12, e13, e23
    CHECK(induced_action(Matrix::diagonal({2, 3, 5}), model, 2) == Matrix::diagonal({6, 10, 15}));
    CHECK(induced_action(Matrix::diagonal({2, 3, 5}), model, 3) == Matrix{{30}});
    const Matrix swap{{0, 1, 0}, {1, 0, 0}, {0, 0, 1}};
    CHECK(induced_action(swap, model, 2) == Matrix{{1, 0, 0}, {0, 0, 1}, {0, 1, 0}});
  }

  TEST_CASE("induced action is functorial on built-ins") {
    for (const char* name : {"squarefree_torus:3", "triangular_solvable", "squarefree_torus:4"}) {
      const auto b = builtin(name);
      const auto& g = b.gens.matrices();
      const Matrix prod = g[0] * g.back();
      for (int k = 2; k <= b.model.dimension(); ++k)
        CHECK(induced_action(g[0], b.model, k) * induced_action(g.back(), b.model, k) ==
              induced_action(prod, b.model, k));
    }
  }

  TEST_CASE("wedge in the squarefree algebra") {
    const auto model = squarefree_algebra(3);
    const auto e = [&](std::size_t i) { return basis_class(model, 1, i); };
    CHECK(wedge(model, {e(0), e(1)}).coords == RVector{1, 0, 0});
    CHECK(wedge(model, {e(0), e(0)}).coords == RVector{0, 0, 0});
    const GradedClass s{1, {1, 1, 1}};
    CHECK(wedge(model, {s, s, s}).coords == RVector{6});
    CHECK(wedge(model, {e(2), e(0), e(1)}).coords == wedge(model, {e(0), e(1), e(2)}).coords);
    CHECK_THROWS_AS(wedge(model, {s, s, s, s}), GradeError);
  }

  TEST_CASE("wedge is multilinear") {
    const auto model = squarefree_algebra(4);
    std::mt19937_64 rng(3);
    std::uniform_int_distribution<int> d(-5, 5);
    const auto rnd = [&] {
      GradedClass c{1, {}};
      for (int i = 0; i < 4; ++i) c.coords.emplace_back(d(rng));
      return c;
    };
    for (int t = 0; t < 20; ++t) {
      auto a = rnd(), b = rnd(), c = rnd();
      GradedClass ab{1, {}};
      for (int i = 0; i < 4; ++i) ab.coords.push_back(a.coords[i] * 3 + b.coords[i]);
      const auto lhs = wedge(model, {ab, c}).coords;
      const auto wa = wedge(model, {a, c}).coords, wb = wedge(model, {b, c}).coords;
      for (std::size_t i = 0; i < lhs.size(); ++i) CHECK(lhs[i] == 3 * wa[i] + wb[i]);
    }
    // four piece-1 basis vectors land in the top piece
    std::vector<GradedClass> all;
    for (std::size_t i = 0; i < 4; ++i) all.push_back(basis_class(model, 1, i));
    CHECK(wedge(model, all).coords.size() == 1);
  }

  TEST_CASE("cup table validation") {
    CohomologyModel m(2, {2, 1});
    CHECK_THROWS_AS(m.add_cup(1, 2, 0, 0, 0, 1), GradeError);
    CHECK_THROWS_AS(m.add_cup(1, 1, 0, 5, 0, 1), DimensionError);
    m.add_cup(1, 1, 0, 1, 0, 1);
    CHECK_THROWS_AS(m.add_cup(1, 1, 1, 0, 0, 1), DimensionError);
  }

  TEST_CASE("ring compatibility") {
    const auto model = squarefree_algebra(3);
    const auto id = complete_action("id", {Matrix::identity(3)}, model);
    CHECK(ring_compatibility_check(id, model).compatible);
    const auto diag = complete_action("d", {Matrix::diagonal({2, Rational(1, 2), 1})}, model);
    const auto ok = ring_compatibility_check(diag, model);
    CHECK(ok.compatible);
    CHECK(ok.volume_preserving);
    auto bad = diag;
    bad.pieces[1](0, 0) += 1;
    const auto rep = ring_compatibility_check(bad, model);
    CHECK_FALSE(rep.compatible);
    REQUIRE_FALSE(rep.violations.empty());
    CHECK(rep.violations.front().left_grade == 1);
    CHECK(rep.violations.front().right_grade == 1);
  }

  TEST_CASE("ungenerated piece is underdetermined") {
    CohomologyModel m(2, {2, 1});
    CHECK_THROWS_AS(induced_action(Matrix::identity(2), m, 2), UnderdeterminedError);
  }
}
