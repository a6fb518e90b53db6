#include "doctest.h"

#include "kdyn/characters.hpp"
#include "kdyn/errors.hpp"
#include "kdyn/models.hpp"
#include "kdyn/spectra.hpp"

#include <cmath>
#include <random>

using namespace kdyn;

namespace {

const double kLogPhi2 = 0.96242365011920694;

double sup(const Eigen::VectorXd& v) { return v.size() ? v.cwiseAbs().maxCoeff() : 0.0; }

CharacterSystem system_of(const ModelBundle& b) { return build_character_system(b.model, b.gens, b.cone); }

}  // namespace

TEST_SUITE("characters") {
  TEST_CASE("identity group") {
    const auto gens = GeneratorSet::from_matrices({Matrix::identity(3)});
    const auto sys = enumerate_characters(gens, ConeSpec::orthant(3), 3);
    REQUIRE(sys.m() == 1);
    CHECK(sys.primaries[0].values[0] == doctest::Approx(0.0));
    CHECK(sys.r_tilde == 0);
    CHECK(rank_of_values({Eigen::VectorXd::Zero(1)}, gens).rank == 0);
  }

  TEST_CASE("single hyperbolic generator on the orthant") {
    const auto gens = GeneratorSet::from_matrices({Matrix{{2, 1}, {1, 1}}});
    const auto sys = enumerate_characters(gens, ConeSpec::orthant(2), 2);
    REQUIRE(sys.m() == 1);
    CHECK(sys.primaries[0].values[0] == doctest::Approx(kLogPhi2).epsilon(1e-12));
    CHECK(sys.r_tilde == 1);
  }

  TEST_CASE("cubic pair: three characters summing to zero") {
    const auto b = builtin("squarefree_torus:3");
    const auto sys = system_of(b);
    REQUIRE(sys.m() == 3);
    const double expected[3][2] = {{-2.1151536271498697, -0.85326417874577784},
                                   {0.85326417874577784, -1.2618894484040919},
                                   {1.2618894484040919, 2.1151536271498697}};
    for (int i = 0; i < 3; ++i)
      for (int g = 0; g < 2; ++g) CHECK(std::abs(sys.primaries[i].values[g] - expected[i][g]) <= 1e-9);
    for (int g = 0; g < 2; ++g) {
      double s = 0;
      for (const auto& c : sys.primaries) s += c.values[g];
      CHECK(std::abs(s) <= 1e-9);
    }
    CHECK(sys.r_tilde == 2);
    CHECK(sys.Pi.size() == 2);
    CHECK(sys.Pi[0].size() == 2);
    const auto rec = rank_of_image(sys, b.gens);
    CHECK(rec.rank == 2);
    CHECK_FALSE(rec.disagreement);
    CHECK(rec.generator_relations.empty());
    // the only relation among the characters: per-generator sums vanish
    REQUIRE(sys.pi_rank.character_relations.size() == 1);
    const auto& c = sys.pi_rank.character_relations.front().coeffs;
    CHECK(std::abs(c[0]) == 1);
    CHECK(c[0] == c[1]);
    CHECK(c[1] == c[2]);
  }

  TEST_CASE("pi is a homomorphism") {
    const auto b = builtin("squarefree_torus:3");
    const auto sys = system_of(b);
    CHECK(sup(pi_map(sys, b.gens.identity())) == 0.0);
    const auto k = b.gens.generator(0), kp = b.gens.generator(1);
    CHECK(sup(pi_map(sys, b.gens.multiply(k, kp)) - pi_map(sys, k) - pi_map(sys, kp)) <= 1e-9);
    std::mt19937_64 rng(17);
    for (int t = 0; t < 20; ++t) {
      const auto w = b.gens.random_word(5, rng);
      CHECK(sup(pi_map(sys, b.gens.inverse(w)) + pi_map(sys, w)) <= 1e-9);
    }
  }

  TEST_CASE("additivity of Pi on random pairs") {
    for (const char* name : {"squarefree_torus:2", "squarefree_torus:3", "squarefree_torus:4", "triangular_solvable",
                             "lorentz_surface"}) {
      const auto b = builtin(name);
      const auto sys = system_of(b);
      CHECK(sys.m() <= b.model.piece_size(1));
      CHECK(static_cast<int>(sys.pi_components.size()) == b.model.dimension() - 1);
      std::mt19937_64 rng(99);
      std::uniform_int_distribution<std::size_t> len(1, 6);
      for (int t = 0; t < 100; ++t) {
        const auto w1 = b.gens.random_word(len(rng), rng), w2 = b.gens.random_word(len(rng), rng);
        const auto w12 = b.gens.multiply(w1, w2);
        CHECK(sup(Pi_map(sys, w12) - Pi_map(sys, w1) - Pi_map(sys, w2)) <= 1e-8);
        for (const auto& e : sys.extensions)
          CHECK(std::abs(e.evaluate(w12.matrix) - e.evaluate(w1.matrix) - e.evaluate(w2.matrix)) <= 1e-8);
      }
    }
  }

  TEST_CASE("characters weighted by multiplicity give log |det|") {
    for (const char* name : {"squarefree_torus:3", "squarefree_torus:4", "squarefree_torus:5"}) {
      const auto b = builtin(name);
      const auto sys = system_of(b);
      REQUIRE(sys.m() == b.model.piece_size(1));
      for (std::size_t g = 0; g < b.gens.size(); ++g) {
        double s = 0;
        for (const auto& c : sys.primaries) s += c.values[g];
        const double det = std::abs(to_double(b.gens.matrices()[g].determinant()));
        CHECK(std::exp(s) == doctest::Approx(det).epsilon(1e-6));
      }
    }
  }

  TEST_CASE("single generator of the cubic model needs one extension") {
    const auto b = builtin("squarefree_torus:3");
    const GeneratorSet k({b.gens.actions()[0]});
    const auto sys = build_character_system(b.model, k, b.cone);
    CHECK(sys.r_tilde == 1);
    CHECK(sys.extended);
    CHECK(sys.extensions.size() == 1);
    REQUIRE(sys.Pi.size() == 1);
    CHECK(sys.Pi[0].size() == 2);
    CHECK(rank_of_image(sys, k).rank == 1);
  }

  TEST_CASE("triangular model") {
    const auto b = builtin("triangular_solvable");
    const auto sys = system_of(b);
    REQUIRE(sys.m() == 2);
    CHECK(sys.primaries[0].values[0] == doctest::Approx(-kLogPhi2));
    CHECK(sys.primaries[1].values[0] == doctest::Approx(kLogPhi2));
    CHECK(sys.primaries[0].values[1] == doctest::Approx(0.0));
    CHECK(sys.r_tilde == 1);
    REQUIRE(sys.extensions.size() == 1);
    CHECK(sys.extensions[0].values[0] == doctest::Approx(kLogPhi2));
    CHECK(std::abs(sys.extensions[0].values[1]) <= 1e-9);
    const auto rec = rank_of_image(sys, b.gens);
    CHECK(rec.rank == 1);
    // g2 is unipotent and lies in the kernel of Pi
    CHECK(is_null_entropy(b.gens.matrices()[1]));
    CHECK(sup(Pi_map(sys, b.gens.generator(1))) <= 1e-9);
    REQUIRE(rec.generator_relations.size() == 1);
    CHECK(rec.relation_certified.front());
  }

  TEST_CASE("rank is bounded by characters and generators") {
    for (const char* name : {"squarefree_torus:2", "squarefree_torus:3", "squarefree_torus:4", "triangular_solvable",
                             "lorentz_surface"}) {
      const auto b = builtin(name);
      const auto sys = system_of(b);
      const auto rec = rank_of_image(sys, b.gens);
      CHECK(rec.rank <= static_cast<int>(std::min(sys.m(), b.gens.size())));
      CHECK(rec.rank <= b.model.dimension() - 1);
    }
  }

  TEST_CASE("discreteness gauge") {
    const auto b = builtin("squarefree_torus:3");
    const auto sys = system_of(b);
    const auto g = discreteness_gauge(sys, b.gens, 6);
    REQUIRE(g.delta0.has_value());
    CHECK(*g.delta0 > 1e-3);
    CHECK(g.kernel.empty());
    CHECK(g.words == 84);

    const auto t = builtin("triangular_solvable");
    const auto tsys = system_of(t);
    const auto tg = discreteness_gauge(tsys, t.gens, 6);
    CHECK_FALSE(tg.kernel.empty());
    for (const auto& w : tg.kernel) CHECK(is_null_entropy(w.matrix));
    CHECK(tg.kernel_numeric == 0);
  }

  TEST_CASE("unipotent group is kernel only") {
    const auto t = builtin("triangular_solvable");
    const GeneratorSet u({t.gens.actions()[1]});
    const auto sys = build_character_system(t.model, u, t.cone);
    const auto g = discreteness_gauge(sys, u, 4);
    CHECK(g.kernel_only);
    CHECK_FALSE(g.delta0.has_value());
  }

  TEST_CASE("integer relations") {
    Eigen::VectorXd a(1), b(1);
    a << 0.7071067811865476;
    b << 1.4142135623730951;
    const auto rel = find_integer_relations({a, b}, 1e11, 1 << 16, 1e-10);
    REQUIRE(rel.size() == 1);
    CHECK(std::abs(rel[0].coeffs[0]) == 2);
    CHECK(rel[0].coeffs[0] * -1 == 2 * rel[0].coeffs[1]);
  }
}
