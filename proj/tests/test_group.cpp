#include "doctest.h"

#include "kdyn/errors.hpp"
#include "kdyn/group.hpp"
#include "kdyn/models.hpp"
#include "kdyn/spectra.hpp"

#include <set>

using namespace kdyn;

namespace {

const Matrix kF2{{2, 1}, {1, 1}};
const Matrix kJ{{0, -1}, {1, 0}};

GeneratorSet cubic_pair() { return builtin("squarefree_torus:3").gens; }

}  // namespace

TEST_SUITE("group") {
  TEST_CASE("enumeration counts") {
    const auto f2 = GeneratorSet::from_matrices({kF2});
    CHECK(enumerate_words(f2, 2).words.size() == 5);
    CHECK(enumerate_words(f2, 3).words.size() == 7);
    const auto pair = cubic_pair();
    CHECK(enumerate_words(pair, 2).words.size() == 13);
    CHECK(enumerate_words(pair, 6).words.size() == 85);
    const auto capped = enumerate_words(pair, 6, 20);
    CHECK(capped.truncated);
    CHECK(capped.words.size() == 20);
  }

  TEST_CASE("enumeration is closed under inversion with one identity") {
    const auto tri = builtin("triangular_solvable").gens;
    const auto e = enumerate_words(tri, 4);
    std::set<std::string> keys;
    int identities = 0;
    for (const auto& w : e.words) {
      keys.insert(w.matrix.key());
      if (w.matrix.is_identity()) ++identities;
      for (std::size_t i = 1; i < w.letters.size(); ++i)
        CHECK_FALSE((w.letters[i].gen == w.letters[i - 1].gen && w.letters[i].exp == -w.letters[i - 1].exp));
    }
    CHECK(identities == 1);
    CHECK(e.words.front().letters.empty());
    for (const auto& w : e.words) CHECK(keys.count(w.matrix.inverse().key()) == 1);
  }

  TEST_CASE("words evaluate to the ordered product") {
    const auto g = cubic_pair();
    const auto w = g.word({{0, 1}, {1, -1}, {1, 1}, {0, 1}});
    CHECK(w.length() == 2);
    CHECK(w.matrix == g.matrices()[0] * g.matrices()[0]);
    const auto c = g.commutator(g.generator(0), g.generator(1));
    CHECK(c.matrix.is_identity());
    CHECK_THROWS_AS(GeneratorSet::from_matrices({Matrix::identity(2), Matrix::identity(3)}), DimensionError);
  }

  TEST_CASE("derived series") {
    const auto abelian = derived_series(cubic_pair(), 2, 6);
    REQUIRE(abelian.levels.size() >= 1);
    CHECK(abelian.levels[0].trivial());
    CHECK(abelian.sampling_length == 6);

    const auto single = derived_series(GeneratorSet::from_matrices({kF2}), 1, 6);
    CHECK(single.levels[0].trivial());

    const auto tri = derived_series(builtin("triangular_solvable").gens, 2, 6);
    REQUIRE(tri.levels.size() == 2);
    CHECK(tri.levels[0].generators.size() == 358);
    CHECK(tri.levels[1].trivial());
    bool found = false;
    for (const auto& w : tri.levels[0].generators) {
      CHECK(is_unipotent(w.matrix));
      if (w.matrix == Matrix{{1, 0, 1}, {0, 1, 1}, {0, 0, 1}}) found = true;
    }
    CHECK(found);
  }

  TEST_CASE("unipotency audit") {
    CHECK(unipotency_audit(cubic_pair(), 6).pass);
    const auto tri = unipotency_audit(builtin("triangular_solvable").gens, 6);
    CHECK(tri.pass);
    CHECK(tri.checked == 368);
    for (int l = 2; l <= 6; ++l) CHECK(unipotency_audit(builtin("triangular_solvable").gens, l).pass);

    const auto bad = unipotency_audit(GeneratorSet::from_matrices({kF2, kJ}), 4);
    CHECK_FALSE(bad.pass);
    REQUIRE(bad.counterexample.has_value());
    CHECK(bad.counterexample->to_string({"g0", "g1"}) == "g0.g1.g0^-1.g1^-1");
    CHECK(bad.counterexample_char_poly == Polynomial({Rational(1), Rational(-7), Rational(1)}));
  }

  TEST_CASE("connected reduction") {
    const auto red = connected_reduction(GeneratorSet::from_matrices({kF2 * Rational(-1), kJ, Matrix{{1, 1}, {0, 1}}, kF2}));
    REQUIRE(red.powers.size() == 4);
    CHECK(red.powers[0].power == 2);
    CHECK(red.powers[1].power == 4);
    CHECK(red.powers[2].power == 1);
    CHECK(red.powers[3].power == 1);
    CHECK(red.generators.matrices()[1].is_identity());
    CHECK(red.generators.matrices()[0] == kF2 * kF2);
  }

  TEST_CASE("random words are reduced and reproducible") {
    const auto g = cubic_pair();
    std::mt19937_64 a(5), b(5);
    for (int t = 0; t < 20; ++t) {
      const auto wa = g.random_word(6, a), wb = g.random_word(6, b);
      CHECK(wa.letters == wb.letters);
      CHECK(wa.length() == 6);
    }
  }
}
