#include "doctest.h"

#include "kdyn/certify.hpp"

using namespace kdyn;

namespace {

CertificateInputs inputs() {
  CertificateInputs in;
  in.model_digest = "test";
  in.seed = 42;
  return in;
}

struct Analysed {
  ModelBundle bundle;
  CharacterSystem system;
};

Analysed analyse(const std::string& name) {
  Analysed a{builtin(name), {}};
  a.system = build_character_system(a.bundle.model, a.bundle.gens, a.bundle.cone);
  return a;
}

}  // namespace

TEST_SUITE("certify") {
  TEST_CASE("rank bound") {
    const auto c3 = analyse("squarefree_torus:3");
    const auto cert = rank_bound_certificate(c3.system, c3.bundle.gens, inputs());
    CHECK(cert.verdict == Verdict::certified);
    CHECK(cert.evidence["r"] == 2);
    CHECK(cert.evidence["tight"] == true);

    const auto c2 = analyse("squarefree_torus:2");
    const auto cert2 = rank_bound_certificate(c2.system, c2.bundle.gens, inputs());
    CHECK(cert2.verdict == Verdict::certified);
    CHECK(cert2.evidence["r"] == 1);

    const auto gens = GeneratorSet::from_matrices({Matrix::identity(3)});
    const auto trivial = build_character_system(squarefree_algebra(3), gens, ConeSpec::orthant(3));
    const auto cert0 = rank_bound_certificate(trivial, gens, inputs());
    CHECK(cert0.verdict == Verdict::certified);
    CHECK(cert0.evidence["r"] == 0);
  }

  TEST_CASE("rank bound never violated on built-ins") {
    for (const char* name : {"squarefree_torus:2", "squarefree_torus:3", "squarefree_torus:4", "triangular_solvable",
                             "lorentz_surface"}) {
      const auto a = analyse(name);
      CHECK(rank_bound_certificate(a.system, a.bundle.gens, inputs()).verdict == Verdict::certified);
    }
  }

  TEST_CASE("hodge inequalities") {
    const auto m3 = squarefree_algebra(3);
    const auto cert = hodge_bound_check(m3, 2, inputs());
    CHECK(cert.verdict == Verdict::certified);
    const auto& checks = cert.evidence["checks"];
    CHECK(checks[0]["bound"] == 3);
    CHECK(checks[0]["refined"] == true);
    CHECK(checks[1]["bound"] == 2);
    CHECK(hodge_bound_check(m3, 1, inputs()).verdict == Verdict::inconclusive);
    CHECK(hodge_bound_check(CohomologyModel(3, {2, 3, 1}), 2, inputs()).verdict == Verdict::violated);
    for (int n = 2; n <= 6; ++n) CHECK(hodge_bound_check(squarefree_algebra(n), n - 1, inputs()).verdict == Verdict::certified);
  }

  TEST_CASE("positivity witnesses") {
    const auto c3 = analyse("squarefree_torus:3");
    const auto cert = positivity_witness(c3.bundle.model, c3.system, c3.bundle.cone, 2, inputs());
    CHECK(cert.verdict == Verdict::certified);
    CHECK(cert.evidence["classes"].size() == 3);

    const auto c4 = analyse("squarefree_torus:4");
    const auto cert4 = positivity_witness(c4.bundle.model, c4.system, c4.bundle.cone, 3, inputs());
    CHECK(cert4.verdict == Verdict::certified);
    CHECK(cert4.evidence["exact"] == true);
    CHECK(cert4.evidence["wedge"] == json::array({"1"}));

    CHECK(positivity_witness(c3.bundle.model, c3.system, c3.bundle.cone, 0, inputs()).verdict == Verdict::certified);

    // idempotents of Q(phi): e1 e2 = 1 on the top piece
    const auto c2 = analyse("squarefree_torus:2");
    const auto cert2 = positivity_witness(c2.bundle.model, c2.system, c2.bundle.cone, 1, inputs());
    CHECK(cert2.verdict == Verdict::certified);
    CHECK(cert2.evidence["wedge"][0].get<double>() == doctest::Approx(1.0));
  }

  TEST_CASE("N(G) finiteness") {
    const auto c3 = analyse("squarefree_torus:3");
    const auto cert = ng_finiteness_certificate(c3.bundle.model, c3.bundle.gens, c3.system, c3.bundle.cone, 2, true, inputs());
    CHECK(cert.verdict == Verdict::certified);
    CHECK(cert.evidence["exact"] == true);
    CHECK(cert.evidence["c_exact"] == json::array({"1", "0", "0"}));
    CHECK(cert.evidence["c_power_n"] == json::array({"6"}));
    const auto cond = ng_finiteness_certificate(c3.bundle.model, c3.bundle.gens, c3.system, c3.bundle.cone, 2, false, inputs());
    CHECK(cond.verdict == Verdict::conditional);
    CHECK(cond.assumptions.size() > cert.assumptions.size());
    const auto t = analyse("triangular_solvable");
    CHECK(ng_finiteness_certificate(t.bundle.model, t.bundle.gens, t.system, t.bundle.cone, 1, true, inputs()).verdict ==
          Verdict::inconclusive);
  }

  TEST_CASE("eigenvalue on the common ray is at most the spectral radius") {
    const auto f2 = GeneratorSet::from_matrices({Matrix{{2, 1}, {1, 1}}});
    const auto cert = corollary21_check(f2, ConeSpec::orthant(2), {f2.generator(0), f2.identity()}, inputs());
    CHECK(cert.verdict == Verdict::certified);
    const auto& rows = cert.evidence["checks"];
    CHECK(rows[0]["chi"].get<double>() == doctest::Approx(2.6180339887498949));
    CHECK(rows[0]["rho"].get<double>() == doctest::Approx(2.6180339887498949));
    CHECK(rows[1]["chi"].get<double>() == doctest::Approx(1.0));

    const auto c3 = analyse("squarefree_torus:3");
    const auto k = corollary21_check(c3.bundle.gens, c3.bundle.cone, {c3.bundle.gens.generator(0)}, inputs());
    CHECK(k.verdict == Verdict::certified);
    CHECK(k.evidence["checks"][0]["chi"].get<double>() <= 3.5320888862379562 + 2e-9);
  }

  TEST_CASE("wedge lemma harness") {
    const auto c4 = analyse("squarefree_torus:4");
    const auto cert = lemma31_harness(c4.bundle.model, c4.bundle.gens, c4.bundle.cone, 1000, inputs());
    CHECK(cert.verdict == Verdict::certified);
    CHECK(cert.evidence["satisfying"].get<int>() >= 100);
    CHECK(cert.evidence["violations"].empty());
    CHECK(cert.evidence["skipped"]["equal_eigenvalues"].get<int>() > 0);
    for (const char* name : {"squarefree_torus:3", "triangular_solvable"}) {
      const auto a = analyse(name);
      CHECK(lemma31_harness(a.bundle.model, a.bundle.gens, a.bundle.cone, 300, inputs()).verdict != Verdict::violated);
    }
  }

  TEST_CASE("certificates are reproducible") {
    const auto a = analyse("squarefree_torus:3");
    const auto x = certify_all(a.bundle, a.system, inputs(), 200);
    const auto y = certify_all(a.bundle, a.system, inputs(), 200);
    REQUIRE(x.size() == 6);
    for (std::size_t i = 0; i < x.size(); ++i) {
      CHECK(x[i].to_json().dump() == y[i].to_json().dump());
      CHECK(x[i].to_json()["inputs"]["seed"] == 42);
      CHECK(x[i].to_json()["inputs_digest"].get<std::string>().size() == 64);
    }
  }
}
