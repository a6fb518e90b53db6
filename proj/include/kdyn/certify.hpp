#pragma once

#include "kdyn/characters.hpp"
#include "kdyn/models.hpp"
#include "kdyn/report.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace kdyn {

enum class CertificateKind { rank_bound, hodge, positivity, ng_finite, corollary21, lemma31 };
enum class Verdict { certified, conditional, violated, inconclusive };

std::string to_string(CertificateKind k);
std::string to_string(Verdict v);

/// Everything a certificate depends on besides its own arguments.
struct CertificateInputs {
  std::string model_digest;
  std::uint64_t seed = 0;
  int max_length = 6;
  double tol = 1e-9;
  double zero_tol = 1e-7;

  json to_json() const;
};

struct Certificate {
  CertificateKind kind = CertificateKind::rank_bound;
  Verdict verdict = Verdict::inconclusive;
  json evidence = json::object();
  std::vector<std::string> assumptions;
  CertificateInputs inputs;

  json to_json() const;
};

/// r(G) = rank of Pi(G) against n - 1.
Certificate rank_bound_certificate(const CharacterSystem& system, const GeneratorSet& gens,
                                   const CertificateInputs& in);

/// h_k >= C(n-1, k), plus one when k | n-1. Inconclusive unless r = n-1.
Certificate hodge_bound_check(const CohomologyModel& model, int r, const CertificateInputs& in);

/// r + 1 cone classes with non-vanishing wedge.
Certificate positivity_witness(const CohomologyModel& model, const CharacterSystem& system, const ConeSpec& cone,
                               int r, const CertificateInputs& in);

/// n classes fixed by the sampled null-entropy words, c = sum c_i, c^n != 0.
Certificate ng_finiteness_certificate(const CohomologyModel& model, const GeneratorSet& gens,
                                      const CharacterSystem& system, const ConeSpec& cone, int r,
                                      bool aut0_trivial, const CertificateInputs& in);

/// chi(f) <= rho(f) for f in `words`, chi the eigenvalue on the common ray.
Certificate corollary21_check(const GeneratorSet& gens, const ConeSpec& cone, const std::vector<Word>& words,
                              const CertificateInputs& in);

/// Random instances of the two-eigenvalue wedge lemma; every instance that
/// meets the hypotheses must have c_1 ^ ... ^ c_t ^ c' = 0.
Certificate lemma31_harness(const CohomologyModel& model, const GeneratorSet& gens, const ConeSpec& cone,
                            int trials, const CertificateInputs& in);

/// All six, in the order of CertificateKind.
std::vector<Certificate> certify_all(const ModelBundle& bundle, const CharacterSystem& system,
                                     const CertificateInputs& in, int lemma31_trials = 1000);

}  // namespace kdyn
