#pragma once

#include "kdyn/exact_linalg.hpp"
#include "kdyn/matrix.hpp"
#include "kdyn/polynomial.hpp"

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

namespace kdyn {

struct Letter {
  std::size_t gen = 0;
  int exp = 1;  // +1 or -1
  bool operator==(const Letter&) const = default;
};

/// Freely reduced word with its cached piece-1 matrix.
struct Word {
  std::vector<Letter> letters;
  Matrix matrix;

  std::size_t length() const { return letters.size(); }
  std::string to_string(const std::vector<std::string>& names) const;
};

/// Generators acting on a model; piece-1 matrices and inverses are cached.
class GeneratorSet {
 public:
  GeneratorSet() = default;
  explicit GeneratorSet(std::vector<AutomorphismAction> actions);
  /// Piece-1 only (names g0, g1, ...).
  static GeneratorSet from_matrices(const std::vector<Matrix>& mats);

  std::size_t size() const { return mats_.size(); }
  std::size_t dim() const { return mats_.empty() ? 0 : mats_.front().rows(); }
  const std::vector<AutomorphismAction>& actions() const { return actions_; }
  const std::vector<Matrix>& matrices() const { return mats_; }
  const std::vector<std::string>& names() const { return names_; }
  const Matrix& letter_matrix(const Letter& l) const { return l.exp > 0 ? mats_[l.gen] : inverses_[l.gen]; }

  Word identity() const;
  Word generator(std::size_t i, int exp = 1) const;
  /// Evaluates the letters (free reduction applied).
  Word word(const std::vector<Letter>& letters) const;
  Word multiply(const Word& a, const Word& b) const;
  Word inverse(const Word& w) const;
  Word commutator(const Word& a, const Word& b) const;
  /// Uniform random reduced word of the given length.
  Word random_word(std::size_t length, std::mt19937_64& rng) const;

 private:
  std::vector<AutomorphismAction> actions_;
  std::vector<Matrix> mats_;
  std::vector<Matrix> inverses_;
  std::vector<std::string> names_;
};

std::vector<Letter> free_reduce(std::vector<Letter> letters);

struct Enumeration {
  /// One word per distinct matrix, ordered by length then lexicographically
  /// (g0 < g0^-1 < g1 < ...); the identity comes first.
  std::vector<Word> words;
  bool truncated = false;
  int max_length = 0;
  std::size_t cap = 0;
};

Enumeration enumerate_words(const GeneratorSet& gens, int max_length, std::size_t cap = 1000000);

struct DerivedLevel {
  /// Distinct non-identity commutators, as words in the original generators.
  std::vector<Word> generators;
  bool truncated = false;
  bool trivial() const { return generators.empty(); }
};

struct DerivedSeries {
  std::vector<DerivedLevel> levels;  // levels[i] approximates G^(i+1)
  int sampling_length = 0;
  std::string caveat = "word-length-bounded approximation";
};

/// Level i+1 is spanned by commutators [u, v] of level-i words with |u| + |v| <= L.
DerivedSeries derived_series(const GeneratorSet& gens, int depth, int max_length, std::size_t pair_budget = 200000);

struct UnipotencyAudit {
  bool pass = true;
  std::size_t checked = 0;
  bool truncated = false;
  std::optional<Word> counterexample;
  Polynomial counterexample_char_poly;
};

/// Checks char_poly = (x-1)^d for commutators [u, v] with |u| + |v| <= L and
/// for products of two of them with total cost <= L.
UnipotencyAudit unipotency_audit(const GeneratorSet& gens, int max_length, std::size_t budget = 200000);

struct PoweredGenerator {
  std::size_t index = 0;
  long long power = 1;
  bool capped = false;
  std::vector<unsigned long> torsion_orders;
};

struct ConnectedReduction {
  GeneratorSet generators;
  std::vector<PoweredGenerator> powers;
  std::vector<std::string> warnings;
};

/// Replaces each g by g^m, m the lcm of the root-of-unity orders among its
/// eigenvalues and eigenvalue ratios (doubled when g^m keeps a negative eigenvalue).
ConnectedReduction connected_reduction(const GeneratorSet& gens, long long cap = 10000);

}  // namespace kdyn
