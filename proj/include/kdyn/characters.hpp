#pragma once

#include "kdyn/cones.hpp"
#include "kdyn/exact_linalg.hpp"
#include "kdyn/group.hpp"
#include "kdyn/lattice.hpp"

#include <Eigen/Dense>

#include <optional>
#include <string>
#include <vector>

namespace kdyn {

enum class CharacterKind { primary, extended };
std::string to_string(CharacterKind k);

/// Homomorphism G -> R given by log of the joint eigenvalue on a class.
/// The value on a word w is log(left^T W right / left^T right), evaluated
/// exactly on the rational word matrix W.
struct Character {
  CharacterKind kind = CharacterKind::primary;
  /// tau(g_i) per generator.
  std::vector<double> values;
  /// Class in the cone (the lifted class c_j for extensions).
  Eigen::VectorXd witness;
  Eigen::VectorXd left;
  Eigen::VectorXd right;
  double residual = 0.0;

  double evaluate(const Matrix& word_matrix) const;
};

struct RankRecord {
  int rank = 0;
  int numeric_rank = 0;
  /// Generator count minus independent generator relations.
  int row_relation_rank = 0;
  /// Character count minus independent character relations.
  int column_relation_rank = 0;
  std::vector<double> singular_values;
  std::vector<IntegerRelation> generator_relations;
  /// Per generator relation: the relation word is exactly null-entropy.
  std::vector<bool> relation_certified;
  std::vector<IntegerRelation> character_relations;
  bool disagreement = false;
  std::vector<std::string> warnings;
};

struct CharacterSystem {
  int n = 0;
  std::vector<Character> primaries;
  /// Indices of primaries whose values generate the image of pi (first r_tilde).
  std::vector<std::size_t> selected;
  int r_tilde = 0;
  RankRecord pi_rank;
  std::vector<Character> extensions;
  /// Characters composing Pi, in order (selected primaries, then extensions
  /// or the remaining primaries when r_tilde >= n-1); exactly n-1 once extended.
  std::vector<Character> pi_components;
  /// Pi(g_i) per generator.
  std::vector<Eigen::VectorXd> Pi;
  bool extended = false;

  std::size_t m() const { return primaries.size(); }
};

/// All joint characters with a witness in the cone, sorted ascending
/// lexicographically by value vector. Throws InconsistencyError when none
/// exists or when more than h_1 are found.
CharacterSystem enumerate_characters(const GeneratorSet& gens, const ConeSpec& spec, int n, double tol = 1e-9);

/// pi(w) = (tau_1(w), ..., tau_m(w)).
Eigen::VectorXd pi_map(const CharacterSystem& system, const Word& word);
/// Pi(w), available after extend_characters.
Eigen::VectorXd Pi_map(const CharacterSystem& system, const Word& word);

/// Rank of the lattice spanned by the per-generator rows: SVD rank
/// cross-checked by integer relations among the rows. Relations among the
/// characters (columns) are recorded but do not enter the rank.
RankRecord rank_of_values(const std::vector<Eigen::VectorXd>& rows, const GeneratorSet& gens, double tol = 1e-9);
RankRecord rank_of_image(const CharacterSystem& system, const GeneratorSet& gens, double tol = 1e-9);

/// Adds the wedge-product extensions until Pi has n-1 coordinates.
/// Throws InconsistencyError when a wedge cone degenerates.
CharacterSystem extend_characters(CharacterSystem system, const CohomologyModel& model, const GeneratorSet& gens,
                                  const ConeSpec& spec, double tol = 1e-9);

struct DiscretenessGauge {
  std::optional<double> delta0;
  bool kernel_only = false;
  std::vector<Word> kernel;
  /// Kernel words whose null-entropy check was numeric only.
  std::size_t kernel_numeric = 0;
  std::size_t words = 0;
  bool truncated = false;
  int max_length = 0;
};

/// min nonzero sup-norm of Pi over words of length <= L; every word with
/// Pi below zero_tol must be null-entropy (InconsistencyError otherwise).
DiscretenessGauge discreteness_gauge(const CharacterSystem& system, const GeneratorSet& gens, int max_length,
                                     double zero_tol = 1e-7, std::size_t cap = 1000000);

/// Full pipeline: enumerate, rank, extend.
CharacterSystem build_character_system(const CohomologyModel& model, const GeneratorSet& gens, const ConeSpec& spec,
                                       double tol = 1e-9);

}  // namespace kdyn
