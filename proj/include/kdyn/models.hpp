#pragma once

#include "kdyn/cones.hpp"
#include "kdyn/exact_linalg.hpp"
#include "kdyn/group.hpp"

#include "json.hpp"

#include <string>
#include <vector>

namespace kdyn {

enum class Exactness { lattice, rational, numeric };
std::string to_string(Exactness e);

struct ModelFlags {
  bool aut0_trivial = true;
  Exactness exactness = Exactness::lattice;
};

struct ModelBundle {
  std::string name;
  CohomologyModel model;
  GeneratorSet gens;
  ConeSpec cone;
  ModelFlags flags;
  nlohmann::json metadata = nlohmann::json::object();
};

struct ValidationReport {
  std::vector<std::string> issues;
  std::vector<std::string> notes;
  bool ok() const { return issues.empty(); }
};

/// Squarefree monomial algebra in n variables: piece k has the k-subsets
/// (lex order) as basis, e_S * e_T = e_{S u T} for disjoint S, T.
CohomologyModel squarefree_algebra(int n);
/// Index of a sorted subset in the lex-ordered basis of its piece.
std::size_t subset_index(int n, const std::vector<int>& subset);

/// "name" or "name:params" (params comma separated).
ModelBundle builtin(const std::string& spec);
std::vector<std::string> builtin_names();

/// Cone, ring, unimodularity and preservation checks; never throws.
ValidationReport validate_bundle(const ModelBundle& bundle, double tol = 1e-9);

/// Parses schema v1; structural and validation failures are aggregated
/// into one ValidationError.
ModelBundle model_from_json(const nlohmann::json& j, double tol = 1e-9);
ModelBundle load_model(const std::string& path, double tol = 1e-9);
nlohmann::json model_to_json(const ModelBundle& bundle);
/// Canonical text (sorted keys, two-space indent).
std::string serialize(const ModelBundle& bundle);

}  // namespace kdyn
