#include "kdyn/models.hpp"

#include "kdyn/errors.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <iterator>
#include <sstream>

namespace kdyn {

using nlohmann::json;

std::string to_string(Exactness e) {
  switch (e) {
    case Exactness::lattice: return "lattice";
    case Exactness::rational: return "rational";
    case Exactness::numeric: return "numeric";
  }
  return "lattice";
}

namespace {

Exactness parse_exactness(const std::string& s) {
  if (s == "lattice") return Exactness::lattice;
  if (s == "rational") return Exactness::rational;
  if (s == "numeric") return Exactness::numeric;
  throw ParameterError("unknown exactness level '" + s + "'");
}

std::vector<std::vector<int>> subsets(int n, int k) {
  std::vector<std::vector<int>> out;
  std::vector<int> cur;
  std::function<void(int)> rec = [&](int start) {
    if (static_cast<int>(cur.size()) == k) {
      out.push_back(cur);
      return;
    }
    for (int i = start; i < n; ++i) {
      cur.push_back(i);
      rec(i + 1);
      cur.pop_back();
    }
  };
  rec(0);
  return out;
}

long long binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  long long r = 1;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

AutomorphismAction make_action(const std::string& name, const Matrix& piece1, const CohomologyModel& model) {
  return complete_action(name, {piece1}, model);
}

Eigen::VectorXd vec(std::initializer_list<double> v) {
  Eigen::VectorXd out(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double x : v) out(i++) = x;
  return out;
}

ModelBundle quadratic_torus() {
  // Q(phi) in the basis (phi, 1); multiplication by phi^2 is F2.
  ModelBundle b;
  b.name = "squarefree_torus:2";
  b.model = CohomologyModel(2, {2, 1});
  b.model.add_cup(1, 1, 0, 0, 0, -2);
  b.model.add_cup(1, 1, 0, 1, 0, 1);
  b.model.add_cup(1, 1, 1, 1, 0, 2);
  b.gens = GeneratorSet({make_action("F2", Matrix{{2, 1}, {1, 1}}, b.model)});
  const double s5 = std::sqrt(5.0);
  b.cone = ConeSpec::polyhedral({vec({1 / s5, (1 - 1 / s5) / 2}), vec({-1 / s5, (1 + 1 / s5) / 2})});
  b.flags.exactness = Exactness::lattice;
  b.metadata = {{"family", "squarefree_torus"},
                {"realization", "real quadratic field Q(phi), basis (phi, 1); generator = multiplication by phi^2"},
                {"cone", "rays are the two idempotents of Q(phi) (x) R"},
                {"fidelity", "diagonal-torus model: cone-preserving action and cup ring only, not full H^{1,1}"}};
  return b;
}

ModelBundle cubic_torus() {
  // Q(theta), theta^3 = 3 theta + 1, basis (1, theta, theta^2).
  ModelBundle b;
  b.name = "squarefree_torus:3";
  b.model = CohomologyModel(3, {3, 3, 1});
  const int cup11[6][5] = {{0, 0, 2, 0, 0}, {0, 1, 0, -1, 0}, {0, 2, 6, 0, -1},
                           {1, 1, -6, 0, 2}, {1, 2, -1, 0, 0}, {2, 2, 18, 2, -6}};
  for (const auto& row : cup11)
    for (std::size_t out = 0; out < 3; ++out)
      if (row[2 + out] != 0) b.model.add_cup(1, 1, static_cast<std::size_t>(row[0]), static_cast<std::size_t>(row[1]), out, row[2 + out]);
  const int trace[3][3] = {{3, 0, 6}, {0, 6, 3}, {6, 3, 18}};
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j)
      if (trace[i][j] != 0) b.model.add_cup(1, 2, i, j, 0, trace[i][j]);
  const Matrix k{{0, 1, 0}, {0, 3, 1}, {1, 0, 3}};
  const Matrix kp{{1, 1, 2}, {2, 4, 7}, {1, 2, 4}};
  b.gens = GeneratorSet({make_action("K", k, b.model), make_action("K'", kp, b.model)});
  b.cone = ConeSpec::polyhedral({vec({-0.16148479931237277, -0.37905268086775254, 0.24740906632285305}),
                                 vec({1.0914386950688384, 0.13164361454489949, -0.37905268086775254}),
                                 vec({0.070046104243534362, 0.24740906632285305, 0.13164361454489949})});
  b.flags.exactness = Exactness::lattice;
  b.metadata = {{"family", "squarefree_torus"},
                {"realization", "totally real cubic field Q(theta), theta^3 = 3 theta + 1, basis (1, theta, theta^2); "
                                "K = C^2, K' = (C+I)^2 with C the companion matrix of x^3 - 3x - 1"},
                {"cone", "rays are the three idempotents of Q(theta) (x) R (the common eigenbasis)"},
                {"fidelity", "diagonal-torus model: cone-preserving action and cup ring only, not full H^{1,1}"}};
  return b;
}

ModelBundle diagonal_torus(int n) {
  ModelBundle b;
  b.name = "squarefree_torus:" + std::to_string(n);
  b.model = squarefree_algebra(n);
  std::vector<AutomorphismAction> actions;
  for (int i = 1; i < n; ++i) {
    RVector d(static_cast<std::size_t>(n), Rational(1));
    d[static_cast<std::size_t>(i - 1)] = 2;
    d[static_cast<std::size_t>(i)] = Rational(1, 2);
    actions.push_back(make_action("D" + std::to_string(i), Matrix::diagonal(d), b.model));
  }
  b.gens = GeneratorSet(std::move(actions));
  b.cone = ConeSpec::orthant(static_cast<std::size_t>(n));
  b.flags.exactness = Exactness::rational;
  b.metadata = {{"family", "squarefree_torus"},
                {"realization", "squarefree monomial algebra; commuting rational diagonal family D_i = diag(.., 2, 1/2, ..)"},
                {"cone", "positive orthant (common eigenbasis)"},
                {"fidelity", "diagonal-torus model: cone-preserving action and cup ring only, not full H^{1,1}"}};
  return b;
}

ModelBundle triangular(int n) {
  if (n != 3) throw ParameterError("triangular_solvable is available for n = 3 only");
  ModelBundle b;
  b.name = "triangular_solvable:3";
  // Piece 2 basis: (omega, e1 e3, e2 e3, e3^2).
  b.model = CohomologyModel(3, {3, 4, 1});
  b.model.add_cup(1, 1, 0, 0, 0, 2);
  b.model.add_cup(1, 1, 0, 1, 0, -1);
  b.model.add_cup(1, 1, 1, 1, 0, -2);
  b.model.add_cup(1, 1, 0, 2, 1, 1);
  b.model.add_cup(1, 1, 1, 2, 2, 1);
  b.model.add_cup(1, 1, 2, 2, 3, 1);
  b.model.add_cup(1, 2, 2, 3, 0, 1);
  const Matrix g1{{2, 1, 0}, {1, 1, 0}, {0, 0, 1}};
  const Matrix g2{{1, 0, 1}, {0, 1, 0}, {0, 0, 1}};
  b.gens = GeneratorSet({make_action("g1", g1, b.model), make_action("g2", g2, b.model)});
  const double phi = (1 + std::sqrt(5.0)) / 2;
  b.cone = ConeSpec::polyhedral({vec({phi, 1, 0}), vec({-1, phi, 0})});
  b.flags.exactness = Exactness::lattice;
  b.metadata = {{"family", "triangular_solvable"},
                {"realization", "g1 = blockdiag([[2,1],[1,1]], 1), g2 = I + E13; e_i e_j = G_ij omega (i, j <= 2) with "
                                "G = [[2,-1],[-1,-2]], top = e3 e3^2"},
                {"cone", "two-dimensional cone spanned by the eigenrays of [[2,1],[1,1]] in the plane v3 = 0 "
                         "(no invariant cone with interior exists for this group)"}};
  return b;
}

ModelBundle lorentz_surface() {
  ModelBundle b;
  b.name = "lorentz_surface";
  b.model = CohomologyModel(2, {2, 1});
  b.model.add_cup(1, 1, 0, 0, 0, 2);
  b.model.add_cup(1, 1, 0, 1, 0, -1);
  b.model.add_cup(1, 1, 1, 1, 0, -2);
  b.gens = GeneratorSet({make_action("A", Matrix{{2, 1}, {1, 1}}, b.model)});
  b.cone = ConeSpec::lorentzian(Matrix{{2, -1}, {-1, -2}}, {1, 0});
  b.flags.exactness = Exactness::lattice;
  b.metadata = {{"family", "lorentz_surface"},
                {"realization", "intersection form x^2 - xy - y^2 (doubled Gram [[2,-1],[-1,-2]]), A = [[2,1],[1,1]]"},
                {"cone", "future light cone, time vector (1, 0)"}};
  return b;
}

Rational parse_entry(const json& v, const std::string& where) {
  if (v.is_string()) return parse_rational(v.get<std::string>());
  if (v.is_number_integer()) return Rational(v.get<long long>());
  throw ParameterError(where + ": expected an integer or a \"num/den\" string");
}

Matrix parse_matrix(const json& v, std::size_t size, const std::string& where) {
  if (!v.is_array() || v.size() != size) throw DimensionError(where + ": expected " + std::to_string(size) + " rows");
  Matrix m(size, size);
  for (std::size_t i = 0; i < size; ++i) {
    if (!v[i].is_array() || v[i].size() != size)
      throw DimensionError(where + ": row " + std::to_string(i) + " must have " + std::to_string(size) + " entries");
    for (std::size_t j = 0; j < size; ++j) m(i, j) = parse_entry(v[i][j], where);
  }
  return m;
}

json matrix_json(const Matrix& m) {
  json rows = json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (std::size_t j = 0; j < m.cols(); ++j) row.push_back(format_rational(m(i, j)));
    rows.push_back(row);
  }
  return rows;
}

}  // namespace

CohomologyModel squarefree_algebra(int n) {
  if (n < 1) throw ParameterError("squarefree algebra needs n >= 1");
  std::vector<std::size_t> sizes;
  for (int k = 1; k <= n; ++k) sizes.push_back(static_cast<std::size_t>(binomial(n, k)));
  CohomologyModel model(n, sizes);
  for (int j = 1; j <= n; ++j)
    for (int k = j; j + k <= n; ++k) {
      const auto left = subsets(n, j);
      const auto right = subsets(n, k);
      for (std::size_t a = 0; a < left.size(); ++a)
        for (std::size_t c = (j == k ? a + 1 : 0); c < right.size(); ++c) {
          std::vector<int> u;
          std::set_union(left[a].begin(), left[a].end(), right[c].begin(), right[c].end(), std::back_inserter(u));
          if (static_cast<int>(u.size()) != j + k) continue;
          model.add_cup(j, k, a, c, subset_index(n, u), 1);
        }
    }
  return model;
}

std::size_t subset_index(int n, const std::vector<int>& subset) {
  // Rank of the subset among k-subsets in lex order.
  const int k = static_cast<int>(subset.size());
  std::size_t rank = 0;
  int prev = -1;
  for (int i = 0; i < k; ++i) {
    for (int v = prev + 1; v < subset[static_cast<std::size_t>(i)]; ++v) rank += static_cast<std::size_t>(binomial(n - v - 1, k - i - 1));
    prev = subset[static_cast<std::size_t>(i)];
  }
  return rank;
}

std::vector<std::string> builtin_names() { return {"squarefree_torus", "triangular_solvable", "lorentz_surface"}; }

ModelBundle builtin(const std::string& spec) {
  const auto colon = spec.find(':');
  const std::string name = spec.substr(0, colon);
  std::vector<std::string> params;
  if (colon != std::string::npos) {
    std::stringstream ss(spec.substr(colon + 1));
    std::string item;
    while (std::getline(ss, item, ',')) params.push_back(item);
  }
  const auto int_param = [&](int fallback) {
    if (params.empty()) return fallback;
    if (params.size() > 1) throw ParameterError("built-in '" + name + "' takes one parameter");
    try {
      std::size_t used = 0;
      const int v = std::stoi(params[0], &used);
      if (used != params[0].size()) throw ParameterError("bad parameter '" + params[0] + "'");
      return v;
    } catch (const std::logic_error&) {
      throw ParameterError("bad parameter '" + params[0] + "' for built-in '" + name + "'");
    }
  };
  if (name == "squarefree_torus") {
    const int n = int_param(3);
    if (n < 2) throw ParameterError("squarefree_torus needs n >= 2");
    if (n == 2) return quadratic_torus();
    if (n == 3) return cubic_torus();
    return diagonal_torus(n);
  }
  if (name == "triangular_solvable") return triangular(int_param(3));
  if (name == "lorentz_surface") {
    if (!params.empty()) throw ParameterError("lorentz_surface takes no parameters");
    return lorentz_surface();
  }
  throw ParameterError("unknown built-in model '" + name + "'");
}

ValidationReport validate_bundle(const ModelBundle& b, double tol) {
  ValidationReport rep;
  const auto h1 = b.model.piece_size(1);
  if (b.cone.dim != h1) {
    rep.issues.push_back("cone dimension " + std::to_string(b.cone.dim) + " differs from h_1 = " + std::to_string(h1));
    return rep;
  }
  const auto cone = validate_cone(b.cone, tol);
  for (const auto& v : cone.violations) rep.issues.push_back("cone: " + v.message);
  if (cone.ok && !cone.full_dimensional)
    rep.notes.push_back("cone spans a " + std::to_string(b.cone.span_dimension()) + "-dimensional subspace of R^" +
                        std::to_string(h1));
  for (const auto& action : b.gens.actions()) {
    const std::string where = "generator '" + action.name + "'";
    const Matrix& m = action.piece1();
    const Rational det = m.determinant();
    if (det == 0) {
      rep.issues.push_back(where + ": singular");
      continue;
    }
    if (b.flags.exactness == Exactness::lattice && !m.is_integral())
      rep.issues.push_back(where + ": non-integral matrix on a lattice model");
    if (b.flags.exactness != Exactness::numeric && det != 1 && det != -1)
      rep.issues.push_back(where + ": determinant " + format_rational(det) + " is not +-1 on an exact model");
    const auto ring = ring_compatibility_check(action, b.model);
    for (const auto& v : ring.violations) rep.issues.push_back(where + ": ring compatibility: " + v.detail);
    if (ring.compatible && !ring.volume_preserving)
      rep.notes.push_back(where + ": degree " + format_rational(ring.degree) + " on the top piece");
    if (!cone.ok) continue;
    const auto fwd = preserves_cone(m, b.cone, tol);
    if (!fwd.preserved) rep.issues.push_back(where + ": does not preserve the cone (" + fwd.detail + ")");
    const auto bwd = preserves_cone(m.inverse(), b.cone, tol);
    if (!bwd.preserved) rep.issues.push_back(where + ": inverse does not preserve the cone (" + bwd.detail + ")");
  }
  return rep;
}

ModelBundle model_from_json(const json& j, double tol) {
  std::vector<std::string> issues;
  const auto fail = [&](const std::string& msg) {
    issues.push_back(msg);
    throw ValidationError(issues);
  };
  if (!j.is_object()) fail("model must be a JSON object");
  if (!j.contains("schema_version") || j["schema_version"] != 1) fail("schema_version must be 1");
  for (const char* key : {"name", "dim_complex", "pieces", "cup", "cone", "generators"})
    if (!j.contains(key)) issues.push_back(std::string("missing field '") + key + "'");
  if (!issues.empty()) throw ValidationError(issues);
  ModelBundle b;
  try {
    b.name = j["name"].get<std::string>();
    const int n = j["dim_complex"].get<int>();
    const auto pieces = j["pieces"].get<std::vector<std::size_t>>();
    b.model = CohomologyModel(n, pieces);
  } catch (const std::exception& e) {
    fail(std::string("header: ") + e.what());
  }
  for (const auto& table : j["cup"]) {
    try {
      const auto grades = table.at("grades").get<std::vector<int>>();
      if (grades.size() != 2) throw ParameterError("grades must be a pair");
      for (const auto& entry : table.at("entries")) {
        if (!entry.is_array() || entry.size() != 4) throw ParameterError("cup entry must be [left, right, out, coeff]");
        const std::string where = "cup (" + std::to_string(grades[0]) + "," + std::to_string(grades[1]) + ")";
        b.model.add_cup(grades[0], grades[1], entry[0].get<std::size_t>(), entry[1].get<std::size_t>(),
                        entry[2].get<std::size_t>(), parse_entry(entry[3], where));
      }
    } catch (const std::exception& e) {
      issues.push_back(std::string("cup: ") + e.what());
    }
  }
  try {
    const auto& c = j["cone"];
    const std::string kind = c.at("kind").get<std::string>();
    if (kind == "polyhedral") {
      std::vector<Eigen::VectorXd> rays;
      std::vector<RVector> exact;
      bool all_exact = true;
      for (const auto& r : c.at("rays")) {
        Eigen::VectorXd v(static_cast<Eigen::Index>(r.size()));
        RVector e;
        for (std::size_t i = 0; i < r.size(); ++i) {
          if (r[i].is_number_float()) {
            all_exact = false;
            v(static_cast<Eigen::Index>(i)) = r[i].get<double>();
          } else {
            e.push_back(parse_entry(r[i], "cone ray"));
            v(static_cast<Eigen::Index>(i)) = to_double(e.back());
          }
        }
        rays.push_back(v);
        exact.push_back(std::move(e));
      }
      if (all_exact)
        b.cone = ConeSpec::polyhedral_exact(std::move(exact));
      else
        b.cone = ConeSpec::polyhedral(std::move(rays));
      if (b.cone.rays.empty()) throw ParameterError("polyhedral cone needs rays");
    } else if (kind == "lorentzian") {
      const auto& f = c.at("form");
      Matrix form = parse_matrix(f, f.size(), "cone form");
      RVector time;
      for (const auto& t : c.at("time")) time.push_back(parse_entry(t, "cone time"));
      b.cone = ConeSpec::lorentzian(std::move(form), std::move(time));
    } else {
      throw ParameterError("unknown cone kind '" + kind + "'");
    }
  } catch (const std::exception& e) {
    issues.push_back(std::string("cone: ") + e.what());
  }
  if (j.contains("flags")) {
    try {
      const auto& f = j["flags"];
      if (f.contains("aut0_trivial")) b.flags.aut0_trivial = f["aut0_trivial"].get<bool>();
      if (f.contains("exactness")) b.flags.exactness = parse_exactness(f["exactness"].get<std::string>());
    } catch (const std::exception& e) {
      issues.push_back(std::string("flags: ") + e.what());
    }
  }
  if (j.contains("metadata")) b.metadata = j["metadata"];
  if (!issues.empty()) throw ValidationError(issues);
  std::vector<AutomorphismAction> actions;
  for (const auto& g : j["generators"]) {
    std::string name = g.value("name", "g" + std::to_string(actions.size()));
    try {
      std::vector<std::optional<Matrix>> supplied;
      const auto& pieces = g.at("pieces");
      if (!pieces.is_array() || pieces.empty()) throw ParameterError("needs at least the piece-1 matrix");
      if (pieces.size() > static_cast<std::size_t>(b.model.dimension())) throw DimensionError("more pieces than grades");
      for (std::size_t k = 0; k < pieces.size(); ++k) {
        if (pieces[k].is_null()) {
          supplied.emplace_back();
          continue;
        }
        supplied.emplace_back(parse_matrix(pieces[k], b.model.piece_size(static_cast<int>(k) + 1),
                                           "piece " + std::to_string(k + 1)));
      }
      actions.push_back(complete_action(name, supplied, b.model));
    } catch (const std::exception& e) {
      issues.push_back("generator '" + name + "': " + e.what());
    }
  }
  if (!issues.empty()) throw ValidationError(issues);
  try {
    b.gens = GeneratorSet(std::move(actions));
  } catch (const std::exception& e) {
    fail(std::string("generators: ") + e.what());
  }
  const auto rep = validate_bundle(b, tol);
  if (!rep.ok()) throw ValidationError(rep.issues);
  return b;
}

ModelBundle load_model(const std::string& path, double tol) {
  std::ifstream in(path);
  if (!in) throw ValidationError({"cannot open model file '" + path + "'"});
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ValidationError({std::string("invalid JSON: ") + e.what()});
  }
  return model_from_json(j, tol);
}

json model_to_json(const ModelBundle& b) {
  json j;
  j["schema_version"] = 1;
  j["name"] = b.name;
  j["dim_complex"] = b.model.dimension();
  j["pieces"] = b.model.piece_sizes();
  json cup = json::array();
  for (const auto& [jg, kg] : b.model.cup_grades()) {
    json entries = json::array();
    for (const auto& e : b.model.cup_table(jg, kg))
      entries.push_back({e.left, e.right, e.out, format_rational(e.coeff)});
    cup.push_back({{"grades", {jg, kg}}, {"entries", entries}});
  }
  j["cup"] = cup;
  json cone;
  if (b.cone.kind == ConeKind::polyhedral) {
    cone["kind"] = "polyhedral";
    json rays = json::array();
    for (std::size_t i = 0; i < b.cone.rays.size(); ++i) {
      json r = json::array();
      if (!b.cone.exact_rays.empty()) {
        for (const auto& x : b.cone.exact_rays[i]) r.push_back(format_rational(x));
      } else {
        for (Eigen::Index k = 0; k < b.cone.rays[i].size(); ++k) r.push_back(b.cone.rays[i](k));
      }
      rays.push_back(r);
    }
    cone["rays"] = rays;
  } else {
    cone["kind"] = "lorentzian";
    cone["form"] = matrix_json(b.cone.form);
    json t = json::array();
    for (const auto& x : b.cone.time) t.push_back(format_rational(x));
    cone["time"] = t;
  }
  j["cone"] = cone;
  json gens = json::array();
  for (const auto& a : b.gens.actions()) {
    json pieces = json::array();
    for (const auto& p : a.pieces) pieces.push_back(matrix_json(p));
    gens.push_back({{"name", a.name}, {"pieces", pieces}});
  }
  j["generators"] = gens;
  j["flags"] = {{"aut0_trivial", b.flags.aut0_trivial}, {"exactness", to_string(b.flags.exactness)}};
  j["metadata"] = b.metadata;
  return j;
}

std::string serialize(const ModelBundle& b) { return model_to_json(b).dump(2) + "\n"; }

}  // namespace kdyn
