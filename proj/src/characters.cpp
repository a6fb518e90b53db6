#include "kdyn/characters.hpp"

#include "kdyn/errors.hpp"
#include "kdyn/simplex.hpp"
#include "kdyn/spectra.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace kdyn {

std::string to_string(CharacterKind k) { return k == CharacterKind::primary ? "primary" : "extended"; }

double Character::evaluate(const Matrix& w) const {
  const std::size_t d = static_cast<std::size_t>(right.size());
  if (w.rows() != d || w.cols() != d) throw DimensionError("word matrix does not match the character");
  RVector a(d), b(d);
  for (std::size_t i = 0; i < d; ++i) {
    a[i] = Rational(left(static_cast<Eigen::Index>(i)));
    b[i] = Rational(right(static_cast<Eigen::Index>(i)));
  }
  Rational num = 0, den = 0;
  for (std::size_t i = 0; i < d; ++i) {
    if (a[i] == 0) continue;
    den += a[i] * b[i];
    Rational row = 0;
    for (std::size_t j = 0; j < d; ++j)
      if (w(i, j) != 0 && b[j] != 0) row += w(i, j) * b[j];
    num += a[i] * row;
  }
  if (den == 0 || num / den <= 0) throw InconsistencyError("character eigenvalue is not positive");
  return std::log(to_double(num / den));
}

namespace {

// Joint left eigenvector paired with `right`, or `right` itself when the
// left eigenspace is (numerically) orthogonal to it.
Eigen::VectorXd left_partner(const std::vector<Eigen::MatrixXd>& mats, const std::vector<double>& eigenvalues,
                             const Eigen::VectorXd& right) {
  const Eigen::Index d = right.size();
  Eigen::MatrixXd stack(d * static_cast<Eigen::Index>(mats.size()), d);
  for (std::size_t i = 0; i < mats.size(); ++i)
    stack.block(static_cast<Eigen::Index>(i) * d, 0, d, d) =
        mats[i].transpose() - eigenvalues[i] * Eigen::MatrixXd::Identity(d, d);
  const Eigen::MatrixXd basis = null_space(stack);
  if (basis.cols() == 0) return right;
  const Eigen::VectorXd a = basis * (basis.transpose() * right);
  if (std::abs(a.dot(right)) < 1e-6 * a.norm() * right.norm()) return right;
  return a / a.cwiseAbs().maxCoeff();
}

std::size_t numeric_rank(const Eigen::MatrixXd& m, std::vector<double>* singular = nullptr) {
  if (m.size() == 0) return 0;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
  const auto& s = svd.singularValues();
  if (singular) singular->assign(s.data(), s.data() + s.size());
  if (s.size() == 0 || s(0) <= 1e-9) return 0;
  std::size_t r = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i)
    if (s(i) > 1e-7 * s(0)) ++r;
  return r;
}

Eigen::MatrixXd value_table(const std::vector<Character>& chars, std::size_t gens) {
  Eigen::MatrixXd t(static_cast<Eigen::Index>(gens), static_cast<Eigen::Index>(chars.size()));
  for (std::size_t j = 0; j < chars.size(); ++j)
    for (std::size_t i = 0; i < gens; ++i) t(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = chars[j].values[i];
  return t;
}

constexpr double kRelationScale = 1e11;
constexpr long long kCoeffBound = 1 << 16;
constexpr double kRelationTol = 1e-10;

}  // namespace

CharacterSystem enumerate_characters(const GeneratorSet& gens, const ConeSpec& spec, int n, double tol) {
  CharacterSystem sys;
  sys.n = n;
  if (gens.size() == 0) {
    Character c;
    c.witness = spec.interior_point();
    c.left = c.right = c.witness;
    sys.primaries.push_back(c);
  } else {
    std::vector<Eigen::MatrixXd> me;
    for (const auto& m : gens.matrices()) me.push_back(m.to_eigen());
    for (const auto& ray : joint_eigenrays(gens.matrices(), spec, tol)) {
      Character c;
      c.witness = ray.vector;
      c.right = ray.vector;
      c.left = left_partner(me, ray.eigenvalues, ray.vector);
      c.residual = ray.residual;
      for (const auto& m : gens.matrices()) c.values.push_back(c.evaluate(m));
      const bool duplicate = std::any_of(sys.primaries.begin(), sys.primaries.end(), [&](const Character& o) {
        for (std::size_t i = 0; i < c.values.size(); ++i)
          if (std::abs(o.values[i] - c.values[i]) > 1e-7) return false;
        return true;
      });
      if (!duplicate) sys.primaries.push_back(std::move(c));
    }
  }
  if (sys.primaries.empty())
    throw InconsistencyError("no joint character has a witness in the cone: the group is not connected solvable on " +
                             spec.describe());
  std::sort(sys.primaries.begin(), sys.primaries.end(),
            [](const Character& a, const Character& b) { return a.values < b.values; });
  if (sys.primaries.size() > spec.dim) {
    std::ostringstream msg;
    msg << sys.primaries.size() << " characters exceed h_1 = " << spec.dim;
    throw InconsistencyError(msg.str());
  }
  std::vector<Eigen::VectorXd> rows;
  const Eigen::MatrixXd table = value_table(sys.primaries, gens.size());
  for (Eigen::Index i = 0; i < table.rows(); ++i) rows.push_back(table.row(i).transpose());
  sys.pi_rank = rank_of_values(rows, gens, tol);
  sys.r_tilde = sys.pi_rank.rank;
  // Greedy choice of characters generating the image.
  Eigen::MatrixXd chosen(table.rows(), 0);
  for (std::size_t j = 0; j < sys.primaries.size(); ++j) {
    if (static_cast<int>(sys.selected.size()) >= sys.r_tilde) break;
    Eigen::MatrixXd trial(table.rows(), chosen.cols() + 1);
    trial << chosen, table.col(static_cast<Eigen::Index>(j));
    if (numeric_rank(trial) > static_cast<std::size_t>(chosen.cols())) {
      chosen = trial;
      sys.selected.push_back(j);
    }
  }
  if (static_cast<int>(sys.selected.size()) < sys.r_tilde)
    sys.pi_rank.warnings.push_back("only " + std::to_string(sys.selected.size()) +
                                   " numerically independent characters for rank " + std::to_string(sys.r_tilde));
  return sys;
}

Eigen::VectorXd pi_map(const CharacterSystem& system, const Word& word) {
  Eigen::VectorXd out(static_cast<Eigen::Index>(system.primaries.size()));
  for (std::size_t j = 0; j < system.primaries.size(); ++j)
    out(static_cast<Eigen::Index>(j)) = system.primaries[j].evaluate(word.matrix);
  return out;
}

Eigen::VectorXd Pi_map(const CharacterSystem& system, const Word& word) {
  if (!system.extended) throw Error("character system has not been extended");
  Eigen::VectorXd out(static_cast<Eigen::Index>(system.pi_components.size()));
  for (std::size_t j = 0; j < system.pi_components.size(); ++j)
    out(static_cast<Eigen::Index>(j)) = system.pi_components[j].evaluate(word.matrix);
  return out;
}

RankRecord rank_of_values(const std::vector<Eigen::VectorXd>& rows, const GeneratorSet& gens, double tol) {
  (void)tol;
  RankRecord rec;
  const std::size_t k = rows.size();
  if (k == 0 || rows.front().size() == 0) return rec;
  const std::size_t m = static_cast<std::size_t>(rows.front().size());
  Eigen::MatrixXd table(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(m));
  for (std::size_t i = 0; i < k; ++i) table.row(static_cast<Eigen::Index>(i)) = rows[i].transpose();
  rec.numeric_rank = static_cast<int>(numeric_rank(table, &rec.singular_values));
  // Generator relations: sum c_i pi(g_i) = 0; certified when the relation word is null-entropy.
  for (auto& rel : find_integer_relations(rows, kRelationScale, kCoeffBound, kRelationTol)) {
    long long weight = 0;
    for (auto c : rel.coeffs) weight += std::llabs(c);
    bool certified = false;
    if (weight <= 64 && gens.size() == k) {
      Matrix w = Matrix::identity(gens.dim());
      for (std::size_t i = 0; i < k; ++i)
        if (rel.coeffs[i] != 0) w = w * gens.matrices()[i].pow(rel.coeffs[i]);
      const auto test = null_entropy_test(w);
      if (test.exact && !test.null_entropy) {
        rec.warnings.push_back("discarded spurious generator relation (word has positive entropy)");
        continue;
      }
      certified = test.exact && test.null_entropy;
    }
    rec.generator_relations.push_back(rel);
    rec.relation_certified.push_back(certified);
  }
  std::vector<Eigen::VectorXd> cols;
  for (std::size_t j = 0; j < m; ++j) cols.push_back(table.col(static_cast<Eigen::Index>(j)));
  rec.character_relations = find_integer_relations(cols, kRelationScale, kCoeffBound, kRelationTol);
  rec.row_relation_rank = static_cast<int>(k - rec.generator_relations.size());
  rec.column_relation_rank = static_cast<int>(m - rec.character_relations.size());
  rec.rank = rec.numeric_rank;
  // Character relations are reported only: they bound the real span, not the Z-rank.
  if (rec.row_relation_rank != rec.numeric_rank) {
    rec.disagreement = true;
    rec.rank = std::max(rec.numeric_rank, rec.row_relation_rank);
    std::ostringstream msg;
    msg << "rank methods disagree: numeric " << rec.numeric_rank << ", generator relations " << rec.row_relation_rank
        << "; reporting " << rec.rank;
    rec.warnings.push_back(msg.str());
  }
  return rec;
}

RankRecord rank_of_image(const CharacterSystem& system, const GeneratorSet& gens, double tol) {
  std::vector<Eigen::VectorXd> rows;
  if (system.extended) {
    rows = system.Pi;
  } else {
    const Eigen::MatrixXd table = value_table(system.primaries, gens.size());
    for (Eigen::Index i = 0; i < table.rows(); ++i) rows.push_back(table.row(i).transpose());
  }
  return rank_of_values(rows, gens, tol);
}

CharacterSystem extend_characters(CharacterSystem sys, const CohomologyModel& model, const GeneratorSet& gens,
                                  const ConeSpec& spec, double tol) {
  const std::size_t target = static_cast<std::size_t>(std::max(0, sys.n - 1));
  sys.pi_components.clear();
  sys.extensions.clear();
  for (auto j : sys.selected) sys.pi_components.push_back(sys.primaries[j]);
  if (sys.selected.size() >= target) {
    for (std::size_t j = 0; j < sys.primaries.size() && sys.pi_components.size() < target; ++j)
      if (std::find(sys.selected.begin(), sys.selected.end(), j) == sys.selected.end())
        sys.pi_components.push_back(sys.primaries[j]);
    sys.pi_components.resize(std::min(sys.pi_components.size(), target));
  } else {
    const Eigen::Index d = static_cast<Eigen::Index>(spec.dim);
    std::vector<Eigen::MatrixXd> me;
    for (const auto& m : gens.matrices()) me.push_back(m.to_eigen());
    std::vector<Eigen::VectorXd> classes;
    for (auto j : sys.selected) classes.push_back(sys.primaries[j].witness);
    while (sys.pi_components.size() < target) {
      Eigen::MatrixXd q = Eigen::MatrixXd::Identity(d, d);
      ConeSpec quotient = spec;
      if (!classes.empty()) {
        if (spec.kind != ConeKind::polyhedral)
          throw Error("wedge cones beyond the first step need a polyhedral cone");
        // Row space of x -> c_1 ^ ... ^ c_j ^ x represents the quotient by its kernel.
        const std::size_t out_dim = model.piece_size(static_cast<int>(classes.size()) + 1);
        Eigen::MatrixXd wedge_map(static_cast<Eigen::Index>(out_dim), d);
        for (Eigen::Index b = 0; b < d; ++b) {
          auto args = classes;
          args.push_back(Eigen::VectorXd::Unit(d, b));
          wedge_map.col(b) = wedge_piece1(model, args);
        }
        Eigen::JacobiSVD<Eigen::MatrixXd> svd(wedge_map, Eigen::ComputeFullV);
        const auto& s = svd.singularValues();
        Eigen::Index rank = 0;
        for (Eigen::Index i = 0; i < s.size(); ++i)
          if (s(i) > 1e-9 * std::max(1.0, s(0))) ++rank;
        if (rank == 0) throw InconsistencyError("wedge of the invariant classes vanishes");
        q = svd.matrixV().leftCols(rank);
        std::vector<Eigen::VectorXd> images;
        for (const auto& r : spec.rays) {
          const Eigen::VectorXd img = q.transpose() * sup_normalize(r);
          if (img.cwiseAbs().maxCoeff() > 1e-9) images.push_back(img);
        }
        if (images.empty()) {
          std::ostringstream msg;
          msg << "wedge cone degenerates at step " << classes.size() + 1 << ": every ray wedges to zero";
          throw InconsistencyError(msg.str());
        }
        quotient = ConeSpec::polyhedral(images);
      }
      std::vector<Eigen::MatrixXd> actions;
      for (const auto& m : me) actions.push_back(q.transpose() * m * q);
      const auto rays = actions.empty() ? std::vector<JointRay>{} : joint_eigenrays(actions, quotient, tol);
      if (rays.empty() && !actions.empty())
        throw InconsistencyError("no invariant ray in the wedge cone at step " + std::to_string(classes.size() + 1));
      Character c;
      c.kind = CharacterKind::extended;
      Eigen::VectorXd y = rays.empty() ? quotient.interior_point() : rays.front().vector;
      if (!rays.empty()) c.residual = rays.front().residual;
      // Lift y to a class of the original cone.
      Eigen::VectorXd lifted;
      if (quotient.kind == ConeKind::polyhedral) {
        const Eigen::MatrixXd r = quotient.ray_matrix();
        Eigen::VectorXd lambda;
        if (!nonnegative_solution(r, y, &lambda, 1e-11)) throw InconsistencyError("wedge-cone ray cannot be lifted");
        if (classes.empty()) {
          lifted = y;
        } else {
          lifted = Eigen::VectorXd::Zero(d);
          std::size_t idx = 0;
          for (const auto& ray : spec.rays) {
            const Eigen::VectorXd n = sup_normalize(ray);
            if ((q.transpose() * n).cwiseAbs().maxCoeff() > 1e-9) lifted += lambda(static_cast<Eigen::Index>(idx++)) * n;
          }
        }
      } else {
        lifted = y;
      }
      c.witness = sup_normalize(lifted);
      c.right = q * y;
      c.left = rays.empty() ? c.right : Eigen::VectorXd(q * left_partner(actions, rays.front().eigenvalues, y));
      for (const auto& m : gens.matrices()) c.values.push_back(c.evaluate(m));
      classes.push_back(c.witness);
      sys.extensions.push_back(c);
      sys.pi_components.push_back(std::move(c));
    }
  }
  sys.Pi.clear();
  for (std::size_t i = 0; i < gens.size(); ++i) {
    Eigen::VectorXd v(static_cast<Eigen::Index>(sys.pi_components.size()));
    for (std::size_t j = 0; j < sys.pi_components.size(); ++j) v(static_cast<Eigen::Index>(j)) = sys.pi_components[j].values[i];
    sys.Pi.push_back(std::move(v));
  }
  sys.extended = true;
  return sys;
}

DiscretenessGauge discreteness_gauge(const CharacterSystem& system, const GeneratorSet& gens, int max_length,
                                     double zero_tol, std::size_t cap) {
  if (!(zero_tol > 0)) throw ParameterError("zero tolerance must be positive");
  DiscretenessGauge out;
  out.max_length = max_length;
  const auto e = enumerate_words(gens, max_length, cap);
  out.truncated = e.truncated;
  for (std::size_t i = 1; i < e.words.size(); ++i) {
    const Word& w = e.words[i];
    ++out.words;
    const double s = system.pi_components.empty() ? 0.0 : Pi_map(system, w).cwiseAbs().maxCoeff();
    if (s > zero_tol) {
      out.delta0 = out.delta0 ? std::min(*out.delta0, s) : s;
      continue;
    }
    const auto test = null_entropy_test(w.matrix);
    if (!test.null_entropy)
      throw InconsistencyError("word " + w.to_string(gens.names()) + " has Pi = 0 but positive entropy (rho = " +
                               std::to_string(test.radius) + ")");
    if (!test.exact) ++out.kernel_numeric;
    out.kernel.push_back(w);
  }
  out.kernel_only = !out.delta0.has_value();
  return out;
}

CharacterSystem build_character_system(const CohomologyModel& model, const GeneratorSet& gens, const ConeSpec& spec,
                                       double tol) {
  return extend_characters(enumerate_characters(gens, spec, model.dimension(), tol), model, gens, spec, tol);
}

}  // namespace kdyn
