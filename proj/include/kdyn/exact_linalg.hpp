#pragma once

// Exact linear algebra on graded cohomology models: characteristic
// polynomials, cup products and induced actions on the graded pieces.

#include "kdyn/matrix.hpp"
#include "kdyn/polynomial.hpp"

#include <Eigen/Dense>

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace kdyn {

/// det(xI - M) by exact Hessenberg reduction. Throws DimensionError if M is not square.
Polynomial char_poly(const Matrix& m);
/// Same polynomial via the Faddeev-LeVerrier trace recursion (cross-check).
Polynomial char_poly_trace_recursion(const Matrix& m);

/// One sparse structure constant: e^j_left * e^k_right contributes coeff * e^{j+k}_out.
struct CupEntry {
  std::size_t left = 0;
  std::size_t right = 0;
  std::size_t out = 0;
  Rational coeff;
  double coeff_value = 0.0;
};

/// Graded commutative ring with pieces 1..n; the top piece is one-dimensional.
///
/// All pieces have even real degree, so the product is fully symmetric:
/// tables are stored for grade pairs j <= k, and for j == k only entries with
/// left <= right are kept.
class CohomologyModel {
 public:
  CohomologyModel() = default;
  CohomologyModel(int n, std::vector<std::size_t> piece_sizes);

  int dimension() const { return n_; }
  std::size_t piece_size(int grade) const;
  const std::vector<std::size_t>& piece_sizes() const { return sizes_; }

  /// Adds a structure constant. Throws GradeError when j + k > n and
  /// DimensionError for out-of-range indices or a repeated (left, right, out).
  void add_cup(int j, int k, std::size_t left, std::size_t right, std::size_t out, const Rational& coeff);

  /// Grade pairs (j <= k) that carry a table.
  std::vector<std::pair<int, int>> cup_grades() const;
  const std::vector<CupEntry>& cup_table(int j, int k) const;

  RVector cup(int j, const RVector& a, int k, const RVector& b) const;
  /// Floating-point product; with absolute = true every coefficient is
  /// replaced by its modulus (used for rounding-error bounds).
  Eigen::VectorXd cup(int j, const Eigen::VectorXd& a, int k, const Eigen::VectorXd& b,
                      bool absolute = false) const;

 private:
  int n_ = 0;
  std::vector<std::size_t> sizes_;
  std::map<std::pair<int, int>, std::vector<CupEntry>> tables_;
};

struct GradedClass {
  int grade = 1;
  RVector coords;
};

/// Iterated cup product of the classes. Throws GradeError on total grade > n.
GradedClass wedge(const CohomologyModel& model, const std::vector<GradedClass>& classes);
/// Floating-point iterated product of piece-1 classes; optionally reports the
/// same product evaluated on absolute values (magnitude bound).
Eigen::VectorXd wedge_piece1(const CohomologyModel& model, const std::vector<Eigen::VectorXd>& classes,
                             Eigen::VectorXd* magnitude = nullptr);

/// Basis vector e_index of the given grade.
GradedClass basis_class(const CohomologyModel& model, int grade, std::size_t index);

struct AutomorphismAction {
  std::string name;
  /// pieces[k - 1] acts on graded piece k.
  std::vector<Matrix> pieces;

  const Matrix& piece(int grade) const { return pieces.at(static_cast<std::size_t>(grade - 1)); }
  const Matrix& piece1() const { return pieces.at(0); }
  /// Scalar action on the top piece.
  Rational degree() const;
};

/// Matrix on piece `grade` forced by ring compatibility from the piece-1
/// action. Throws UnderdeterminedError when piece `grade` is not generated by
/// products with piece 1, InconsistencyError when no ring-compatible matrix exists.
Matrix induced_action(const Matrix& piece1, const CohomologyModel& model, int grade);

/// Builds an action on all pieces: supplied matrices are kept as given (and
/// later audited), missing ones are induced from the lower pieces.
AutomorphismAction complete_action(std::string name, const std::vector<std::optional<Matrix>>& supplied,
                                   const CohomologyModel& model);

struct RingViolation {
  int left_grade = 0;
  int right_grade = 0;
  std::size_t left_index = 0;
  std::size_t right_index = 0;
  std::string detail;
};

struct RingReport {
  bool compatible = true;
  std::vector<RingViolation> violations;
  Rational degree;
  bool volume_preserving = false;  // degree == 1
};

/// Checks f*(e_a e_b) = f*(e_a) f*(e_b) for every basis pair of every grade pair.
RingReport ring_compatibility_check(const AutomorphismAction& action, const CohomologyModel& model);

}  // namespace kdyn
