#include "kdyn/exact_linalg.hpp"

#include "kdyn/errors.hpp"

#include <algorithm>
#include <sstream>

namespace kdyn {

Polynomial char_poly(const Matrix& m) {
  if (!m.is_square()) throw DimensionError("char_poly requires a square matrix");
  const std::size_t n = m.rows();
  Matrix h = m;
  // Similarity reduction to upper Hessenberg form.
  for (std::size_t col = 0; col + 2 < n; ++col) {
    const std::size_t row = col + 1;
    std::size_t p = row;
    while (p < n && h(p, col) == 0) ++p;
    if (p == n) continue;
    if (p != row) {
      for (std::size_t j = 0; j < n; ++j) std::swap(h(p, j), h(row, j));
      for (std::size_t i = 0; i < n; ++i) std::swap(h(i, p), h(i, row));
    }
    for (std::size_t i = row + 1; i < n; ++i) {
      if (h(i, col) == 0) continue;
      const Rational u = h(i, col) / h(row, col);
      for (std::size_t j = 0; j < n; ++j)
        if (h(row, j) != 0) h(i, j) -= u * h(row, j);
      for (std::size_t k = 0; k < n; ++k)
        if (h(k, i) != 0) h(k, row) += u * h(k, i);
    }
  }
  // p_m = (x - h_mm) p_{m-1} - sum_i h_{m-i,m} (prod sub-diagonal) p_{m-i-1}
  std::vector<Polynomial> p;
  p.reserve(n + 1);
  p.push_back(Polynomial::monomial(0));
  for (std::size_t m1 = 1; m1 <= n; ++m1) {
    const std::size_t m = m1 - 1;
    Polynomial next = Polynomial({Rational(-h(m, m)), Rational(1)}) * p[m1 - 1];
    Rational sub = 1;
    for (std::size_t i = 1; i <= m; ++i) {
      sub *= h(m - i + 1, m - i);
      if (sub == 0) break;
      const Rational& top = h(m - i, m);
      if (top != 0) next = next - p[m1 - 1 - i] * (top * sub);
    }
    p.push_back(std::move(next));
  }
  return p[n];
}

Polynomial char_poly_trace_recursion(const Matrix& m) {
  if (!m.is_square()) throw DimensionError("char_poly requires a square matrix");
  const std::size_t n = m.rows();
  std::vector<Rational> c(n + 1, Rational(0));
  c[n] = 1;
  Matrix mk(n, n);
  const Matrix id = Matrix::identity(n);
  for (std::size_t k = 1; k <= n; ++k) {
    mk = m * mk + id * c[n - k + 1];
    c[n - k] = -(m * mk).trace() / Rational(static_cast<long>(k));
  }
  return Polynomial(std::move(c));
}

CohomologyModel::CohomologyModel(int n, std::vector<std::size_t> piece_sizes)
    : n_(n), sizes_(std::move(piece_sizes)) {
  if (n_ < 1) throw ParameterError("complex dimension must be positive");
  if (sizes_.size() != static_cast<std::size_t>(n_))
    throw DimensionError("expected " + std::to_string(n_) + " piece sizes, got " + std::to_string(sizes_.size()));
  for (auto s : sizes_)
    if (s == 0) throw DimensionError("graded pieces must be non-empty");
  if (sizes_.back() != 1) throw DimensionError("top piece must be one-dimensional");
}

std::size_t CohomologyModel::piece_size(int grade) const {
  if (grade < 1 || grade > n_) throw GradeError("grade " + std::to_string(grade) + " outside 1.." + std::to_string(n_));
  return sizes_[static_cast<std::size_t>(grade - 1)];
}

void CohomologyModel::add_cup(int j, int k, std::size_t left, std::size_t right, std::size_t out,
                              const Rational& coeff) {
  if (j < 1 || k < 1 || j + k > n_) {
    std::ostringstream msg;
    msg << "cup entry (" << j << "," << k << ")[" << left << "," << right << "->" << out
        << "] overflows grade " << n_;
    throw GradeError(msg.str());
  }
  if (j > k) {
    std::swap(j, k);
    std::swap(left, right);
  }
  if (j == k && left > right) std::swap(left, right);
  if (left >= piece_size(j) || right >= piece_size(k) || out >= piece_size(j + k)) {
    std::ostringstream msg;
    msg << "cup entry (" << j << "," << k << ")[" << left << "," << right << "->" << out << "] index out of range";
    throw DimensionError(msg.str());
  }
  auto& table = tables_[{j, k}];
  for (const auto& e : table)
    if (e.left == left && e.right == right && e.out == out) {
      std::ostringstream msg;
      msg << "duplicate cup entry (" << j << "," << k << ")[" << left << "," << right << "->" << out << "]";
      throw DimensionError(msg.str());
    }
  if (coeff == 0) return;
  table.push_back(CupEntry{left, right, out, coeff, to_double(coeff)});
}

std::vector<std::pair<int, int>> CohomologyModel::cup_grades() const {
  std::vector<std::pair<int, int>> out;
  for (const auto& [key, table] : tables_)
    if (!table.empty()) out.push_back(key);
  return out;
}

const std::vector<CupEntry>& CohomologyModel::cup_table(int j, int k) const {
  static const std::vector<CupEntry> empty;
  if (j > k) std::swap(j, k);
  auto it = tables_.find({j, k});
  return it == tables_.end() ? empty : it->second;
}

RVector CohomologyModel::cup(int j, const RVector& a, int k, const RVector& b) const {
  if (j + k > n_) throw GradeError("cup product of grades " + std::to_string(j) + "+" + std::to_string(k) + " exceeds " + std::to_string(n_));
  if (a.size() != piece_size(j) || b.size() != piece_size(k)) throw DimensionError("cup operand size mismatch");
  const bool swapped = j > k;
  const RVector& x = swapped ? b : a;
  const RVector& y = swapped ? a : b;
  RVector out(piece_size(j + k), Rational(0));
  for (const auto& e : cup_table(j, k)) {
    Rational term = x[e.left] * y[e.right];
    if (j == k && e.left != e.right) term += x[e.right] * y[e.left];
    if (term != 0) out[e.out] += e.coeff * term;
  }
  return out;
}

Eigen::VectorXd CohomologyModel::cup(int j, const Eigen::VectorXd& a, int k, const Eigen::VectorXd& b,
                                     bool absolute) const {
  if (j + k > n_) throw GradeError("cup product of grades " + std::to_string(j) + "+" + std::to_string(k) + " exceeds " + std::to_string(n_));
  if (static_cast<std::size_t>(a.size()) != piece_size(j) || static_cast<std::size_t>(b.size()) != piece_size(k))
    throw DimensionError("cup operand size mismatch");
  const bool swapped = j > k;
  const Eigen::VectorXd& x = swapped ? b : a;
  const Eigen::VectorXd& y = swapped ? a : b;
  Eigen::VectorXd out = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(piece_size(j + k)));
  for (const auto& e : cup_table(j, k)) {
    const auto l = static_cast<Eigen::Index>(e.left);
    const auto r = static_cast<Eigen::Index>(e.right);
    double term = x(l) * y(r);
    if (j == k && e.left != e.right) term += x(r) * y(l);
    out(static_cast<Eigen::Index>(e.out)) += (absolute ? std::abs(e.coeff_value) : e.coeff_value) * term;
  }
  return out;
}

GradedClass wedge(const CohomologyModel& model, const std::vector<GradedClass>& classes) {
  if (classes.empty()) throw ParameterError("wedge of an empty list");
  int total = 0;
  for (const auto& c : classes) {
    if (c.coords.size() != model.piece_size(c.grade)) throw DimensionError("class size does not match its grade");
    total += c.grade;
  }
  if (total > model.dimension())
    throw GradeError("total grade " + std::to_string(total) + " exceeds dimension " + std::to_string(model.dimension()));
  GradedClass acc = classes.front();
  for (std::size_t i = 1; i < classes.size(); ++i) {
    acc.coords = model.cup(acc.grade, acc.coords, classes[i].grade, classes[i].coords);
    acc.grade += classes[i].grade;
  }
  return acc;
}

Eigen::VectorXd wedge_piece1(const CohomologyModel& model, const std::vector<Eigen::VectorXd>& classes,
                             Eigen::VectorXd* magnitude) {
  if (classes.empty()) throw ParameterError("wedge of an empty list");
  if (static_cast<int>(classes.size()) > model.dimension())
    throw GradeError("total grade " + std::to_string(classes.size()) + " exceeds dimension " +
                     std::to_string(model.dimension()));
  Eigen::VectorXd acc = classes.front();
  Eigen::VectorXd mag = acc.cwiseAbs();
  for (std::size_t i = 1; i < classes.size(); ++i) {
    const int grade = static_cast<int>(i);
    acc = model.cup(grade, acc, 1, classes[i]);
    if (magnitude) mag = model.cup(grade, mag, 1, classes[i].cwiseAbs(), true);
  }
  if (magnitude) *magnitude = mag;
  return acc;
}

GradedClass basis_class(const CohomologyModel& model, int grade, std::size_t index) {
  GradedClass c{grade, RVector(model.piece_size(grade), Rational(0))};
  c.coords.at(index) = 1;
  return c;
}

Rational AutomorphismAction::degree() const {
  if (pieces.empty()) throw Error("action '" + name + "' has no pieces");
  const Matrix& top = pieces.back();
  if (top.rows() != 1 || top.cols() != 1) throw DimensionError("top piece of '" + name + "' is not 1x1");
  return top(0, 0);
}

namespace {

// Matrix on piece `grade` from the actions on pieces grade-1 and 1.
Matrix induce_next(const Matrix& lower, const Matrix& piece1, const CohomologyModel& model, int grade) {
  const std::size_t hk = model.piece_size(grade);
  const std::size_t hl = model.piece_size(grade - 1);
  const std::size_t h1 = model.piece_size(1);
  std::vector<RVector> products;
  std::vector<RVector> images;
  products.reserve(hl * h1);
  for (std::size_t a = 0; a < hl; ++a) {
    const RVector ea = basis_class(model, grade - 1, a).coords;
    const RVector fa = lower.column(a);
    for (std::size_t b = 0; b < h1; ++b) {
      RVector prod = model.cup(grade - 1, ea, 1, basis_class(model, 1, b).coords);
      products.push_back(std::move(prod));
      images.push_back(model.cup(grade - 1, fa, 1, piece1.column(b)));
    }
  }
  const Matrix p = Matrix::from_columns(products, hk);
  const Matrix q = Matrix::from_columns(images, hk);
  const auto pivots = p.pivot_columns();
  if (pivots.size() < hk) {
    throw UnderdeterminedError("piece " + std::to_string(grade) + " is not generated by products with piece 1 (rank " +
                               std::to_string(pivots.size()) + " < " + std::to_string(hk) + ")");
  }
  std::vector<RVector> p_sel, q_sel;
  for (auto c : pivots) {
    p_sel.push_back(p.column(c));
    q_sel.push_back(q.column(c));
  }
  const Matrix result = Matrix::from_columns(q_sel, hk) * Matrix::from_columns(p_sel, hk).inverse();
  if (result * p != q) {
    throw InconsistencyError("no ring-compatible action on piece " + std::to_string(grade) +
                             ": products with piece 1 are not respected");
  }
  return result;
}

}  // namespace

Matrix induced_action(const Matrix& piece1, const CohomologyModel& model, int grade) {
  if (piece1.rows() != model.piece_size(1) || !piece1.is_square())
    throw DimensionError("piece-1 matrix does not match the model");
  Matrix current = piece1;
  for (int k = 2; k <= grade; ++k) current = induce_next(current, piece1, model, k);
  return current;
}

AutomorphismAction complete_action(std::string name, const std::vector<std::optional<Matrix>>& supplied,
                                   const CohomologyModel& model) {
  if (supplied.empty() || !supplied[0]) throw ParameterError("action '" + name + "' lacks a piece-1 matrix");
  AutomorphismAction action{std::move(name), {}};
  const int n = model.dimension();
  for (int k = 1; k <= n; ++k) {
    const auto idx = static_cast<std::size_t>(k - 1);
    if (idx < supplied.size() && supplied[idx]) {
      const Matrix& m = *supplied[idx];
      if (m.rows() != model.piece_size(k) || !m.is_square())
        throw DimensionError("action '" + action.name + "' piece " + std::to_string(k) + " has wrong size");
      action.pieces.push_back(m);
      continue;
    }
    action.pieces.push_back(induce_next(action.pieces.back(), action.pieces.front(), model, k));
  }
  return action;
}

RingReport ring_compatibility_check(const AutomorphismAction& action, const CohomologyModel& model) {
  RingReport report;
  const int n = model.dimension();
  if (action.pieces.size() != static_cast<std::size_t>(n)) {
    report.compatible = false;
    report.violations.push_back({0, 0, 0, 0, "action supplies " + std::to_string(action.pieces.size()) +
                                                 " pieces, model has " + std::to_string(n)});
    return report;
  }
  for (int j = 1; j <= n; ++j)
    for (int k = j; j + k <= n; ++k) {
      const Matrix& mj = action.piece(j);
      const Matrix& mk = action.piece(k);
      const Matrix& mjk = action.piece(j + k);
      for (std::size_t a = 0; a < model.piece_size(j); ++a)
        for (std::size_t b = (j == k ? a : 0); b < model.piece_size(k); ++b) {
          const RVector prod = model.cup(j, basis_class(model, j, a).coords, k, basis_class(model, k, b).coords);
          const RVector lhs = mjk * prod;
          const RVector rhs = model.cup(j, mj.column(a), k, mk.column(b));
          if (lhs == rhs) continue;
          report.compatible = false;
          std::ostringstream detail;
          detail << "f*(e" << j << "_" << a << " * e" << k << "_" << b << ") != f*(e" << j << "_" << a
                 << ") * f*(e" << k << "_" << b << ")";
          for (std::size_t c = 0; c < lhs.size(); ++c)
            if (lhs[c] != rhs[c]) {
              detail << "; coordinate " << c << ": " << format_rational(lhs[c]) << " vs " << format_rational(rhs[c]);
              break;
            }
          report.violations.push_back({j, k, a, b, detail.str()});
        }
    }
  report.degree = action.degree();
  report.volume_preserving = report.degree == 1;
  return report;
}

}  // namespace kdyn
