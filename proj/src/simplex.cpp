#include "kdyn/simplex.hpp"

#include "kdyn/errors.hpp"

#include <cmath>
#include <limits>

namespace kdyn {

namespace {

class Tableau {
 public:
  // Rows 0..m-1 are constraints, row m is the objective (reduced costs).
  Eigen::MatrixXd t;
  std::vector<Eigen::Index> basis;
  double tol;

  Tableau(Eigen::Index m, Eigen::Index n, double tolerance) : t(Eigen::MatrixXd::Zero(m + 1, n + 1)), basis(static_cast<std::size_t>(m)), tol(tolerance) {}

  Eigen::Index rows() const { return t.rows() - 1; }
  Eigen::Index cols() const { return t.cols() - 1; }

  void pivot(Eigen::Index r, Eigen::Index c) {
    t.row(r) /= t(r, c);
    for (Eigen::Index i = 0; i < t.rows(); ++i)
      if (i != r && t(i, c) != 0.0) t.row(i) -= t(i, c) * t.row(r);
    basis[static_cast<std::size_t>(r)] = c;
  }

  // Minimizes the objective row; columns >= limit never enter.
  LPStatus run(Eigen::Index limit) {
    const Eigen::Index m = rows();
    for (int iter = 0; iter < 50000; ++iter) {
      Eigen::Index enter = -1;
      for (Eigen::Index j = 0; j < limit; ++j)
        if (t(m, j) < -tol) {
          enter = j;
          break;
        }
      if (enter < 0) return LPStatus::optimal;
      Eigen::Index leave = -1;
      double best = std::numeric_limits<double>::infinity();
      for (Eigen::Index i = 0; i < m; ++i) {
        if (t(i, enter) <= tol) continue;
        const double ratio = t(i, cols()) / t(i, enter);
        if (ratio < best - tol ||
            (ratio <= best + tol && leave >= 0 && basis[static_cast<std::size_t>(i)] < basis[static_cast<std::size_t>(leave)])) {
          best = std::min(best, ratio);
          leave = i;
        }
      }
      if (leave < 0) return LPStatus::unbounded;
      pivot(leave, enter);
    }
    throw Error("simplex iteration limit reached");
  }
};

}  // namespace

LPResult solve_lp(const Eigen::MatrixXd& a, const Eigen::VectorXd& b, const Eigen::VectorXd& c,
                  const std::vector<bool>& free, double tol) {
  const Eigen::Index m = a.rows();
  const Eigen::Index n = a.cols();
  if (b.size() != m || c.size() != n || (!free.empty() && free.size() != static_cast<std::size_t>(n)))
    throw DimensionError("linear program dimensions disagree");
  // Free variables are split as x = x+ - x-.
  std::vector<Eigen::Index> neg_of(static_cast<std::size_t>(n), -1);
  Eigen::Index cols = n;
  for (Eigen::Index j = 0; j < n; ++j)
    if (!free.empty() && free[static_cast<std::size_t>(j)]) neg_of[static_cast<std::size_t>(j)] = cols++;
  const Eigen::Index total = cols + m;  // plus one artificial per row
  Tableau tab(m, total, tol);
  for (Eigen::Index i = 0; i < m; ++i) {
    const double sign = b(i) < 0 ? -1.0 : 1.0;
    for (Eigen::Index j = 0; j < n; ++j) {
      tab.t(i, j) = sign * a(i, j);
      if (neg_of[static_cast<std::size_t>(j)] >= 0) tab.t(i, neg_of[static_cast<std::size_t>(j)]) = -sign * a(i, j);
    }
    tab.t(i, cols + i) = 1.0;
    tab.t(i, total) = sign * b(i);
    tab.basis[static_cast<std::size_t>(i)] = cols + i;
  }
  // Phase 1: minimize the sum of artificials.
  for (Eigen::Index i = 0; i < m; ++i) tab.t.row(m) -= tab.t.row(i);
  for (Eigen::Index i = 0; i < m; ++i) tab.t(m, cols + i) = 0.0;
  tab.run(total);
  LPResult out;
  const double scale = std::max(1.0, b.cwiseAbs().maxCoeff());
  if (-tab.t(m, total) > tol * scale * 10) return out;
  // Drive remaining artificials out of the basis.
  for (Eigen::Index i = 0; i < m; ++i) {
    if (tab.basis[static_cast<std::size_t>(i)] < cols) continue;
    for (Eigen::Index j = 0; j < cols; ++j)
      if (std::abs(tab.t(i, j)) > tol) {
        tab.pivot(i, j);
        break;
      }
  }
  // Phase 2: maximize c.x, i.e. minimize -c.x.
  tab.t.row(m).setZero();
  for (Eigen::Index j = 0; j < n; ++j) {
    tab.t(m, j) = -c(j);
    if (neg_of[static_cast<std::size_t>(j)] >= 0) tab.t(m, neg_of[static_cast<std::size_t>(j)]) = c(j);
  }
  for (Eigen::Index i = 0; i < m; ++i) {
    const Eigen::Index bj = tab.basis[static_cast<std::size_t>(i)];
    if (tab.t(m, bj) != 0.0) tab.t.row(m) -= tab.t(m, bj) * tab.t.row(i);
  }
  const LPStatus status = tab.run(cols);
  out.status = status;
  Eigen::VectorXd raw = Eigen::VectorXd::Zero(cols);
  for (Eigen::Index i = 0; i < m; ++i) {
    const Eigen::Index bj = tab.basis[static_cast<std::size_t>(i)];
    if (bj < cols) raw(bj) = tab.t(i, total);
  }
  out.x = raw.head(n);
  for (Eigen::Index j = 0; j < n; ++j)
    if (neg_of[static_cast<std::size_t>(j)] >= 0) out.x(j) -= raw(neg_of[static_cast<std::size_t>(j)]);
  out.objective = c.dot(out.x);
  return out;
}

bool nonnegative_solution(const Eigen::MatrixXd& a, const Eigen::VectorXd& b, Eigen::VectorXd* x, double tol) {
  const auto r = solve_lp(a, b, Eigen::VectorXd::Zero(a.cols()), {}, tol);
  if (r.status == LPStatus::infeasible) return false;
  if (x) *x = r.x;
  return true;
}

}  // namespace kdyn
