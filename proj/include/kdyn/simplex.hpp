#pragma once

#include <Eigen/Dense>

#include <vector>

namespace kdyn {

enum class LPStatus { optimal, infeasible, unbounded };

struct LPResult {
  LPStatus status = LPStatus::infeasible;
  Eigen::VectorXd x;
  double objective = 0.0;
};

/// maximize c.x subject to A x = b, x_i >= 0 unless free[i].
/// Dense two-phase simplex with Bland's rule. `free` may be empty.
LPResult solve_lp(const Eigen::MatrixXd& a, const Eigen::VectorXd& b, const Eigen::VectorXd& c,
                  const std::vector<bool>& free = {}, double tol = 1e-10);

/// Some x >= 0 with A x = b, if one exists.
bool nonnegative_solution(const Eigen::MatrixXd& a, const Eigen::VectorXd& b, Eigen::VectorXd* x = nullptr,
                          double tol = 1e-10);

}  // namespace kdyn
