#pragma once

#include "kdyn/rational.hpp"

#include <Eigen/Dense>

#include <vector>

namespace kdyn {

using IVector = std::vector<Integer>;

/// Exact LLL reduction of the row basis (Lovasz parameter delta).
std::vector<IVector> lll_reduce(std::vector<IVector> basis, const Rational& delta = Rational(3, 4));

struct IntegerRelation {
  std::vector<long long> coeffs;
  /// Sup-norm of sum c_i x_i.
  double residual = 0.0;
};

/// Integer relations sum c_i x_i ~ 0 among the vectors, from LLL on the
/// lattice [I | round(scale * X)]. Returns an independent set with
/// |c_i| <= coeff_bound and residual <= tol * max(1, sum |c_i| |x_i|).
std::vector<IntegerRelation> find_integer_relations(const std::vector<Eigen::VectorXd>& vectors, double scale = 1e9,
                                                    long long coeff_bound = 1 << 16, double tol = 1e-6);

}  // namespace kdyn
