#include "kdyn/lattice.hpp"

#include "kdyn/errors.hpp"

#include <cmath>

namespace kdyn {

namespace {


Integer round_nearest(const Rational& q) {
  const Integer num = boost::multiprecision::numerator(q);
  const Integer den = boost::multiprecision::denominator(q);
  Integer twice = 2 * num + den;
  Integer twice_den = 2 * den;
  Integer quot = twice / twice_den;
  if (twice % twice_den != 0 && twice < 0) quot -= 1;
  return quot;
}

}  // namespace

std::vector<IVector> lll_reduce(std::vector<IVector> b, const Rational& delta) {
  const std::size_t n = b.size();
  if (n == 0) return b;
  std::vector<std::vector<Rational>> bstar(n);
  std::vector<Rational> norms(n);
  std::vector<std::vector<Rational>> mu(n, std::vector<Rational>(n));
  const auto gram_schmidt = [&]() {
    for (std::size_t i = 0; i < n; ++i) {
      bstar[i].assign(b[i].begin(), b[i].end());
      for (std::size_t j = 0; j < i; ++j) {
        Rational num = 0;
        for (std::size_t k = 0; k < b[i].size(); ++k) num += Rational(b[i][k]) * bstar[j][k];
        mu[i][j] = norms[j] == 0 ? Rational(0) : num / norms[j];
        for (std::size_t k = 0; k < b[i].size(); ++k) bstar[i][k] -= mu[i][j] * bstar[j][k];
      }
      norms[i] = 0;
      for (const auto& x : bstar[i]) norms[i] += x * x;
    }
  };
  gram_schmidt();
  std::size_t k = 1;
  std::size_t guard = 0;
  while (k < n) {
    if (++guard > 100000) throw Error("LLL iteration limit reached");
    for (std::size_t j = k; j-- > 0;) {
      const Integer q = round_nearest(mu[k][j]);
      if (q == 0) continue;
      for (std::size_t c = 0; c < b[k].size(); ++c) b[k][c] -= q * b[j][c];
      for (std::size_t c = 0; c <= j; ++c) mu[k][c] -= Rational(q) * (c == j ? Rational(1) : mu[j][c]);
    }
    if (norms[k] >= (delta - mu[k][k - 1] * mu[k][k - 1]) * norms[k - 1]) {
      ++k;
    } else {
      std::swap(b[k], b[k - 1]);
      gram_schmidt();
      k = std::max<std::size_t>(k - 1, 1);
    }
  }
  return b;
}

std::vector<IntegerRelation> find_integer_relations(const std::vector<Eigen::VectorXd>& vectors, double scale,
                                                    long long coeff_bound, double tol) {
  std::vector<IntegerRelation> out;
  const std::size_t k = vectors.size();
  if (k == 0) return out;
  const std::size_t m = static_cast<std::size_t>(vectors.front().size());
  std::vector<IVector> basis(k, IVector(k + m, Integer(0)));
  for (std::size_t i = 0; i < k; ++i) {
    if (static_cast<std::size_t>(vectors[i].size()) != m) throw DimensionError("relation vectors differ in length");
    basis[i][i] = 1;
    for (std::size_t j = 0; j < m; ++j) basis[i][k + j] = Integer(static_cast<long long>(std::llround(scale * vectors[i](static_cast<Eigen::Index>(j)))));
  }
  const auto reduced = lll_reduce(basis);
  // Keep short rows whose coefficients are a genuine relation; the independent
  // ones among them span the relation lattice found.
  Eigen::MatrixXd accepted(0, static_cast<Eigen::Index>(k));
  for (const auto& row : reduced) {
    IntegerRelation rel;
    bool small = true, nonzero = false;
    for (std::size_t i = 0; i < k; ++i) {
      if (boost::multiprecision::abs(row[i]) > coeff_bound) {
        small = false;
        break;
      }
      rel.coeffs.push_back(static_cast<long long>(row[i]));
      nonzero = nonzero || row[i] != 0;
    }
    if (!small || !nonzero) continue;
    Eigen::VectorXd combo = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(m));
    double magnitude = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
      combo += static_cast<double>(rel.coeffs[i]) * vectors[i];
      magnitude += std::abs(static_cast<double>(rel.coeffs[i])) * vectors[i].cwiseAbs().maxCoeff();
    }
    rel.residual = m == 0 ? 0.0 : combo.cwiseAbs().maxCoeff();
    if (rel.residual > tol * std::max(1.0, magnitude)) continue;
    Eigen::MatrixXd trial(accepted.rows() + 1, static_cast<Eigen::Index>(k));
    trial.topRows(accepted.rows()) = accepted;
    for (std::size_t i = 0; i < k; ++i) trial(accepted.rows(), static_cast<Eigen::Index>(i)) = static_cast<double>(rel.coeffs[i]);
    Eigen::FullPivLU<Eigen::MatrixXd> lu(trial);
    if (lu.rank() <= accepted.rows()) continue;
    accepted = trial;
    out.push_back(std::move(rel));
  }
  return out;
}

}  // namespace kdyn
