#include "kdyn/cones.hpp"

#include "kdyn/errors.hpp"
#include "kdyn/exact_linalg.hpp"
#include "kdyn/simplex.hpp"
#include "kdyn/spectra.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <sstream>

namespace kdyn {

ConeSpec ConeSpec::polyhedral(std::vector<Eigen::VectorXd> rays) {
  ConeSpec c;
  c.kind = ConeKind::polyhedral;
  c.dim = rays.empty() ? 0 : static_cast<std::size_t>(rays.front().size());
  c.rays = std::move(rays);
  return c;
}

ConeSpec ConeSpec::polyhedral_exact(std::vector<RVector> rays) {
  std::vector<Eigen::VectorXd> numeric;
  for (const auto& r : rays) numeric.push_back(to_eigen(r));
  ConeSpec c = polyhedral(std::move(numeric));
  c.exact_rays = std::move(rays);
  return c;
}

ConeSpec ConeSpec::orthant(std::size_t d) {
  std::vector<RVector> rays;
  for (std::size_t i = 0; i < d; ++i) {
    RVector e(d, Rational(0));
    e[i] = 1;
    rays.push_back(std::move(e));
  }
  return polyhedral_exact(std::move(rays));
}

ConeSpec ConeSpec::lorentzian(Matrix form, RVector time) {
  ConeSpec c;
  c.kind = ConeKind::lorentzian;
  c.dim = form.rows();
  c.form = std::move(form);
  c.time = std::move(time);
  return c;
}

Eigen::MatrixXd ConeSpec::ray_matrix() const {
  Eigen::MatrixXd r(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(rays.size()));
  for (std::size_t i = 0; i < rays.size(); ++i) r.col(static_cast<Eigen::Index>(i)) = sup_normalize(rays[i]);
  return r;
}

Eigen::VectorXd ConeSpec::interior_point() const {
  if (kind == ConeKind::lorentzian) return sup_normalize(to_eigen(time));
  return sup_normalize(ray_matrix().rowwise().sum());
}

std::size_t ConeSpec::span_dimension() const {
  if (kind == ConeKind::lorentzian) return dim;
  if (rays.empty()) return 0;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(ray_matrix());
  const auto& s = svd.singularValues();
  std::size_t r = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i)
    if (s(i) > 1e-9 * s(0)) ++r;
  return r;
}

std::string ConeSpec::describe() const {
  std::ostringstream out;
  if (kind == ConeKind::polyhedral)
    out << "polyhedral cone in R^" << dim << " with " << rays.size() << " rays";
  else
    out << "lorentzian cone in R^" << dim;
  return out.str();
}

Eigen::VectorXd sup_normalize(const Eigen::VectorXd& v) {
  const double s = v.cwiseAbs().maxCoeff();
  return s > 0 ? Eigen::VectorXd(v / s) : v;
}

std::string to_string(Membership m) {
  switch (m) {
    case Membership::interior: return "interior";
    case Membership::boundary: return "boundary";
    case Membership::outside: return "outside";
  }
  return "outside";
}

std::string to_string(NotFound reason) {
  switch (reason) {
    case NotFound::none: return "none";
    case NotFound::tolerance_exhausted: return "tolerance_exhausted";
    case NotFound::certified_infeasible: return "certified_infeasible";
  }
  return "none";
}

namespace {

// Sign changes in the coefficient sequence.
int sign_changes(const Polynomial& p) {
  int changes = 0, last = 0;
  for (const auto& c : p.coefficients()) {
    const int s = c > 0 ? 1 : (c < 0 ? -1 : 0);
    if (s == 0) continue;
    if (last != 0 && s != last) ++changes;
    last = s;
  }
  return changes;
}

double form_value(const Eigen::MatrixXd& q, const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  return a.dot(q * b);
}

}  // namespace

ConeValidation validate_cone(const ConeSpec& spec, double tol) {
  ConeValidation out;
  if (spec.kind == ConeKind::lorentzian) {
    const Matrix& q = spec.form;
    if (!q.is_square() || q.rows() != spec.dim || spec.time.size() != spec.dim) {
      out.ok = false;
      out.violations.push_back({"form and time vector sizes disagree", {}});
      return out;
    }
    if (q.transpose() != q) {
      out.ok = false;
      out.violations.push_back({"form is not symmetric", {}});
      return out;
    }
    // Real-rooted characteristic polynomial: Descartes counts are exact.
    Polynomial p = char_poly(q);
    while (out.zero < p.degree() && p.coeff(static_cast<std::size_t>(out.zero)) == 0) ++out.zero;
    out.positive = sign_changes(p);
    out.negative = sign_changes(p.reflect());
    if (out.positive != 1 || out.negative != static_cast<int>(spec.dim) - 1) {
      out.ok = false;
      std::ostringstream msg;
      msg << "form signature (" << out.positive << "," << out.negative << "," << out.zero << ") is not (1,"
          << spec.dim - 1 << ")";
      out.violations.push_back({msg.str(), {}});
    }
    Rational qt = 0;
    for (std::size_t i = 0; i < spec.dim; ++i)
      for (std::size_t j = 0; j < spec.dim; ++j) qt += spec.time[i] * q(i, j) * spec.time[j];
    if (qt <= 0) {
      out.ok = false;
      out.violations.push_back({"time vector has non-positive self-pairing " + format_rational(qt), to_eigen(spec.time)});
    }
    out.full_dimensional = out.ok;
    return out;
  }
  if (spec.rays.empty()) {
    out.ok = false;
    out.violations.push_back({"polyhedral cone has no rays", {}});
    return out;
  }
  for (std::size_t i = 0; i < spec.rays.size(); ++i) {
    if (static_cast<std::size_t>(spec.rays[i].size()) != spec.dim) {
      out.ok = false;
      out.violations.push_back({"ray " + std::to_string(i) + " has wrong dimension", spec.rays[i]});
      return out;
    }
    if (spec.rays[i].cwiseAbs().maxCoeff() == 0.0) {
      out.ok = false;
      out.violations.push_back({"ray " + std::to_string(i) + " is zero", spec.rays[i]});
      return out;
    }
  }
  // A line lies in the cone iff some convex combination of the rays vanishes.
  const Eigen::MatrixXd r = spec.ray_matrix();
  const Eigen::Index d = r.rows(), p = r.cols();
  Eigen::MatrixXd a(d + 1, p);
  a.topRows(d) = r;
  a.row(d).setOnes();
  Eigen::VectorXd b = Eigen::VectorXd::Zero(d + 1);
  b(d) = 1.0;
  Eigen::VectorXd lambda;
  if (nonnegative_solution(a, b, &lambda, tol)) {
    Eigen::Index k = 0;
    lambda.maxCoeff(&k);
    out.ok = false;
    out.violations.push_back({"cone contains the line through ray " + std::to_string(k), spec.rays[static_cast<std::size_t>(k)]});
  }
  out.full_dimensional = spec.span_dimension() == spec.dim;
  return out;
}

Membership membership(const ConeSpec& spec, const Eigen::VectorXd& v, double tol) {
  if (static_cast<std::size_t>(v.size()) != spec.dim) throw DimensionError("vector dimension does not match cone");
  const double scale = v.cwiseAbs().maxCoeff();
  if (scale == 0.0) return Membership::boundary;
  const Eigen::VectorXd u = v / scale;
  if (spec.kind == ConeKind::lorentzian) {
    const Eigen::MatrixXd q = spec.form.to_eigen();
    const double value = form_value(q, u, u);
    const double band = tol * u.squaredNorm() * std::max(1.0, q.cwiseAbs().maxCoeff());
    const double pairing = form_value(q, to_eigen(spec.time), u);
    if (value < -band) return Membership::outside;
    if (pairing < -band) return Membership::outside;
    if (value <= band) return Membership::boundary;
    return pairing > 0 ? Membership::interior : Membership::outside;
  }
  // maximize s subject to R lambda + s w = u, lambda >= 0 (w a relative interior point).
  const Eigen::MatrixXd r = spec.ray_matrix();
  const Eigen::Index d = r.rows(), p = r.cols();
  Eigen::MatrixXd a(d, p + 1);
  a.leftCols(p) = r;
  a.col(p) = spec.interior_point();
  Eigen::VectorXd c = Eigen::VectorXd::Zero(p + 1);
  c(p) = 1.0;
  std::vector<bool> free(static_cast<std::size_t>(p + 1), false);
  free.back() = true;
  const auto res = solve_lp(a, u, c, free, tol * 1e-2);
  if (res.status == LPStatus::infeasible) return Membership::outside;
  if (res.status == LPStatus::unbounded) return Membership::interior;
  // The LP may stop short of the residual; confirm the combination.
  if ((a * res.x - u).cwiseAbs().maxCoeff() > std::sqrt(tol)) return Membership::outside;
  if (res.objective > tol) return Membership::interior;
  if (res.objective >= -tol) return Membership::boundary;
  return Membership::outside;
}

Preservation preserves_cone(const Matrix& m, const ConeSpec& spec, double tol) {
  if (m.rows() != spec.dim || !m.is_square()) throw DimensionError("matrix does not act on the cone's space");
  Preservation out;
  if (spec.kind == ConeKind::lorentzian) {
    const Matrix& q = spec.form;
    const Matrix pulled = m.transpose() * q * m;
    Rational s = 0;
    for (std::size_t i = 0; i < q.rows() && s == 0; ++i)
      for (std::size_t j = 0; j < q.cols(); ++j)
        if (q(i, j) != 0) {
          s = pulled(i, j) / q(i, j);
          break;
        }
    if (s <= 0 || pulled != q * s) {
      out.preserved = false;
      out.detail = "M^T Q M is not a positive multiple of Q";
      return out;
    }
    const RVector mt = m * spec.time;
    Rational self = 0, pairing = 0;
    for (std::size_t i = 0; i < q.rows(); ++i)
      for (std::size_t j = 0; j < q.cols(); ++j) {
        self += mt[i] * q(i, j) * mt[j];
        pairing += spec.time[i] * q(i, j) * mt[j];
      }
    if (self <= 0 || pairing <= 0) {
      out.preserved = false;
      out.detail = "time vector is mapped out of the future component";
      out.witness = to_eigen(spec.time);
    }
    return out;
  }
  const Eigen::MatrixXd me = m.to_eigen();
  for (std::size_t i = 0; i < spec.rays.size(); ++i) {
    const Eigen::VectorXd image = me * spec.rays[i];
    if (membership(spec, image, tol) == Membership::outside) {
      out.preserved = false;
      out.detail = "image of ray " + std::to_string(i) + " leaves the cone";
      out.witness = spec.rays[i];
      return out;
    }
  }
  return out;
}

Eigen::MatrixXd null_space(const Eigen::MatrixXd& a, double rel_tol) {
  const Eigen::Index n = a.cols();
  if (a.rows() == 0) return Eigen::MatrixXd::Identity(n, n);
  Eigen::MatrixXd padded = a;
  if (a.rows() < n) {
    padded = Eigen::MatrixXd::Zero(n, n);
    padded.topRows(a.rows()) = a;
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(padded, Eigen::ComputeFullV);
  const auto& s = svd.singularValues();
  const double threshold = rel_tol * std::max(1.0, s.size() ? s(0) : 0.0);
  Eigen::Index rank = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i)
    if (s(i) > threshold) ++rank;
  return svd.matrixV().rightCols(n - rank);
}

std::optional<Eigen::VectorXd> subspace_cone_point(const Eigen::MatrixXd& basis, const ConeSpec& spec, double tol) {
  const Eigen::Index k = basis.cols();
  if (k == 0) return std::nullopt;
  if (spec.kind == ConeKind::lorentzian) {
    // Orthogonal projection of the time vector, then each basis direction.
    std::vector<Eigen::VectorXd> candidates;
    candidates.push_back(basis * (basis.transpose() * to_eigen(spec.time)));
    for (Eigen::Index j = 0; j < k; ++j) {
      candidates.push_back(basis.col(j));
      candidates.push_back(-basis.col(j));
    }
    for (const auto& c : candidates)
      if (c.norm() > 1e-12 && membership(spec, c, tol) != Membership::outside) return sup_normalize(c);
    return std::nullopt;
  }
  // R lambda - N y = 0, sum lambda = 1, lambda >= 0, y free.
  const Eigen::MatrixXd r = spec.ray_matrix();
  const Eigen::Index d = r.rows(), p = r.cols();
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(d + 1, p + k);
  a.block(0, 0, d, p) = r;
  a.block(0, p, d, k) = -basis;
  a.block(d, 0, 1, p).setOnes();
  Eigen::VectorXd b = Eigen::VectorXd::Zero(d + 1);
  b(d) = 1.0;
  std::vector<bool> free(static_cast<std::size_t>(p + k), false);
  for (Eigen::Index j = p; j < p + k; ++j) free[static_cast<std::size_t>(j)] = true;
  const auto res = solve_lp(a, b, Eigen::VectorXd::Zero(p + k), free, tol * 1e-2);
  if (res.status == LPStatus::infeasible) return std::nullopt;
  // Report the subspace point N y: it is an exact member of the subspace.
  const Eigen::VectorXd v = basis * res.x.tail(k);
  if (v.cwiseAbs().maxCoeff() < 1e-12) return std::nullopt;
  return sup_normalize(v);
}

namespace {

double residual(const Eigen::MatrixXd& m, const Eigen::VectorXd& v, double lambda) {
  return (m * v - lambda * v).cwiseAbs().maxCoeff();
}

double rayleigh(const Eigen::MatrixXd& m, const Eigen::VectorXd& v) { return v.dot(m * v) / v.dot(v); }

// Positive real roots of char_poly(m), descending.
std::vector<double> positive_eigenvalues(const Matrix& m, double tol) {
  std::vector<double> out;
  const auto roots = polynomial_roots(char_poly(m), tol);
  for (const auto& z : roots.roots)
    if (std::abs(z.imag()) <= std::max(1e-9, 1e-9 * std::abs(z)) && z.real() > 0) out.push_back(z.real());
  std::sort(out.begin(), out.end(), std::greater<>());
  return out;
}

}  // namespace

EigenRay bpf_eigenvector(const Matrix& m, const ConeSpec& spec, double tol) {
  if (!(tol > 0)) throw ParameterError("tolerance must be positive");
  if (m.rows() != spec.dim || !m.is_square()) throw DimensionError("matrix does not act on the cone's space");
  const Eigen::MatrixXd me = m.to_eigen();
  const SpectralResult sr = spectral_radius(m, tol);
  const double match = 2 * tol + sr.error_bound;
  EigenRay out;
  Eigen::VectorXd v = spec.interior_point();
  for (int it = 0; it < 10000; ++it) {
    const Eigen::VectorXd next = sup_normalize(me * v);
    const double lambda = rayleigh(me, next);
    const double res = residual(me, next, lambda);
    v = next;
    if (res <= tol * 0.1 && std::abs(lambda - sr.radius) <= match) {
      out.vector = v;
      out.eigenvalue = lambda;
      out.residual = res;
      out.membership = membership(spec, v, std::sqrt(tol));
      out.method = "power_iteration";
      if (out.membership != Membership::outside) return out;
      break;
    }
  }
  // Eigenspace fallback.
  const Eigen::MatrixXd shifted = me - sr.radius * Eigen::MatrixXd::Identity(me.rows(), me.cols());
  const Eigen::MatrixXd basis = null_space(shifted);
  if (auto w = subspace_cone_point(basis, spec, std::sqrt(tol))) {
    out.vector = *w;
    out.eigenvalue = rayleigh(me, *w);
    out.residual = residual(me, *w, out.eigenvalue);
    out.membership = membership(spec, *w, std::sqrt(tol));
    out.method = "eigenspace_intersection";
    return out;
  }
  throw InconsistencyError("no eigenvector for the spectral radius " + std::to_string(sr.radius) +
                           " lies in the cone: hypotheses violated or tolerance too tight");
}

namespace {

std::vector<JointRay> joint_search(const std::vector<Eigen::MatrixXd>& me, const std::vector<std::vector<double>>& eig,
                                   const ConeSpec& spec, double tol) {
  const Eigen::Index d = static_cast<Eigen::Index>(spec.dim);
  std::vector<JointRay> found;
  // Depth-first over generators, pruning tuples whose joint eigenspace misses the cone.
  std::function<void(std::size_t, const Eigen::MatrixXd&)> dfs = [&](std::size_t level, const Eigen::MatrixXd& stack) {
    if (level == me.size()) {
      const Eigen::MatrixXd basis = null_space(stack);
      auto w = subspace_cone_point(basis, spec, std::sqrt(tol));
      if (!w) return;
      JointRay ray;
      ray.vector = *w;
      for (const auto& m : me) {
        const double lambda = rayleigh(m, *w);
        ray.eigenvalues.push_back(lambda);
        ray.residual = std::max(ray.residual, residual(m, *w, lambda));
      }
      found.push_back(std::move(ray));
      return;
    }
    for (double lambda : eig[level]) {
      Eigen::MatrixXd next(stack.rows() + d, d);
      next.topRows(stack.rows()) = stack;
      next.bottomRows(d) = me[level] - lambda * Eigen::MatrixXd::Identity(d, d);
      const Eigen::MatrixXd basis = null_space(next);
      if (basis.cols() == 0 || !subspace_cone_point(basis, spec, std::sqrt(tol))) continue;
      dfs(level + 1, next);
    }
  };
  dfs(0, Eigen::MatrixXd(0, d));
  return found;
}

}  // namespace

std::vector<JointRay> joint_eigenrays(const std::vector<Matrix>& mats, const ConeSpec& spec, double tol) {
  if (mats.empty()) throw ParameterError("no generators");
  std::vector<Eigen::MatrixXd> me;
  std::vector<std::vector<double>> eig;
  for (const auto& m : mats) {
    if (m.rows() != spec.dim || !m.is_square()) throw DimensionError("matrix does not act on the cone's space");
    me.push_back(m.to_eigen());
    eig.push_back(positive_eigenvalues(m, tol));
  }
  return joint_search(me, eig, spec, tol);
}

std::vector<JointRay> joint_eigenrays(const std::vector<Eigen::MatrixXd>& mats, const ConeSpec& spec, double tol) {
  if (mats.empty()) throw ParameterError("no generators");
  std::vector<std::vector<double>> eig;
  for (const auto& m : mats) {
    if (static_cast<std::size_t>(m.rows()) != spec.dim || m.rows() != m.cols())
      throw DimensionError("matrix does not act on the cone's space");
    Eigen::EigenSolver<Eigen::MatrixXd> solver(m, false);
    std::vector<double> vals;
    for (const auto& z : solver.eigenvalues())
      if (std::abs(z.imag()) <= 1e-7 * std::max(1.0, std::abs(z)) && z.real() > 0) vals.push_back(z.real());
    std::sort(vals.begin(), vals.end(), std::greater<>());
    // Merge numerically repeated eigenvalues; the cluster mean is accurate for Jordan blocks.
    std::vector<double> merged;
    std::vector<int> counts;
    for (double v : vals) {
      if (!merged.empty() && std::abs(merged.back() / counts.back() - v) <= 1e-6 * std::max(1.0, v)) {
        merged.back() += v;
        ++counts.back();
      } else {
        merged.push_back(v);
        counts.push_back(1);
      }
    }
    for (std::size_t i = 0; i < merged.size(); ++i) merged[i] /= counts[i];
    eig.push_back(std::move(merged));
  }
  return joint_search(mats, eig, spec, tol);
}

CommonRayResult common_invariant_ray(const std::vector<Matrix>& mats, const ConeSpec& spec, double tol) {
  CommonRayResult out;
  auto rays = joint_eigenrays(mats, spec, tol);
  if (!rays.empty()) {
    out.ray = rays.front();
    out.method = "joint_eigenspace";
    return out;
  }
  // Cesaro-averaged iteration of the generators and their inverses.
  std::vector<Eigen::MatrixXd> ops;
  for (const auto& m : mats) {
    ops.push_back(m.to_eigen());
    ops.push_back(m.inverse().to_eigen());
  }
  Eigen::VectorXd v = spec.interior_point();
  Eigen::VectorXd avg = Eigen::VectorXd::Zero(v.size());
  for (int it = 1; it <= 2000; ++it) {
    Eigen::VectorXd next = Eigen::VectorXd::Zero(v.size());
    for (const auto& op : ops) next += sup_normalize(op * v);
    v = sup_normalize(next);
    avg += (v - avg) / it;
  }
  const Eigen::VectorXd w = sup_normalize(avg);
  JointRay ray;
  ray.vector = w;
  for (const auto& m : mats) {
    const Eigen::MatrixXd me = m.to_eigen();
    const double lambda = rayleigh(me, w);
    ray.eigenvalues.push_back(lambda);
    ray.residual = std::max(ray.residual, residual(me, w, lambda));
  }
  if (ray.residual <= tol && membership(spec, w, std::sqrt(tol)) != Membership::outside) {
    out.ray = ray;
    out.method = "cesaro_average";
    return out;
  }
  if (spec.kind == ConeKind::polyhedral) {
    out.reason = NotFound::certified_infeasible;
    out.detail = "no joint eigenvalue tuple has a joint eigenspace meeting the cone";
  } else {
    out.reason = NotFound::tolerance_exhausted;
    out.detail = "no candidate survived; averaged iteration residual " + std::to_string(ray.residual);
  }
  return out;
}

}  // namespace kdyn
