#pragma once

#include "kdyn/matrix.hpp"

#include <Eigen/Dense>

#include <optional>
#include <string>
#include <vector>

namespace kdyn {

enum class ConeKind { polyhedral, lorentzian };

/// Strictly convex closed cone: the nonnegative hull of finitely many rays,
/// or the future component {q(v) >= 0, <t, v>_q >= 0} of a Lorentzian form.
struct ConeSpec {
  ConeKind kind = ConeKind::polyhedral;
  std::size_t dim = 0;
  std::vector<Eigen::VectorXd> rays;
  /// Exact rays when the model provides them (same order as rays).
  std::vector<RVector> exact_rays;
  Matrix form;
  RVector time;

  static ConeSpec polyhedral(std::vector<Eigen::VectorXd> rays);
  static ConeSpec polyhedral_exact(std::vector<RVector> rays);
  static ConeSpec orthant(std::size_t d);
  static ConeSpec lorentzian(Matrix form, RVector time);

  /// Rays as columns, each scaled to sup-norm 1.
  Eigen::MatrixXd ray_matrix() const;
  /// A point in the relative interior.
  Eigen::VectorXd interior_point() const;
  /// Dimension of the linear span.
  std::size_t span_dimension() const;
  std::string describe() const;
};

struct ConeViolation {
  std::string message;
  Eigen::VectorXd witness;
};

struct ConeValidation {
  bool ok = true;
  bool full_dimensional = false;
  std::vector<ConeViolation> violations;
  /// Signature (positive, negative, zero) of the form, Lorentzian cones only.
  int positive = 0, negative = 0, zero = 0;
};

ConeValidation validate_cone(const ConeSpec& spec, double tol = 1e-9);

enum class Membership { interior, boundary, outside };
std::string to_string(Membership m);

/// Interior is relative to the span of the cone.
Membership membership(const ConeSpec& spec, const Eigen::VectorXd& v, double tol = 1e-9);

struct Preservation {
  bool preserved = true;
  std::string detail;
  std::optional<Eigen::VectorXd> witness;
};

/// Polyhedral: every ray maps into the cone. Lorentzian: M^T Q M = s Q with
/// s > 0 (exact) and M t in the future component.
Preservation preserves_cone(const Matrix& m, const ConeSpec& spec, double tol = 1e-9);

struct EigenRay {
  /// Sup-norm 1, oriented into the cone.
  Eigen::VectorXd vector;
  double eigenvalue = 0.0;
  double residual = 0.0;
  Membership membership = Membership::outside;
  std::string method;
};

/// Eigenvector in the cone for the spectral radius. Power iteration from an
/// interior point (cap 10000), then the eigenspace/cone intersection.
/// Throws InconsistencyError when both fail.
EigenRay bpf_eigenvector(const Matrix& m, const ConeSpec& spec, double tol = 1e-9);

struct JointRay {
  Eigen::VectorXd vector;
  std::vector<double> eigenvalues;
  double residual = 0.0;
};

enum class NotFound { none, tolerance_exhausted, certified_infeasible };
std::string to_string(NotFound reason);

struct CommonRayResult {
  std::optional<JointRay> ray;
  NotFound reason = NotFound::none;
  std::string detail;
  std::string method;
};

/// Every joint eigenvalue tuple (descending lexicographic) whose joint
/// eigenspace meets the cone, with one witness ray each.
std::vector<JointRay> joint_eigenrays(const std::vector<Matrix>& mats, const ConeSpec& spec, double tol = 1e-9);
/// Same search for floating-point actions (eigenvalues within 1e-6 are merged).
std::vector<JointRay> joint_eigenrays(const std::vector<Eigen::MatrixXd>& mats, const ConeSpec& spec, double tol = 1e-9);

/// First joint eigenray; Cesaro-averaged iteration when no candidate survives.
CommonRayResult common_invariant_ray(const std::vector<Matrix>& mats, const ConeSpec& spec, double tol = 1e-9);

/// Orthonormal basis (columns) of the numerical null space.
Eigen::MatrixXd null_space(const Eigen::MatrixXd& a, double rel_tol = 1e-8);
/// Nonzero v = N y in the cone, if any.
std::optional<Eigen::VectorXd> subspace_cone_point(const Eigen::MatrixXd& basis, const ConeSpec& spec, double tol);
/// Scales to sup-norm 1.
Eigen::VectorXd sup_normalize(const Eigen::VectorXd& v);

}  // namespace kdyn
