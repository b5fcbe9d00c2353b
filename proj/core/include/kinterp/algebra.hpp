#ifndef KINTERP_ALGEBRA_HPP_
#define KINTERP_ALGEBRA_HPP_

/// Lie group and Lie algebra primitives for SO(3), SE(3) and finite products
/// of them: hat/vee maps, exponential and logarithm, brackets, and the
/// left-invariant covariant derivative and curvature formulas.
///
/// Coordinate conventions: so(3) elements are 3-vectors, se(3) elements are
/// 6-vectors ordered [rotational | translational]. Product algebras
/// concatenate factor coordinates in order.

#include <Eigen/Dense>

#include <initializer_list>
#include <string>
#include <vector>

namespace kinterp {

enum class AlgebraKind { so3, se3 };

/// Ordered list of primitive factors identifying an algebra (and its group).
class AlgebraTag {
 public:
  AlgebraTag() = default;
  explicit AlgebraTag(std::vector<AlgebraKind> factors);

  static AlgebraTag so3() { return AlgebraTag({AlgebraKind::so3}); }
  static AlgebraTag se3() { return AlgebraTag({AlgebraKind::se3}); }
  static AlgebraTag product(std::initializer_list<AlgebraKind> ks) {
    return AlgebraTag(std::vector<AlgebraKind>(ks));
  }
  /// k copies of so(3); the shape algebra of multi-link mechanisms.
  static AlgebraTag so3_power(int k);

  const std::vector<AlgebraKind>& factors() const { return factors_; }
  int num_factors() const { return static_cast<int>(factors_.size()); }
  int dim() const { return dim_; }
  /// Side length of the block-diagonal matrix representation.
  int matrix_dim() const { return mat_dim_; }
  bool empty() const { return factors_.empty(); }
  /// True when every factor is so(3); the bi-invariant shortcut formulas
  /// are valid exactly for these algebras.
  bool compact() const;

  int factor_dim(int i) const;
  int factor_offset(int i) const;        // coordinate offset of factor i
  int factor_matrix_dim(int i) const;    // 3 for so3, 4 for se3
  int factor_matrix_offset(int i) const;

  bool operator==(const AlgebraTag& o) const { return factors_ == o.factors_; }
  bool operator!=(const AlgebraTag& o) const { return !(*this == o); }
  std::string name() const;

 private:
  std::vector<AlgebraKind> factors_;
  int dim_ = 0;
  int mat_dim_ = 0;
};

/// Coordinate vector of a Lie algebra element.
struct AlgebraVector {
  Eigen::VectorXd coords;
  AlgebraTag tag;

  AlgebraVector() = default;
  AlgebraVector(Eigen::VectorXd c, AlgebraTag t);

  static AlgebraVector zero(const AlgebraTag& t) {
    return AlgebraVector(Eigen::VectorXd::Zero(t.dim()), t);
  }
};

/// Matrix representative of a group element: 3x3 for SO(3), 4x4 homogeneous
/// for SE(3), block diagonal for products.
class GroupElement {
 public:
  GroupElement() = default;
  GroupElement(Eigen::MatrixXd mat, AlgebraTag tag);

  static GroupElement identity(const AlgebraTag& tag);
  static GroupElement so3(const Eigen::Matrix3d& r);
  static GroupElement se3(const Eigen::Matrix3d& r, const Eigen::Vector3d& p);
  static GroupElement product(const std::vector<GroupElement>& factors);

  const Eigen::MatrixXd& mat() const { return mat_; }
  const AlgebraTag& tag() const { return tag_; }
  bool empty() const { return tag_.empty(); }

  Eigen::MatrixXd factor(int i) const;    // matrix block of factor i
  GroupElement factor_element(int i) const;

  GroupElement operator*(const GroupElement& o) const;
  GroupElement inverse() const;

  /// Max violation of the manifold invariants (orthonormality, unit
  /// determinant, homogeneous bottom row).
  double invariant_defect() const;
  /// Throws std::invalid_argument when invariant_defect() exceeds tol.
  void validate(double tol = 1e-10) const;
  /// Re-projects each rotation block onto SO(3) (polar decomposition).
  GroupElement orthonormalized() const;

 private:
  Eigen::MatrixXd mat_;
  AlgebraTag tag_;
};

/// Symmetric positive definite inner product matrix on an algebra.
class MetricSpec {
 public:
  MetricSpec() = default;
  explicit MetricSpec(Eigen::MatrixXd inner);
  static MetricSpec identity(int dim);

  const Eigen::MatrixXd& inner_matrix() const { return inner_; }
  int dim() const { return static_cast<int>(inner_.rows()); }
  bool is_identity() const { return identity_; }

  double inner(const Eigen::VectorXd& a, const Eigen::VectorXd& b) const;
  Eigen::VectorXd solve(const Eigen::VectorXd& rhs) const;  // inner^-1 * rhs

 private:
  Eigen::MatrixXd inner_;
  Eigen::LDLT<Eigen::MatrixXd> ldlt_;
  bool identity_ = true;
};

// so(3) hat/vee pair. vee requires an (almost) skew input and throws
// std::invalid_argument otherwise; vee(hat(v)) == v exactly.
Eigen::Matrix3d hat(const Eigen::Vector3d& v);
Eigen::Vector3d vee(const Eigen::Matrix3d& m);

/// Algebra element as a matrix: hat for so(3), twist matrix for se(3),
/// block diagonal for products.
Eigen::MatrixXd algebra_matrix(const AlgebraVector& v);
/// Inverse of algebra_matrix; tol bounds the acceptable structural defect.
AlgebraVector algebra_from_matrix(const Eigen::MatrixXd& m, const AlgebraTag& tag,
                                  double tol = 1e-10);

Eigen::Matrix3d exp_so3(const Eigen::Vector3d& w);
Eigen::Vector3d log_so3(const Eigen::Matrix3d& r);  // angle < pi - 1e-6

GroupElement exp_group(const AlgebraVector& v);
AlgebraVector log_group(const GroupElement& g);

/// Lie bracket. so(3): cross product; se(3): (wa x wb, wa x vb - wb x va);
/// products act blockwise.
AlgebraVector bracket(const AlgebraVector& a, const AlgebraVector& b);

/// Matrix of ad_xi acting on coordinates, so that bracket(xi, .) = ad(xi) * .
Eigen::MatrixXd ad_matrix(const AlgebraVector& xi);

/// Levi-Civita connection of the left-invariant metric, evaluated on
/// left-invariant fields:
///   cov_der(xi, eta) = 1/2 ([xi,eta] - I^-1 (ad*_xi I eta + ad*_eta I xi)).
AlgebraVector cov_der_invariant(const MetricSpec& metric, const AlgebraVector& xi,
                                const AlgebraVector& eta);

/// Bi-invariant shortcuts, valid on compact algebras (so(3) products) only:
/// cov_der = 1/2 [X,Y], curvature = -1/4 [[X,Y],Z].
AlgebraVector cov_der_compact(const AlgebraVector& xi, const AlgebraVector& eta);
AlgebraVector curv_compact(const AlgebraVector& x, const AlgebraVector& y,
                           const AlgebraVector& z);

/// Curvature tensor of the left-invariant metric on left-invariant fields:
/// R(X,Y)Z = cov_X cov_Y Z - cov_Y cov_X Z - cov_[X,Y] Z.
AlgebraVector curv_invariant(const MetricSpec& metric, const AlgebraVector& x,
                             const AlgebraVector& y, const AlgebraVector& z);

// Right Jacobian of the exponential chart on compact (so(3) product)
// algebras: for x(t) = x0 exp(c(t)^), the body velocity is Jr(c) cdot.
Eigen::Matrix3d right_jacobian_so3(const Eigen::Vector3d& c);
Eigen::Matrix3d right_jacobian_inv_so3(const Eigen::Vector3d& c);
Eigen::MatrixXd right_jacobian(const Eigen::VectorXd& c, const AlgebraTag& tag);
Eigen::MatrixXd right_jacobian_inv(const Eigen::VectorXd& c, const AlgebraTag& tag);

}  // namespace kinterp

#endif  // KINTERP_ALGEBRA_HPP_
