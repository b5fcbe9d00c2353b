#ifndef KINTERP_CONNECTION_HPP_
#define KINTERP_CONNECTION_HPP_

/// The local principal connection A(x): T_x M -> g of the principal
/// kinematic form, its metric adjoint, and time derivatives of the
/// constrained body velocity t = -A(x) xdot along base curves.

#include <array>
#include <functional>
#include <string>

#include "kinterp/geometry.hpp"

namespace kinterp {

/// Matrix field x -> A(x) mapping base velocities to algebra elements.
/// Immutable after construction; evaluation is pure.
class LocalConnection {
 public:
  enum class Kind { zero, constant, field, builtin_purcell_test };
  enum class DerivativeMode { finite_difference, analytic };

  using EvalFn = std::function<Eigen::MatrixXd(const BasePoint&)>;

  LocalConnection() = default;

  static LocalConnection zero(AlgebraTag group, int base_dim);
  static LocalConnection constant(Eigen::MatrixXd a, AlgebraTag group);
  static LocalConnection field(AlgebraTag group, int base_dim, EvalFn eval);
  /// Smooth synthetic test connection on SO(3) x SO(3) -> se(3): bounded
  /// trigonometric functions of the two rotation logs with fixed
  /// coefficients (see the implementation for the defining table).
  static LocalConnection purcell_test();

  Eigen::MatrixXd at(const BasePoint& x) const;

  Kind kind() const { return kind_; }
  const AlgebraTag& group_tag() const { return group_; }
  int group_dim() const { return group_.dim(); }
  int base_dim() const { return base_dim_; }

  DerivativeMode derivative_mode() const { return mode_; }
  void set_derivative_mode(DerivativeMode m) { mode_ = m; }
  /// Finite-difference step for connection_jet, relative to segment length.
  double fd_step_rel() const { return fd_step_rel_; }
  void set_fd_step_rel(double h);

  /// Construction-time consistency checks (constant fields really constant,
  /// finite entries at sample points).
  void validate(const BaseSpace& base) const;

 private:
  Kind kind_ = Kind::zero;
  AlgebraTag group_;
  int base_dim_ = 0;
  Eigen::MatrixXd matrix_;  // constant kind
  EvalFn eval_;             // field / builtin kinds
  DerivativeMode mode_ = DerivativeMode::finite_difference;
  double fd_step_rel_ = 5e-3;
};

/// t = -A(x) xdot, the constrained body velocity of the kinematic form.
AlgebraVector constrained_velocity(const LocalConnection& conn, const BasePoint& x,
                                   const Eigen::VectorXd& xdot);

/// Metric adjoint of A(x): the unique v with <A(x) w, mu>_g = <w, v>_M for
/// all w, i.e. v = G_M^-1 A(x)^T G_g mu. Plain transpose for identity
/// metrics.
Eigen::VectorXd adjoint_apply(const LocalConnection& conn, const MetricSpec& base_metric,
                              const MetricSpec& group_metric, const BasePoint& x,
                              const AlgebraVector& mu);

/// Degree-4 local model of the base curve around a time instant, in the
/// representation the solver works with: a position Taylor polynomial for
/// euclidean bases, an anchored exponential-chart Taylor polynomial
/// x(tau) = anchor * exp(c(tau)^) for compact bases.
struct BaseCurveModel {
  BaseSpace space;
  std::array<Eigen::VectorXd, 5> taylor;  // d0..d4 at tau = 0
  GroupElement anchor;                    // compact bases only

  static BaseCurveModel euclidean(std::array<Eigen::VectorXd, 5> taylor);
  static BaseCurveModel compact(GroupElement anchor, std::array<Eigen::VectorXd, 5> taylor);

  Eigen::VectorXd chart(double tau) const;     // Taylor value
  Eigen::VectorXd chart_d1(double tau) const;  // Taylor derivative
  BasePoint position(double tau) const;
  /// Base velocity at tau: xdot for euclidean, Jr(c) cdot (body) for compact.
  Eigen::VectorXd velocity(double tau) const;
};

/// Velocity jet (value, d1, d2, d3) of the base curve at tau = 0. Exact for
/// euclidean models; a central finite-difference stencil of the body
/// velocity for compact ones.
CurveJet base_velocity_jet(const BaseCurveModel& model, double h_fd);

/// Jet (t, tdot, tddot, tdddot) of t(tau) = -A(x(tau)) u(tau) at tau = 0.
/// Uses the chain rule when the connection registers analytic derivatives
/// (zero and constant kinds on euclidean models), otherwise central finite
/// differences of the composed map with step h_fd.
CurveJet connection_jet(const LocalConnection& conn, const BaseCurveModel& model,
                        double h_fd);

}  // namespace kinterp

#endif  // KINTERP_CONNECTION_HPP_
