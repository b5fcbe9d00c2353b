#ifndef KINTERP_GEOMETRY_HPP_
#define KINTERP_GEOMETRY_HPP_

/// Curve-level Riemannian calculus on the product bundle Q = M x G: the
/// product metric, covariant acceleration along curves, the squared
/// covariant-acceleration cost functional, and the closed-form elastic
/// (fourth-order Euler-Lagrange) expressions.

#include <optional>
#include <vector>

#include "kinterp/algebra.hpp"

namespace kinterp {

/// Shape (base) space of the bundle: either R^n or a product of SO(3)
/// factors.
struct BaseSpace {
  enum class Kind { euclidean, compact_group };

  Kind kind = Kind::euclidean;
  int euclidean_dim = 0;
  int so3_factors = 0;

  static BaseSpace euclidean(int dim);
  static BaseSpace compact(int factors);

  int tangent_dim() const {
    return kind == Kind::euclidean ? euclidean_dim : 3 * so3_factors;
  }
  bool is_euclidean() const { return kind == Kind::euclidean; }
  /// Algebra tag of a compact base (so(3)^k).
  AlgebraTag algebra_tag() const;
};

/// A point of the base space: coordinates for a euclidean base, a rotation
/// product for a compact base.
struct BasePoint {
  Eigen::VectorXd euclid;  // euclidean bases
  GroupElement shape;      // compact bases

  static BasePoint from_euclid(Eigen::VectorXd x) { return {std::move(x), {}}; }
  static BasePoint from_shape(GroupElement g) { return {{}, std::move(g)}; }
};

/// Bundle description: base space, structure group algebra and the two
/// metrics of the product metric on Q.
struct BundleSpec {
  BaseSpace base;
  AlgebraTag group;
  MetricSpec base_metric;   // on TM (dimension base.tangent_dim())
  MetricSpec group_metric;  // on the group algebra

  static BundleSpec make(BaseSpace base, AlgebraTag group);
  static BundleSpec make(BaseSpace base, AlgebraTag group, MetricSpec base_metric,
                         MetricSpec group_metric);
  void validate() const;
};

/// Derivative data of one curve factor at a time instant.
///
/// Euclidean base factors carry the position jet: value = x, d1 = xdot,
/// d2 = xddot, d3, and optionally d4. Group factors (including compact
/// bases) carry the body-velocity jet: value = t, d1 = tdot, d2, d3.
struct CurveJet {
  Eigen::VectorXd value, d1, d2, d3;
  std::optional<Eigen::VectorXd> d4;

  CurveJet() = default;
  CurveJet(Eigen::VectorXd v, Eigen::VectorXd a, Eigen::VectorXd b, Eigen::VectorXd c,
           std::optional<Eigen::VectorXd> d = std::nullopt);
  static CurveJet zero(int dim);
  int dim() const { return static_cast<int>(value.size()); }
};

/// Covariant acceleration split into (base part, group part).
struct CovariantAcceleration {
  Eigen::VectorXd base;
  AlgebraVector group;
};

/// Inner product of the product metric: <v1, v2>_M + <w1, w2>_g.
double product_inner(const BundleSpec& spec, const Eigen::VectorXd& base1,
                     const AlgebraVector& group1, const Eigen::VectorXd& base2,
                     const AlgebraVector& group2);

/// Covariant acceleration of a curve from its factor jets. Euclidean base:
/// xddot. Compact base: wdot + cov_w w in body coordinates. Group: tdot +
/// cov_t t with the left-invariant connection of the group metric.
CovariantAcceleration covariant_acceleration(const BundleSpec& spec,
                                             const CurveJet& base_jet,
                                             const CurveJet& group_jet);

enum class QuadratureRule { simpson, trapezoid };

/// Time-gridded curve samples with jets, as consumed by cost_functional.
struct SampledCurve {
  Eigen::VectorXd times;            // uniform grid
  std::vector<CurveJet> base_jets;  // per node
  std::vector<CurveJet> group_jets;
};

/// J = 1/2 integral of |covariant acceleration|^2 over the sampled grid.
/// Simpson needs an odd node count; even counts fall back to trapezoid.
double cost_functional(const BundleSpec& spec, const SampledCurve& curve,
                       QuadratureRule rule = QuadratureRule::simpson);

/// Fourth-order elastic expression on the group, left-invariant metric:
///   t''' + 3 cov_t t'' + 3 cov_t' t' + cov_t'' t + 3 cov^2_t t'
///   + 2 cov_t cov_t' t + cov_t' cov_t t + cov^3_t t
///   + R(t', t) t + R(cov_t t, t) t.
AlgebraVector elastic_group(const MetricSpec& metric, const CurveJet& jet,
                            const AlgebraTag& tag);

/// Same expression with the bi-invariant shortcut formulas; compact
/// algebras only.
AlgebraVector elastic_compact(const CurveJet& jet, const AlgebraTag& tag);

/// Elastic expression on the base space. Euclidean: x'''' (flat curvature).
/// Compact base: elastic_compact of the body-velocity jet, which reduces to
/// w''' - w'' x w per so(3) factor.
Eigen::VectorXd elastic_base(const BundleSpec& spec, const CurveJet& jet);

}  // namespace kinterp

#endif  // KINTERP_GEOMETRY_HPP_
