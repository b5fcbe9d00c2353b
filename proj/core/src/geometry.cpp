#include "kinterp/geometry.hpp"

#include <cmath>
#include <stdexcept>

namespace kinterp {

namespace {

[[noreturn]] void throw_dim(const std::string& what) {
  throw std::invalid_argument("kinterp: " + what);
}

// Shared term-by-term evaluation of the fourth-order elastic expression.
// Cov and Curv provide the connection and curvature as coordinate maps.
template <typename Cov, typename Curv>
Eigen::VectorXd elastic_terms(const CurveJet& jet, Cov cov, Curv curv) {
  const Eigen::VectorXd& t0 = jet.value;
  const Eigen::VectorXd& t1 = jet.d1;
  const Eigen::VectorXd& t2 = jet.d2;
  const Eigen::VectorXd& t3 = jet.d3;

  Eigen::VectorXd sum = t3;
  sum += 3.0 * cov(t0, t2);
  sum += 3.0 * cov(t1, t1);
  sum += cov(t2, t0);
  sum += 3.0 * cov(t0, cov(t0, t1));
  sum += 2.0 * cov(t0, cov(t1, t0));
  sum += cov(t1, cov(t0, t0));
  sum += cov(t0, cov(t0, cov(t0, t0)));
  sum += curv(t1, t0, t0);
  sum += curv(cov(t0, t0), t0, t0);
  return sum;
}

void check_jet(const CurveJet& jet, int dim, const char* what) {
  if (jet.dim() != dim || jet.d1.size() != dim || jet.d2.size() != dim ||
      jet.d3.size() != dim)
    throw_dim(std::string(what) + ": jet dimension mismatch");
}

}  // namespace

// ---------------------------------------------------------------------------
// BaseSpace / BundleSpec / CurveJet

BaseSpace BaseSpace::euclidean(int dim) {
  if (dim <= 0) throw_dim("BaseSpace: euclidean dimension must be positive");
  BaseSpace b;
  b.kind = Kind::euclidean;
  b.euclidean_dim = dim;
  return b;
}

BaseSpace BaseSpace::compact(int factors) {
  if (factors <= 0) throw_dim("BaseSpace: factor count must be positive");
  BaseSpace b;
  b.kind = Kind::compact_group;
  b.so3_factors = factors;
  return b;
}

AlgebraTag BaseSpace::algebra_tag() const {
  if (kind != Kind::compact_group)
    throw_dim("BaseSpace::algebra_tag: base is not a compact group");
  return AlgebraTag::so3_power(so3_factors);
}

BundleSpec BundleSpec::make(BaseSpace base, AlgebraTag group) {
  const int m = base.tangent_dim();
  return make(std::move(base), std::move(group), MetricSpec::identity(m),
              MetricSpec::identity(group.dim()));
}

BundleSpec BundleSpec::make(BaseSpace base, AlgebraTag group, MetricSpec base_metric,
                            MetricSpec group_metric) {
  BundleSpec s{std::move(base), std::move(group), std::move(base_metric),
               std::move(group_metric)};
  s.validate();
  return s;
}

void BundleSpec::validate() const {
  if (group.empty()) throw_dim("BundleSpec: empty group");
  if (base_metric.dim() != base.tangent_dim())
    throw_dim("BundleSpec: base metric dimension mismatch");
  if (group_metric.dim() != group.dim())
    throw_dim("BundleSpec: group metric dimension mismatch");
  if (!base.is_euclidean()) {
    // The bi-invariant shortcut formulas require an Ad-invariant metric on
    // the compact base: per-factor scalar multiples of the identity.
    const Eigen::MatrixXd& m = base_metric.inner_matrix();
    for (int f = 0; f < base.so3_factors; ++f) {
      const Eigen::Matrix3d blk = m.block<3, 3>(3 * f, 3 * f);
      const double scale = blk(0, 0);
      if ((blk - scale * Eigen::Matrix3d::Identity()).cwiseAbs().maxCoeff() > 1e-12)
        throw_dim("BundleSpec: compact-base metric must be a per-factor scalar "
                  "multiple of the identity");
    }
    for (int i = 0; i < m.rows(); ++i)
      for (int j = 0; j < m.cols(); ++j)
        if (i / 3 != j / 3 && std::abs(m(i, j)) > 1e-12)
          throw_dim("BundleSpec: compact-base metric must be block diagonal");
  }
}

CurveJet::CurveJet(Eigen::VectorXd v, Eigen::VectorXd a, Eigen::VectorXd b,
                   Eigen::VectorXd c, std::optional<Eigen::VectorXd> d)
    : value(std::move(v)), d1(std::move(a)), d2(std::move(b)), d3(std::move(c)),
      d4(std::move(d)) {}

CurveJet CurveJet::zero(int dim) {
  CurveJet j;
  j.value = j.d1 = j.d2 = j.d3 = Eigen::VectorXd::Zero(dim);
  return j;
}

// ---------------------------------------------------------------------------
// product metric and covariant acceleration

double product_inner(const BundleSpec& spec, const Eigen::VectorXd& base1,
                     const AlgebraVector& group1, const Eigen::VectorXd& base2,
                     const AlgebraVector& group2) {
  if (base1.size() != spec.base.tangent_dim() || base2.size() != spec.base.tangent_dim())
    throw_dim("product_inner: base dimension mismatch");
  if (group1.tag != spec.group || group2.tag != spec.group)
    throw_dim("product_inner: group algebra mismatch");
  return spec.base_metric.inner(base1, base2) +
         spec.group_metric.inner(group1.coords, group2.coords);
}

CovariantAcceleration covariant_acceleration(const BundleSpec& spec,
                                             const CurveJet& base_jet,
                                             const CurveJet& group_jet) {
  const int m = spec.base.tangent_dim();
  if (group_jet.dim() != spec.group.dim())
    throw_dim("covariant_acceleration: group jet dimension mismatch");

  Eigen::VectorXd base_acc;
  if (spec.base.is_euclidean()) {
    if (base_jet.d2.size() != m) throw_dim("covariant_acceleration: base jet needs d2");
    base_acc = base_jet.d2;
  } else {
    if (base_jet.value.size() != m || base_jet.d1.size() != m)
      throw_dim("covariant_acceleration: base jet dimension mismatch");
    const AlgebraTag tag = spec.base.algebra_tag();
    const AlgebraVector w(base_jet.value, tag);
    base_acc = base_jet.d1 + cov_der_compact(w, w).coords;
  }

  const AlgebraVector t(group_jet.value, spec.group);
  AlgebraVector group_acc =
      AlgebraVector(group_jet.d1 + cov_der_invariant(spec.group_metric, t, t).coords,
                    spec.group);
  return {std::move(base_acc), std::move(group_acc)};
}

double cost_functional(const BundleSpec& spec, const SampledCurve& curve,
                       QuadratureRule rule) {
  const auto n = static_cast<int>(curve.times.size());
  if (n < 3) throw_dim("cost_functional: need at least 3 grid nodes");
  if (curve.base_jets.size() != static_cast<size_t>(n) ||
      curve.group_jets.size() != static_cast<size_t>(n))
    throw_dim("cost_functional: jet count does not match grid");

  Eigen::VectorXd integrand(n);
  for (int i = 0; i < n; ++i) {
    const CovariantAcceleration acc =
        covariant_acceleration(spec, curve.base_jets[static_cast<size_t>(i)],
                               curve.group_jets[static_cast<size_t>(i)]);
    integrand(i) = product_inner(spec, acc.base, acc.group, acc.base, acc.group);
  }

  const double h = (curve.times(n - 1) - curve.times(0)) / (n - 1);
  double integral = 0.0;
  if (rule == QuadratureRule::simpson && (n - 1) % 2 == 0) {
    for (int i = 0; i + 2 < n; i += 2)
      integral += h / 3.0 * (integrand(i) + 4.0 * integrand(i + 1) + integrand(i + 2));
  } else {
    for (int i = 0; i + 1 < n; ++i) integral += 0.5 * h * (integrand(i) + integrand(i + 1));
  }
  return 0.5 * integral;
}

// ---------------------------------------------------------------------------
// elastic expressions

AlgebraVector elastic_group(const MetricSpec& metric, const CurveJet& jet,
                            const AlgebraTag& tag) {
  check_jet(jet, tag.dim(), "elastic_group");
  if (metric.dim() != tag.dim()) throw_dim("elastic_group: metric dimension mismatch");
  auto cov = [&](const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
    return cov_der_invariant(metric, AlgebraVector(a, tag), AlgebraVector(b, tag)).coords;
  };
  auto curv = [&](const Eigen::VectorXd& a, const Eigen::VectorXd& b,
                  const Eigen::VectorXd& c) {
    return curv_invariant(metric, AlgebraVector(a, tag), AlgebraVector(b, tag),
                          AlgebraVector(c, tag))
        .coords;
  };
  return AlgebraVector(elastic_terms(jet, cov, curv), tag);
}

AlgebraVector elastic_compact(const CurveJet& jet, const AlgebraTag& tag) {
  check_jet(jet, tag.dim(), "elastic_compact");
  if (!tag.compact())
    throw_dim("elastic_compact: " + tag.name() + " is not compact");
  auto cov = [&](const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
    return cov_der_compact(AlgebraVector(a, tag), AlgebraVector(b, tag)).coords;
  };
  auto curv = [&](const Eigen::VectorXd& a, const Eigen::VectorXd& b,
                  const Eigen::VectorXd& c) {
    return curv_compact(AlgebraVector(a, tag), AlgebraVector(b, tag),
                        AlgebraVector(c, tag))
        .coords;
  };
  return AlgebraVector(elastic_terms(jet, cov, curv), tag);
}

Eigen::VectorXd elastic_base(const BundleSpec& spec, const CurveJet& jet) {
  const int m = spec.base.tangent_dim();
  if (spec.base.is_euclidean()) {
    if (!jet.d4 || jet.d4->size() != m)
      throw_dim("elastic_base: euclidean base needs the fourth derivative");
    return *jet.d4;
  }
  return elastic_compact(jet, spec.base.algebra_tag()).coords;
}

}  // namespace kinterp
