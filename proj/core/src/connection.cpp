#include "kinterp/connection.hpp"

#include <cmath>
#include <stdexcept>

#include "kinterp/stencil.hpp"

namespace kinterp {

namespace {

[[noreturn]] void throw_dim(const std::string& what) {
  throw std::invalid_argument("kinterp: " + what);
}

// Test connection on SO(3) x SO(3) -> se(3). Every entry is a bounded
// trigonometric function of the two rotation logs l1, l2:
//   A_ij = g_ij + 0.12 sin(l1[(i+j) mod 3] + 0.25 (i-j))
//               + 0.08 cos(l2[(2i+j) mod 3] - 0.20 (i+j))
// with g_ij = 0.1 ((i + 2j) mod 3 - 1) + 0.35 delta_ij.
Eigen::MatrixXd purcell_eval(const BasePoint& x) {
  if (x.shape.empty() || x.shape.tag() != AlgebraTag::so3_power(2))
    throw_dim("purcell_test connection expects an SO(3) x SO(3) base point");
  const Eigen::Vector3d l1 = log_so3(x.shape.factor(0));
  const Eigen::Vector3d l2 = log_so3(x.shape.factor(1));
  Eigen::MatrixXd a(6, 6);
  for (int i = 0; i < 6; ++i) {
    for (int j = 0; j < 6; ++j) {
      const double g = 0.1 * ((i + 2 * j) % 3 - 1) + (i == j ? 0.35 : 0.0);
      a(i, j) = g + 0.12 * std::sin(l1((i + j) % 3) + 0.25 * (i - j)) +
                0.08 * std::cos(l2((2 * i + j) % 3) - 0.20 * (i + j));
    }
  }
  return a;
}

Eigen::VectorXd taylor_eval(const std::array<Eigen::VectorXd, 5>& c, double tau,
                            int first) {
  Eigen::VectorXd out = Eigen::VectorXd::Zero(c[0].size());
  double fact = 1.0;
  for (int k = first; k < 5; ++k) {
    fact = 1.0;
    for (int i = 1; i <= k - first; ++i) fact *= i;
    out += c[static_cast<size_t>(k)] * (std::pow(tau, k - first) / fact);
  }
  return out;
}

}  // namespace

// ---------------------------------------------------------------------------
// LocalConnection

LocalConnection LocalConnection::zero(AlgebraTag group, int base_dim) {
  LocalConnection c;
  c.kind_ = Kind::zero;
  c.group_ = std::move(group);
  c.base_dim_ = base_dim;
  c.matrix_ = Eigen::MatrixXd::Zero(c.group_.dim(), base_dim);
  c.mode_ = DerivativeMode::analytic;
  return c;
}

LocalConnection LocalConnection::constant(Eigen::MatrixXd a, AlgebraTag group) {
  if (a.rows() != group.dim())
    throw_dim("LocalConnection::constant: row count does not match " + group.name());
  if (!a.allFinite()) throw_dim("LocalConnection::constant: non-finite entries");
  LocalConnection c;
  c.kind_ = Kind::constant;
  c.group_ = std::move(group);
  c.base_dim_ = static_cast<int>(a.cols());
  c.matrix_ = std::move(a);
  return c;
}

LocalConnection LocalConnection::field(AlgebraTag group, int base_dim, EvalFn eval) {
  if (!eval) throw_dim("LocalConnection::field: empty evaluator");
  LocalConnection c;
  c.kind_ = Kind::field;
  c.group_ = std::move(group);
  c.base_dim_ = base_dim;
  c.eval_ = std::move(eval);
  return c;
}

LocalConnection LocalConnection::purcell_test() {
  LocalConnection c;
  c.kind_ = Kind::builtin_purcell_test;
  c.group_ = AlgebraTag::se3();
  c.base_dim_ = 6;
  c.eval_ = purcell_eval;
  return c;
}

Eigen::MatrixXd LocalConnection::at(const BasePoint& x) const {
  Eigen::MatrixXd a;
  switch (kind_) {
    case Kind::zero:
    case Kind::constant:
      a = matrix_;
      break;
    default:
      a = eval_(x);
      break;
  }
  if (a.rows() != group_.dim() || a.cols() != base_dim_)
    throw_dim("LocalConnection: evaluator returned a matrix of wrong shape");
  if (!a.allFinite()) throw_dim("LocalConnection: non-finite connection value");
  return a;
}

void LocalConnection::set_fd_step_rel(double h) {
  if (!(h > 0.0)) throw_dim("LocalConnection: fd step must be positive");
  fd_step_rel_ = h;
}

void LocalConnection::validate(const BaseSpace& base) const {
  if (base.tangent_dim() != base_dim_)
    throw_dim("LocalConnection: base dimension " + std::to_string(base_dim_) +
              " does not match bundle base dimension " +
              std::to_string(base.tangent_dim()));
  BasePoint p0, p1;
  if (base.is_euclidean()) {
    p0 = BasePoint::from_euclid(Eigen::VectorXd::Zero(base_dim_));
    Eigen::VectorXd s(base_dim_);
    for (int i = 0; i < base_dim_; ++i) s(i) = 0.3 * std::sin(1.0 + i);
    p1 = BasePoint::from_euclid(s);
  } else {
    const AlgebraTag tag = base.algebra_tag();
    p0 = BasePoint::from_shape(GroupElement::identity(tag));
    Eigen::VectorXd s(tag.dim());
    for (int i = 0; i < tag.dim(); ++i) s(i) = 0.2 * std::cos(1.0 + i);
    p1 = BasePoint::from_shape(exp_group(AlgebraVector(s, tag)));
  }
  const Eigen::MatrixXd a0 = at(p0);
  const Eigen::MatrixXd a1 = at(p1);
  if (kind_ == Kind::constant && (a0 - a1).cwiseAbs().maxCoeff() > 0.0)
    throw_dim("LocalConnection: constant connection varies with the base point");
}

// ---------------------------------------------------------------------------
// constrained velocity and adjoint

AlgebraVector constrained_velocity(const LocalConnection& conn, const BasePoint& x,
                                   const Eigen::VectorXd& xdot) {
  if (xdot.size() != conn.base_dim())
    throw_dim("constrained_velocity: velocity dimension mismatch");
  return AlgebraVector(-conn.at(x) * xdot, conn.group_tag());
}

Eigen::VectorXd adjoint_apply(const LocalConnection& conn, const MetricSpec& base_metric,
                              const MetricSpec& group_metric, const BasePoint& x,
                              const AlgebraVector& mu) {
  if (mu.tag != conn.group_tag())
    throw_dim("adjoint_apply: algebra mismatch");
  if (base_metric.dim() != conn.base_dim() || group_metric.dim() != conn.group_dim())
    throw_dim("adjoint_apply: metric dimension mismatch");
  const Eigen::MatrixXd a = conn.at(x);
  Eigen::VectorXd w = group_metric.is_identity() ? mu.coords
                                                 : (group_metric.inner_matrix() * mu.coords);
  return base_metric.solve(a.transpose() * w);
}

// ---------------------------------------------------------------------------
// local curve models

BaseCurveModel BaseCurveModel::euclidean(std::array<Eigen::VectorXd, 5> taylor) {
  BaseCurveModel m;
  m.space = BaseSpace::euclidean(static_cast<int>(taylor[0].size()));
  m.taylor = std::move(taylor);
  return m;
}

BaseCurveModel BaseCurveModel::compact(GroupElement anchor,
                                       std::array<Eigen::VectorXd, 5> taylor) {
  BaseCurveModel m;
  m.space = BaseSpace::compact(anchor.tag().num_factors());
  if (!anchor.tag().compact())
    throw_dim("BaseCurveModel: compact anchor must be an so(3) product");
  if (taylor[0].size() != anchor.tag().dim())
    throw_dim("BaseCurveModel: chart dimension mismatch");
  m.taylor = std::move(taylor);
  m.anchor = std::move(anchor);
  return m;
}

Eigen::VectorXd BaseCurveModel::chart(double tau) const { return taylor_eval(taylor, tau, 0); }

Eigen::VectorXd BaseCurveModel::chart_d1(double tau) const {
  return taylor_eval(taylor, tau, 1);
}

BasePoint BaseCurveModel::position(double tau) const {
  if (space.is_euclidean()) return BasePoint::from_euclid(chart(tau));
  const AlgebraTag tag = space.algebra_tag();
  return BasePoint::from_shape(anchor * exp_group(AlgebraVector(chart(tau), tag)));
}

Eigen::VectorXd BaseCurveModel::velocity(double tau) const {
  if (space.is_euclidean()) return chart_d1(tau);
  return right_jacobian(chart(tau), space.algebra_tag()) * chart_d1(tau);
}

// ---------------------------------------------------------------------------
// jets along the curve

namespace {

// Central 7-point stencil of a vector-valued map, derivative orders 0..3.
CurveJet stencil_jet(const std::function<Eigen::VectorXd(double)>& f, int dim,
                     double h) {
  Eigen::VectorXd taus(7);
  for (int i = 0; i < 7; ++i) taus(i) = (i - 3) * h;
  const Eigen::MatrixXd w = fd_weights(0.0, taus, 3);
  Eigen::MatrixXd samples(dim, 7);
  for (int i = 0; i < 7; ++i) samples.col(i) = f(taus(i));
  CurveJet jet;
  jet.value = samples * w.row(0).transpose();
  jet.d1 = samples * w.row(1).transpose();
  jet.d2 = samples * w.row(2).transpose();
  jet.d3 = samples * w.row(3).transpose();
  return jet;
}

}  // namespace

CurveJet base_velocity_jet(const BaseCurveModel& model, double h_fd) {
  if (model.space.is_euclidean()) {
    CurveJet jet;
    jet.value = model.taylor[1];
    jet.d1 = model.taylor[2];
    jet.d2 = model.taylor[3];
    jet.d3 = model.taylor[4];
    return jet;
  }
  if (!(h_fd > 0.0)) throw_dim("base_velocity_jet: step must be positive");
  return stencil_jet([&](double tau) { return model.velocity(tau); },
                     model.space.tangent_dim(), h_fd);
}

CurveJet connection_jet(const LocalConnection& conn, const BaseCurveModel& model,
                        double h_fd) {
  if (conn.base_dim() != model.space.tangent_dim())
    throw_dim("connection_jet: connection/base dimension mismatch");

  if (conn.kind() == LocalConnection::Kind::zero)
    return CurveJet::zero(conn.group_dim());

  const bool analytic = conn.derivative_mode() == LocalConnection::DerivativeMode::analytic &&
                        conn.kind() == LocalConnection::Kind::constant;
  if (analytic) {
    const Eigen::MatrixXd a = conn.at(model.position(0.0));
    const CurveJet u = base_velocity_jet(model, h_fd);
    CurveJet jet;
    jet.value = -a * u.value;
    jet.d1 = -a * u.d1;
    jet.d2 = -a * u.d2;
    jet.d3 = -a * u.d3;
    return jet;
  }

  if (!(h_fd > 0.0)) throw_dim("connection_jet: step must be positive");
  return stencil_jet(
      [&](double tau) -> Eigen::VectorXd {
        return -conn.at(model.position(tau)) * model.velocity(tau);
      },
      conn.group_dim(), h_fd);
}

}  // namespace kinterp
