#include "kinterp/algebra.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace kinterp {

namespace {

// Series-guarded trigonometric coefficients of the Rodrigues formulas.
// a = sin(t)/t, b = (1-cos(t))/t^2, c = (t-sin(t))/t^3.
double coeff_a(double theta) {
  const double t2 = theta * theta;
  if (t2 < 1e-8) return 1.0 - t2 / 6.0 + t2 * t2 / 120.0;
  return std::sin(theta) / theta;
}
double coeff_b(double theta) {
  const double t2 = theta * theta;
  if (t2 < 1e-8) return 0.5 - t2 / 24.0 + t2 * t2 / 720.0;
  return (1.0 - std::cos(theta)) / t2;
}
double coeff_c(double theta) {
  const double t2 = theta * theta;
  if (t2 < 1e-8) return 1.0 / 6.0 - t2 / 120.0 + t2 * t2 / 5040.0;
  return (theta - std::sin(theta)) / (t2 * theta);
}

constexpr double kLogAngleLimit = 1e-6;  // log domain: angle < pi - limit

[[noreturn]] void throw_dim(const std::string& what) {
  throw std::invalid_argument("kinterp: " + what);
}

void check_same_tag(const AlgebraVector& a, const AlgebraVector& b, const char* op) {
  if (a.tag != b.tag)
    throw_dim(std::string(op) + ": mismatched algebras " + a.tag.name() + " vs " +
              b.tag.name());
}

Eigen::Matrix3d se3_V(const Eigen::Vector3d& w) {
  const double theta = w.norm();
  const Eigen::Matrix3d wh = hat(w);
  return Eigen::Matrix3d::Identity() + coeff_b(theta) * wh + coeff_c(theta) * wh * wh;
}

}  // namespace

// ---------------------------------------------------------------------------
// AlgebraTag

AlgebraTag::AlgebraTag(std::vector<AlgebraKind> factors) : factors_(std::move(factors)) {
  for (AlgebraKind k : factors_) {
    dim_ += (k == AlgebraKind::so3) ? 3 : 6;
    mat_dim_ += (k == AlgebraKind::so3) ? 3 : 4;
  }
}

AlgebraTag AlgebraTag::so3_power(int k) {
  if (k <= 0) throw_dim("so3_power: factor count must be positive");
  return AlgebraTag(std::vector<AlgebraKind>(static_cast<size_t>(k), AlgebraKind::so3));
}

bool AlgebraTag::compact() const {
  if (factors_.empty()) return false;
  for (AlgebraKind k : factors_)
    if (k != AlgebraKind::so3) return false;
  return true;
}

int AlgebraTag::factor_dim(int i) const {
  return factors_.at(static_cast<size_t>(i)) == AlgebraKind::so3 ? 3 : 6;
}

int AlgebraTag::factor_offset(int i) const {
  int off = 0;
  for (int f = 0; f < i; ++f) off += factor_dim(f);
  return off;
}

int AlgebraTag::factor_matrix_dim(int i) const {
  return factors_.at(static_cast<size_t>(i)) == AlgebraKind::so3 ? 3 : 4;
}

int AlgebraTag::factor_matrix_offset(int i) const {
  int off = 0;
  for (int f = 0; f < i; ++f) off += factor_matrix_dim(f);
  return off;
}

std::string AlgebraTag::name() const {
  if (factors_.empty()) return "empty";
  std::ostringstream os;
  for (size_t i = 0; i < factors_.size(); ++i) {
    if (i) os << " x ";
    os << (factors_[i] == AlgebraKind::so3 ? "so3" : "se3");
  }
  return os.str();
}

// ---------------------------------------------------------------------------
// AlgebraVector

AlgebraVector::AlgebraVector(Eigen::VectorXd c, AlgebraTag t)
    : coords(std::move(c)), tag(std::move(t)) {
  if (coords.size() != tag.dim())
    throw_dim("AlgebraVector: dimension " + std::to_string(coords.size()) +
              " does not match algebra " + tag.name());
  if (!coords.allFinite()) throw_dim("AlgebraVector: non-finite coordinates");
}

// ---------------------------------------------------------------------------
// GroupElement

GroupElement::GroupElement(Eigen::MatrixXd mat, AlgebraTag tag)
    : mat_(std::move(mat)), tag_(std::move(tag)) {
  if (mat_.rows() != tag_.matrix_dim() || mat_.cols() != tag_.matrix_dim())
    throw_dim("GroupElement: matrix size does not match group " + tag_.name());
}

GroupElement GroupElement::identity(const AlgebraTag& tag) {
  return GroupElement(Eigen::MatrixXd::Identity(tag.matrix_dim(), tag.matrix_dim()), tag);
}

GroupElement GroupElement::so3(const Eigen::Matrix3d& r) {
  return GroupElement(r, AlgebraTag::so3());
}

GroupElement GroupElement::se3(const Eigen::Matrix3d& r, const Eigen::Vector3d& p) {
  Eigen::Matrix4d m = Eigen::Matrix4d::Identity();
  m.topLeftCorner<3, 3>() = r;
  m.topRightCorner<3, 1>() = p;
  return GroupElement(m, AlgebraTag::se3());
}

GroupElement GroupElement::product(const std::vector<GroupElement>& factors) {
  std::vector<AlgebraKind> kinds;
  int n = 0;
  for (const auto& f : factors) {
    for (AlgebraKind k : f.tag().factors()) kinds.push_back(k);
    n += f.tag().matrix_dim();
  }
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
  int off = 0;
  for (const auto& f : factors) {
    const int d = f.tag().matrix_dim();
    m.block(off, off, d, d) = f.mat();
    off += d;
  }
  return GroupElement(std::move(m), AlgebraTag(std::move(kinds)));
}

Eigen::MatrixXd GroupElement::factor(int i) const {
  const int d = tag_.factor_matrix_dim(i);
  const int off = tag_.factor_matrix_offset(i);
  return mat_.block(off, off, d, d);
}

GroupElement GroupElement::factor_element(int i) const {
  return GroupElement(factor(i), AlgebraTag({tag_.factors().at(static_cast<size_t>(i))}));
}

GroupElement GroupElement::operator*(const GroupElement& o) const {
  if (tag_ != o.tag_) throw_dim("GroupElement product: mismatched groups");
  return GroupElement(mat_ * o.mat_, tag_);
}

GroupElement GroupElement::inverse() const {
  Eigen::MatrixXd inv = Eigen::MatrixXd::Zero(mat_.rows(), mat_.cols());
  for (int i = 0; i < tag_.num_factors(); ++i) {
    const int off = tag_.factor_matrix_offset(i);
    if (tag_.factors()[static_cast<size_t>(i)] == AlgebraKind::so3) {
      inv.block<3, 3>(off, off) = mat_.block<3, 3>(off, off).transpose();
    } else {
      const Eigen::Matrix3d rt = mat_.block<3, 3>(off, off).transpose();
      inv.block<3, 3>(off, off) = rt;
      inv.block<3, 1>(off, off + 3) = -rt * mat_.block<3, 1>(off, off + 3);
      inv(off + 3, off + 3) = 1.0;
    }
  }
  return GroupElement(std::move(inv), tag_);
}

double GroupElement::invariant_defect() const {
  double defect = 0.0;
  // structural zeros outside the factor blocks
  Eigen::MatrixXd structure = mat_;
  for (int i = 0; i < tag_.num_factors(); ++i) {
    const int off = tag_.factor_matrix_offset(i);
    const int d = tag_.factor_matrix_dim(i);
    structure.block(off, off, d, d).setZero();
  }
  defect = structure.cwiseAbs().maxCoeff();

  for (int i = 0; i < tag_.num_factors(); ++i) {
    const int off = tag_.factor_matrix_offset(i);
    const Eigen::Matrix3d r = mat_.block<3, 3>(off, off);
    const Eigen::Matrix3d orth = r.transpose() * r - Eigen::Matrix3d::Identity();
    defect = std::max(defect, orth.cwiseAbs().maxCoeff());
    defect = std::max(defect, std::abs(r.determinant() - 1.0));
    if (tag_.factors()[static_cast<size_t>(i)] == AlgebraKind::se3) {
      Eigen::RowVector4d bottom = mat_.block<1, 4>(off + 3, off);
      bottom(3) -= 1.0;
      defect = std::max(defect, bottom.cwiseAbs().maxCoeff());
    }
  }
  return defect;
}

void GroupElement::validate(double tol) const {
  const double d = invariant_defect();
  if (!(d <= tol))
    throw_dim("GroupElement on " + tag_.name() + " violates manifold invariants (defect " +
              std::to_string(d) + ")");
}

GroupElement GroupElement::orthonormalized() const {
  Eigen::MatrixXd m = mat_;
  for (int i = 0; i < tag_.num_factors(); ++i) {
    const int off = tag_.factor_matrix_offset(i);
    const Eigen::Matrix3d r = m.block<3, 3>(off, off);
    Eigen::JacobiSVD<Eigen::Matrix3d> svd(r, Eigen::ComputeFullU | Eigen::ComputeFullV);
    Eigen::Matrix3d proj = svd.matrixU() * svd.matrixV().transpose();
    if (proj.determinant() < 0.0) {
      Eigen::Matrix3d u = svd.matrixU();
      u.col(2) *= -1.0;
      proj = u * svd.matrixV().transpose();
    }
    m.block<3, 3>(off, off) = proj;
  }
  return GroupElement(std::move(m), tag_);
}

// ---------------------------------------------------------------------------
// MetricSpec

MetricSpec::MetricSpec(Eigen::MatrixXd inner) : inner_(std::move(inner)) {
  if (inner_.rows() != inner_.cols()) throw_dim("MetricSpec: matrix must be square");
  const double asym = (inner_ - inner_.transpose()).cwiseAbs().maxCoeff();
  if (asym > 1e-12)
    throw_dim("MetricSpec: matrix not symmetric (defect " + std::to_string(asym) + ")");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(inner_);
  if (es.eigenvalues().minCoeff() <= 0.0)
    throw_dim("MetricSpec: matrix not positive definite");
  identity_ = inner_.isIdentity(0.0);
  if (!identity_) ldlt_.compute(inner_);
}

MetricSpec MetricSpec::identity(int dim) {
  return MetricSpec(Eigen::MatrixXd::Identity(dim, dim));
}

double MetricSpec::inner(const Eigen::VectorXd& a, const Eigen::VectorXd& b) const {
  if (a.size() != dim() || b.size() != dim()) throw_dim("MetricSpec::inner: dimension mismatch");
  if (identity_) return a.dot(b);
  return a.dot(inner_ * b);
}

Eigen::VectorXd MetricSpec::solve(const Eigen::VectorXd& rhs) const {
  if (rhs.size() != dim()) throw_dim("MetricSpec::solve: dimension mismatch");
  if (identity_) return rhs;
  return ldlt_.solve(rhs);
}

// ---------------------------------------------------------------------------
// hat / vee and matrix forms

Eigen::Matrix3d hat(const Eigen::Vector3d& v) {
  Eigen::Matrix3d m;
  m << 0.0, -v.z(), v.y(), v.z(), 0.0, -v.x(), -v.y(), v.x(), 0.0;
  return m;
}

Eigen::Vector3d vee(const Eigen::Matrix3d& m) {
  const double defect = (m + m.transpose()).cwiseAbs().maxCoeff();
  if (defect > 1e-10)
    throw_dim("vee: matrix is not skew symmetric (defect " + std::to_string(defect) + ")");
  return Eigen::Vector3d(m(2, 1), m(0, 2), m(1, 0));
}

Eigen::MatrixXd algebra_matrix(const AlgebraVector& v) {
  const AlgebraTag& tag = v.tag;
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(tag.matrix_dim(), tag.matrix_dim());
  for (int i = 0; i < tag.num_factors(); ++i) {
    const int moff = tag.factor_matrix_offset(i);
    const int coff = tag.factor_offset(i);
    if (tag.factors()[static_cast<size_t>(i)] == AlgebraKind::so3) {
      m.block<3, 3>(moff, moff) = hat(v.coords.segment<3>(coff));
    } else {
      m.block<3, 3>(moff, moff) = hat(v.coords.segment<3>(coff));
      m.block<3, 1>(moff, moff + 3) = v.coords.segment<3>(coff + 3);
    }
  }
  return m;
}

AlgebraVector algebra_from_matrix(const Eigen::MatrixXd& m, const AlgebraTag& tag,
                                  double tol) {
  if (m.rows() != tag.matrix_dim() || m.cols() != tag.matrix_dim())
    throw_dim("algebra_from_matrix: size mismatch for " + tag.name());
  Eigen::VectorXd coords(tag.dim());
  for (int i = 0; i < tag.num_factors(); ++i) {
    const int moff = tag.factor_matrix_offset(i);
    const int coff = tag.factor_offset(i);
    const Eigen::Matrix3d w = m.block<3, 3>(moff, moff);
    const double defect = (w + w.transpose()).cwiseAbs().maxCoeff();
    if (defect > tol)
      throw_dim("algebra_from_matrix: rotational block not skew (defect " +
                std::to_string(defect) + ")");
    coords.segment<3>(coff) = Eigen::Vector3d(w(2, 1), w(0, 2), w(1, 0));
    if (tag.factors()[static_cast<size_t>(i)] == AlgebraKind::se3)
      coords.segment<3>(coff + 3) = m.block<3, 1>(moff, moff + 3);
  }
  return AlgebraVector(std::move(coords), tag);
}

// ---------------------------------------------------------------------------
// exp / log

Eigen::Matrix3d exp_so3(const Eigen::Vector3d& w) {
  const double theta = w.norm();
  const Eigen::Matrix3d wh = hat(w);
  return Eigen::Matrix3d::Identity() + coeff_a(theta) * wh + coeff_b(theta) * wh * wh;
}

Eigen::Vector3d log_so3(const Eigen::Matrix3d& r) {
  const Eigen::Vector3d skew(r(2, 1) - r(1, 2), r(0, 2) - r(2, 0), r(1, 0) - r(0, 1));
  const double s = 0.5 * skew.norm();          // sin(theta)
  const double c = 0.5 * (r.trace() - 1.0);    // cos(theta)
  const double theta = std::atan2(s, c);

  if (theta >= M_PI - kLogAngleLimit)
    throw std::domain_error(
        "kinterp: log_so3: rotation angle " + std::to_string(theta) +
        " is within " + std::to_string(kLogAngleLimit) + " of pi");

  if (theta < 1e-4) {
    const double t2 = theta * theta;
    return 0.5 * (1.0 + t2 / 6.0 + 7.0 * t2 * t2 / 360.0) * skew;
  }
  if (theta < M_PI - 1e-3) {
    return (theta / (2.0 * std::sin(theta))) * skew;
  }
  // Near pi the skew part is tiny; recover the axis from the symmetric part
  // n n^T = I + (S - I)/(1 - cos), then fix the sign from the skew part.
  const Eigen::Matrix3d sym = 0.5 * (r + r.transpose());
  const Eigen::Matrix3d nnt =
      Eigen::Matrix3d::Identity() + (sym - Eigen::Matrix3d::Identity()) / (1.0 - c);
  int j = 0;
  nnt.diagonal().maxCoeff(&j);
  Eigen::Vector3d n = nnt.col(j) / std::sqrt(nnt(j, j));
  if (n.dot(skew) < 0.0) n = -n;
  return theta * n;
}

GroupElement exp_group(const AlgebraVector& v) {
  const AlgebraTag& tag = v.tag;
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(tag.matrix_dim(), tag.matrix_dim());
  for (int i = 0; i < tag.num_factors(); ++i) {
    const int moff = tag.factor_matrix_offset(i);
    const int coff = tag.factor_offset(i);
    const Eigen::Vector3d w = v.coords.segment<3>(coff);
    m.block<3, 3>(moff, moff) = exp_so3(w);
    if (tag.factors()[static_cast<size_t>(i)] == AlgebraKind::se3) {
      m.block<3, 1>(moff, moff + 3) = se3_V(w) * v.coords.segment<3>(coff + 3);
      m(moff + 3, moff + 3) = 1.0;
    }
  }
  return GroupElement(std::move(m), tag);
}

AlgebraVector log_group(const GroupElement& g) {
  const AlgebraTag& tag = g.tag();
  Eigen::VectorXd coords(tag.dim());
  for (int i = 0; i < tag.num_factors(); ++i) {
    const int moff = tag.factor_matrix_offset(i);
    const int coff = tag.factor_offset(i);
    const Eigen::Matrix3d r = g.mat().block<3, 3>(moff, moff);
    Eigen::Vector3d w;
    try {
      w = log_so3(r);
    } catch (const std::domain_error&) {
      throw std::domain_error("kinterp: log_group: factor " + std::to_string(i) + " of " +
                              tag.name() + " has rotation angle within " +
                              std::to_string(kLogAngleLimit) + " of pi");
    }
    coords.segment<3>(coff) = w;
    if (tag.factors()[static_cast<size_t>(i)] == AlgebraKind::se3) {
      const Eigen::Vector3d p = g.mat().block<3, 1>(moff, moff + 3);
      coords.segment<3>(coff + 3) = se3_V(w).partialPivLu().solve(p);
    }
  }
  return AlgebraVector(std::move(coords), tag);
}

// ---------------------------------------------------------------------------
// bracket, ad, covariant derivative, curvature

AlgebraVector bracket(const AlgebraVector& a, const AlgebraVector& b) {
  check_same_tag(a, b, "bracket");
  Eigen::VectorXd out(a.tag.dim());
  for (int i = 0; i < a.tag.num_factors(); ++i) {
    const int off = a.tag.factor_offset(i);
    const Eigen::Vector3d wa = a.coords.segment<3>(off);
    const Eigen::Vector3d wb = b.coords.segment<3>(off);
    out.segment<3>(off) = wa.cross(wb);
    if (a.tag.factors()[static_cast<size_t>(i)] == AlgebraKind::se3) {
      const Eigen::Vector3d va = a.coords.segment<3>(off + 3);
      const Eigen::Vector3d vb = b.coords.segment<3>(off + 3);
      out.segment<3>(off + 3) = wa.cross(vb) - wb.cross(va);
    }
  }
  return AlgebraVector(std::move(out), a.tag);
}

Eigen::MatrixXd ad_matrix(const AlgebraVector& xi) {
  const AlgebraTag& tag = xi.tag;
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(tag.dim(), tag.dim());
  for (int i = 0; i < tag.num_factors(); ++i) {
    const int off = tag.factor_offset(i);
    const Eigen::Matrix3d wh = hat(xi.coords.segment<3>(off));
    m.block<3, 3>(off, off) = wh;
    if (tag.factors()[static_cast<size_t>(i)] == AlgebraKind::se3) {
      m.block<3, 3>(off + 3, off + 3) = wh;
      m.block<3, 3>(off + 3, off) = hat(xi.coords.segment<3>(off + 3));
    }
  }
  return m;
}

AlgebraVector cov_der_invariant(const MetricSpec& metric, const AlgebraVector& xi,
                                const AlgebraVector& eta) {
  check_same_tag(xi, eta, "cov_der_invariant");
  if (metric.dim() != xi.tag.dim())
    throw_dim("cov_der_invariant: metric dimension does not match " + xi.tag.name());
  const Eigen::MatrixXd ad_xi = ad_matrix(xi);
  const Eigen::MatrixXd ad_eta = ad_matrix(eta);
  const Eigen::VectorXd br = ad_xi * eta.coords;
  Eigen::VectorXd star;
  if (metric.is_identity()) {
    star = ad_xi.transpose() * eta.coords + ad_eta.transpose() * xi.coords;
  } else {
    const Eigen::MatrixXd& im = metric.inner_matrix();
    star = metric.solve(ad_xi.transpose() * (im * eta.coords) +
                        ad_eta.transpose() * (im * xi.coords));
  }
  return AlgebraVector(0.5 * (br - star), xi.tag);
}

AlgebraVector cov_der_compact(const AlgebraVector& xi, const AlgebraVector& eta) {
  check_same_tag(xi, eta, "cov_der_compact");
  if (!xi.tag.compact())
    throw_dim("cov_der_compact: " + xi.tag.name() +
              " is not compact; use cov_der_invariant");
  AlgebraVector out = bracket(xi, eta);
  out.coords *= 0.5;
  return out;
}

AlgebraVector curv_compact(const AlgebraVector& x, const AlgebraVector& y,
                           const AlgebraVector& z) {
  check_same_tag(x, y, "curv_compact");
  check_same_tag(x, z, "curv_compact");
  if (!x.tag.compact())
    throw_dim("curv_compact: " + x.tag.name() + " is not compact; use curv_invariant");
  AlgebraVector out = bracket(bracket(x, y), z);
  out.coords *= -0.25;
  return out;
}

AlgebraVector curv_invariant(const MetricSpec& metric, const AlgebraVector& x,
                             const AlgebraVector& y, const AlgebraVector& z) {
  check_same_tag(x, y, "curv_invariant");
  check_same_tag(x, z, "curv_invariant");
  const AlgebraVector a = cov_der_invariant(metric, x, cov_der_invariant(metric, y, z));
  const AlgebraVector b = cov_der_invariant(metric, y, cov_der_invariant(metric, x, z));
  const AlgebraVector c = cov_der_invariant(metric, bracket(x, y), z);
  return AlgebraVector(a.coords - b.coords - c.coords, x.tag);
}

// ---------------------------------------------------------------------------
// right Jacobians

Eigen::Matrix3d right_jacobian_so3(const Eigen::Vector3d& c) {
  const double theta = c.norm();
  const Eigen::Matrix3d ch = hat(c);
  return Eigen::Matrix3d::Identity() - coeff_b(theta) * ch + coeff_c(theta) * ch * ch;
}

Eigen::Matrix3d right_jacobian_inv_so3(const Eigen::Vector3d& c) {
  const double theta = c.norm();
  const Eigen::Matrix3d ch = hat(c);
  double d;
  const double t2 = theta * theta;
  if (t2 < 1e-8) {
    d = 1.0 / 12.0 + t2 / 720.0 + t2 * t2 / 30240.0;
  } else {
    d = 1.0 / t2 - (1.0 + std::cos(theta)) / (2.0 * theta * std::sin(theta));
  }
  return Eigen::Matrix3d::Identity() + 0.5 * ch + d * ch * ch;
}

Eigen::MatrixXd right_jacobian(const Eigen::VectorXd& c, const AlgebraTag& tag) {
  if (!tag.compact()) throw_dim("right_jacobian: only available on so(3) products");
  if (c.size() != tag.dim()) throw_dim("right_jacobian: dimension mismatch");
  Eigen::MatrixXd j = Eigen::MatrixXd::Zero(tag.dim(), tag.dim());
  for (int i = 0; i < tag.num_factors(); ++i) {
    const int off = tag.factor_offset(i);
    j.block<3, 3>(off, off) = right_jacobian_so3(c.segment<3>(off));
  }
  return j;
}

Eigen::MatrixXd right_jacobian_inv(const Eigen::VectorXd& c, const AlgebraTag& tag) {
  if (!tag.compact()) throw_dim("right_jacobian_inv: only available on so(3) products");
  if (c.size() != tag.dim()) throw_dim("right_jacobian_inv: dimension mismatch");
  Eigen::MatrixXd j = Eigen::MatrixXd::Zero(tag.dim(), tag.dim());
  for (int i = 0; i < tag.num_factors(); ++i) {
    const int off = tag.factor_offset(i);
    j.block<3, 3>(off, off) = right_jacobian_inv_so3(c.segment<3>(off));
  }
  return j;
}

}  // namespace kinterp
