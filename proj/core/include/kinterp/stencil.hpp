#ifndef KINTERP_STENCIL_HPP_
#define KINTERP_STENCIL_HPP_

#include <Eigen/Dense>

namespace kinterp {

/// Finite-difference weights on arbitrary nodes (Fornberg's recursion).
/// Returns a (max_order + 1) x n matrix W such that the k-th derivative of f
/// at z is approximated by W.row(k) * f(points). Row 0 interpolates.
Eigen::MatrixXd fd_weights(double z, const Eigen::VectorXd& points, int max_order);

}  // namespace kinterp

#endif  // KINTERP_STENCIL_HPP_
