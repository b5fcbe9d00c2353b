#include "kinterp/stencil.hpp"

#include <algorithm>
#include <stdexcept>

namespace kinterp {

Eigen::MatrixXd fd_weights(double z, const Eigen::VectorXd& points, int max_order) {
  const auto n = static_cast<int>(points.size());
  if (n < max_order + 1)
    throw std::invalid_argument("kinterp: fd_weights: need at least order + 1 points");
  Eigen::MatrixXd w = Eigen::MatrixXd::Zero(max_order + 1, n);
  double c1 = 1.0;
  double c4 = points(0) - z;
  w(0, 0) = 1.0;
  for (int i = 1; i < n; ++i) {
    const int mn = std::min(i, max_order);
    double c2 = 1.0;
    const double c5 = c4;
    c4 = points(i) - z;
    for (int j = 0; j < i; ++j) {
      const double c3 = points(i) - points(j);
      c2 *= c3;
      if (j == i - 1) {
        for (int k = mn; k >= 1; --k)
          w(k, i) = c1 * (k * w(k - 1, i - 1) - c5 * w(k, i - 1)) / c2;
        w(0, i) = -c1 * c5 * w(0, i - 1) / c2;
      }
      for (int k = mn; k >= 1; --k) w(k, j) = (c4 * w(k, j) - k * w(k - 1, j)) / c3;
      w(0, j) = c4 * w(0, j) / c3;
    }
    c1 = c2;
  }
  return w;
}

}  // namespace kinterp
