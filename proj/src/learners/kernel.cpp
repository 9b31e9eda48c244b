#include "learners/kernel.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace lpfusion::learners {

double rbf_kernel(const Eigen::VectorXd& x, const Eigen::VectorXd& y,
                  double sigma) {
  if (x.size() != y.size()) {
    throw std::invalid_argument("rbf_kernel: dimension mismatch (" +
                                std::to_string(x.size()) + " vs " +
                                std::to_string(y.size()) + ")");
  }
  if (!(sigma > 0.0)) {
    throw std::invalid_argument("rbf_kernel: sigma must be positive");
  }
  const double sq = (x - y).squaredNorm();
  return std::exp(-sq / (2.0 * sigma * sigma));
}

Eigen::MatrixXd rbf_kernel_matrix(const Eigen::MatrixXd& a,
                                  const Eigen::MatrixXd& b, double sigma) {
  if (a.cols() != b.cols()) {
    throw std::invalid_argument("rbf_kernel_matrix: dimension mismatch (" +
                                std::to_string(a.cols()) + " vs " +
                                std::to_string(b.cols()) + ")");
  }
  if (!(sigma > 0.0)) {
    throw std::invalid_argument("rbf_kernel_matrix: sigma must be positive");
  }
  const Eigen::VectorXd a_sq = a.rowwise().squaredNorm();
  const Eigen::VectorXd b_sq = b.rowwise().squaredNorm();
  Eigen::MatrixXd dist_sq =
      ((-2.0 * a * b.transpose()).colwise() + a_sq).rowwise() +
      b_sq.transpose();
  dist_sq = dist_sq.cwiseMax(0.0);
  return (-dist_sq / (2.0 * sigma * sigma)).array().exp();
}

}  // namespace lpfusion::learners
