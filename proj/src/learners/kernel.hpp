#pragma once

#include <Eigen/Dense>

namespace lpfusion::learners {

// RBF (Gaussian) kernel exp(-||x - y||^2 / (2 sigma^2)).
double rbf_kernel(const Eigen::VectorXd& x, const Eigen::VectorXd& y,
                  double sigma);

// Kernel matrix K(i,j) = rbf(A.row(i), B.row(j)). Squared distances are
// clamped at zero so the diagonal of a self-kernel is exactly 1.
Eigen::MatrixXd rbf_kernel_matrix(const Eigen::MatrixXd& a,
                                  const Eigen::MatrixXd& b, double sigma);

}  // namespace lpfusion::learners
