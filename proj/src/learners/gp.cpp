#include "learners/gp.hpp"

#include <stdexcept>

#include "core/types.hpp"
#include "learners/kernel.hpp"

namespace lpfusion::learners {

GpModel::GpModel(Eigen::MatrixXd train, double sigma, double initial_jitter)
    : train_(std::move(train)), sigma_(sigma) {
  const Eigen::Index n = train_.rows();
  if (n < 1) {
    throw std::invalid_argument("gp_fit: empty training matrix");
  }
  if (!(initial_jitter > 0.0)) {
    throw std::invalid_argument("gp_fit: jitter must be positive");
  }

  const Eigen::MatrixXd k = rbf_kernel_matrix(train_, train_, sigma_);
  double jitter = initial_jitter;
  // The RBF Gram matrix is positive semidefinite, so a small ridge is
  // normally enough; escalate a few decades before giving up.
  for (int attempt = 0; attempt < 10; ++attempt) {
    Eigen::MatrixXd regularized = k;
    regularized.diagonal().array() += jitter;
    Eigen::LLT<Eigen::MatrixXd> llt(regularized);
    if (llt.info() == Eigen::Success) {
      weights_ = llt.solve(Eigen::VectorXd::Ones(n));
      jitter_ = jitter;
      return;
    }
    jitter *= 10.0;
  }
  throw core::NumericalError(
      "gp_fit: kernel factorization failed even at jitter " +
      std::to_string(jitter));
}

double GpModel::score(const Eigen::VectorXd& x) const {
  if (weights_.size() == 0) {
    throw std::invalid_argument("gp: model is not fitted");
  }
  double mean = 0.0;
  for (Eigen::Index j = 0; j < train_.rows(); ++j) {
    mean += rbf_kernel(x, train_.row(j).transpose(), sigma_) * weights_[j];
  }
  return std::max(0.0, 1.0 - mean);
}

Eigen::VectorXd GpModel::score_rows(const Eigen::MatrixXd& x) const {
  if (weights_.size() == 0) {
    throw std::invalid_argument("gp: model is not fitted");
  }
  const Eigen::MatrixXd kmat = rbf_kernel_matrix(x, train_, sigma_);
  return (1.0 - (kmat * weights_).array()).max(0.0);
}

GpModel gp_fit(const Eigen::MatrixXd& x, double sigma, double initial_jitter) {
  return GpModel(x, sigma, initial_jitter);
}

}  // namespace lpfusion::learners
