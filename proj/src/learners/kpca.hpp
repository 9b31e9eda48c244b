#pragma once

#include <Eigen/Dense>
#include <vector>

namespace lpfusion::learners {

// Kernel PCA novelty detector. The score of a point is its feature-space
// reconstruction error: the squared distance between the centered feature
// image and its projection onto the top-q centered principal directions.
class KpcaModel {
 public:
  KpcaModel() = default;
  KpcaModel(Eigen::MatrixXd train, double sigma, int q);

  double score(const Eigen::VectorXd& x) const { return score_with_q(x, q_); }
  double score_with_q(const Eigen::VectorXd& x, int q) const;
  Eigen::VectorXd score_rows(const Eigen::MatrixXd& x) const;

  // Scores of every row for several subspace dimensions at once; reuses
  // one projection pass, column j of the result corresponds to qs[j].
  Eigen::MatrixXd score_rows_for_qs(const Eigen::MatrixXd& x,
                                    const std::vector<int>& qs) const;

  int q() const { return q_; }
  double sigma() const { return sigma_; }
  int effective_components() const {
    return static_cast<int>(eigenvalues_.size());
  }
  const Eigen::VectorXd& eigenvalues() const { return eigenvalues_; }

 private:
  // Squared per-component projections of x plus its centered self-kernel.
  void projection_profile(const Eigen::VectorXd& x, double& self_centered,
                          Eigen::VectorXd& proj_sq) const;

  Eigen::MatrixXd train_;
  double sigma_ = 1.0;
  int q_ = 0;
  Eigen::MatrixXd alphas_;       // n x n_eff, column i scaled by 1/sqrt(lambda_i)
  Eigen::VectorXd eigenvalues_;  // descending, positive part of the spectrum
  Eigen::VectorXd row_means_;    // row means of the uncentered kernel matrix
  double total_mean_ = 0.0;
};

// The §-grid subspace dimensions {2, 6, 10, ...} capped at n; when
// max_values > 0 and the full sequence is longer, an evenly spaced
// subsequence (always keeping the first and last value) is returned.
std::vector<int> kpca_q_grid(int n, int max_values = 0);

KpcaModel kpca_fit(const Eigen::MatrixXd& x, double sigma, int q);

}  // namespace lpfusion::learners
