#include "learners/kpca.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "core/types.hpp"
#include "learners/kernel.hpp"

namespace lpfusion::learners {

KpcaModel::KpcaModel(Eigen::MatrixXd train, double sigma, int q)
    : train_(std::move(train)), sigma_(sigma), q_(q) {
  const Eigen::Index n = train_.rows();
  if (n < 1) {
    throw std::invalid_argument("kpca_fit: empty training matrix");
  }
  if (q < 1 || q > n) {
    throw std::invalid_argument("kpca_fit: q must be in [1, n], got q = " +
                                std::to_string(q) + " with n = " +
                                std::to_string(n));
  }

  const Eigen::MatrixXd k = rbf_kernel_matrix(train_, train_, sigma_);
  row_means_ = k.rowwise().mean();
  total_mean_ = row_means_.mean();
  Eigen::MatrixXd centered =
      ((k.colwise() - row_means_).rowwise() - row_means_.transpose()).array() +
      total_mean_;

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(centered);
  if (solver.info() != Eigen::Success) {
    throw core::NumericalError("kpca_fit: eigendecomposition failed");
  }

  // Keep the positive part of the spectrum, largest first; principal
  // directions need alpha_i = u_i / sqrt(lambda_i) for unit feature-space
  // norm.
  const Eigen::VectorXd& raw_values = solver.eigenvalues();  // ascending
  const double lambda_max = raw_values[n - 1];
  const double tol = std::max(1e-12, static_cast<double>(n) * 1e-15 *
                                         std::max(lambda_max, 0.0));
  std::vector<Eigen::Index> kept;
  for (Eigen::Index i = n - 1; i >= 0; --i) {
    if (raw_values[i] > tol) {
      kept.push_back(i);
    }
  }
  eigenvalues_.resize(static_cast<Eigen::Index>(kept.size()));
  alphas_.resize(n, static_cast<Eigen::Index>(kept.size()));
  for (std::size_t c = 0; c < kept.size(); ++c) {
    const double lambda = raw_values[kept[c]];
    eigenvalues_[static_cast<Eigen::Index>(c)] = lambda;
    alphas_.col(static_cast<Eigen::Index>(c)) =
        solver.eigenvectors().col(kept[c]) / std::sqrt(lambda);
  }
}

void KpcaModel::projection_profile(const Eigen::VectorXd& x,
                                   double& self_centered,
                                   Eigen::VectorXd& proj_sq) const {
  Eigen::VectorXd kvec(train_.rows());
  for (Eigen::Index j = 0; j < train_.rows(); ++j) {
    kvec[j] = rbf_kernel(x, train_.row(j).transpose(), sigma_);
  }
  const double kmean = kvec.mean();
  self_centered = 1.0 - 2.0 * kmean + total_mean_;
  const Eigen::VectorXd centered =
      (kvec.array() - kmean - row_means_.array() + total_mean_).matrix();
  proj_sq = (alphas_.transpose() * centered).array().square();
}

double KpcaModel::score_with_q(const Eigen::VectorXd& x, int q) const {
  if (q_ == 0) {
    throw std::invalid_argument("kpca: model is not fitted");
  }
  double self_centered = 0.0;
  Eigen::VectorXd proj_sq;
  projection_profile(x, self_centered, proj_sq);
  const Eigen::Index used =
      std::min<Eigen::Index>(q, proj_sq.size());
  const double err = self_centered - proj_sq.head(used).sum();
  return std::max(0.0, err);
}

Eigen::VectorXd KpcaModel::score_rows(const Eigen::MatrixXd& x) const {
  Eigen::VectorXd out(x.rows());
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    out[i] = score(x.row(i).transpose());
  }
  return out;
}

Eigen::MatrixXd KpcaModel::score_rows_for_qs(const Eigen::MatrixXd& x,
                                             const std::vector<int>& qs) const {
  if (q_ == 0) {
    throw std::invalid_argument("kpca: model is not fitted");
  }
  const Eigen::Index m = x.rows();
  const Eigen::Index n_eff = alphas_.cols();
  const Eigen::MatrixXd kmat = rbf_kernel_matrix(x, train_, sigma_);
  const Eigen::VectorXd kmeans = kmat.rowwise().mean();
  const Eigen::MatrixXd centered =
      ((kmat.colwise() - kmeans).rowwise() - row_means_.transpose()).array() +
      total_mean_;
  Eigen::MatrixXd proj_sq = (centered * alphas_).array().square();
  // Running sums across components turn one projection pass into a score
  // per requested subspace size.
  for (Eigen::Index c = 1; c < n_eff; ++c) {
    proj_sq.col(c) += proj_sq.col(c - 1);
  }
  const Eigen::VectorXd self_centered =
      (1.0 - 2.0 * kmeans.array() + total_mean_).matrix();

  Eigen::MatrixXd out(m, static_cast<Eigen::Index>(qs.size()));
  for (std::size_t j = 0; j < qs.size(); ++j) {
    const Eigen::Index used = std::min<Eigen::Index>(qs[j], n_eff);
    if (used < 1) {
      throw std::invalid_argument("kpca: q must be >= 1");
    }
    out.col(static_cast<Eigen::Index>(j)) =
        (self_centered - proj_sq.col(used - 1)).cwiseMax(0.0);
  }
  return out;
}

std::vector<int> kpca_q_grid(int n, int max_values) {
  std::vector<int> grid;
  for (int q = 2; q <= n; q += 4) {
    grid.push_back(q);
  }
  if (grid.empty()) {
    grid.push_back(std::max(1, n));
  }
  if (max_values > 1 && static_cast<int>(grid.size()) > max_values) {
    std::vector<int> thinned;
    const double span = static_cast<double>(grid.size() - 1);
    for (int i = 0; i < max_values; ++i) {
      const auto idx = static_cast<std::size_t>(
          std::lround(span * static_cast<double>(i) /
                      static_cast<double>(max_values - 1)));
      if (thinned.empty() || grid[idx] != thinned.back()) {
        thinned.push_back(grid[idx]);
      }
    }
    grid = std::move(thinned);
  }
  return grid;
}

KpcaModel kpca_fit(const Eigen::MatrixXd& x, double sigma, int q) {
  return KpcaModel(x, sigma, q);
}

}  // namespace lpfusion::learners
