#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

namespace lpfusion::learners {

struct GmmComponent {
  Eigen::VectorXd mean;
  Eigen::MatrixXd covariance;  // regularized, symmetric positive definite
  double weight;
};

// Gaussian mixture fitted on target samples with EM. The novelty score of
// a point is its smallest Mahalanobis distance to any component mean.
class GmmModel {
 public:
  GmmModel() = default;
  explicit GmmModel(std::vector<GmmComponent> components,
                    std::string warning = "");

  double score(const Eigen::VectorXd& x) const;
  Eigen::VectorXd score_rows(const Eigen::MatrixXd& x) const;

  const std::vector<GmmComponent>& components() const { return components_; }
  const std::string& warning() const { return warning_; }

 private:
  std::vector<GmmComponent> components_;
  std::vector<Eigen::LLT<Eigen::MatrixXd>> factors_;
  std::string warning_;
};

// EM with k-means++-style seeding; deterministic given the seed. When
// fewer samples than components are available the component count drops
// to n and the model carries a warning.
GmmModel gmm_fit(const Eigen::MatrixXd& x, int components = 3,
                 std::uint64_t seed = 0);

}  // namespace lpfusion::learners
