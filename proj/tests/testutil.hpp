// Deterministic synthetic datasets shared by the unit and acceptance tests.
#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <utility>

#include "core/rng.hpp"
#include "core/types.hpp"

namespace testutil {

struct LabeledFeatures {
  Eigen::MatrixXd x;
  Eigen::VectorXi y;  // +1 / -1
};

// Targets in one Gaussian blob at the origin, anomalies in a second blob
// offset along the first two axes. The offset controls how informative the
// negatives are.
inline LabeledFeatures two_blob(int n_targets, int n_negatives, int dims,
                                double offset, std::uint64_t seed) {
  lpfusion::core::Rng rng(seed);
  LabeledFeatures data;
  data.x.resize(n_targets + n_negatives, dims);
  data.y.resize(n_targets + n_negatives);
  for (int i = 0; i < n_targets; ++i) {
    for (int j = 0; j < dims; ++j) {
      data.x(i, j) = rng.normal();
    }
    data.y[i] = 1;
  }
  for (int i = 0; i < n_negatives; ++i) {
    for (int j = 0; j < dims; ++j) {
      data.x(n_targets + i, j) = rng.normal() + (j < 2 ? offset : 0.0);
    }
    data.y[n_targets + i] = -1;
  }
  return data;
}

// two_blob with a fraction of the target-labeled rows actually drawn from
// the anomaly blob (training contamination for the loss ablation).
inline LabeledFeatures contaminated_two_blob(int n_targets, int n_negatives,
                                             int dims, double offset,
                                             double contamination,
                                             std::uint64_t seed) {
  LabeledFeatures data = two_blob(n_targets, n_negatives, dims, offset, seed);
  lpfusion::core::Rng rng(seed ^ 0x5eedULL);
  const int n_bad = static_cast<int>(contamination * n_targets);
  for (int k = 0; k < n_bad; ++k) {
    // Spread the contaminated rows across the target block.
    const int i = static_cast<int>(rng.below(static_cast<std::uint64_t>(n_targets)));
    for (int j = 0; j < dims; ++j) {
      data.x(i, j) = rng.normal() + (j < 2 ? offset : 0.0);
    }
  }
  return data;
}

struct LabeledScores {
  Eigen::MatrixXd s;  // already normalized-looking, target-positive
  Eigen::VectorXi y;
};

// Four-classifier ensemble with one strong classifier (column 0) and three
// uninformative ones; scores lie in [0,1] with higher = more target-like.
inline LabeledScores asymmetric_ensemble(int n_targets, int n_negatives,
                                         std::uint64_t seed) {
  lpfusion::core::Rng rng(seed);
  LabeledScores data;
  const int n = n_targets + n_negatives;
  data.s.resize(n, 4);
  data.y.resize(n);
  for (int i = 0; i < n; ++i) {
    const bool target = i < n_targets;
    data.y[i] = target ? 1 : -1;
    data.s(i, 0) = target ? rng.uniform(0.75, 0.95) : rng.uniform(0.05, 0.25);
    for (int j = 1; j < 4; ++j) {
      data.s(i, j) = rng.uniform(0.3, 0.7);
    }
  }
  return data;
}

// Stand-in for the banknote-authentication benchmark: same shape (1372
// samples, 762 targets, 4 features), targets in two tight clusters and
// anomalies in two clusters on the far side of the first two features.
inline LabeledFeatures banknote_like(std::uint64_t seed) {
  lpfusion::core::Rng rng(seed);
  LabeledFeatures data;
  const int n_targets = 762;
  const int n_negatives = 610;
  data.x.resize(n_targets + n_negatives, 4);
  data.y.resize(n_targets + n_negatives);

  const double target_means[2][4] = {{2.2, 1.2, -0.3, 0.4},
                                     {1.0, 2.4, 0.5, -0.2}};
  const double anomaly_means[2][4] = {{-2.4, -1.8, 0.9, 0.1},
                                      {-1.2, -2.8, -0.6, 0.5}};
  for (int i = 0; i < n_targets; ++i) {
    const auto& mean = target_means[rng.below(2)];
    for (int j = 0; j < 4; ++j) {
      data.x(i, j) = mean[j] + 0.85 * rng.normal();
    }
    data.y[i] = 1;
  }
  for (int i = 0; i < n_negatives; ++i) {
    const auto& mean = anomaly_means[rng.below(2)];
    for (int j = 0; j < 4; ++j) {
      data.x(n_targets + i, j) = mean[j] + 0.9 * rng.normal();
    }
    data.y[n_targets + i] = -1;
  }
  return data;
}

}  // namespace testutil
