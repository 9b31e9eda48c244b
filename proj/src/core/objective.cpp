#include "core/objective.hpp"

#include <string>

namespace lpfusion::core {

namespace {

void check_dims(const ScoreMatrix& scores, const LabelVector& labels,
                Eigen::Index weight_size) {
  if (scores.samples() != labels.size()) {
    throw DimensionError("score matrix has " +
                         std::to_string(scores.samples()) +
                         " rows, label vector has " +
                         std::to_string(labels.size()));
  }
  if (scores.classifiers() != weight_size) {
    throw DimensionError("score matrix has " +
                         std::to_string(scores.classifiers()) +
                         " classifiers, weight vector has " +
                         std::to_string(weight_size));
  }
}

void check_finite(const Eigen::VectorXd& omega) {
  if (!omega.allFinite()) {
    throw std::invalid_argument("weight vector has a non-finite entry");
  }
}

}  // namespace

double fused_score(const Eigen::VectorXd& scores, const FusionModel& model) {
  if (scores.size() != model.classifiers()) {
    throw DimensionError("score vector has " + std::to_string(scores.size()) +
                         " entries, model fuses " +
                         std::to_string(model.classifiers()) + " classifiers");
  }
  if (!scores.allFinite()) {
    throw std::invalid_argument("fused_score: non-finite score");
  }
  return scores.dot(model.weights.omega());
}

double hinge_objective(const ScoreMatrix& scores, const LabelVector& labels,
                       const Eigen::VectorXd& omega) {
  check_dims(scores, labels, omega.size());
  check_finite(omega);
  const Eigen::VectorXd margins = scores.values() * omega;
  double total = 0.0;
  for (Eigen::Index i = 0; i < margins.size(); ++i) {
    const double loss = 1.0 - labels.labels()[i] * margins[i];
    if (loss > 0.0) {
      total += loss;
    }
  }
  return total;
}

double hinge_objective(const ScoreMatrix& scores, const LabelVector& labels,
                       const WeightVector& weights) {
  return hinge_objective(scores, labels, weights.omega());
}

Eigen::VectorXd hinge_subgradient(const ScoreMatrix& scores,
                                  const LabelVector& labels,
                                  const Eigen::VectorXd& omega) {
  check_dims(scores, labels, omega.size());
  check_finite(omega);
  const Eigen::VectorXd margins = scores.values() * omega;
  Eigen::VectorXd grad = Eigen::VectorXd::Zero(omega.size());
  for (Eigen::Index i = 0; i < margins.size(); ++i) {
    const double y = labels.labels()[i];
    if (1.0 - y * margins[i] > 0.0) {
      grad -= y * scores.values().row(i).transpose();
    }
  }
  return grad;
}

Eigen::VectorXd hinge_subgradient(const ScoreMatrix& scores,
                                  const LabelVector& labels,
                                  const WeightVector& weights) {
  return hinge_subgradient(scores, labels, weights.omega());
}

double least_squares_objective(const ScoreMatrix& scores,
                               const LabelVector& labels,
                               const Eigen::VectorXd& omega) {
  check_dims(scores, labels, omega.size());
  check_finite(omega);
  const Eigen::VectorXd margins = scores.values() * omega;
  double total = 0.0;
  for (Eigen::Index i = 0; i < margins.size(); ++i) {
    const double r = 1.0 - labels.labels()[i] * margins[i];
    total += r * r;
  }
  return total;
}

double least_squares_objective(const ScoreMatrix& scores,
                               const LabelVector& labels,
                               const WeightVector& weights) {
  return least_squares_objective(scores, labels, weights.omega());
}

Eigen::VectorXd least_squares_gradient(const ScoreMatrix& scores,
                                       const LabelVector& labels,
                                       const Eigen::VectorXd& omega) {
  check_dims(scores, labels, omega.size());
  check_finite(omega);
  const Eigen::VectorXd margins = scores.values() * omega;
  Eigen::VectorXd grad = Eigen::VectorXd::Zero(omega.size());
  for (Eigen::Index i = 0; i < margins.size(); ++i) {
    const double y = labels.labels()[i];
    const double r = 1.0 - y * margins[i];
    grad -= 2.0 * r * y * scores.values().row(i).transpose();
  }
  return grad;
}

Eigen::VectorXd least_squares_gradient(const ScoreMatrix& scores,
                                       const LabelVector& labels,
                                       const WeightVector& weights) {
  return least_squares_gradient(scores, labels, weights.omega());
}

int predict(const Eigen::VectorXd& raw_scores, const FusionModel& model) {
  model.validate();
  const Eigen::VectorXd normalized = model.normalize_raw(raw_scores);
  const double fused = normalized.dot(model.weights.omega());
  return fused > model.threshold ? 1 : -1;
}

}  // namespace lpfusion::core
