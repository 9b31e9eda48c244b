#pragma once

#include <Eigen/Dense>

#include "core/types.hpp"

namespace lpfusion::core {

// Fused decision score s^T omega (the weighted-sum combination of one
// normalized score per classifier).
double fused_score(const Eigen::VectorXd& scores, const FusionModel& model);

// Total hinge loss sum_i max(0, 1 - y_i s_i^T omega). The plain-vector
// overloads evaluate at arbitrary points (no ball constraint on omega).
double hinge_objective(const ScoreMatrix& scores, const LabelVector& labels,
                       const WeightVector& weights);
double hinge_objective(const ScoreMatrix& scores, const LabelVector& labels,
                       const Eigen::VectorXd& omega);

// Subgradient sum_i -y_i s_i [1 - y_i s_i^T omega > 0]. A sample exactly
// on the margin contributes zero (strict inequality).
Eigen::VectorXd hinge_subgradient(const ScoreMatrix& scores,
                                  const LabelVector& labels,
                                  const WeightVector& weights);
Eigen::VectorXd hinge_subgradient(const ScoreMatrix& scores,
                                  const LabelVector& labels,
                                  const Eigen::VectorXd& omega);

// Squared-error variant sum_i (1 - y_i s_i^T omega)^2 and its gradient,
// used only for the hinge-vs-least-squares ablation.
double least_squares_objective(const ScoreMatrix& scores,
                               const LabelVector& labels,
                               const WeightVector& weights);
double least_squares_objective(const ScoreMatrix& scores,
                               const LabelVector& labels,
                               const Eigen::VectorXd& omega);
Eigen::VectorXd least_squares_gradient(const ScoreMatrix& scores,
                                       const LabelVector& labels,
                                       const WeightVector& weights);
Eigen::VectorXd least_squares_gradient(const ScoreMatrix& scores,
                                       const LabelVector& labels,
                                       const Eigen::VectorXd& omega);

// Classify a vector of raw classifier scores: orientation, score
// normalization, weighted sum, then +1 iff the fused score exceeds the
// model threshold (ties classify as -1).
int predict(const Eigen::VectorXd& raw_scores, const FusionModel& model);

}  // namespace lpfusion::core
