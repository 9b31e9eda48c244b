#pragma once

#include <Eigen/Dense>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "normalize/normalize.hpp"

namespace lpfusion::core {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

// Feasibility slack for the weight-vector norm constraint.
inline constexpr double kNormSlack = 1e-9;

struct DimensionError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct NumericalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// ||v||_p for p in [1, inf], computed with the entries scaled by the
// largest magnitude so that large p (e.g. 100) neither overflows nor
// underflows.
double lp_norm(const Eigen::VectorXd& v, double p);

// n x R matrix of per-sample, per-classifier scores. Rows are samples.
class ScoreMatrix {
 public:
  explicit ScoreMatrix(Eigen::MatrixXd values);

  const Eigen::MatrixXd& values() const { return values_; }
  Eigen::Index samples() const { return values_.rows(); }
  Eigen::Index classifiers() const { return values_.cols(); }

 private:
  Eigen::MatrixXd values_;
};

// Length-n vector of class labels, +1 for targets and -1 for anomalies.
class LabelVector {
 public:
  explicit LabelVector(Eigen::VectorXi labels);
  static LabelVector all_targets(Eigen::Index n);

  const Eigen::VectorXi& labels() const { return labels_; }
  Eigen::Index size() const { return labels_.size(); }
  bool pure() const;  // true when every label is +1

 private:
  Eigen::VectorXi labels_;
};

// Fusion weights together with the norm parameter of the ball they live in.
class WeightVector {
 public:
  WeightVector(Eigen::VectorXd omega, double p);

  const Eigen::VectorXd& omega() const { return omega_; }
  double p() const { return p_; }
  Eigen::Index size() const { return omega_.size(); }

 private:
  Eigen::VectorXd omega_;
  double p_;
};

// A fully fitted fusion model: weights, decision threshold, per-classifier
// orientation signs and the fitted two-sided min-max score normalizers.
// Orientation maps raw scores to target-positive scores: built-in learners
// emit novelty scores (higher = more anomalous) and carry orientation -1.
struct FusionModel {
  WeightVector weights;
  double threshold = 1.0;
  Eigen::VectorXd orientation;                             // entries in {+1,-1}
  std::vector<normalize::TwoSidedMinMaxState> normalizers; // one per classifier
  Eigen::VectorXd omega_init;                              // solver start point

  Eigen::Index classifiers() const { return weights.size(); }
  bool fitted() const;
  void validate() const;

  // Orientation followed by two-sided min-max normalization.
  Eigen::VectorXd normalize_raw(const Eigen::VectorXd& raw_scores) const;
};

}  // namespace lpfusion::core
