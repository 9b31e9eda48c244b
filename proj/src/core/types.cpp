#include "core/types.hpp"

#include <cmath>

namespace lpfusion::core {

double lp_norm(const Eigen::VectorXd& v, double p) {
  if (!(p >= 1.0)) {
    throw std::invalid_argument("lp_norm: p must be >= 1, got " +
                                std::to_string(p));
  }
  if (v.size() == 0) {
    return 0.0;
  }
  const double vmax = v.cwiseAbs().maxCoeff();
  if (vmax == 0.0) {
    return 0.0;
  }
  if (std::isinf(p)) {
    return vmax;
  }
  if (p == 1.0) {
    return v.cwiseAbs().sum();
  }
  if (p == 2.0) {
    return v.norm();
  }
  // Scale by the max entry: the powers then stay in [0,1].
  double acc = 0.0;
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    acc += std::pow(std::abs(v[i]) / vmax, p);
  }
  return vmax * std::pow(acc, 1.0 / p);
}

ScoreMatrix::ScoreMatrix(Eigen::MatrixXd values) : values_(std::move(values)) {
  if (values_.rows() < 1 || values_.cols() < 1) {
    throw std::invalid_argument("ScoreMatrix: need n >= 1 and R >= 1, got " +
                                std::to_string(values_.rows()) + "x" +
                                std::to_string(values_.cols()));
  }
  if (!values_.allFinite()) {
    throw std::invalid_argument("ScoreMatrix: non-finite entry");
  }
}

LabelVector::LabelVector(Eigen::VectorXi labels) : labels_(std::move(labels)) {
  if (labels_.size() < 1) {
    throw std::invalid_argument("LabelVector: empty");
  }
  for (Eigen::Index i = 0; i < labels_.size(); ++i) {
    if (labels_[i] != 1 && labels_[i] != -1) {
      throw std::invalid_argument("LabelVector: entry " + std::to_string(i) +
                                  " is " + std::to_string(labels_[i]) +
                                  ", labels must be +1 or -1");
    }
  }
}

LabelVector LabelVector::all_targets(Eigen::Index n) {
  return LabelVector(Eigen::VectorXi::Ones(n));
}

bool LabelVector::pure() const {
  return (labels_.array() == 1).all();
}

WeightVector::WeightVector(Eigen::VectorXd omega, double p)
    : omega_(std::move(omega)), p_(p) {
  if (omega_.size() < 1) {
    throw std::invalid_argument("WeightVector: empty");
  }
  if (!(p_ >= 1.0)) {
    throw std::invalid_argument("WeightVector: p must be >= 1, got " +
                                std::to_string(p_));
  }
  if (!omega_.allFinite()) {
    throw std::invalid_argument("WeightVector: non-finite entry");
  }
  const double norm = lp_norm(omega_, p_);
  if (norm > 1.0 + kNormSlack) {
    throw std::invalid_argument("WeightVector: ||omega||_p = " +
                                std::to_string(norm) +
                                " violates the unit-ball constraint");
  }
}

bool FusionModel::fitted() const {
  const Eigen::Index r = weights.size();
  return r >= 1 && orientation.size() == r &&
         normalizers.size() == static_cast<std::size_t>(r) &&
         std::isfinite(threshold);
}

void FusionModel::validate() const {
  if (!fitted()) {
    throw std::invalid_argument("FusionModel: model is not fully fitted");
  }
  for (Eigen::Index j = 0; j < orientation.size(); ++j) {
    if (orientation[j] != 1.0 && orientation[j] != -1.0) {
      throw std::invalid_argument("FusionModel: orientation entries must be "
                                  "+1 or -1");
    }
  }
}

Eigen::VectorXd FusionModel::normalize_raw(
    const Eigen::VectorXd& raw_scores) const {
  if (raw_scores.size() != classifiers()) {
    throw DimensionError("score vector has " +
                         std::to_string(raw_scores.size()) +
                         " entries, model fuses " +
                         std::to_string(classifiers()) + " classifiers");
  }
  Eigen::VectorXd out(raw_scores.size());
  for (Eigen::Index j = 0; j < raw_scores.size(); ++j) {
    out[j] = normalize::tsmm_apply(orientation[j] * raw_scores[j],
                                   normalizers[static_cast<std::size_t>(j)]);
  }
  return out;
}

}  // namespace lpfusion::core
