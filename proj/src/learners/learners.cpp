#include "learners/learners.hpp"

#include <stdexcept>

namespace lpfusion::learners {

const char* to_string(LearnerKind kind) {
  switch (kind) {
    case LearnerKind::kGmm:
      return "gmm";
    case LearnerKind::kSvdd:
      return "svdd";
    case LearnerKind::kGp:
      return "gp";
    case LearnerKind::kKpca:
      return "kpca";
  }
  return "unknown";
}

LearnerKind learner_kind_from_string(const std::string& name) {
  if (name == "gmm") return LearnerKind::kGmm;
  if (name == "svdd") return LearnerKind::kSvdd;
  if (name == "gp") return LearnerKind::kGp;
  if (name == "kpca") return LearnerKind::kKpca;
  throw std::invalid_argument("unknown learner '" + name +
                              "' (expected gmm, svdd, gp or kpca)");
}

BaseLearner BaseLearner::fit(LearnerKind kind, const Eigen::MatrixXd& x,
                             const LearnerParams& params) {
  switch (kind) {
    case LearnerKind::kGmm:
      return BaseLearner(kind, gmm_fit(x, 3, params.seed));
    case LearnerKind::kSvdd:
      return BaseLearner(kind, svdd_fit(x, params.sigma));
    case LearnerKind::kGp:
      return BaseLearner(kind, gp_fit(x, params.sigma));
    case LearnerKind::kKpca:
      return BaseLearner(kind, kpca_fit(x, params.sigma, params.q));
  }
  throw std::invalid_argument("BaseLearner::fit: bad learner kind");
}

double BaseLearner::score(const Eigen::VectorXd& x) const {
  return std::visit([&](const auto& model) { return model.score(x); }, model_);
}

Eigen::VectorXd BaseLearner::score_rows(const Eigen::MatrixXd& x) const {
  return std::visit([&](const auto& model) { return model.score_rows(x); },
                    model_);
}

std::string BaseLearner::warning() const {
  if (const auto* gmm = std::get_if<GmmModel>(&model_)) {
    return gmm->warning();
  }
  return "";
}

}  // namespace lpfusion::learners
