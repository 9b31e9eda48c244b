#pragma once

#include <Eigen/Dense>
#include <array>
#include <cstdint>
#include <string>
#include <variant>

#include "learners/gmm.hpp"
#include "learners/gp.hpp"
#include "learners/kernel.hpp"
#include "learners/kpca.hpp"
#include "learners/svdd.hpp"

namespace lpfusion::learners {

enum class LearnerKind { kGmm, kSvdd, kGp, kKpca };

const char* to_string(LearnerKind kind);
LearnerKind learner_kind_from_string(const std::string& name);

// Kernel width grid shared by the kernel learners.
inline constexpr std::array<double, 5> kSigmaGrid{0.01, 0.1, 0.5, 1.0, 10.0};

struct LearnerParams {
  double sigma = 1.0;     // RBF width (svdd, gp, kpca)
  int q = 2;              // subspace dimension (kpca)
  std::uint64_t seed = 0; // em seeding (gmm)
};

// Uniform handle over the four built-in one-class learners. All scores are
// novelty scores: finite, nonnegative, higher = more anomalous.
class BaseLearner {
 public:
  static BaseLearner fit(LearnerKind kind, const Eigen::MatrixXd& x,
                         const LearnerParams& params);

  double score(const Eigen::VectorXd& x) const;
  Eigen::VectorXd score_rows(const Eigen::MatrixXd& x) const;

  LearnerKind kind() const { return kind_; }
  std::string warning() const;

 private:
  BaseLearner(LearnerKind kind,
              std::variant<GmmModel, SvddModel, GpModel, KpcaModel> model)
      : kind_(kind), model_(std::move(model)) {}

  LearnerKind kind_;
  std::variant<GmmModel, SvddModel, GpModel, KpcaModel> model_;
};

}  // namespace lpfusion::learners
