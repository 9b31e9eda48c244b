#include "solver/oracle.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

#include "core/rng.hpp"

namespace lpfusion::solver {

namespace {

// Hinge/least-squares totals for a block of candidate weight vectors,
// one column of `margins` per candidate.
void block_objectives(const Eigen::MatrixXd& margins,
                      const Eigen::VectorXd& labels, Loss loss,
                      Eigen::VectorXd& out) {
  const Eigen::ArrayXXd residuals =
      1.0 - (margins.array().colwise() * labels.array());
  if (loss == Loss::kHinge) {
    out = residuals.max(0.0).colwise().sum();
  } else {
    out = residuals.square().colwise().sum();
  }
}

}  // namespace

OracleResult sampling_oracle(const core::ScoreMatrix& scores,
                             const core::LabelVector& labels, double p,
                             std::int64_t budget, std::uint64_t seed,
                             Loss loss) {
  const Eigen::Index r = scores.classifiers();
  if (r > 4) {
    throw std::invalid_argument(
        "sampling_oracle is desk-scale only (R <= 4), got R = " +
        std::to_string(r));
  }
  if (budget < 10000) {
    throw std::invalid_argument("sampling_oracle: budget must be >= 10^4");
  }
  if (scores.samples() != labels.size()) {
    throw core::DimensionError("sampling_oracle: dimension mismatch");
  }
  if (!(p >= 1.0)) {
    throw std::invalid_argument("sampling_oracle: p must be >= 1");
  }

  const Eigen::VectorXd y = labels.labels().cast<double>();
  core::Rng rng(seed);

  Eigen::VectorXd best_omega;
  double best_objective = std::numeric_limits<double>::infinity();
  auto consider_block = [&](const Eigen::MatrixXd& candidates) {
    const Eigen::MatrixXd margins = scores.values() * candidates.transpose();
    Eigen::VectorXd objectives;
    block_objectives(margins, y, loss, objectives);
    for (Eigen::Index c = 0; c < objectives.size(); ++c) {
      if (objectives[c] < best_objective) {
        best_objective = objectives[c];
        best_omega = candidates.row(c).transpose();
      }
    }
  };

  // Deterministic anchor points: the Frank-Wolfe start and the signed unit
  // coordinate vectors.
  {
    Eigen::MatrixXd anchors(1 + 2 * r, r);
    anchors.row(0) = fw_init(r, p).transpose();
    for (Eigen::Index j = 0; j < r; ++j) {
      anchors.row(1 + 2 * j).setZero();
      anchors(1 + 2 * j, j) = 1.0;
      anchors.row(2 + 2 * j).setZero();
      anchors(2 + 2 * j, j) = -1.0;
    }
    consider_block(anchors);
  }

  const Eigen::Index block_size = 4096;
  std::int64_t remaining = budget;
  Eigen::MatrixXd block(block_size, r);
  while (remaining > 0) {
    const Eigen::Index count =
        static_cast<Eigen::Index>(std::min<std::int64_t>(remaining, block_size));
    for (Eigen::Index i = 0; i < count; ++i) {
      for (Eigen::Index j = 0; j < r; ++j) {
        block(i, j) = rng.uniform(-1.0, 1.0);
      }
      const double norm = core::lp_norm(block.row(i).transpose(), p);
      if (norm > 1.0) {
        block.row(i) /= norm;
      }
    }
    consider_block(block.topRows(count));
    remaining -= count;
  }

  return {best_omega, best_objective};
}

}  // namespace lpfusion::solver
