#include "normalize/normalize.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace lpfusion::normalize {

ZScoreState zscore_fit(const Eigen::MatrixXd& features) {
  if (features.rows() < 1 || features.cols() < 1) {
    throw std::invalid_argument("zscore_fit: empty feature matrix");
  }
  const double m = static_cast<double>(features.rows());
  ZScoreState state;
  state.mean = features.colwise().mean();
  Eigen::MatrixXd centered = features.rowwise() - state.mean.transpose();
  state.stddev = (centered.array().square().colwise().sum() / m).sqrt();
  for (Eigen::Index j = 0; j < state.stddev.size(); ++j) {
    if (state.stddev[j] <= 0.0) {
      state.stddev[j] = 1.0;
    }
  }
  return state;
}

Eigen::MatrixXd zscore_apply(const Eigen::MatrixXd& features,
                             const ZScoreState& state) {
  if (features.cols() != state.mean.size()) {
    throw std::invalid_argument(
        "zscore_apply: feature matrix has " + std::to_string(features.cols()) +
        " columns, state was fitted on " + std::to_string(state.mean.size()));
  }
  Eigen::MatrixXd out = features.rowwise() - state.mean.transpose();
  out.array().rowwise() /= state.stddev.transpose().array();
  return out;
}

TwoSidedMinMaxState tsmm_fit(const Eigen::VectorXd& scores, int rho) {
  const Eigen::Index m = scores.size();
  if (m < 2) {
    throw std::invalid_argument("tsmm_fit: need at least 2 scores, got " +
                                std::to_string(m));
  }
  if (rho < 1 || rho > 10) {
    throw std::invalid_argument("tsmm_fit: rho must be in {1,...,10}, got " +
                                std::to_string(rho));
  }
  if (!scores.allFinite()) {
    throw std::invalid_argument("tsmm_fit: non-finite score");
  }
  std::vector<double> sorted(scores.data(), scores.data() + m);
  std::sort(sorted.begin(), sorted.end());

  // rho percent outside in total, split symmetrically: rho/2 percent per
  // tail, k rounded half away from zero and at least 1.
  const long k = std::max<long>(
      1, std::lround(static_cast<double>(m) * static_cast<double>(rho) / 200.0));

  TwoSidedMinMaxState state;
  state.rho = rho;
  state.lower = sorted[static_cast<std::size_t>(k - 1)];
  state.upper = sorted[static_cast<std::size_t>(m - k)];
  state.degenerate = !(state.lower < state.upper);
  return state;
}

double tsmm_apply(double score, const TwoSidedMinMaxState& state) {
  if (state.rho == 0) {
    throw std::invalid_argument("tsmm_apply: state is not fitted");
  }
  if (state.degenerate) {
    return 0.5;
  }
  const double scaled = (score - state.lower) / (state.upper - state.lower);
  return std::clamp(scaled, 0.0, 1.0);
}

Eigen::VectorXd tsmm_apply(const Eigen::VectorXd& scores,
                           const TwoSidedMinMaxState& state) {
  Eigen::VectorXd out(scores.size());
  for (Eigen::Index i = 0; i < scores.size(); ++i) {
    out[i] = tsmm_apply(scores[i], state);
  }
  return out;
}

}  // namespace lpfusion::normalize
