#include "eval/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <vector>

namespace lpfusion::eval {

double auc(const Eigen::VectorXd& positive_scores,
           const Eigen::VectorXd& negative_scores) {
  const Eigen::Index n_pos = positive_scores.size();
  const Eigen::Index n_neg = negative_scores.size();
  if (n_pos == 0 || n_neg == 0) {
    throw std::invalid_argument("auc: both classes must be non-empty");
  }
  if (!positive_scores.allFinite() || !negative_scores.allFinite()) {
    throw std::invalid_argument("auc: non-finite score");
  }

  // Midrank computation; average ranks across ties make tied cross-class
  // pairs contribute exactly one half.
  const Eigen::Index n = n_pos + n_neg;
  std::vector<std::pair<double, bool>> scored;  // (score, is_positive)
  scored.reserve(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n_pos; ++i) {
    scored.emplace_back(positive_scores[i], true);
  }
  for (Eigen::Index i = 0; i < n_neg; ++i) {
    scored.emplace_back(negative_scores[i], false);
  }
  std::sort(scored.begin(), scored.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });

  double rank_sum_pos = 0.0;
  std::size_t i = 0;
  while (i < scored.size()) {
    std::size_t j = i;
    while (j < scored.size() && scored[j].first == scored[i].first) {
      ++j;
    }
    // Ranks are 1-based; the block [i, j) shares the average rank.
    const double midrank = 0.5 * static_cast<double>(i + 1 + j);
    for (std::size_t k = i; k < j; ++k) {
      if (scored[k].second) {
        rank_sum_pos += midrank;
      }
    }
    i = j;
  }

  const double np = static_cast<double>(n_pos);
  const double nn = static_cast<double>(n_neg);
  const double u_stat = rank_sum_pos - np * (np + 1.0) / 2.0;
  return u_stat / (np * nn);
}

double gmean(std::int64_t tp, std::int64_t fn, std::int64_t tn,
             std::int64_t fp) {
  if (tp < 0 || fn < 0 || tn < 0 || fp < 0) {
    throw std::invalid_argument("gmean: negative count");
  }
  if (tp + fn < 1 || tn + fp < 1) {
    throw std::invalid_argument(
        "gmean: both classes must be present (tp+fn >= 1 and tn+fp >= 1)");
  }
  const double tpr =
      static_cast<double>(tp) / static_cast<double>(tp + fn);
  const double tnr =
      static_cast<double>(tn) / static_cast<double>(tn + fp);
  return std::sqrt(tpr * tnr);
}

}  // namespace lpfusion::eval
