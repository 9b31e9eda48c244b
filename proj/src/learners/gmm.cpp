#include "learners/gmm.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "core/rng.hpp"
#include "core/types.hpp"

namespace lpfusion::learners {

namespace {

constexpr int kMaxEmIters = 200;
constexpr double kLogLikTol = 1e-8;
constexpr double kPi = 3.14159265358979323846;

// Covariance regularization: add 1e-6 * trace/d on the diagonal (with an
// absolute floor for the all-identical-points case, where the trace is 0).
void regularize(Eigen::MatrixXd& cov) {
  const double d = static_cast<double>(cov.rows());
  double ridge = 1e-6 * cov.trace() / d;
  if (!(ridge > 0.0)) {
    ridge = 1e-10;
  }
  cov.diagonal().array() += ridge;
}

Eigen::LLT<Eigen::MatrixXd> factorize(const Eigen::MatrixXd& covariance) {
  Eigen::MatrixXd cov = covariance;
  double ridge = 0.0;
  for (int attempt = 0; attempt < 8; ++attempt) {
    Eigen::LLT<Eigen::MatrixXd> llt(cov);
    if (llt.info() == Eigen::Success) {
      return llt;
    }
    ridge = ridge == 0.0 ? 1e-10 * (1.0 + cov.trace()) : ridge * 10.0;
    cov = covariance;
    cov.diagonal().array() += ridge;
  }
  throw core::NumericalError("gmm: covariance factorization failed");
}

double log_det(const Eigen::LLT<Eigen::MatrixXd>& llt) {
  return 2.0 * llt.matrixLLT().diagonal().array().log().sum();
}

}  // namespace

GmmModel::GmmModel(std::vector<GmmComponent> components, std::string warning)
    : components_(std::move(components)), warning_(std::move(warning)) {
  if (components_.empty()) {
    throw std::invalid_argument("GmmModel: no components");
  }
  double total = 0.0;
  for (const auto& c : components_) {
    total += c.weight;
  }
  if (!(std::abs(total - 1.0) < 1e-6)) {
    throw std::invalid_argument("GmmModel: mixing weights must sum to 1");
  }
  factors_.reserve(components_.size());
  for (const auto& c : components_) {
    factors_.push_back(factorize(c.covariance));
  }
}

double GmmModel::score(const Eigen::VectorXd& x) const {
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < components_.size(); ++k) {
    const Eigen::VectorXd diff = x - components_[k].mean;
    const double maha_sq = diff.dot(factors_[k].solve(diff));
    best = std::min(best, maha_sq);
  }
  return std::sqrt(std::max(0.0, best));
}

Eigen::VectorXd GmmModel::score_rows(const Eigen::MatrixXd& x) const {
  Eigen::VectorXd out(x.rows());
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    out[i] = score(x.row(i).transpose());
  }
  return out;
}

GmmModel gmm_fit(const Eigen::MatrixXd& x, int components,
                 std::uint64_t seed) {
  const Eigen::Index n = x.rows();
  const Eigen::Index d = x.cols();
  if (n < 1 || d < 1) {
    throw std::invalid_argument("gmm_fit: empty training matrix");
  }
  if (components < 1) {
    throw std::invalid_argument("gmm_fit: need at least one component");
  }

  std::string warning;
  int k = components;
  if (n < k) {
    k = static_cast<int>(n);
    warning = "gmm: only " + std::to_string(n) +
              " training samples, reduced components from " +
              std::to_string(components) + " to " + std::to_string(k);
  }

  core::Rng rng(seed);

  // k-means++ seeding for the component means.
  std::vector<Eigen::Index> chosen;
  chosen.push_back(static_cast<Eigen::Index>(rng.below(n)));
  Eigen::VectorXd dist_sq(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    dist_sq[i] = (x.row(i) - x.row(chosen[0])).squaredNorm();
  }
  while (static_cast<int>(chosen.size()) < k) {
    const double total = dist_sq.sum();
    Eigen::Index pick = 0;
    if (total > 0.0) {
      const double u = rng.uniform() * total;
      double acc = 0.0;
      for (Eigen::Index i = 0; i < n; ++i) {
        acc += dist_sq[i];
        if (u < acc) {
          pick = i;
          break;
        }
        pick = i;
      }
    } else {
      pick = static_cast<Eigen::Index>(rng.below(n));
    }
    chosen.push_back(pick);
    for (Eigen::Index i = 0; i < n; ++i) {
      dist_sq[i] = std::min(dist_sq[i], (x.row(i) - x.row(pick)).squaredNorm());
    }
  }

  Eigen::MatrixXd global_cov;
  {
    const Eigen::RowVectorXd mean = x.colwise().mean();
    const Eigen::MatrixXd centered = x.rowwise() - mean;
    global_cov = centered.transpose() * centered / static_cast<double>(n);
    regularize(global_cov);
  }

  std::vector<GmmComponent> comps(static_cast<std::size_t>(k));
  for (int c = 0; c < k; ++c) {
    comps[c].mean = x.row(chosen[c]).transpose();
    comps[c].covariance = global_cov;
    comps[c].weight = 1.0 / static_cast<double>(k);
  }

  std::vector<Eigen::LLT<Eigen::MatrixXd>> factors;
  std::vector<double> log_dets;
  auto refactor = [&]() {
    factors.clear();
    log_dets.clear();
    for (const auto& c : comps) {
      factors.push_back(factorize(c.covariance));
      log_dets.push_back(log_det(factors.back()));
    }
  };
  refactor();

  const double log_norm_const = -0.5 * static_cast<double>(d) *
                                std::log(2.0 * kPi);
  Eigen::MatrixXd log_resp(n, k);
  double prev_ll = -std::numeric_limits<double>::infinity();

  for (int iter = 0; iter < kMaxEmIters; ++iter) {
    // E step.
    for (int c = 0; c < k; ++c) {
      for (Eigen::Index i = 0; i < n; ++i) {
        const Eigen::VectorXd diff = x.row(i).transpose() - comps[c].mean;
        const double maha_sq = diff.dot(factors[c].solve(diff));
        log_resp(i, c) = std::log(comps[c].weight) + log_norm_const -
                         0.5 * (log_dets[c] + maha_sq);
      }
    }
    double log_lik = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
      const double row_max = log_resp.row(i).maxCoeff();
      const double lse =
          row_max + std::log((log_resp.row(i).array() - row_max).exp().sum());
      log_lik += lse;
      log_resp.row(i) = (log_resp.row(i).array() - lse).exp();
    }

    // M step (log_resp now holds responsibilities).
    for (int c = 0; c < k; ++c) {
      const double mass = std::max(log_resp.col(c).sum(), 1e-10);
      comps[c].weight = mass / static_cast<double>(n);
      comps[c].mean = (x.transpose() * log_resp.col(c)) / mass;
      const Eigen::MatrixXd centered = x.rowwise() - comps[c].mean.transpose();
      comps[c].covariance = centered.transpose() *
                            log_resp.col(c).asDiagonal() * centered / mass;
      regularize(comps[c].covariance);
    }
    double weight_sum = 0.0;
    for (const auto& c : comps) weight_sum += c.weight;
    for (auto& c : comps) c.weight /= weight_sum;
    refactor();

    if (std::abs(log_lik - prev_ll) < kLogLikTol) {
      break;
    }
    prev_ll = log_lik;
  }

  return GmmModel(std::move(comps), std::move(warning));
}

}  // namespace lpfusion::learners
