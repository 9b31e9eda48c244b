#include "eval/benchmark.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <mutex>
#include <stdexcept>
#include <thread>

#include "core/rng.hpp"

namespace lpfusion::eval {

Dataset Dataset::features(Eigen::MatrixXd x, core::LabelVector labels) {
  if (x.rows() != labels.size()) {
    throw core::DimensionError("dataset has " + std::to_string(x.rows()) +
                               " rows, label vector has " +
                               std::to_string(labels.size()));
  }
  Dataset d{Kind::kFeatures, std::move(x), std::move(labels), {}, {}};
  return d;
}

Dataset Dataset::scores(Eigen::MatrixXd x, core::LabelVector labels,
                        Eigen::VectorXd orientation,
                        std::vector<std::string> column_names) {
  if (x.rows() != labels.size()) {
    throw core::DimensionError("dataset has " + std::to_string(x.rows()) +
                               " rows, label vector has " +
                               std::to_string(labels.size()));
  }
  if (orientation.size() != x.cols()) {
    throw core::DimensionError("orientation has " +
                               std::to_string(orientation.size()) +
                               " entries for " + std::to_string(x.cols()) +
                               " score columns");
  }
  if (column_names.empty()) {
    for (Eigen::Index c = 0; c < x.cols(); ++c) {
      column_names.push_back("c" + std::to_string(c));
    }
  }
  Dataset d{Kind::kScores, std::move(x), std::move(labels),
            std::move(orientation), std::move(column_names)};
  return d;
}

std::vector<double> default_p_grid() {
  return {32.0 / 31.0, 16.0 / 15.0, 8.0 / 7.0, 4.0 / 3.0, 2.0,
          4.0,         8.0,         10.0,      100.0};
}

std::vector<int> default_rho_grid() { return {1, 2, 3, 4, 5, 6, 7, 8, 9, 10}; }

std::vector<double> default_sigma_grid() {
  return {learners::kSigmaGrid.begin(), learners::kSigmaGrid.end()};
}

Grids default_grids() {
  return {default_p_grid(), default_rho_grid(), default_sigma_grid(), {}};
}

Aggregate aggregate(const std::vector<double>& values) {
  Aggregate agg;
  if (values.empty()) {
    return agg;
  }
  double sum = 0.0;
  for (double v : values) sum += v;
  agg.mean = sum / static_cast<double>(values.size());
  if (values.size() > 1) {
    double ss = 0.0;
    for (double v : values) ss += (v - agg.mean) * (v - agg.mean);
    agg.stddev = std::sqrt(ss / static_cast<double>(values.size() - 1));
  }
  return agg;
}

namespace {

Eigen::MatrixXd rows(const Eigen::MatrixXd& m, const std::vector<int>& idx) {
  Eigen::MatrixXd out(static_cast<Eigen::Index>(idx.size()), m.cols());
  for (std::size_t i = 0; i < idx.size(); ++i) {
    out.row(static_cast<Eigen::Index>(i)) = m.row(idx[i]);
  }
  return out;
}

Eigen::VectorXd rows(const Eigen::VectorXd& v, const std::vector<int>& idx) {
  Eigen::VectorXd out(static_cast<Eigen::Index>(idx.size()));
  for (std::size_t i = 0; i < idx.size(); ++i) {
    out[static_cast<Eigen::Index>(i)] = v[idx[i]];
  }
  return out;
}

// Oriented (higher = more target-like) ensemble columns for the full
// dataset at one hyperparameter configuration, plus the grid bookkeeping
// needed to enumerate configurations.
class EnsembleCache {
 public:
  EnsembleCache(const Dataset& dataset, const BenchmarkConfig& config,
                const SplitPlan& plan) {
    if (dataset.kind == Dataset::Kind::kScores) {
      sigmas_ = {0.0};
      qs_ = {0};
      names_ = dataset.column_names;
      oriented_ = dataset.x;
      for (Eigen::Index c = 0; c < oriented_.cols(); ++c) {
        oriented_.col(c) *= dataset.orientation[c];
      }
      return;
    }

    names_ = {"gmm", "svdd", "gp", "kpca"};
    sigmas_ = config.grids.sigma_grid;
    const Eigen::MatrixXd train_targets = rows(dataset.x, plan.train_targets);
    const int n_train = static_cast<int>(train_targets.rows());
    if (!config.grids.q_grid.empty()) {
      for (int q : config.grids.q_grid) {
        const int clipped = std::clamp(q, 1, n_train);
        if (qs_.empty() || qs_.back() != clipped) {
          qs_.push_back(clipped);
        }
      }
    } else {
      qs_ = learners::kpca_q_grid(n_train, config.q_grid_cap);
    }

    feature_state_ = normalize::zscore_fit(train_targets);
    const Eigen::MatrixXd all = normalize::zscore_apply(dataset.x, feature_state_);
    const Eigen::MatrixXd train = normalize::zscore_apply(train_targets, feature_state_);

    const std::uint64_t gmm_seed = core::splitmix64(plan.seed + 1);
    gmm_ = -learners::gmm_fit(train, 3, gmm_seed).score_rows(all);
    svdd_.reserve(sigmas_.size());
    gp_.reserve(sigmas_.size());
    kpca_.reserve(sigmas_.size());
    for (double sigma : sigmas_) {
      svdd_.push_back(-learners::svdd_fit(train, sigma).score_rows(all));
      gp_.push_back(-learners::gp_fit(train, sigma).score_rows(all));
      const auto kpca = learners::kpca_fit(train, sigma, qs_.back());
      kpca_.push_back(-kpca.score_rows_for_qs(all, qs_));
    }
  }

  const std::vector<double>& sigmas() const { return sigmas_; }
  const std::vector<int>& qs() const { return qs_; }
  const std::vector<std::string>& names() const { return names_; }
  Eigen::Index columns() const {
    return oriented_.size() > 0 ? oriented_.cols() : 4;
  }

  // Oriented full-dataset score matrix for configuration (sigma_i, q_i).
  Eigen::MatrixXd view(std::size_t sigma_i, std::size_t q_i) const {
    if (oriented_.size() > 0) {
      return oriented_;
    }
    Eigen::MatrixXd out(gmm_.size(), 4);
    out.col(0) = gmm_;
    out.col(1) = svdd_[sigma_i];
    out.col(2) = gp_[sigma_i];
    out.col(3) = kpca_[sigma_i].col(static_cast<Eigen::Index>(q_i));
    return out;
  }

  // Single oriented learner column (baselines).
  Eigen::VectorXd column(std::size_t learner, std::size_t sigma_i,
                         std::size_t q_i) const {
    if (oriented_.size() > 0) {
      return oriented_.col(static_cast<Eigen::Index>(learner));
    }
    switch (learner) {
      case 0:
        return gmm_;
      case 1:
        return svdd_[sigma_i];
      case 2:
        return gp_[sigma_i];
      default:
        return kpca_[sigma_i].col(static_cast<Eigen::Index>(q_i));
    }
  }

 private:
  std::vector<double> sigmas_;
  std::vector<int> qs_;
  std::vector<std::string> names_;
  normalize::ZScoreState feature_state_;
  Eigen::MatrixXd oriented_;          // scores datasets
  Eigen::VectorXd gmm_;               // features datasets, oriented
  std::vector<Eigen::VectorXd> svdd_; // per sigma
  std::vector<Eigen::VectorXd> gp_;   // per sigma
  std::vector<Eigen::MatrixXd> kpca_; // per sigma, one column per q
};

std::vector<normalize::TwoSidedMinMaxState> fit_normalizers(
    const Eigen::MatrixXd& train_scores, int rho) {
  std::vector<normalize::TwoSidedMinMaxState> states;
  states.reserve(static_cast<std::size_t>(train_scores.cols()));
  for (Eigen::Index c = 0; c < train_scores.cols(); ++c) {
    states.push_back(normalize::tsmm_fit(train_scores.col(c), rho));
  }
  return states;
}

Eigen::MatrixXd apply_normalizers(
    const Eigen::MatrixXd& scores,
    const std::vector<normalize::TwoSidedMinMaxState>& states) {
  Eigen::MatrixXd out(scores.rows(), scores.cols());
  for (Eigen::Index c = 0; c < scores.cols(); ++c) {
    out.col(c) = normalize::tsmm_apply(scores.col(c), states[c]);
  }
  return out;
}

// Threshold maximizing validation G-mean; candidates are the midpoints of
// consecutive distinct fused scores plus sentinels on both ends. Ties keep
// the smallest threshold. Prediction is +1 iff score > threshold.
double tune_gmean_threshold(const Eigen::VectorXd& pos,
                            const Eigen::VectorXd& neg) {
  std::vector<std::pair<double, bool>> scored;
  scored.reserve(static_cast<std::size_t>(pos.size() + neg.size()));
  for (Eigen::Index i = 0; i < pos.size(); ++i) scored.emplace_back(pos[i], true);
  for (Eigen::Index i = 0; i < neg.size(); ++i) scored.emplace_back(neg[i], false);
  std::sort(scored.begin(), scored.end());

  const auto total_pos = static_cast<std::int64_t>(pos.size());
  const auto total_neg = static_cast<std::int64_t>(neg.size());

  double best_threshold = scored.front().first - 1.0;
  double best_gmean = -1.0;
  std::int64_t pos_below = 0;
  std::int64_t neg_below = 0;
  auto consider = [&](double threshold) {
    const std::int64_t tp = total_pos - pos_below;
    const std::int64_t fp = total_neg - neg_below;
    const double g = gmean(tp, pos_below, neg_below, fp);
    if (g > best_gmean) {
      best_gmean = g;
      best_threshold = threshold;
    }
  };

  consider(best_threshold);  // everything classified +1
  std::size_t i = 0;
  while (i < scored.size()) {
    std::size_t j = i;
    while (j < scored.size() && scored[j].first == scored[i].first) {
      if (scored[j].second) {
        ++pos_below;
      } else {
        ++neg_below;
      }
      ++j;
    }
    const double threshold =
        j < scored.size() ? 0.5 * (scored[i].first + scored[j].first)
                          : scored.back().first;
    consider(threshold);
    i = j;
  }
  return best_threshold;
}

Confusion confusion_at(const Eigen::VectorXd& pos, const Eigen::VectorXd& neg,
                       double threshold) {
  Confusion c;
  for (Eigen::Index i = 0; i < pos.size(); ++i) {
    (pos[i] > threshold ? c.tp : c.fn)++;
  }
  for (Eigen::Index i = 0; i < neg.size(); ++i) {
    (neg[i] > threshold ? c.fp : c.tn)++;
  }
  return c;
}

struct Candidate {
  SelectedConfig config;
  std::size_t sigma_i = 0;
  std::size_t q_i = 0;
  Eigen::VectorXd omega;
};

bool improves(const Candidate& challenger, const Candidate& best) {
  if (challenger.config.val_auc != best.config.val_auc) {
    return challenger.config.val_auc > best.config.val_auc;
  }
  if (challenger.config.p != best.config.p) {
    return challenger.config.p < best.config.p;
  }
  if (challenger.config.rho != best.config.rho) {
    return challenger.config.rho < best.config.rho;
  }
  if (challenger.config.sigma != best.config.sigma) {
    return challenger.config.sigma < best.config.sigma;
  }
  return challenger.config.q < best.config.q;
}

RepeatResult run_repeat(const Dataset& dataset, const BenchmarkConfig& config,
                        const SplitPlan& plan, int repeat) {
  const EnsembleCache cache(dataset, config, plan);

  // Fusion training set: targets first, then any negatives.
  std::vector<int> fusion_idx = plan.train_targets;
  fusion_idx.insert(fusion_idx.end(), plan.train_negatives.begin(),
                    plan.train_negatives.end());
  Eigen::VectorXi fusion_labels(static_cast<Eigen::Index>(fusion_idx.size()));
  fusion_labels.head(static_cast<Eigen::Index>(plan.train_targets.size()))
      .setConstant(1);
  fusion_labels.tail(static_cast<Eigen::Index>(plan.train_negatives.size()))
      .setConstant(-1);
  const core::LabelVector fusion_label_vec(fusion_labels);

  Candidate best;
  best.config.val_auc = -1.0;

  for (std::size_t si = 0; si < cache.sigmas().size(); ++si) {
    for (std::size_t qi = 0; qi < cache.qs().size(); ++qi) {
      const Eigen::MatrixXd view = cache.view(si, qi);
      const Eigen::MatrixXd train_raw = rows(view, fusion_idx);
      const Eigen::MatrixXd val_t_raw = rows(view, plan.val_targets);
      const Eigen::MatrixXd val_n_raw = rows(view, plan.val_negatives);

      for (int rho : config.grids.rho_grid) {
        const auto states = fit_normalizers(train_raw, rho);
        const core::ScoreMatrix train(apply_normalizers(train_raw, states));
        const Eigen::MatrixXd val_t = apply_normalizers(val_t_raw, states);
        const Eigen::MatrixXd val_n = apply_normalizers(val_n_raw, states);

        for (double p : config.grids.p_grid) {
          solver::SolverConfig solver_config = config.solver;
          solver_config.p = p;
          const Eigen::VectorXd omega =
              fw_solve(train, fusion_label_vec, solver_config).first.omega();

          Candidate challenger;
          challenger.config = {p, rho, cache.sigmas()[si], cache.qs()[qi],
                               auc(val_t * omega, val_n * omega)};
          challenger.sigma_i = si;
          challenger.q_i = qi;
          challenger.omega = omega;
          if (improves(challenger, best)) {
            best = std::move(challenger);
          }
        }
      }
    }
  }

  // Rebuild the chosen configuration and freeze the operating threshold on
  // the validation set.
  RepeatResult result;
  result.repeat = repeat;
  result.plan = plan;
  result.chosen = best.config;
  result.omega = best.omega;

  const Eigen::MatrixXd view = cache.view(best.sigma_i, best.q_i);
  const auto states = fit_normalizers(rows(view, fusion_idx), best.config.rho);
  const Eigen::MatrixXd val_t =
      apply_normalizers(rows(view, plan.val_targets), states);
  const Eigen::MatrixXd val_n =
      apply_normalizers(rows(view, plan.val_negatives), states);
  result.threshold =
      tune_gmean_threshold(val_t * best.omega, val_n * best.omega);

  const Eigen::VectorXd test_pos =
      apply_normalizers(rows(view, plan.test_targets), states) * best.omega;
  const Eigen::VectorXd test_neg =
      apply_normalizers(rows(view, plan.test_negatives), states) * best.omega;
  result.test_auc = auc(test_pos, test_neg);
  result.confusion = confusion_at(test_pos, test_neg, result.threshold);
  result.test_gmean = gmean(result.confusion.tp, result.confusion.fn,
                            result.confusion.tn, result.confusion.fp);

  // Single-learner baselines: validation-tuned width (and subspace size for
  // the reconstruction learner), scored on raw oriented outputs.
  const bool is_scores = dataset.kind == Dataset::Kind::kScores;
  for (std::size_t learner = 0;
       learner < static_cast<std::size_t>(cache.columns()); ++learner) {
    BaselineResult baseline;
    baseline.name = cache.names()[learner];
    double best_val = -1.0;
    std::size_t best_si = 0;
    std::size_t best_qi = 0;
    const bool uses_sigma = !is_scores && learner != 0;
    const bool uses_q = !is_scores && learner == 3;
    const std::size_t sigma_count = uses_sigma ? cache.sigmas().size() : 1;
    const std::size_t q_count = uses_q ? cache.qs().size() : 1;
    for (std::size_t si = 0; si < sigma_count; ++si) {
      for (std::size_t qi = 0; qi < q_count; ++qi) {
        const Eigen::VectorXd col = cache.column(learner, si, qi);
        const double val_auc = auc(rows(col, plan.val_targets),
                                   rows(col, plan.val_negatives));
        if (val_auc > best_val) {
          best_val = val_auc;
          best_si = si;
          best_qi = qi;
        }
      }
    }
    const Eigen::VectorXd col = cache.column(learner, best_si, best_qi);
    baseline.sigma = uses_sigma ? cache.sigmas()[best_si] : 0.0;
    baseline.q = uses_q ? cache.qs()[best_qi] : 0;
    baseline.val_auc = best_val;
    baseline.test_auc =
        auc(rows(col, plan.test_targets), rows(col, plan.test_negatives));
    result.baselines.push_back(std::move(baseline));
  }

  // Uniform-weight (sum-rule) fusion baseline, validation-tuned over the
  // same normalization grid.
  {
    BaselineResult baseline;
    baseline.name = "sum_rule";
    double best_val = -1.0;
    std::size_t best_si = 0;
    std::size_t best_qi = 0;
    int best_rho = config.grids.rho_grid.front();
    for (std::size_t si = 0; si < cache.sigmas().size(); ++si) {
      for (std::size_t qi = 0; qi < cache.qs().size(); ++qi) {
        const Eigen::MatrixXd sum_view = cache.view(si, qi);
        const Eigen::MatrixXd train_raw = rows(sum_view, fusion_idx);
        for (int rho : config.grids.rho_grid) {
          const auto sum_states = fit_normalizers(train_raw, rho);
          const double val_auc =
              auc(apply_normalizers(rows(sum_view, plan.val_targets), sum_states)
                      .rowwise()
                      .sum(),
                  apply_normalizers(rows(sum_view, plan.val_negatives), sum_states)
                      .rowwise()
                      .sum());
          if (val_auc > best_val) {
            best_val = val_auc;
            best_si = si;
            best_qi = qi;
            best_rho = rho;
          }
        }
      }
    }
    const Eigen::MatrixXd sum_view = cache.view(best_si, best_qi);
    const auto sum_states =
        fit_normalizers(rows(sum_view, fusion_idx), best_rho);
    baseline.sigma = cache.sigmas()[best_si];
    baseline.q = cache.qs()[best_qi];
    baseline.rho = best_rho;
    baseline.val_auc = best_val;
    baseline.test_auc =
        auc(apply_normalizers(rows(sum_view, plan.test_targets), sum_states)
                .rowwise()
                .sum(),
            apply_normalizers(rows(sum_view, plan.test_negatives), sum_states)
                .rowwise()
                .sum());
    result.baselines.push_back(std::move(baseline));
  }

  return result;
}

void validate_config(const BenchmarkConfig& config) {
  if (config.n_repeats < 1) {
    throw std::invalid_argument("run_benchmark: n_repeats must be >= 1");
  }
  if (config.grids.p_grid.empty() || config.grids.rho_grid.empty()) {
    throw std::invalid_argument("run_benchmark: empty p or rho grid");
  }
  for (double p : config.grids.p_grid) {
    if (!(p >= 1.0)) {
      throw std::invalid_argument("run_benchmark: p grid values must be >= 1");
    }
  }
  for (int rho : config.grids.rho_grid) {
    if (rho < 1 || rho > 10) {
      throw std::invalid_argument(
          "run_benchmark: rho grid values must be in {1,...,10}");
    }
  }
  if (config.grids.sigma_grid.empty()) {
    throw std::invalid_argument("run_benchmark: empty sigma grid");
  }
  for (double sigma : config.grids.sigma_grid) {
    if (!(sigma > 0.0)) {
      throw std::invalid_argument(
          "run_benchmark: sigma grid values must be positive");
    }
  }
}

}  // namespace

ExperimentReport run_benchmark(const Dataset& dataset,
                               const BenchmarkConfig& config) {
  validate_config(config);

  const auto plans =
      make_splits(dataset.labels, config.scenario, config.n_repeats, config.seed);

  ExperimentReport report;
  report.scenario = config.scenario;
  report.seed = config.seed;
  report.n_repeats = config.n_repeats;
  report.solver = config.solver;
  report.dataset_kind = dataset.kind;
  report.n_samples = dataset.x.rows();
  report.n_columns = dataset.x.cols();
  for (Eigen::Index i = 0; i < dataset.labels.size(); ++i) {
    (dataset.labels.labels()[i] == 1 ? report.n_targets : report.n_negatives)++;
  }

  report.repeats.resize(static_cast<std::size_t>(config.n_repeats));
  std::atomic<int> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&]() {
    while (true) {
      const int i = next.fetch_add(1);
      if (i >= config.n_repeats) {
        return;
      }
      try {
        report.repeats[static_cast<std::size_t>(i)] =
            run_repeat(dataset, config, plans[static_cast<std::size_t>(i)], i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(failure_mutex);
        if (!failure) {
          failure = std::current_exception();
        }
        return;
      }
    }
  };

  int threads = config.threads > 0
                    ? config.threads
                    : static_cast<int>(std::thread::hardware_concurrency());
  threads = std::max(1, std::min(threads, config.n_repeats));
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(threads));
    for (int i = 0; i < threads; ++i) {
      pool.emplace_back(worker);
    }
    for (auto& t : pool) {
      t.join();
    }
  }
  if (failure) {
    std::rethrow_exception(failure);
  }

  // Realized grids (the automatic q grid depends on the train size, which
  // is the same for every repeat).
  report.grids = config.grids;
  if (dataset.kind == Dataset::Kind::kScores) {
    report.grids.sigma_grid = {};
    report.grids.q_grid = {};
    report.ensemble = dataset.column_names;
  } else {
    const int n_train = static_cast<int>(plans.front().train_targets.size());
    if (!config.grids.q_grid.empty()) {
      std::vector<int> realized;
      for (int q : config.grids.q_grid) {
        const int clipped = std::clamp(q, 1, n_train);
        if (realized.empty() || realized.back() != clipped) {
          realized.push_back(clipped);
        }
      }
      report.grids.q_grid = realized;
    } else {
      report.grids.q_grid = learners::kpca_q_grid(n_train, config.q_grid_cap);
    }
    report.ensemble = {"gmm", "svdd", "gp", "kpca"};
  }

  std::vector<double> aucs;
  std::vector<double> gmeans;
  for (const auto& r : report.repeats) {
    aucs.push_back(r.test_auc);
    gmeans.push_back(r.test_gmean);
  }
  report.fused_auc = aggregate(aucs);
  report.fused_gmean = aggregate(gmeans);

  for (std::size_t b = 0; b < report.repeats.front().baselines.size(); ++b) {
    std::vector<double> values;
    for (const auto& r : report.repeats) {
      values.push_back(r.baselines[b].test_auc);
    }
    report.baseline_auc.emplace_back(report.repeats.front().baselines[b].name,
                                     aggregate(values));
  }
  return report;
}

SweepResult run_sweep(const Dataset& dataset, const BenchmarkConfig& config) {
  SweepResult result;
  result.joint = run_benchmark(dataset, config);
  for (double p : config.grids.p_grid) {
    BenchmarkConfig single = config;
    single.grids.p_grid = {p};
    result.per_p.emplace_back(p, run_benchmark(dataset, single));
  }
  return result;
}

std::pair<core::FusionModel, solver::SolveTrace> fit_fusion_model(
    const Eigen::MatrixXd& raw_scores, const Eigen::VectorXd& orientation,
    const core::LabelVector& labels, int rho,
    const solver::SolverConfig& solver_config, double threshold) {
  if (raw_scores.rows() != labels.size()) {
    throw core::DimensionError("score matrix has " +
                               std::to_string(raw_scores.rows()) +
                               " rows, label vector has " +
                               std::to_string(labels.size()));
  }
  if (orientation.size() != raw_scores.cols()) {
    throw core::DimensionError("orientation has " +
                               std::to_string(orientation.size()) +
                               " entries for " +
                               std::to_string(raw_scores.cols()) +
                               " score columns");
  }
  for (Eigen::Index c = 0; c < orientation.size(); ++c) {
    if (orientation[c] != 1.0 && orientation[c] != -1.0) {
      throw std::invalid_argument("orientation entries must be +1 or -1");
    }
  }

  Eigen::MatrixXd oriented = raw_scores;
  for (Eigen::Index c = 0; c < oriented.cols(); ++c) {
    oriented.col(c) *= orientation[c];
  }
  const auto states = fit_normalizers(oriented, rho);
  const core::ScoreMatrix normalized(apply_normalizers(oriented, states));
  auto [weights, trace] = fw_solve(normalized, labels, solver_config);

  core::FusionModel model{std::move(weights), threshold, orientation, states,
                          solver::fw_init(raw_scores.cols(), solver_config.p)};
  model.validate();
  return {std::move(model), std::move(trace)};
}

}  // namespace lpfusion::eval
