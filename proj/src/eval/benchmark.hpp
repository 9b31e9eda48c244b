#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "core/objective.hpp"
#include "core/types.hpp"
#include "eval/metrics.hpp"
#include "eval/splits.hpp"
#include "learners/learners.hpp"
#include "normalize/normalize.hpp"
#include "solver/frank_wolfe.hpp"

namespace lpfusion::eval {

// A benchmark input: either raw features (the built-in learners produce the
// ensemble) or a precomputed score matrix with one column per classifier.
struct Dataset {
  enum class Kind { kFeatures, kScores };

  Kind kind = Kind::kFeatures;
  Eigen::MatrixXd x;  // n x d features or n x R raw scores
  core::LabelVector labels;
  Eigen::VectorXd orientation;            // per column, scores datasets only
  std::vector<std::string> column_names;  // scores datasets only

  static Dataset features(Eigen::MatrixXd x, core::LabelVector labels);
  static Dataset scores(Eigen::MatrixXd x, core::LabelVector labels,
                        Eigen::VectorXd orientation,
                        std::vector<std::string> column_names = {});
};

std::vector<double> default_p_grid();    // {32/31, ..., 100}
std::vector<int> default_rho_grid();     // {1, ..., 10}
std::vector<double> default_sigma_grid();

struct Grids {
  std::vector<double> p_grid;
  std::vector<int> rho_grid;
  std::vector<double> sigma_grid;
  std::vector<int> q_grid;  // empty = derive {2,6,10,...} from train size
};

Grids default_grids();

struct BenchmarkConfig {
  Scenario scenario = Scenario::kPure;
  int n_repeats = 10;
  std::uint64_t seed = 0;
  Grids grids;
  solver::SolverConfig solver;  // solver.p is overridden per grid point
  int threads = 0;              // 0 = hardware concurrency
  int q_grid_cap = 24;          // thinning cap for the automatic q grid
};

struct SelectedConfig {
  double p = 2.0;
  int rho = 1;
  double sigma = 0.0;  // 0 when the dataset is a precomputed score matrix
  int q = 0;           // likewise
  double val_auc = 0.0;
};

struct Confusion {
  std::int64_t tp = 0;
  std::int64_t fn = 0;
  std::int64_t tn = 0;
  std::int64_t fp = 0;
};

struct BaselineResult {
  std::string name;
  double sigma = 0.0;
  int q = 0;
  int rho = 0;
  double val_auc = 0.0;
  double test_auc = 0.0;
};

struct RepeatResult {
  int repeat = 0;
  SplitPlan plan;
  SelectedConfig chosen;
  double threshold = 1.0;
  Eigen::VectorXd omega;
  double test_auc = 0.0;
  double test_gmean = 0.0;
  Confusion confusion;
  std::vector<BaselineResult> baselines;
};

struct Aggregate {
  double mean = 0.0;
  double stddev = 0.0;  // sample standard deviation over repeats
};

Aggregate aggregate(const std::vector<double>& values);

struct ExperimentReport {
  Scenario scenario = Scenario::kPure;
  std::uint64_t seed = 0;
  int n_repeats = 0;
  Grids grids;  // as realized (automatic q grid filled in)
  solver::SolverConfig solver;
  Dataset::Kind dataset_kind = Dataset::Kind::kFeatures;
  Eigen::Index n_samples = 0;
  Eigen::Index n_columns = 0;  // feature count or classifier count
  Eigen::Index n_targets = 0;
  Eigen::Index n_negatives = 0;
  std::vector<std::string> ensemble;  // classifier names, in fusion order
  std::vector<RepeatResult> repeats;
  Aggregate fused_auc;
  Aggregate fused_gmean;
  std::vector<std::pair<std::string, Aggregate>> baseline_auc;
};

// The §4.2 protocol: split, select hyperparameters on validation AUC,
// report test AUC and G-mean per repeat plus single-learner and sum-rule
// baselines, aggregated as mean and standard deviation.
ExperimentReport run_benchmark(const Dataset& dataset,
                               const BenchmarkConfig& config);

struct SweepResult {
  ExperimentReport joint;  // model selection over the whole p grid
  std::vector<std::pair<double, ExperimentReport>> per_p;
};

// run_benchmark once with the full p grid and once per p value; the per-p
// reports carry the learned weight vectors (the weight-versus-p data).
SweepResult run_sweep(const Dataset& dataset, const BenchmarkConfig& config);

// One-shot fusion fit without the split protocol (the train command):
// orient, fit the two-sided min-max normalizers on all rows, solve, and
// package the fitted model together with the solve trace.
std::pair<core::FusionModel, solver::SolveTrace> fit_fusion_model(
    const Eigen::MatrixXd& raw_scores, const Eigen::VectorXd& orientation,
    const core::LabelVector& labels, int rho,
    const solver::SolverConfig& solver_config, double threshold = 1.0);

}  // namespace lpfusion::eval
