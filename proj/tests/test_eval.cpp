#include <doctest.h>

#include <Eigen/Dense>
#include <algorithm>
#include <set>

#include "core/rng.hpp"
#include "eval/benchmark.hpp"
#include "eval/metrics.hpp"
#include "eval/splits.hpp"
#include "io/serialize.hpp"
#include "testutil.hpp"

using namespace lpfusion;

namespace {

Eigen::VectorXd vec(std::initializer_list<double> values) {
  Eigen::VectorXd v(static_cast<Eigen::Index>(values.size()));
  Eigen::Index i = 0;
  for (double x : values) v[i++] = x;
  return v;
}

// Direct pair-counting AUC used as the oracle for the rank implementation.
double auc_by_pairs(const Eigen::VectorXd& pos, const Eigen::VectorXd& neg) {
  double total = 0.0;
  for (Eigen::Index i = 0; i < pos.size(); ++i) {
    for (Eigen::Index j = 0; j < neg.size(); ++j) {
      if (pos[i] > neg[j]) {
        total += 1.0;
      } else if (pos[i] == neg[j]) {
        total += 0.5;
      }
    }
  }
  return total / (static_cast<double>(pos.size()) *
                  static_cast<double>(neg.size()));
}

// Small fast grids for protocol tests.
eval::BenchmarkConfig small_config(eval::Scenario scenario, int repeats,
                                   std::uint64_t seed) {
  eval::BenchmarkConfig config;
  config.scenario = scenario;
  config.n_repeats = repeats;
  config.seed = seed;
  config.grids.p_grid = {32.0 / 31.0, 2.0, 100.0};
  config.grids.rho_grid = {5};
  config.grids.sigma_grid = {0.5, 1.0};
  config.grids.q_grid = {2};
  config.solver.max_iters = 300;
  return config;
}

}  // namespace

TEST_CASE("auc examples") {
  CHECK(eval::auc(vec({0.9, 0.8}), vec({0.1, 0.2})) == 1.0);
  CHECK(eval::auc(vec({0.8, 0.4}), vec({0.6, 0.2})) == doctest::Approx(0.75));
  CHECK(eval::auc(vec({0.5}), vec({0.5})) == 0.5);
  CHECK_THROWS_AS(eval::auc(Eigen::VectorXd(), vec({0.5})),
                  std::invalid_argument);
  Eigen::VectorXd bad(1);
  bad[0] = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(eval::auc(bad, vec({0.5})), std::invalid_argument);
}

TEST_CASE("auc equals pair counting, with ties") {
  core::Rng rng(3);
  for (int round = 0; round < 30; ++round) {
    const int np = 1 + static_cast<int>(rng.below(20));
    const int nn = 1 + static_cast<int>(rng.below(20));
    Eigen::VectorXd pos(np), neg(nn);
    // Quantized scores make cross-class ties common.
    for (int i = 0; i < np; ++i) pos[i] = std::floor(rng.uniform(0, 10)) / 10.0;
    for (int i = 0; i < nn; ++i) neg[i] = std::floor(rng.uniform(0, 10)) / 10.0;
    CHECK(eval::auc(pos, neg) ==
          doctest::Approx(auc_by_pairs(pos, neg)).epsilon(1e-12));
  }
}

TEST_CASE("auc is invariant under strictly increasing transforms") {
  core::Rng rng(5);
  Eigen::VectorXd pos(15), neg(12);
  for (Eigen::Index i = 0; i < pos.size(); ++i) pos[i] = rng.normal();
  for (Eigen::Index i = 0; i < neg.size(); ++i) neg[i] = rng.normal() - 0.5;
  const double base = eval::auc(pos, neg);
  CHECK(eval::auc(pos.array().exp(), neg.array().exp()) ==
        doctest::Approx(base).epsilon(1e-12));
  CHECK(eval::auc(3.0 * pos.array() + 7.0, 3.0 * neg.array() + 7.0) ==
        doctest::Approx(base).epsilon(1e-12));
  // Without ties, swapping the classes complements the statistic.
  CHECK(eval::auc(neg, pos) == doctest::Approx(1.0 - base).epsilon(1e-12));
}

TEST_CASE("gmean examples") {
  CHECK(eval::gmean(10, 0, 8, 0) == 1.0);
  CHECK(eval::gmean(10, 0, 81, 19) == doctest::Approx(0.9));
  CHECK(eval::gmean(0, 5, 3, 1) == 0.0);
  CHECK_THROWS_AS(eval::gmean(0, 0, 3, 1), std::invalid_argument);
  CHECK_THROWS_AS(eval::gmean(1, 1, 0, 0), std::invalid_argument);
  CHECK_THROWS_AS(eval::gmean(-1, 1, 1, 1), std::invalid_argument);
}

TEST_CASE("make_splits follows the protocol proportions") {
  Eigen::VectorXi y(150);
  y.head(100).setConstant(1);
  y.tail(50).setConstant(-1);
  const core::LabelVector labels(y);

  const auto pure = eval::make_splits(labels, eval::Scenario::kPure, 10, 42);
  CHECK(pure.size() == 10);
  for (const auto& plan : pure) {
    CHECK(plan.train_targets.size() == 70);
    CHECK(plan.val_targets.size() == 20);
    CHECK(plan.test_targets.size() == 10);
    CHECK(plan.train_negatives.empty());
    CHECK(plan.val_negatives.size() == 25);
    CHECK(plan.test_negatives.size() == 25);

    // Disjoint and covering.
    std::set<int> seen;
    for (const auto* part :
         {&plan.train_targets, &plan.train_negatives, &plan.val_targets,
          &plan.val_negatives, &plan.test_targets, &plan.test_negatives}) {
      for (int idx : *part) {
        CHECK(seen.insert(idx).second);
      }
    }
    CHECK(seen.size() == 150);
  }

  const auto nonpure =
      eval::make_splits(labels, eval::Scenario::kNonPure, 3, 42);
  for (const auto& plan : nonpure) {
    CHECK(plan.train_negatives.size() == 12);  // floor(25/2)
    CHECK(plan.val_negatives.size() == 13);
    CHECK(plan.test_negatives.size() == 25);
  }

  // Determinism and per-repeat variation.
  const auto again = eval::make_splits(labels, eval::Scenario::kPure, 10, 42);
  for (std::size_t i = 0; i < 10; ++i) {
    CHECK(pure[i].train_targets == again[i].train_targets);
    CHECK(pure[i].val_negatives == again[i].val_negatives);
  }
  CHECK(pure[0].train_targets != pure[1].train_targets);

  Eigen::VectorXi tiny(9);
  tiny.setConstant(1);
  CHECK_THROWS_AS(eval::make_splits(core::LabelVector(tiny),
                                    eval::Scenario::kPure, 1, 0),
                  std::invalid_argument);
}

TEST_CASE("fit_fusion_model records the Alg-1 initialization") {
  core::Rng rng(9);
  Eigen::MatrixXd raw(30, 4);
  for (Eigen::Index i = 0; i < raw.size(); ++i) {
    raw(i / 4, i % 4) = rng.uniform(0, 5);
  }
  solver::SolverConfig config;
  config.p = 2.0;
  const auto [model, trace] = eval::fit_fusion_model(
      raw, Eigen::VectorXd::Constant(4, -1.0),
      core::LabelVector::all_targets(30), 5, config);
  CHECK(model.omega_init.isApproxToConstant(0.5));  // 4^{-1/2}
  CHECK(model.classifiers() == 4);
  CHECK(core::lp_norm(model.weights.omega(), 2.0) <= 1.0 + 1e-9);
  CHECK(trace.entries.size() >= 1);
}

TEST_CASE("selection puts its weight on the signal classifier") {
  // Column 0 separates perfectly, column 1 is noise.
  core::Rng rng(13);
  const int n = 200;
  Eigen::MatrixXd s(n, 2);
  Eigen::VectorXi y(n);
  for (int i = 0; i < n; ++i) {
    const bool target = i < 140;
    y[i] = target ? 1 : -1;
    s(i, 0) = target ? rng.uniform(0.7, 1.0) : rng.uniform(0.0, 0.3);
    s(i, 1) = rng.uniform(0.0, 1.0);
  }
  const auto dataset = eval::Dataset::scores(
      s, core::LabelVector(y), Eigen::VectorXd::Constant(2, 1.0),
      {"signal", "noise"});

  eval::BenchmarkConfig config;
  config.n_repeats = 3;
  config.seed = 11;
  config.grids.p_grid = eval::default_p_grid();
  config.grids.rho_grid = {5};
  config.grids.sigma_grid = {1.0};
  config.solver.max_iters = 400;
  const auto report = eval::run_benchmark(dataset, config);
  for (const auto& repeat : report.repeats) {
    const double mass = repeat.omega.cwiseAbs().sum();
    CHECK(std::abs(repeat.omega[0]) / mass >= 0.9);
  }
}

TEST_CASE("selection tie-break prefers smaller p then smaller rho") {
  // Two identical classifiers: every configuration achieves the same
  // validation AUC, so the tie-break decides.
  core::Rng rng(17);
  const int n = 80;
  Eigen::MatrixXd s(n, 2);
  Eigen::VectorXi y(n);
  for (int i = 0; i < n; ++i) {
    const bool target = i < 60;
    y[i] = target ? 1 : -1;
    const double score = target ? rng.uniform(0.6, 1.0) : rng.uniform(0.0, 0.4);
    s(i, 0) = score;
    s(i, 1) = score;
  }
  const auto dataset = eval::Dataset::scores(
      s, core::LabelVector(y), Eigen::VectorXd::Constant(2, 1.0));

  eval::BenchmarkConfig config;
  config.n_repeats = 2;
  config.seed = 3;
  config.grids.p_grid = {2.0, 100.0};
  config.grids.rho_grid = {2, 5};
  config.grids.sigma_grid = {1.0};
  const auto report = eval::run_benchmark(dataset, config);
  for (const auto& repeat : report.repeats) {
    CHECK(repeat.chosen.p == 2.0);
    CHECK(repeat.chosen.rho == 2);
  }

  // A singleton grid is returned as-is.
  eval::BenchmarkConfig singleton = config;
  singleton.grids.p_grid = {4.0};
  singleton.grids.rho_grid = {7};
  const auto single = eval::run_benchmark(dataset, singleton);
  CHECK(single.repeats[0].chosen.p == 4.0);
  CHECK(single.repeats[0].chosen.rho == 7);
}

TEST_CASE("benchmark is deterministic and thread-count independent") {
  const auto data = testutil::two_blob(60, 30, 3, 2.5, 7);
  const auto dataset =
      eval::Dataset::features(data.x, core::LabelVector(data.y));
  auto config = small_config(eval::Scenario::kPure, 4, 99);

  config.threads = 1;
  const auto a = eval::run_benchmark(dataset, config);
  config.threads = 2;
  const auto b = eval::run_benchmark(dataset, config);
  CHECK(io::report_to_text(a) == io::report_to_text(b));

  const auto c = eval::run_benchmark(dataset, config);
  CHECK(io::report_to_text(b) == io::report_to_text(c));
}

TEST_CASE("separable features give a perfect fused AUC on every repeat") {
  const auto data = testutil::two_blob(70, 30, 3, 7.0, 21);
  const auto dataset =
      eval::Dataset::features(data.x, core::LabelVector(data.y));
  const auto report =
      eval::run_benchmark(dataset, small_config(eval::Scenario::kPure, 5, 13));
  for (const auto& repeat : report.repeats) {
    CHECK(repeat.test_auc == 1.0);
  }
  CHECK(report.fused_auc.mean == 1.0);
  CHECK(report.fused_gmean.mean >= 0.95);
}

TEST_CASE("fusion does not fall behind the best single learner") {
  const auto data = testutil::two_blob(80, 40, 4, 2.2, 5);
  const auto dataset =
      eval::Dataset::features(data.x, core::LabelVector(data.y));
  const auto report =
      eval::run_benchmark(dataset, small_config(eval::Scenario::kPure, 5, 31));
  double best_single = 0.0;
  for (const auto& [name, agg] : report.baseline_auc) {
    if (name != "sum_rule") {
      best_single = std::max(best_single, agg.mean);
    }
  }
  CHECK(report.fused_auc.mean >= best_single - 0.02);
}

TEST_CASE("informative negatives help the non-pure scenario") {
  const auto data = testutil::two_blob(120, 60, 4, 2.0, 77);
  const auto dataset =
      eval::Dataset::features(data.x, core::LabelVector(data.y));
  const auto pure = eval::run_benchmark(
      dataset, small_config(eval::Scenario::kPure, 5, 123));
  const auto nonpure = eval::run_benchmark(
      dataset, small_config(eval::Scenario::kNonPure, 5, 123));
  CHECK(nonpure.fused_auc.mean >= pure.fused_auc.mean - 0.005);
}

TEST_CASE("sweep produces one report per p value") {
  const auto data = testutil::asymmetric_ensemble(80, 40, 3);
  const auto dataset = eval::Dataset::scores(
      data.s, core::LabelVector(data.y), Eigen::VectorXd::Constant(4, 1.0));
  eval::BenchmarkConfig config;
  config.n_repeats = 2;
  config.seed = 8;
  config.grids.p_grid = {32.0 / 31.0, 2.0, 100.0};
  config.grids.rho_grid = {5};
  config.grids.sigma_grid = {1.0};
  config.solver.max_iters = 400;
  const auto sweep = eval::run_sweep(dataset, config);
  CHECK(sweep.per_p.size() == 3);

  // Weight concentration (l1 mass of the strong classifier) does not
  // increase with p on this engineered ensemble.
  std::vector<double> concentration;
  for (const auto& [p, report] : sweep.per_p) {
    double total = 0.0;
    for (const auto& repeat : report.repeats) {
      total += std::abs(repeat.omega[0]) / repeat.omega.cwiseAbs().sum();
    }
    concentration.push_back(total / static_cast<double>(report.repeats.size()));
  }
  CHECK(concentration[0] >= concentration[1] - 1e-9);
  CHECK(concentration[1] >= concentration[2] - 1e-9);
}

TEST_CASE("aggregate mean and sample standard deviation") {
  const auto agg = eval::aggregate({1.0, 2.0, 3.0, 4.0});
  CHECK(agg.mean == doctest::Approx(2.5));
  CHECK(agg.stddev == doctest::Approx(std::sqrt(5.0 / 3.0)));
  CHECK(eval::aggregate({7.0}).stddev == 0.0);
}
