#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>

#include "core/objective.hpp"
#include "core/rng.hpp"
#include "solver/frank_wolfe.hpp"
#include "solver/lmo.hpp"
#include "solver/oracle.hpp"

using namespace lpfusion;

namespace {

const std::vector<double> kFullPGrid = {1.0,       32.0 / 31.0, 16.0 / 15.0,
                                        8.0 / 7.0, 4.0 / 3.0,   2.0,
                                        4.0,       8.0,         10.0,
                                        100.0,     core::kInf};

Eigen::VectorXd vec(std::initializer_list<double> values) {
  Eigen::VectorXd v(static_cast<Eigen::Index>(values.size()));
  Eigen::Index i = 0;
  for (double x : values) v[i++] = x;
  return v;
}

Eigen::VectorXd random_gradient(core::Rng& rng, int r) {
  Eigen::VectorXd g(r);
  for (int i = 0; i < r; ++i) {
    g[i] = rng.normal() * std::pow(10.0, rng.uniform(-2, 2));
    if (rng.below(8) == 0) g[i] = 0.0;
  }
  if (g.isZero()) g[0] = 1.0;
  return g;
}

Eigen::VectorXd random_feasible(core::Rng& rng, int r, double p) {
  Eigen::VectorXd x(r);
  for (int i = 0; i < r; ++i) x[i] = rng.uniform(-1, 1);
  const double norm = core::lp_norm(x, p);
  if (norm > 1.0) x /= norm;
  return x;
}

struct Instance {
  core::ScoreMatrix scores;
  core::LabelVector labels;
};

Instance random_instance(core::Rng& rng, int n, int r, bool pure) {
  Eigen::MatrixXd s(n, r);
  Eigen::VectorXi y(n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < r; ++j) s(i, j) = rng.uniform(0, 1);
    y[i] = pure || rng.below(4) != 0 ? 1 : -1;
  }
  return {core::ScoreMatrix(s), core::LabelVector(y)};
}

}  // namespace

TEST_CASE("lmo closed forms on [-3, 4]") {
  const Eigen::VectorXd g = vec({-3, 4});
  const auto z2 = solver::lmo_lp_ball(g, 2.0);
  REQUIRE(z2.has_value());
  CHECK((*z2- vec({0.6, -0.8})).cwiseAbs().maxCoeff() < 1e-15);

  const auto z1 = solver::lmo_lp_ball(g, 1.0);
  REQUIRE(z1.has_value());
  CHECK((*z1 - vec({0.0, -1.0})).isZero());

  const auto zinf = solver::lmo_lp_ball(g, core::kInf);
  REQUIRE(zinf.has_value());
  CHECK((*zinf - vec({1.0, -1.0})).isZero());

  // Zeros of the gradient stay zero at p = inf.
  const auto sparse = solver::lmo_lp_ball(vec({0, 5, 0}), core::kInf);
  CHECK((*sparse - vec({0, -1, 0})).isZero());
}

TEST_CASE("lmo stationary and error signals") {
  CHECK_FALSE(solver::lmo_lp_ball(vec({0, 0}), 2.0).has_value());
  CHECK_THROWS_AS(
      solver::lmo_lp_ball(vec({1, std::numeric_limits<double>::quiet_NaN()}), 2.0),
      std::invalid_argument);
  CHECK_THROWS_AS(solver::lmo_lp_ball(vec({1, 1}), 0.5), std::invalid_argument);
}

TEST_CASE("lmo p=1 tie-break picks the lowest index") {
  const auto z = solver::lmo_lp_ball(vec({2, -2, 2}), 1.0);
  CHECK((*z - vec({-1, 0, 0})).isZero());
}

TEST_CASE("lmo feasibility and optimality across the p grid") {
  core::Rng rng(101);
  for (double p : kFullPGrid) {
    for (int round = 0; round < 30; ++round) {
      const int r = 2 + static_cast<int>(rng.below(5));
      const Eigen::VectorXd g = random_gradient(rng, r);
      const auto z = solver::lmo_lp_ball(g, p);
      REQUIRE(z.has_value());
      CHECK(core::lp_norm(*z, p) == doctest::Approx(1.0).epsilon(1e-9));

      const double zg = z->dot(g);
      for (int trial = 0; trial < 200; ++trial) {
        const Eigen::VectorXd x = random_feasible(rng, r, p);
        CHECK(zg <= x.dot(g) + 1e-9);
      }
    }
  }
}

TEST_CASE("lmo p=2 equals the normalized negative gradient") {
  core::Rng rng(7);
  for (int round = 0; round < 100; ++round) {
    const int r = 2 + static_cast<int>(rng.below(5));
    const Eigen::VectorXd g = random_gradient(rng, r);
    const auto z = solver::lmo_lp_ball(g, 2.0);
    CHECK((*z + g / g.norm()).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("lmo near p=1 concentrates on the dominant coordinate") {
  core::Rng rng(13);
  for (int round = 0; round < 50; ++round) {
    const int r = 3 + static_cast<int>(rng.below(3));
    Eigen::VectorXd g(r);
    for (int i = 0; i < r; ++i) g[i] = rng.uniform(-1, 1) * 0.5;
    // Make the max unique by at least a factor of 2.
    const int star = static_cast<int>(rng.below(r));
    g[star] = (rng.below(2) == 0 ? 1.0 : -1.0) * 2.0;

    const auto z1 = solver::lmo_lp_ball(g, 1.0);
    const auto zp = solver::lmo_lp_ball(g, 32.0 / 31.0);
    Eigen::Index argmax1 = 0;
    Eigen::Index argmaxp = 0;
    z1->cwiseAbs().maxCoeff(&argmax1);
    zp->cwiseAbs().maxCoeff(&argmaxp);
    CHECK(argmax1 == star);
    CHECK(argmaxp == star);
    for (Eigen::Index i = 0; i < r; ++i) {
      if (i != star) CHECK(std::abs((*zp)[i]) < 1e-8);
    }
  }
}

TEST_CASE("duality gap examples") {
  CHECK(solver::duality_gap(vec({0.6, -0.8}), vec({0.6, -0.8}), vec({-3, 4})) ==
        0.0);
  CHECK(solver::duality_gap(vec({0, 0}), vec({0.6, -0.8}), vec({-3, 4})) ==
        doctest::Approx(5.0));
  CHECK_THROWS_AS(solver::duality_gap(vec({1}), vec({1, 2}), vec({1, 2})),
                  core::DimensionError);
}

TEST_CASE("fw_init and step size follow the schedule") {
  CHECK(solver::fw_init(4, 2.0).isApproxToConstant(0.5));
  CHECK(solver::fw_init(2, 1.0).isApproxToConstant(0.5));
  CHECK(solver::fw_init(3, core::kInf).isApproxToConstant(1.0));
  CHECK(core::lp_norm(solver::fw_init(5, 8.0 / 7.0), 8.0 / 7.0) ==
        doctest::Approx(1.0));
  CHECK(solver::fw_step_size(1) == doctest::Approx(2.0 / 3.0));
  CHECK(solver::fw_step_size(2) == 0.5);
}

TEST_CASE("fw_solve exits immediately on a zero subgradient") {
  // p = inf starts at the all-ones vector; every margin is already >= 1.
  const core::ScoreMatrix scores(Eigen::MatrixXd::Ones(5, 2));
  const auto labels = core::LabelVector::all_targets(5);
  solver::SolverConfig config;
  config.p = core::kInf;
  const auto [weights, trace] = solver::fw_solve(scores, labels, config);
  CHECK(trace.termination == solver::Termination::kZeroSubgradient);
  CHECK(trace.entries.size() == 1);
  CHECK(trace.entries[0].t == 1);
  CHECK(weights.omega().isApproxToConstant(1.0));
  CHECK(trace.entries[0].objective == 0.0);
}

TEST_CASE("fw_solve concentrates weight on the only useful classifier") {
  Eigen::MatrixXd s(20, 2);
  s.col(0).setOnes();
  s.col(1).setZero();
  const core::ScoreMatrix scores(s);
  const auto labels = core::LabelVector::all_targets(20);
  solver::SolverConfig config;
  config.p = 1.0;
  config.max_iters = 4000;
  config.precision_tol = 0.0;
  const auto [weights, trace] = solver::fw_solve(scores, labels, config);
  CHECK(weights.omega()[0] == doctest::Approx(1.0).epsilon(1e-3));
  CHECK(std::abs(weights.omega()[1]) < 1e-3);
}

TEST_CASE("fw_solve trace records the exact schedule and sound gaps") {
  core::Rng rng(31);
  const auto instance = random_instance(rng, 30, 3, false);
  solver::SolverConfig config;
  config.p = 4.0 / 3.0;
  config.max_iters = 300;
  config.precision_tol = 0.0;
  config.record_iterates = true;
  const auto [weights, trace] = solver::fw_solve(instance.scores,
                                                 instance.labels, config);
  CHECK(trace.entries.size() <= 300);
  for (std::size_t k = 0; k < trace.entries.size(); ++k) {
    const auto& entry = trace.entries[k];
    CHECK(entry.t == static_cast<int>(k) + 1);
    CHECK(entry.step == 2.0 / (2.0 + entry.t));
    CHECK(entry.gap >= -1e-9);
  }
  for (const auto& iterate : trace.iterates) {
    CHECK(core::lp_norm(iterate, config.p) <= 1.0 + 1e-9);
  }
  // The final trace row certifies the returned iterate.
  CHECK(core::hinge_objective(instance.scores, instance.labels,
                              weights.omega()) ==
        doctest::Approx(trace.entries.back().objective));
}

TEST_CASE("fw_solve stop conditions") {
  core::Rng rng(37);
  const auto instance = random_instance(rng, 25, 3, true);

  solver::SolverConfig gap_stop;
  gap_stop.p = 2.0;
  gap_stop.gap_tol = 1e9;
  const auto by_gap = solver::fw_solve(instance.scores, instance.labels,
                                       gap_stop);
  CHECK(by_gap.second.termination == solver::Termination::kGap);
  CHECK(by_gap.second.entries.size() == 1);

  solver::SolverConfig precision_stop;
  precision_stop.p = 2.0;
  precision_stop.precision_tol = 10.0;  // any step is below this
  const auto by_precision = solver::fw_solve(instance.scores, instance.labels,
                                             precision_stop);
  CHECK(by_precision.second.termination == solver::Termination::kPrecision);

  solver::SolverConfig exhaust;
  exhaust.p = 2.0;
  exhaust.max_iters = 17;
  exhaust.precision_tol = 0.0;
  const auto by_iters = solver::fw_solve(instance.scores, instance.labels,
                                         exhaust);
  CHECK(by_iters.second.termination == solver::Termination::kMaxIters);
  CHECK(by_iters.second.entries.size() == 17);

  CHECK_THROWS_AS(
      solver::fw_solve(instance.scores,
                       core::LabelVector::all_targets(instance.labels.size() + 1),
                       exhaust),
      core::DimensionError);
  solver::SolverConfig bad;
  bad.max_iters = 0;
  CHECK_THROWS_AS(solver::fw_solve(instance.scores, instance.labels, bad),
                  std::invalid_argument);
}

TEST_CASE("sampling oracle basics") {
  Eigen::MatrixXd s(1, 2);
  s << 2, 0;
  const core::ScoreMatrix scores(s);
  const auto labels = core::LabelVector::all_targets(1);

  const auto result = solver::sampling_oracle(scores, labels, 2.0, 10000, 4);
  CHECK(result.objective <= 1e-2);  // analytic minimum is 0
  CHECK(result.objective == 0.0);   // the +e1 anchor already reaches it

  // Larger budgets only improve the minimum (prefix property of the stream).
  core::Rng rng(91);
  const auto instance = random_instance(rng, 20, 3, false);
  const auto small = solver::sampling_oracle(instance.scores, instance.labels,
                                             4.0 / 3.0, 10000, 7);
  const auto large = solver::sampling_oracle(instance.scores, instance.labels,
                                             4.0 / 3.0, 100000, 7);
  CHECK(large.objective <= small.objective);

  // Determinism.
  const auto again = solver::sampling_oracle(instance.scores, instance.labels,
                                             4.0 / 3.0, 10000, 7);
  CHECK(again.objective == small.objective);
  CHECK(again.omega == small.omega);

  Eigen::MatrixXd wide(1, 5);
  wide.setOnes();
  CHECK_THROWS_WITH_AS(
      solver::sampling_oracle(core::ScoreMatrix(wide),
                              core::LabelVector::all_targets(1), 2.0, 10000, 0),
      doctest::Contains("desk-scale"), std::invalid_argument);
  CHECK_THROWS_AS(
      solver::sampling_oracle(scores, labels, 2.0, 100, 0),
      std::invalid_argument);
}

TEST_CASE("certificate soundness against the oracle") {
  core::Rng rng(53);
  for (int round = 0; round < 5; ++round) {
    const int r = 2 + static_cast<int>(rng.below(2));
    const auto instance = random_instance(rng, 20 + static_cast<int>(rng.below(20)),
                                          r, round % 2 == 0);
    const double p = kFullPGrid[rng.below(kFullPGrid.size())];
    solver::SolverConfig config;
    config.p = p;
    config.max_iters = 1500;
    config.precision_tol = 0.0;
    const auto [weights, trace] =
        solver::fw_solve(instance.scores, instance.labels, config);
    const auto oracle = solver::sampling_oracle(instance.scores,
                                                instance.labels, p, 100000,
                                                1000 + round);
    const double f_fw = core::hinge_objective(instance.scores, instance.labels,
                                              weights.omega());
    CHECK(f_fw - oracle.objective <= trace.final_gap() + 1e-6);
  }
}

// One strong classifier against two noise classifiers, with negatives that
// contradict the noise columns; the optimum sits on the ball boundary and
// the gap decays cleanly.
Instance conflict_instance() {
  core::Rng rng(5);
  const int n = 40;
  Eigen::MatrixXd s(n, 3);
  Eigen::VectorXi y(n);
  for (int i = 0; i < n; ++i) {
    const bool pos = i < 30;
    y[i] = pos ? 1 : -1;
    s(i, 0) = pos ? rng.uniform(0.7, 1.0) : rng.uniform(0.0, 0.3);
    s(i, 1) = rng.uniform(0.3, 0.7);
    s(i, 2) = rng.uniform(0.3, 0.7);
  }
  return {core::ScoreMatrix(s), core::LabelVector(y)};
}

TEST_CASE("empirical sublinear convergence") {
  const Instance instance = conflict_instance();
  for (double p : {2.0, 4.0 / 3.0}) {
    solver::SolverConfig config;
    config.p = p;
    config.precision_tol = 0.0;

    config.max_iters = 200;
    const auto short_run = solver::fw_solve(instance.scores, instance.labels,
                                            config);
    config.max_iters = 2000;
    const auto long_run = solver::fw_solve(instance.scores, instance.labels,
                                           config);
    CHECK(long_run.second.final_gap() <= short_run.second.final_gap());

    // Gap constant estimated from early iterations: gap_t <= 2C/(t+2).
    double c = 0.0;
    for (std::size_t k = 0; k < 50 && k < long_run.second.entries.size(); ++k) {
      const auto& entry = long_run.second.entries[k];
      c = std::max(c, entry.gap * (entry.t + 2.0) / 2.0);
    }
    CHECK(long_run.second.final_gap() <= 10.0 * c / 2002.0);
  }
}

TEST_CASE("least-squares loss solves to the oracle floor") {
  core::Rng rng(83);
  const auto instance = random_instance(rng, 25, 2, false);
  solver::SolverConfig config;
  config.p = 2.0;
  config.max_iters = 3000;
  config.precision_tol = 0.0;
  config.loss = solver::Loss::kLeastSquares;
  const auto [weights, trace] =
      solver::fw_solve(instance.scores, instance.labels, config);
  const auto oracle =
      solver::sampling_oracle(instance.scores, instance.labels, 2.0, 200000,
                              19, solver::Loss::kLeastSquares);
  const double f_fw = core::least_squares_objective(
      instance.scores, instance.labels, weights.omega());
  CHECK(f_fw <= oracle.objective + 1e-2 * (1.0 + oracle.objective));
}
