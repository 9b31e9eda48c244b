#include <doctest.h>

#include <Eigen/Dense>

#include "core/objective.hpp"
#include "core/rng.hpp"
#include "core/types.hpp"

using namespace lpfusion;

namespace {

Eigen::VectorXd vec(std::initializer_list<double> values) {
  Eigen::VectorXd v(static_cast<Eigen::Index>(values.size()));
  Eigen::Index i = 0;
  for (double x : values) v[i++] = x;
  return v;
}

Eigen::VectorXi ivec(std::initializer_list<int> values) {
  Eigen::VectorXi v(static_cast<Eigen::Index>(values.size()));
  Eigen::Index i = 0;
  for (int x : values) v[i++] = x;
  return v;
}

// Model with identity-like normalizers on [0,1] and target-positive
// orientation, so predict() reduces to thresholding s.omega.
core::FusionModel make_model(const Eigen::VectorXd& omega, double p,
                             double threshold = 1.0) {
  const auto r = omega.size();
  std::vector<normalize::TwoSidedMinMaxState> normalizers(
      static_cast<std::size_t>(r));
  for (auto& state : normalizers) {
    state.lower = 0.0;
    state.upper = 1.0;
    state.rho = 1;
    state.degenerate = false;
  }
  return core::FusionModel{core::WeightVector(omega, p), threshold,
                           Eigen::VectorXd::Ones(r), normalizers,
                           Eigen::VectorXd()};
}

core::ScoreMatrix matrix(std::initializer_list<std::initializer_list<double>> rows) {
  const auto n = static_cast<Eigen::Index>(rows.size());
  const auto r = static_cast<Eigen::Index>(rows.begin()->size());
  Eigen::MatrixXd m(n, r);
  Eigen::Index i = 0;
  for (const auto& row : rows) {
    Eigen::Index j = 0;
    for (double x : row) m(i, j++) = x;
    ++i;
  }
  return core::ScoreMatrix(m);
}

}  // namespace

TEST_CASE("lp_norm handles the whole p range") {
  const Eigen::VectorXd v = vec({3.0, -4.0});
  CHECK(core::lp_norm(v, 1.0) == doctest::Approx(7.0));
  CHECK(core::lp_norm(v, 2.0) == doctest::Approx(5.0));
  CHECK(core::lp_norm(v, core::kInf) == doctest::Approx(4.0));
  // Large p with huge entries must not overflow.
  const Eigen::VectorXd big = vec({1e300, -1e300});
  CHECK(std::isfinite(core::lp_norm(big, 100.0)));
  CHECK(core::lp_norm(big, 100.0) ==
        doctest::Approx(1e300 * std::pow(2.0, 0.01)));
  CHECK_THROWS_AS(core::lp_norm(v, 0.5), std::invalid_argument);
}

TEST_CASE("domain type invariants are enforced") {
  CHECK_THROWS_AS(core::ScoreMatrix(Eigen::MatrixXd()), std::invalid_argument);
  Eigen::MatrixXd bad(1, 1);
  bad(0, 0) = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(core::ScoreMatrix{bad}, std::invalid_argument);

  CHECK_THROWS_AS(core::LabelVector(ivec({1, 0})), std::invalid_argument);
  CHECK(core::LabelVector::all_targets(3).pure());
  CHECK_FALSE(core::LabelVector(ivec({1, -1})).pure());

  CHECK_THROWS_AS(core::WeightVector(vec({1.0, 1.0}), 1.0),
                  std::invalid_argument);  // l1 norm 2 > 1
  CHECK_NOTHROW(core::WeightVector(vec({1.0, 1.0}), core::kInf));
  CHECK_THROWS_AS(core::WeightVector(vec({0.5}), 0.9), std::invalid_argument);
}

TEST_CASE("fused_score evaluates the weighted sum") {
  CHECK(core::fused_score(vec({1, 1}), make_model(vec({0, 0}), 2.0)) == 0.0);
  CHECK(core::fused_score(vec({2, 0}), make_model(vec({0.5, 0.5}), 2.0)) ==
        doctest::Approx(1.0));
  CHECK(core::fused_score(vec({1, 2, 3}), make_model(vec({1, 0, 0}), 2.0)) ==
        doctest::Approx(1.0));
  CHECK_THROWS_WITH_AS(
      core::fused_score(vec({1, 2, 3}), make_model(vec({1, 0}), 2.0)),
      doctest::Contains("2"), core::DimensionError);
}

TEST_CASE("fused_score is linear") {
  core::Rng rng(11);
  for (int round = 0; round < 50; ++round) {
    Eigen::VectorXd s1(3), s2(3), omega(3);
    for (int j = 0; j < 3; ++j) {
      s1[j] = rng.uniform(-2, 2);
      s2[j] = rng.uniform(-2, 2);
      omega[j] = rng.uniform(-0.5, 0.5);
    }
    const auto model = make_model(omega, core::kInf);
    const double a = rng.uniform(-2, 2);
    const double b = rng.uniform(-2, 2);
    const double lhs = core::fused_score(a * s1 + b * s2, model);
    const double rhs = a * core::fused_score(s1, model) +
                       b * core::fused_score(s2, model);
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));
  }
}

TEST_CASE("hinge objective examples") {
  const core::LabelVector pos(ivec({1}));
  CHECK(core::hinge_objective(matrix({{1, 1}}), pos, vec({1, 0})) == 0.0);
  CHECK(core::hinge_objective(matrix({{1, 1}}), pos, vec({0, 0})) == 1.0);
  CHECK(core::hinge_objective(matrix({{2, 0}, {0, 2}}),
                              core::LabelVector(ivec({1, -1})),
                              vec({0.5, 0.5})) == doctest::Approx(2.0));
  CHECK_THROWS_AS(
      core::hinge_objective(matrix({{1, 1}}), core::LabelVector(ivec({1, 1})),
                            vec({1, 0})),
      core::DimensionError);
}

TEST_CASE("hinge subgradient examples and margin boundary") {
  const core::LabelVector pos(ivec({1}));
  // Strictly satisfied margins contribute nothing.
  CHECK(core::hinge_subgradient(matrix({{2, 2}}), pos, vec({1, 1})).isZero());
  // A sample exactly on the margin also contributes nothing (strict >).
  CHECK(core::hinge_subgradient(matrix({{1, 1}}), pos, vec({1, 0})).isZero());
  CHECK(core::hinge_subgradient(matrix({{1, 2}}), pos, vec({0, 0}))
            .isApprox(vec({-1, -2})));
  CHECK(core::hinge_subgradient(matrix({{1, 0}}), core::LabelVector(ivec({-1})),
                                vec({0, 0}))
            .isApprox(vec({1, 0})));
}

TEST_CASE("least squares objective examples") {
  const core::LabelVector pos(ivec({1}));
  CHECK(core::least_squares_objective(matrix({{1, 1}}), pos, vec({1, 0})) ==
        0.0);
  CHECK(core::least_squares_objective(matrix({{1, 1}}), pos, vec({0, 0})) ==
        1.0);
  CHECK(core::least_squares_objective(matrix({{2, 0}}),
                                      core::LabelVector(ivec({-1})),
                                      vec({0.5, 0.5})) == doctest::Approx(4.0));
}

TEST_CASE("hinge objective is nonnegative and convex (sampled)") {
  core::Rng rng(23);
  for (int round = 0; round < 40; ++round) {
    const int n = 1 + static_cast<int>(rng.below(8));
    Eigen::MatrixXd s(n, 3);
    Eigen::VectorXi y(n);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < 3; ++j) s(i, j) = rng.uniform(-2, 2);
      y[i] = rng.below(2) == 0 ? 1 : -1;
    }
    const core::ScoreMatrix scores(s);
    const core::LabelVector labels(y);
    Eigen::VectorXd wa(3), wb(3);
    for (int j = 0; j < 3; ++j) {
      wa[j] = rng.uniform(-1, 1);
      wb[j] = rng.uniform(-1, 1);
    }
    const double fa = core::hinge_objective(scores, labels, wa);
    const double fb = core::hinge_objective(scores, labels, wb);
    CHECK(fa >= 0.0);
    const double lambda = rng.uniform();
    const Eigen::VectorXd mid = lambda * wa + (1.0 - lambda) * wb;
    CHECK(core::hinge_objective(scores, labels, mid) <=
          lambda * fa + (1.0 - lambda) * fb + 1e-9);

    // Subgradient inequality f(w') >= f(w) + g(w).(w' - w).
    const Eigen::VectorXd g = core::hinge_subgradient(scores, labels, wa);
    CHECK(fb >= fa + g.dot(wb - wa) - 1e-9);
  }
}

TEST_CASE("predict applies orientation, normalization and the tie rule") {
  const auto model = make_model(vec({1, 1}), core::kInf);
  CHECK(core::predict(vec({0.9, 0.6}), model) == 1);   // fused 1.5
  CHECK(core::predict(vec({0.1, 0.1}), model) == -1);  // fused 0.2
  CHECK(core::predict(vec({0.5, 0.5}), model) == -1);  // exactly at threshold

  // Novelty orientation flips the raw score before normalizing.
  auto novelty = make_model(vec({1.0}), core::kInf, 0.5);
  novelty.orientation = vec({-1.0});
  novelty.normalizers[0].lower = -1.0;
  novelty.normalizers[0].upper = 0.0;  // oriented score -raw in [-1, 0]
  CHECK(core::predict(vec({0.1}), novelty) == 1);   // low novelty => target
  CHECK(core::predict(vec({0.9}), novelty) == -1);  // high novelty => anomaly

  core::FusionModel unfitted{core::WeightVector(vec({1, 0}), 2.0),
                             1.0,
                             Eigen::VectorXd(),
                             {},
                             Eigen::VectorXd()};
  CHECK_THROWS_AS(core::predict(vec({0.5, 0.5}), unfitted),
                  std::invalid_argument);
}

TEST_CASE("predict is invariant under sign-preserving weight changes") {
  // Both weight vectors give a fused score on the same side of the
  // threshold for these inputs.
  const auto model_a = make_model(vec({0.8, 0.0}), core::kInf, 0.5);
  const auto model_b = make_model(vec({0.0, 0.8}), core::kInf, 0.5);
  for (double value : {0.9, 0.8, 0.2, 0.05}) {
    const Eigen::VectorXd s = vec({value, value});
    CHECK(core::predict(s, model_a) == core::predict(s, model_b));
  }
}
