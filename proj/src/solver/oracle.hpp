#pragma once

#include <Eigen/Dense>
#include <cstdint>

#include "core/types.hpp"
#include "solver/frank_wolfe.hpp"

namespace lpfusion::solver {

struct OracleResult {
  Eigen::VectorXd omega;
  double objective;
};

// Brute-force reference minimizer used to certify fw_solve at desk scale
// (R <= 4). Draws `budget` points uniformly in [-1,1]^R, rescales any point
// outside the lp ball onto its boundary, and evaluates the loss there as
// well as at the Frank-Wolfe start point and all +/- unit coordinate
// vectors. Deterministic given the seed.
OracleResult sampling_oracle(const core::ScoreMatrix& scores,
                             const core::LabelVector& labels, double p,
                             std::int64_t budget, std::uint64_t seed,
                             Loss loss = Loss::kHinge);

}  // namespace lpfusion::solver
