#pragma once

#include <Eigen/Dense>
#include <utility>
#include <vector>

#include "core/types.hpp"

namespace lpfusion::solver {

enum class Loss { kHinge, kLeastSquares };

enum class Termination { kMaxIters, kGap, kPrecision, kZeroSubgradient };

const char* to_string(Termination reason);

struct SolverConfig {
  double p = 2.0;            // norm parameter of the constraint ball
  int max_iters = 500;       // T
  double gap_tol = 0.0;      // stop once the duality gap is <= this
  double precision_tol = 1e-3;  // stop once max|w_{t+1}-w_t| is <= this
  Loss loss = Loss::kHinge;
  bool record_iterates = false;  // keep every omega_t in the trace
};

struct TraceEntry {
  int t;
  double objective;
  double gap;
  double step;
};

struct SolveTrace {
  std::vector<TraceEntry> entries;
  Termination termination = Termination::kMaxIters;
  std::vector<Eigen::VectorXd> iterates;  // only when record_iterates

  double final_gap() const { return entries.empty() ? 0.0 : entries.back().gap; }
  double final_objective() const {
    return entries.empty() ? 0.0 : entries.back().objective;
  }
};

// Start point R^{-1/p} * ones (norm exactly 1); for p = inf this is the
// all-ones vector.
Eigen::VectorXd fw_init(Eigen::Index r, double p);

// Open-loop step size 2/(2+t) with t counted from 1.
double fw_step_size(int t);

// Frank-Wolfe solve of
//   min sum_i loss(1 - y_i s_i^T omega)  s.t.  ||omega||_p <= 1.
//
// Iterates follow omega <- (1-gamma) omega + gamma z with z from the lp-ball
// LMO. One trace row is recorded per iteration, always describing the
// iterate the row's gap certifies; the returned weights are the iterate of
// the last recorded row (except after a precision stop, where the final
// sub-tolerance step has already been applied).
std::pair<core::WeightVector, SolveTrace> fw_solve(
    const core::ScoreMatrix& scores, const core::LabelVector& labels,
    const SolverConfig& config);

}  // namespace lpfusion::solver
