#include "solver/frank_wolfe.hpp"

#include <cmath>
#include <string>

#include "solver/lmo.hpp"

namespace lpfusion::solver {

const char* to_string(Termination reason) {
  switch (reason) {
    case Termination::kMaxIters:
      return "max-iters";
    case Termination::kGap:
      return "gap";
    case Termination::kPrecision:
      return "precision";
    case Termination::kZeroSubgradient:
      return "zero-subgradient";
  }
  return "unknown";
}

Eigen::VectorXd fw_init(Eigen::Index r, double p) {
  const double value = std::isinf(p)
                           ? 1.0
                           : std::pow(static_cast<double>(r), -1.0 / p);
  return Eigen::VectorXd::Constant(r, value);
}

double fw_step_size(int t) { return 2.0 / (2.0 + static_cast<double>(t)); }

namespace {

void validate_config(const SolverConfig& config) {
  if (!(config.p >= 1.0)) {
    throw std::invalid_argument("fw_solve: p must be >= 1, got " +
                                std::to_string(config.p));
  }
  if (config.max_iters < 1) {
    throw std::invalid_argument("fw_solve: max_iters must be >= 1, got " +
                                std::to_string(config.max_iters));
  }
  if (config.gap_tol < 0.0 || config.precision_tol < 0.0) {
    throw std::invalid_argument("fw_solve: tolerances must be >= 0");
  }
}

// Objective value and the per-sample coefficients a_i such that the
// (sub)gradient is -S^T a.
double loss_pass(const Eigen::VectorXd& margins, const Eigen::VectorXi& labels,
                 Loss loss, Eigen::VectorXd& coeffs) {
  double objective = 0.0;
  for (Eigen::Index i = 0; i < margins.size(); ++i) {
    const double y = labels[i];
    const double residual = 1.0 - y * margins[i];
    if (loss == Loss::kHinge) {
      if (residual > 0.0) {
        objective += residual;
        coeffs[i] = y;
      } else {
        coeffs[i] = 0.0;
      }
    } else {
      objective += residual * residual;
      coeffs[i] = 2.0 * residual * y;
    }
  }
  return objective;
}

}  // namespace

std::pair<core::WeightVector, SolveTrace> fw_solve(
    const core::ScoreMatrix& scores, const core::LabelVector& labels,
    const SolverConfig& config) {
  validate_config(config);
  if (scores.samples() != labels.size()) {
    throw core::DimensionError(
        "fw_solve: score matrix has " + std::to_string(scores.samples()) +
        " rows, label vector has " + std::to_string(labels.size()));
  }

  const Eigen::MatrixXd& values = scores.values();
  const Eigen::Index r = scores.classifiers();

  Eigen::VectorXd omega = fw_init(r, config.p);
  Eigen::VectorXd coeffs(scores.samples());
  SolveTrace trace;
  trace.entries.reserve(static_cast<std::size_t>(config.max_iters));

  for (int t = 1; t <= config.max_iters; ++t) {
    const Eigen::VectorXd margins = values * omega;
    const double objective =
        loss_pass(margins, labels.labels(), config.loss, coeffs);
    const Eigen::VectorXd grad = -(values.transpose() * coeffs);
    const double gamma = fw_step_size(t);

    const auto z = lmo_lp_ball(grad, config.p);
    if (!z) {
      // Zero subgradient: omega already minimizes the unconstrained loss.
      trace.entries.push_back({t, objective, 0.0, gamma});
      if (config.record_iterates) trace.iterates.push_back(omega);
      trace.termination = Termination::kZeroSubgradient;
      break;
    }

    const double gap = duality_gap(omega, *z, grad);
    trace.entries.push_back({t, objective, gap, gamma});
    if (config.record_iterates) trace.iterates.push_back(omega);

    if (gap <= config.gap_tol) {
      trace.termination = Termination::kGap;
      break;
    }
    if (t == config.max_iters) {
      // Stop on the certified iterate: the last trace row's gap bounds the
      // suboptimality of the returned weights.
      trace.termination = Termination::kMaxIters;
      break;
    }

    const Eigen::VectorXd next = (1.0 - gamma) * omega + gamma * (*z);
    const double change = (next - omega).cwiseAbs().maxCoeff();
    omega = next;
    if (change <= config.precision_tol) {
      if (config.record_iterates) trace.iterates.push_back(omega);
      trace.termination = Termination::kPrecision;
      break;
    }
  }

  return {core::WeightVector(omega, config.p), std::move(trace)};
}

}  // namespace lpfusion::solver
