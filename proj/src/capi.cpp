#include "lpfusion/lpfusion.h"

#include <cstring>
#include <new>
#include <string>

#include "core/objective.hpp"
#include "core/types.hpp"
#include "eval/benchmark.hpp"
#include "eval/metrics.hpp"
#include "io/serialize.hpp"
#include "learners/learners.hpp"
#include "solver/frank_wolfe.hpp"
#include "solver/lmo.hpp"
#include "version.hpp"

using namespace lpfusion;

struct lpf_trace {
  solver::SolveTrace trace;
};

struct lpf_model {
  io::ModelDocument doc;
};

struct lpf_learner {
  learners::BaseLearner learner;
};

namespace {

thread_local std::string g_last_error;

void set_error(const std::string& message) { g_last_error = message; }

template <typename Fn>
lpf_status guarded(Fn&& fn) {
  try {
    return fn();
  } catch (const core::DimensionError& e) {
    set_error(e.what());
    return LPF_ERR_DIMENSION;
  } catch (const io::ParseError& e) {
    set_error(e.what());
    return LPF_ERR_PARSE;
  } catch (const core::NumericalError& e) {
    set_error(e.what());
    return LPF_ERR_NUMERIC;
  } catch (const std::invalid_argument& e) {
    set_error(e.what());
    return LPF_ERR_ARGUMENT;
  } catch (const std::exception& e) {
    set_error(e.what());
    return LPF_ERR_INTERNAL;
  } catch (...) {
    set_error("unknown failure");
    return LPF_ERR_INTERNAL;
  }
}

lpf_status require(bool ok, const char* message) {
  if (!ok) {
    set_error(message);
    return LPF_ERR_ARGUMENT;
  }
  return LPF_OK;
}

Eigen::MatrixXd matrix_from(const double* data, int32_t n, int32_t r) {
  using RowMajor =
      Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
  return Eigen::Map<const RowMajor>(data, n, r);
}

core::LabelVector labels_from(const int32_t* labels, int32_t n) {
  if (labels == nullptr) {
    return core::LabelVector::all_targets(n);
  }
  Eigen::VectorXi y(n);
  for (int32_t i = 0; i < n; ++i) {
    y[i] = labels[i];
  }
  return core::LabelVector(y);
}

solver::SolverConfig solver_config_from(const lpf_solver_config& config) {
  solver::SolverConfig out;
  out.p = config.p;
  out.max_iters = config.max_iters;
  out.gap_tol = config.gap_tol;
  out.precision_tol = config.precision_tol;
  if (config.loss != LPF_LOSS_HINGE && config.loss != LPF_LOSS_LEAST_SQUARES) {
    throw std::invalid_argument("bad loss value " + std::to_string(config.loss));
  }
  out.loss = config.loss == LPF_LOSS_HINGE ? solver::Loss::kHinge
                                           : solver::Loss::kLeastSquares;
  return out;
}

char* copy_string(const std::string& text) {
  char* out = new (std::nothrow) char[text.size() + 1];
  if (out != nullptr) {
    std::memcpy(out, text.c_str(), text.size() + 1);
  }
  return out;
}

nlohmann::ordered_json solver_config_json(const solver::SolverConfig& config) {
  nlohmann::ordered_json out;
  out["p"] = io::p_token(config.p);
  out["iters"] = config.max_iters;
  out["gap_tol"] = config.gap_tol;
  out["precision_tol"] = config.precision_tol;
  out["loss"] =
      config.loss == solver::Loss::kHinge ? "hinge" : "least-squares";
  return out;
}

eval::BenchmarkConfig benchmark_config_from(const lpf_grid_config& config) {
  eval::BenchmarkConfig out;
  if (config.scenario != LPF_SCENARIO_PURE &&
      config.scenario != LPF_SCENARIO_NONPURE) {
    throw std::invalid_argument("bad scenario value " +
                                std::to_string(config.scenario));
  }
  out.scenario = config.scenario == LPF_SCENARIO_PURE
                     ? eval::Scenario::kPure
                     : eval::Scenario::kNonPure;
  out.n_repeats = config.n_repeats > 0 ? config.n_repeats : 10;
  out.seed = config.seed;
  out.threads = config.threads;
  out.solver = solver_config_from(config.solver);
  out.grids = eval::default_grids();
  if (config.p_grid != nullptr && config.p_grid_len > 0) {
    out.grids.p_grid.assign(config.p_grid, config.p_grid + config.p_grid_len);
  }
  if (config.rho_grid != nullptr && config.rho_grid_len > 0) {
    out.grids.rho_grid.assign(config.rho_grid,
                              config.rho_grid + config.rho_grid_len);
  }
  if (config.sigma_grid != nullptr && config.sigma_grid_len > 0) {
    out.grids.sigma_grid.assign(config.sigma_grid,
                                config.sigma_grid + config.sigma_grid_len);
  }
  if (config.q_grid != nullptr && config.q_grid_len > 0) {
    out.grids.q_grid.assign(config.q_grid, config.q_grid + config.q_grid_len);
  }
  return out;
}

eval::Dataset dataset_from(const double* data, int32_t n, int32_t d,
                           const int32_t* labels, int32_t data_kind,
                           const int32_t* orientation) {
  Eigen::MatrixXd x = matrix_from(data, n, d);
  core::LabelVector y = labels_from(labels, n);
  if (data_kind == 0) {
    return eval::Dataset::features(std::move(x), std::move(y));
  }
  if (data_kind != 1) {
    throw std::invalid_argument("data_kind must be 0 (features) or 1 (scores)");
  }
  Eigen::VectorXd orient = Eigen::VectorXd::Constant(d, -1.0);
  if (orientation != nullptr) {
    for (int32_t j = 0; j < d; ++j) {
      orient[j] = orientation[j];
    }
  }
  return eval::Dataset::scores(std::move(x), std::move(y), std::move(orient));
}

}  // namespace

extern "C" {

const char* lpf_last_error(void) { return g_last_error.c_str(); }

const char* lpf_version(void) { return kVersion; }

lpf_status lpf_lmo_lp_ball(const double* grad, int32_t r, double p,
                           double* z_out, int32_t* stationary) {
  if (auto rc = require(grad && z_out && stationary && r > 0,
                        "lpf_lmo_lp_ball: bad arguments"))
    return rc;
  return guarded([&] {
    Eigen::VectorXd g = Eigen::Map<const Eigen::VectorXd>(grad, r);
    const auto z = solver::lmo_lp_ball(g, p);
    *stationary = z ? 0 : 1;
    if (z) {
      Eigen::Map<Eigen::VectorXd>(z_out, r) = *z;
    }
    return LPF_OK;
  });
}

lpf_status lpf_duality_gap(const double* omega, const double* z,
                           const double* grad, int32_t r, double* gap_out) {
  if (auto rc = require(omega && z && grad && gap_out && r > 0,
                        "lpf_duality_gap: bad arguments"))
    return rc;
  return guarded([&] {
    *gap_out = solver::duality_gap(Eigen::Map<const Eigen::VectorXd>(omega, r),
                                   Eigen::Map<const Eigen::VectorXd>(z, r),
                                   Eigen::Map<const Eigen::VectorXd>(grad, r));
    return LPF_OK;
  });
}

lpf_status lpf_hinge_objective(const double* scores, int32_t n, int32_t r,
                               const int32_t* labels, const double* omega,
                               double* out) {
  if (auto rc = require(scores && omega && out && n > 0 && r > 0,
                        "lpf_hinge_objective: bad arguments"))
    return rc;
  return guarded([&] {
    const core::ScoreMatrix s(matrix_from(scores, n, r));
    *out = core::hinge_objective(
        s, labels_from(labels, n),
        Eigen::VectorXd(Eigen::Map<const Eigen::VectorXd>(omega, r)));
    return LPF_OK;
  });
}

lpf_status lpf_hinge_subgradient(const double* scores, int32_t n, int32_t r,
                                 const int32_t* labels, const double* omega,
                                 double* grad_out) {
  if (auto rc = require(scores && omega && grad_out && n > 0 && r > 0,
                        "lpf_hinge_subgradient: bad arguments"))
    return rc;
  return guarded([&] {
    const core::ScoreMatrix s(matrix_from(scores, n, r));
    Eigen::Map<Eigen::VectorXd>(grad_out, r) = core::hinge_subgradient(
        s, labels_from(labels, n),
        Eigen::VectorXd(Eigen::Map<const Eigen::VectorXd>(omega, r)));
    return LPF_OK;
  });
}

lpf_status lpf_least_squares_objective(const double* scores, int32_t n,
                                       int32_t r, const int32_t* labels,
                                       const double* omega, double* out) {
  if (auto rc = require(scores && omega && out && n > 0 && r > 0,
                        "lpf_least_squares_objective: bad arguments"))
    return rc;
  return guarded([&] {
    const core::ScoreMatrix s(matrix_from(scores, n, r));
    *out = core::least_squares_objective(
        s, labels_from(labels, n),
        Eigen::VectorXd(Eigen::Map<const Eigen::VectorXd>(omega, r)));
    return LPF_OK;
  });
}

void lpf_solver_config_init(lpf_solver_config* config) {
  if (config == nullptr) return;
  const solver::SolverConfig defaults;
  config->p = defaults.p;
  config->max_iters = defaults.max_iters;
  config->gap_tol = defaults.gap_tol;
  config->precision_tol = defaults.precision_tol;
  config->loss = LPF_LOSS_HINGE;
}

int32_t lpf_trace_length(const lpf_trace* trace) {
  return trace == nullptr ? 0
                          : static_cast<int32_t>(trace->trace.entries.size());
}

const char* lpf_trace_termination(const lpf_trace* trace) {
  return trace == nullptr ? "" : solver::to_string(trace->trace.termination);
}

lpf_status lpf_trace_entry(const lpf_trace* trace, int32_t index, int32_t* t,
                           double* objective, double* gap, double* step) {
  if (auto rc = require(trace != nullptr, "lpf_trace_entry: null trace"))
    return rc;
  if (index < 0 || index >= lpf_trace_length(trace)) {
    set_error("lpf_trace_entry: index " + std::to_string(index) +
              " out of range");
    return LPF_ERR_ARGUMENT;
  }
  const auto& entry = trace->trace.entries[static_cast<std::size_t>(index)];
  if (t) *t = entry.t;
  if (objective) *objective = entry.objective;
  if (gap) *gap = entry.gap;
  if (step) *step = entry.step;
  return LPF_OK;
}

lpf_status lpf_trace_to_csv(const lpf_trace* trace, char** csv_out) {
  if (auto rc = require(trace && csv_out, "lpf_trace_to_csv: bad arguments"))
    return rc;
  return guarded([&] {
    *csv_out = copy_string(io::trace_to_csv(trace->trace));
    return *csv_out != nullptr ? LPF_OK : LPF_ERR_INTERNAL;
  });
}

void lpf_trace_free(lpf_trace* trace) { delete trace; }

lpf_status lpf_fw_solve(const double* scores, int32_t n, int32_t r,
                        const int32_t* labels, const lpf_solver_config* config,
                        double* omega_out, lpf_trace** trace_out) {
  if (auto rc = require(scores && config && omega_out && n > 0 && r > 0,
                        "lpf_fw_solve: bad arguments"))
    return rc;
  return guarded([&] {
    const core::ScoreMatrix s(matrix_from(scores, n, r));
    auto [weights, trace] =
        solver::fw_solve(s, labels_from(labels, n), solver_config_from(*config));
    Eigen::Map<Eigen::VectorXd>(omega_out, r) = weights.omega();
    if (trace_out != nullptr) {
      *trace_out = new lpf_trace{std::move(trace)};
    }
    return LPF_OK;
  });
}

void lpf_train_config_init(lpf_train_config* config) {
  if (config == nullptr) return;
  lpf_solver_config_init(&config->solver);
  config->rho = 5;
  config->threshold = 1.0;
  config->orientation = -1;
}

lpf_status lpf_model_train(const double* raw_scores, int32_t n, int32_t r,
                           const int32_t* labels,
                           const lpf_train_config* config,
                           lpf_model** model_out, lpf_trace** trace_out) {
  if (auto rc = require(raw_scores && config && model_out && n > 0 && r > 0,
                        "lpf_model_train: bad arguments"))
    return rc;
  if (auto rc = require(config->orientation == 1 || config->orientation == -1,
                        "lpf_model_train: orientation must be +1 or -1"))
    return rc;
  return guarded([&] {
    const Eigen::VectorXd orientation = Eigen::VectorXd::Constant(
        r, static_cast<double>(config->orientation));
    auto [model, trace] = eval::fit_fusion_model(
        matrix_from(raw_scores, n, r), orientation, labels_from(labels, n),
        config->rho, solver_config_from(config->solver), config->threshold);

    nlohmann::ordered_json train_info;
    train_info["samples"] = n;
    train_info["rho"] = config->rho;
    train_info["solver"] = solver_config_json(solver_config_from(config->solver));
    train_info["termination"] = solver::to_string(trace.termination);
    train_info["iterations"] = trace.entries.size();

    *model_out = new lpf_model{{std::move(model), std::move(train_info)}};
    if (trace_out != nullptr) {
      *trace_out = new lpf_trace{std::move(trace)};
    }
    return LPF_OK;
  });
}

int32_t lpf_model_classifiers(const lpf_model* model) {
  return model == nullptr
             ? 0
             : static_cast<int32_t>(model->doc.model.classifiers());
}

lpf_status lpf_model_weights(const lpf_model* model, double* omega_out) {
  if (auto rc = require(model && omega_out, "lpf_model_weights: bad arguments"))
    return rc;
  Eigen::Map<Eigen::VectorXd>(omega_out, model->doc.model.classifiers()) =
      model->doc.model.weights.omega();
  return LPF_OK;
}

lpf_status lpf_model_threshold(const lpf_model* model, double* out) {
  if (auto rc = require(model && out, "lpf_model_threshold: bad arguments"))
    return rc;
  *out = model->doc.model.threshold;
  return LPF_OK;
}

lpf_status lpf_model_decision(const lpf_model* model, const double* raw_scores,
                              int32_t r, double* fused_out) {
  if (auto rc = require(model && raw_scores && fused_out && r > 0,
                        "lpf_model_decision: bad arguments"))
    return rc;
  return guarded([&] {
    const Eigen::VectorXd normalized = model->doc.model.normalize_raw(
        Eigen::Map<const Eigen::VectorXd>(raw_scores, r));
    *fused_out = core::fused_score(normalized, model->doc.model);
    return LPF_OK;
  });
}

lpf_status lpf_model_predict(const lpf_model* model, const double* raw_scores,
                             int32_t r, int32_t* label_out) {
  if (auto rc = require(model && raw_scores && label_out && r > 0,
                        "lpf_model_predict: bad arguments"))
    return rc;
  return guarded([&] {
    *label_out = core::predict(Eigen::Map<const Eigen::VectorXd>(raw_scores, r),
                               model->doc.model);
    return LPF_OK;
  });
}

lpf_status lpf_model_to_text(const lpf_model* model, char** text_out) {
  if (auto rc = require(model && text_out, "lpf_model_to_text: bad arguments"))
    return rc;
  return guarded([&] {
    *text_out = copy_string(io::model_to_text(model->doc));
    return *text_out != nullptr ? LPF_OK : LPF_ERR_INTERNAL;
  });
}

lpf_status lpf_model_from_text(const char* text, lpf_model** model_out) {
  if (auto rc = require(text && model_out, "lpf_model_from_text: bad arguments"))
    return rc;
  return guarded([&] {
    *model_out = new lpf_model{io::model_from_text(text)};
    return LPF_OK;
  });
}

void lpf_model_free(lpf_model* model) { delete model; }

void lpf_string_free(char* text) { delete[] text; }

lpf_status lpf_learner_fit(int32_t kind, const double* features, int32_t n,
                           int32_t d, double sigma, int32_t q, uint64_t seed,
                           lpf_learner** learner_out) {
  if (auto rc = require(features && learner_out && n > 0 && d > 0,
                        "lpf_learner_fit: bad arguments"))
    return rc;
  if (auto rc = require(kind >= LPF_LEARNER_GMM && kind <= LPF_LEARNER_KPCA,
                        "lpf_learner_fit: bad learner kind"))
    return rc;
  return guarded([&] {
    learners::LearnerParams params;
    params.sigma = sigma;
    params.q = q;
    params.seed = seed;
    *learner_out = new lpf_learner{learners::BaseLearner::fit(
        static_cast<learners::LearnerKind>(kind), matrix_from(features, n, d),
        params)};
    return LPF_OK;
  });
}

lpf_status lpf_learner_score(const lpf_learner* learner, const double* features,
                             int32_t m, int32_t d, double* scores_out) {
  if (auto rc = require(learner && features && scores_out && m > 0 && d > 0,
                        "lpf_learner_score: bad arguments"))
    return rc;
  return guarded([&] {
    Eigen::Map<Eigen::VectorXd>(scores_out, m) =
        learner->learner.score_rows(matrix_from(features, m, d));
    return LPF_OK;
  });
}

const char* lpf_learner_warning(const lpf_learner* learner) {
  static thread_local std::string warning;
  warning = learner == nullptr ? "" : learner->learner.warning();
  return warning.c_str();
}

void lpf_learner_free(lpf_learner* learner) { delete learner; }

lpf_status lpf_auc(const double* positive, int32_t n_positive,
                   const double* negative, int32_t n_negative,
                   double* auc_out) {
  if (auto rc = require(positive && negative && auc_out,
                        "lpf_auc: bad arguments"))
    return rc;
  return guarded([&] {
    *auc_out = eval::auc(Eigen::Map<const Eigen::VectorXd>(positive, n_positive),
                         Eigen::Map<const Eigen::VectorXd>(negative, n_negative));
    return LPF_OK;
  });
}

lpf_status lpf_gmean(int64_t tp, int64_t fn, int64_t tn, int64_t fp,
                     double* gmean_out) {
  if (auto rc = require(gmean_out != nullptr, "lpf_gmean: bad arguments"))
    return rc;
  return guarded([&] {
    *gmean_out = eval::gmean(tp, fn, tn, fp);
    return LPF_OK;
  });
}

void lpf_grid_config_init(lpf_grid_config* config) {
  if (config == nullptr) return;
  std::memset(config, 0, sizeof(*config));
  lpf_solver_config_init(&config->solver);
  config->scenario = LPF_SCENARIO_PURE;
  config->n_repeats = 10;
}

lpf_status lpf_benchmark_run(const double* data, int32_t n, int32_t d,
                             const int32_t* labels, int32_t data_kind,
                             const int32_t* orientation,
                             const lpf_grid_config* config, char** report_out) {
  if (auto rc = require(data && labels && config && report_out && n > 0 && d > 0,
                        "lpf_benchmark_run: bad arguments"))
    return rc;
  return guarded([&] {
    const eval::Dataset dataset =
        dataset_from(data, n, d, labels, data_kind, orientation);
    const auto report =
        eval::run_benchmark(dataset, benchmark_config_from(*config));
    *report_out = copy_string(io::report_to_text(report));
    return *report_out != nullptr ? LPF_OK : LPF_ERR_INTERNAL;
  });
}

lpf_status lpf_sweep_run(const double* data, int32_t n, int32_t d,
                         const int32_t* labels, int32_t data_kind,
                         const int32_t* orientation,
                         const lpf_grid_config* config, char** report_out,
                         char** weights_csv_out) {
  if (auto rc = require(data && labels && config && report_out &&
                            weights_csv_out && n > 0 && d > 0,
                        "lpf_sweep_run: bad arguments"))
    return rc;
  return guarded([&] {
    const eval::Dataset dataset =
        dataset_from(data, n, d, labels, data_kind, orientation);
    const auto sweep = eval::run_sweep(dataset, benchmark_config_from(*config));
    *report_out = copy_string(io::sweep_to_text(sweep));
    *weights_csv_out = copy_string(io::sweep_weights_csv(sweep));
    return (*report_out != nullptr && *weights_csv_out != nullptr)
               ? LPF_OK
               : LPF_ERR_INTERNAL;
  });
}

}  // extern "C"
