// Command-line front end. Links the shared C API only; file parsing and
// report assembly live here.
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <limits>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "csv.hpp"
#include "lpfusion/lpfusion.h"

namespace {

using nlohmann::ordered_json;

struct CApiError {
  lpf_status status;
  std::string message;
};

void check(lpf_status status, const std::string& context) {
  if (status != LPF_OK) {
    throw CApiError{status, context + ": " + lpf_last_error()};
  }
}

double parse_p_token(const std::string& token) {
  if (token == "inf") {
    return std::numeric_limits<double>::infinity();
  }
  const auto slash = token.find('/');
  try {
    if (slash != std::string::npos) {
      const double num = std::stod(token.substr(0, slash));
      const double den = std::stod(token.substr(slash + 1));
      if (den == 0.0) {
        throw cli::InputError("p value divides by zero: '" + token + "'");
      }
      return num / den;
    }
    std::size_t used = 0;
    const double value = std::stod(token, &used);
    if (used != token.size()) {
      throw cli::InputError("bad p value '" + token + "'");
    }
    return value;
  } catch (const std::logic_error&) {
    throw cli::InputError("bad p value '" + token + "'");
  }
}

std::vector<double> parse_p_grid(const std::string& text) {
  std::vector<double> grid;
  for (const auto& token : cli::split(text, ',')) {
    grid.push_back(parse_p_token(cli::trim(token)));
  }
  return grid;
}

std::vector<double> parse_double_list(const std::string& text,
                                      const char* what) {
  std::vector<double> values;
  for (const auto& token : cli::split(text, ',')) {
    try {
      values.push_back(std::stod(cli::trim(token)));
    } catch (const std::logic_error&) {
      throw cli::InputError(std::string("bad ") + what + " value '" +
                            cli::trim(token) + "'");
    }
  }
  return values;
}

std::vector<int32_t> parse_int_list(const std::string& text, const char* what) {
  std::vector<int32_t> values;
  for (const auto& token : cli::split(text, ',')) {
    try {
      values.push_back(std::stoi(cli::trim(token)));
    } catch (const std::logic_error&) {
      throw cli::InputError(std::string("bad ") + what + " value '" +
                            cli::trim(token) + "'");
    }
  }
  return values;
}

std::string resolve_out_dir(const std::string& flag_value) {
  std::string dir = flag_value;
  if (dir.empty()) {
    const char* env = std::getenv("LPFUSION_OUT");
    dir = env != nullptr && *env != '\0' ? env : ".";
  }
  std::filesystem::create_directories(dir);
  return dir;
}

int32_t orientation_sign(const cli::Table& table, const std::string& path) {
  if (table.header.orientation == "target") {
    return 1;
  }
  if (table.header.orientation == "novelty") {
    return -1;
  }
  if (table.header.orientation.empty()) {
    std::cerr << "note: " << path
              << " does not declare an orientation; assuming novelty scores\n";
    return -1;
  }
  throw cli::InputError(path + ": bad orientation '" +
                        table.header.orientation +
                        "' (expected novelty or target)");
}

const std::vector<std::string>& learner_names() {
  static const std::vector<std::string> names{"gmm", "svdd", "gp", "kpca"};
  return names;
}

int32_t learner_kind(const std::string& name) {
  if (name == "gmm") return LPF_LEARNER_GMM;
  if (name == "svdd") return LPF_LEARNER_SVDD;
  if (name == "gp") return LPF_LEARNER_GP;
  if (name == "kpca") return LPF_LEARNER_KPCA;
  throw cli::InputError("unknown learner '" + name +
                        "' (expected all, gmm, svdd, gp or kpca)");
}

// Novelty scores of the requested learners, fitted on the feature table
// itself (column-major assembly into a row-major matrix).
std::vector<double> compute_scores(const cli::Table& features,
                                   const std::vector<std::string>& names,
                                   double sigma, int32_t q, uint64_t seed) {
  const int32_t n = features.rows;
  const int32_t d = features.cols;
  const auto k = static_cast<int32_t>(names.size());
  std::vector<double> scores(static_cast<std::size_t>(n) * k);
  std::vector<double> column(static_cast<std::size_t>(n));
  for (int32_t j = 0; j < k; ++j) {
    lpf_learner* learner = nullptr;
    const int32_t q_eff = q > 0 ? q : std::min<int32_t>(2, n);
    check(lpf_learner_fit(learner_kind(names[static_cast<std::size_t>(j)]),
                          features.values.data(), n, d, sigma, q_eff, seed,
                          &learner),
          "fitting " + names[static_cast<std::size_t>(j)]);
    const std::string warning = lpf_learner_warning(learner);
    if (!warning.empty()) {
      std::cerr << "warning: " << warning << "\n";
    }
    const lpf_status rc =
        lpf_learner_score(learner, features.values.data(), n, d, column.data());
    lpf_learner_free(learner);
    check(rc, "scoring " + names[static_cast<std::size_t>(j)]);
    for (int32_t i = 0; i < n; ++i) {
      scores[static_cast<std::size_t>(i) * k + static_cast<std::size_t>(j)] =
          column[static_cast<std::size_t>(i)];
    }
  }
  return scores;
}

struct ScoreInput {
  std::vector<double> values;  // row-major n x r raw scores
  int32_t rows = 0;
  int32_t cols = 0;
  int32_t orientation = -1;
  std::vector<std::string> columns;
};

// Either the score table itself or, for a features table, the novelty
// scores of all four built-in learners fitted on it.
ScoreInput score_input_from(const cli::Table& table, const std::string& path,
                            double sigma, int32_t q, uint64_t seed) {
  ScoreInput input;
  if (table.header.schema == "scores") {
    input.values = table.values;
    input.rows = table.rows;
    input.cols = table.cols;
    input.orientation = orientation_sign(table, path);
    input.columns = table.header.columns;
  } else if (table.header.schema == "features") {
    input.values = compute_scores(table, learner_names(), sigma, q, seed);
    input.rows = table.rows;
    input.cols = static_cast<int32_t>(learner_names().size());
    input.orientation = -1;
    input.columns = learner_names();
  } else {
    throw cli::InputError(path + ": unsupported schema '" +
                          table.header.schema + "'");
  }
  if (input.columns.empty()) {
    for (int32_t c = 0; c < input.cols; ++c) {
      input.columns.push_back("c" + std::to_string(c));
    }
  }
  return input;
}

std::vector<int32_t> read_labels_checked(const std::string& path,
                                         int32_t rows) {
  const std::vector<int> labels = cli::read_labels(path);
  if (static_cast<int32_t>(labels.size()) != rows) {
    throw cli::InputError("label/row count mismatch: " +
                          std::to_string(rows) + " data rows vs " +
                          std::to_string(labels.size()) + " labels");
  }
  return {labels.begin(), labels.end()};
}

std::string owned_string(char* text) {
  std::string out = text != nullptr ? text : "";
  lpf_string_free(text);
  return out;
}

// ------------------------------------------------------------------
// scores

int cmd_scores(const std::string& features_path, const std::string& learner,
               double sigma, int32_t q, uint64_t seed,
               const std::string& out_flag) {
  const cli::Table table = cli::read_table(features_path);
  if (table.header.schema != "features") {
    throw cli::InputError(features_path + ": expected a features file, got '" +
                          table.header.schema + "'");
  }
  const std::vector<std::string> names =
      learner == "all" ? learner_names()
                       : std::vector<std::string>{learner};
  for (const auto& name : names) {
    learner_kind(name);  // validates
  }
  const std::vector<double> scores =
      compute_scores(table, names, sigma, q, seed);

  const std::string dir = resolve_out_dir(out_flag);
  const std::string path = dir + "/scores.csv";
  cli::write_file(path, cli::scores_to_csv(scores, table.rows,
                                           static_cast<int>(names.size()),
                                           names, "novelty"));
  std::cout << "wrote " << path << " (" << table.rows << " rows, "
            << names.size() << " classifiers)\n";
  return 0;
}

// ------------------------------------------------------------------
// train

int cmd_train(const std::string& data_path, const std::string& labels_path,
              const std::string& p_token, int32_t rho, int32_t iters,
              double gap_tol, double precision_tol, const std::string& loss,
              double threshold, double sigma, int32_t q, uint64_t seed,
              const std::string& out_flag) {
  const cli::Table table = cli::read_table(data_path);
  const ScoreInput input = score_input_from(table, data_path, sigma, q, seed);
  const std::vector<int32_t> labels =
      read_labels_checked(labels_path, input.rows);

  lpf_train_config config;
  lpf_train_config_init(&config);
  config.solver.p = parse_p_token(p_token);
  config.solver.max_iters = iters;
  config.solver.gap_tol = gap_tol;
  config.solver.precision_tol = precision_tol;
  config.solver.loss =
      loss == "ls" ? LPF_LOSS_LEAST_SQUARES : LPF_LOSS_HINGE;
  config.rho = rho;
  config.threshold = threshold;
  config.orientation = input.orientation;

  lpf_model* model = nullptr;
  lpf_trace* trace = nullptr;
  check(lpf_model_train(input.values.data(), input.rows, input.cols,
                        labels.data(), &config, &model, &trace),
        "training");

  char* model_text = nullptr;
  lpf_status rc = lpf_model_to_text(model, &model_text);
  const std::string model_json = owned_string(model_text);
  lpf_model_free(model);
  if (rc != LPF_OK) {
    lpf_trace_free(trace);
    throw CApiError{rc, std::string("serializing model: ") + lpf_last_error()};
  }

  char* trace_text = nullptr;
  rc = lpf_trace_to_csv(trace, &trace_text);
  const std::string trace_csv = owned_string(trace_text);
  const std::string termination = lpf_trace_termination(trace);
  const int32_t iterations = lpf_trace_length(trace);
  lpf_trace_free(trace);
  check(rc, "serializing trace");

  const std::string dir = resolve_out_dir(out_flag);
  cli::write_file(dir + "/model.json", model_json);
  cli::write_file(dir + "/trace.csv", trace_csv);
  std::cout << "wrote " << dir << "/model.json and " << dir << "/trace.csv\n"
            << "terminated after " << iterations << " iterations ("
            << termination << ")\n";
  return 0;
}

// ------------------------------------------------------------------
// eval

int cmd_eval(const std::string& model_path, const std::string& scores_path,
             const std::string& labels_path, const std::string& out_flag) {
  lpf_model* model = nullptr;
  check(lpf_model_from_text(cli::read_file(model_path).c_str(), &model),
        "loading model");

  const cli::Table table = cli::read_table(scores_path);
  const int32_t r = lpf_model_classifiers(model);
  if (table.header.schema != "scores") {
    lpf_model_free(model);
    throw cli::InputError(scores_path +
                          ": expected a scores file (schema=scores)");
  }
  if (table.cols != r) {
    lpf_model_free(model);
    throw cli::InputError("model fuses " + std::to_string(r) +
                          " classifiers, test file has " +
                          std::to_string(table.cols) + " columns");
  }

  std::vector<int32_t> labels;
  std::vector<double> fused(static_cast<std::size_t>(table.rows));
  std::vector<double> pos;
  std::vector<double> neg;
  int64_t tp = 0;
  int64_t fn = 0;
  int64_t tn = 0;
  int64_t fp = 0;
  double threshold = 1.0;
  try {
    labels = read_labels_checked(labels_path, table.rows);
    check(lpf_model_threshold(model, &threshold), "reading threshold");
    for (int32_t i = 0; i < table.rows; ++i) {
      const double* row =
          table.values.data() + static_cast<std::size_t>(i) * table.cols;
      int32_t predicted = 0;
      check(lpf_model_decision(model, row, table.cols,
                               &fused[static_cast<std::size_t>(i)]),
            "scoring row " + std::to_string(i));
      check(lpf_model_predict(model, row, table.cols, &predicted),
            "classifying row " + std::to_string(i));
      if (labels[static_cast<std::size_t>(i)] == 1) {
        pos.push_back(fused[static_cast<std::size_t>(i)]);
        (predicted == 1 ? tp : fn)++;
      } else {
        neg.push_back(fused[static_cast<std::size_t>(i)]);
        (predicted == 1 ? fp : tn)++;
      }
    }
  } catch (...) {
    lpf_model_free(model);
    throw;
  }
  lpf_model_free(model);

  double auc = 0.0;
  check(lpf_auc(pos.data(), static_cast<int32_t>(pos.size()), neg.data(),
                static_cast<int32_t>(neg.size()), &auc),
        "auc");
  double gmean = 0.0;
  check(lpf_gmean(tp, fn, tn, fp, &gmean), "gmean");

  ordered_json report;
  report["tool"] = "lpfusion";
  report["version"] = lpf_version();
  report["kind"] = "eval-report";
  report["config"] = ordered_json{{"model", model_path},
                                  {"scores", scores_path},
                                  {"labels", labels_path},
                                  {"threshold", threshold}};
  report["metrics"] =
      ordered_json{{"auc", auc},
                   {"gmean", gmean},
                   {"confusion", ordered_json{{"tp", tp},
                                              {"fn", fn},
                                              {"tn", tn},
                                              {"fp", fp}}}};

  const std::string dir = resolve_out_dir(out_flag);
  const std::string path = dir + "/eval_report.json";
  cli::write_file(path, report.dump(2) + "\n");
  std::cout << "auc=" << auc << " gmean=" << gmean << " (tp=" << tp
            << " fn=" << fn << " tn=" << tn << " fp=" << fp << ")\n"
            << "wrote " << path << "\n";
  return 0;
}

// ------------------------------------------------------------------
// sweep

int cmd_sweep(const std::string& data_path, const std::string& labels_path,
              const std::string& scenario, uint64_t seed, int32_t repeats,
              const std::string& p_grid_text, const std::string& rho_grid_text,
              const std::string& sigma_grid_text,
              const std::string& q_grid_text, int32_t iters, double gap_tol,
              double precision_tol, const std::string& loss, int32_t threads,
              const std::string& out_flag) {
  const cli::Table table = cli::read_table(data_path);
  const bool is_scores = table.header.schema == "scores";
  if (!is_scores && table.header.schema != "features") {
    throw cli::InputError(data_path + ": unsupported schema '" +
                          table.header.schema + "'");
  }
  const std::vector<int32_t> labels =
      read_labels_checked(labels_path, table.rows);

  lpf_grid_config config;
  lpf_grid_config_init(&config);
  if (scenario == "pure") {
    config.scenario = LPF_SCENARIO_PURE;
  } else if (scenario == "nonpure") {
    config.scenario = LPF_SCENARIO_NONPURE;
  } else {
    throw cli::InputError("bad --scenario '" + scenario +
                          "' (expected pure or nonpure)");
  }
  config.seed = seed;
  config.n_repeats = repeats;
  config.threads = threads;
  config.solver.max_iters = iters;
  config.solver.gap_tol = gap_tol;
  config.solver.precision_tol = precision_tol;
  config.solver.loss = loss == "ls" ? LPF_LOSS_LEAST_SQUARES : LPF_LOSS_HINGE;

  std::vector<double> p_grid;
  std::vector<int32_t> rho_grid;
  std::vector<double> sigma_grid;
  std::vector<int32_t> q_grid;
  if (!p_grid_text.empty()) {
    p_grid = parse_p_grid(p_grid_text);
    config.p_grid = p_grid.data();
    config.p_grid_len = static_cast<int32_t>(p_grid.size());
  }
  if (!rho_grid_text.empty()) {
    rho_grid = parse_int_list(rho_grid_text, "rho");
    config.rho_grid = rho_grid.data();
    config.rho_grid_len = static_cast<int32_t>(rho_grid.size());
  }
  if (!sigma_grid_text.empty()) {
    sigma_grid = parse_double_list(sigma_grid_text, "sigma");
    config.sigma_grid = sigma_grid.data();
    config.sigma_grid_len = static_cast<int32_t>(sigma_grid.size());
  }
  if (!q_grid_text.empty()) {
    q_grid = parse_int_list(q_grid_text, "q");
    config.q_grid = q_grid.data();
    config.q_grid_len = static_cast<int32_t>(q_grid.size());
  }

  std::vector<int32_t> orientation;
  if (is_scores) {
    orientation.assign(static_cast<std::size_t>(table.cols),
                       orientation_sign(table, data_path));
  }

  char* report_text = nullptr;
  char* weights_text = nullptr;
  check(lpf_sweep_run(table.values.data(), table.rows, table.cols,
                      labels.data(), is_scores ? 1 : 0,
                      is_scores ? orientation.data() : nullptr, &config,
                      &report_text, &weights_text),
        "sweep");
  const std::string report_json = owned_string(report_text);
  const std::string weights_csv = owned_string(weights_text);

  // Echo the input files into the config object.
  ordered_json report = ordered_json::parse(report_json);
  report["config"]["inputs"] =
      ordered_json{{"data", data_path}, {"labels", labels_path}};

  const std::string dir = resolve_out_dir(out_flag);
  cli::write_file(dir + "/sweep_report.json", report.dump(2) + "\n");
  cli::write_file(dir + "/weights.csv", weights_csv);
  std::cout << "joint fused auc mean="
            << report["joint"]["aggregate"]["fused_auc"]["mean"].dump()
            << " stddev="
            << report["joint"]["aggregate"]["fused_auc"]["stddev"].dump()
            << "\n"
            << "wrote " << dir << "/sweep_report.json and " << dir
            << "/weights.csv\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"lp-norm constrained fusion of one-class classifier scores"};
  app.set_version_flag("--version",
                       std::string("lpfusion ") + lpf_version());
  app.require_subcommand(1);

  // scores
  auto* scores = app.add_subcommand(
      "scores", "fit built-in one-class learners and write novelty scores");
  std::string scores_features;
  std::string scores_learner = "all";
  double scores_sigma = 1.0;
  int32_t scores_q = 0;
  uint64_t scores_seed = 0;
  std::string scores_out;
  scores->add_option("features", scores_features, "feature CSV")->required();
  scores->add_option("--learner", scores_learner,
                     "all, gmm, svdd, gp or kpca");
  scores->add_option("--sigma", scores_sigma, "RBF width");
  scores->add_option("--q", scores_q, "KPCA subspace dimension (0 = auto)");
  scores->add_option("--seed", scores_seed, "seed");
  scores->add_option("--out", scores_out, "output directory");

  // train
  auto* train = app.add_subcommand(
      "train", "fit fusion weights on a score or feature file");
  std::string train_data;
  std::string train_labels;
  std::string train_p = "2";
  int32_t train_rho = 5;
  int32_t train_iters = 500;
  double train_gap_tol = 0.0;
  double train_precision_tol = 1e-3;
  std::string train_loss = "hinge";
  double train_threshold = 1.0;
  double train_sigma = 1.0;
  int32_t train_q = 0;
  uint64_t train_seed = 0;
  std::string train_out;
  train->add_option("data", train_data, "scores or features CSV")->required();
  train->add_option("labels", train_labels, "label file (+1/-1)")->required();
  train->add_option("--p", train_p, "norm parameter (e.g. 2, 32/31, inf)");
  train->add_option("--rho", train_rho, "two-sided min-max percentage");
  train->add_option("--iters", train_iters, "max Frank-Wolfe iterations");
  train->add_option("--gap-tol", train_gap_tol, "duality gap stop");
  train->add_option("--precision-tol", train_precision_tol,
                    "iterate change stop");
  train->add_option("--loss", train_loss, "hinge or ls")
      ->check(CLI::IsMember({"hinge", "ls"}));
  train->add_option("--threshold", train_threshold, "decision threshold");
  train->add_option("--sigma", train_sigma, "RBF width (features input)");
  train->add_option("--q", train_q, "KPCA subspace dim (features input)");
  train->add_option("--seed", train_seed, "seed (features input)");
  train->add_option("--out", train_out, "output directory");

  // eval
  auto* eval = app.add_subcommand("eval",
                                  "evaluate a fusion model on a test file");
  std::string eval_model;
  std::string eval_scores;
  std::string eval_labels;
  std::string eval_out;
  eval->add_option("model", eval_model, "model JSON file")->required();
  eval->add_option("scores", eval_scores, "test scores CSV")->required();
  eval->add_option("labels", eval_labels, "test labels")->required();
  eval->add_option("--out", eval_out, "output directory");

  // sweep
  auto* sweep = app.add_subcommand(
      "sweep", "run the benchmark protocol across the p grid");
  std::string sweep_data;
  std::string sweep_labels;
  std::string sweep_scenario = "pure";
  uint64_t sweep_seed = 0;
  int32_t sweep_repeats = 10;
  std::string sweep_p_grid;
  std::string sweep_rho_grid;
  std::string sweep_sigma_grid;
  std::string sweep_q_grid;
  int32_t sweep_iters = 500;
  double sweep_gap_tol = 0.0;
  double sweep_precision_tol = 1e-3;
  std::string sweep_loss = "hinge";
  int32_t sweep_threads = 0;
  std::string sweep_out;
  sweep->add_option("data", sweep_data, "features or scores CSV")->required();
  sweep->add_option("labels", sweep_labels, "label file (+1/-1)")->required();
  sweep->add_option("--scenario", sweep_scenario, "pure or nonpure");
  sweep->add_option("--seed", sweep_seed, "master seed");
  sweep->add_option("--repeats", sweep_repeats, "number of repeats");
  sweep->add_option("--p-grid", sweep_p_grid,
                    "comma list of p values (default: paper grid)");
  sweep->add_option("--rho-grid", sweep_rho_grid,
                    "comma list in 1..10 (default: 1..10)");
  sweep->add_option("--sigma-grid", sweep_sigma_grid,
                    "comma list of RBF widths");
  sweep->add_option("--q-grid", sweep_q_grid,
                    "comma list of KPCA subspace dims (default: auto)");
  sweep->add_option("--iters", sweep_iters, "max Frank-Wolfe iterations");
  sweep->add_option("--gap-tol", sweep_gap_tol, "duality gap stop");
  sweep->add_option("--precision-tol", sweep_precision_tol,
                    "iterate change stop");
  sweep->add_option("--loss", sweep_loss, "hinge or ls")
      ->check(CLI::IsMember({"hinge", "ls"}));
  sweep->add_option("--threads", sweep_threads, "worker threads (0 = auto)");
  sweep->add_option("--out", sweep_out, "output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      return app.exit(e);  // --help / --version
    }
    std::cerr << e.what() << "\n";
    return 2;
  }

  try {
    if (scores->parsed()) {
      return cmd_scores(scores_features, scores_learner, scores_sigma,
                        scores_q, scores_seed, scores_out);
    }
    if (train->parsed()) {
      return cmd_train(train_data, train_labels, train_p, train_rho,
                       train_iters, train_gap_tol, train_precision_tol,
                       train_loss, train_threshold, train_sigma, train_q,
                       train_seed, train_out);
    }
    if (eval->parsed()) {
      return cmd_eval(eval_model, eval_scores, eval_labels, eval_out);
    }
    if (sweep->parsed()) {
      return cmd_sweep(sweep_data, sweep_labels, sweep_scenario, sweep_seed,
                       sweep_repeats, sweep_p_grid, sweep_rho_grid,
                       sweep_sigma_grid, sweep_q_grid, sweep_iters,
                       sweep_gap_tol, sweep_precision_tol, sweep_loss,
                       sweep_threads, sweep_out);
    }
  } catch (const cli::InputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const CApiError& e) {
    std::cerr << "error: " << e.message << "\n";
    return (e.status == LPF_ERR_NUMERIC || e.status == LPF_ERR_INTERNAL) ? 3
                                                                         : 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return 0;
}
