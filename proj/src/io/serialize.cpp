#include "io/serialize.hpp"

#include <cmath>
#include <cstdio>

#include "version.hpp"

namespace lpfusion::io {

using nlohmann::ordered_json;

namespace {

struct NamedFraction {
  const char* token;
  double value;
};

constexpr NamedFraction kFractions[] = {
    {"32/31", 32.0 / 31.0},
    {"16/15", 16.0 / 15.0},
    {"8/7", 8.0 / 7.0},
    {"4/3", 4.0 / 3.0},
};

ordered_json json_number(double value) {
  if (std::isinf(value)) {
    return value > 0 ? "inf" : "-inf";
  }
  return value;
}

double number_from_json(const ordered_json& node, const char* what) {
  if (node.is_number()) {
    return node.get<double>();
  }
  if (node.is_string()) {
    const std::string text = node.get<std::string>();
    if (text == "inf") return core::kInf;
    if (text == "-inf") return -core::kInf;
  }
  throw ParseError(std::string("model file: bad numeric field '") + what + "'");
}

ordered_json vector_to_json(const Eigen::VectorXd& v) {
  ordered_json out = ordered_json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    out.push_back(v[i]);
  }
  return out;
}

Eigen::VectorXd vector_from_json(const ordered_json& node, const char* what) {
  if (!node.is_array()) {
    throw ParseError(std::string("model file: field '") + what +
                     "' must be an array");
  }
  Eigen::VectorXd out(static_cast<Eigen::Index>(node.size()));
  Eigen::Index i = 0;
  for (const auto& item : node) {
    if (!item.is_number()) {
      throw ParseError(std::string("model file: field '") + what +
                       "' must hold numbers");
    }
    out[i++] = item.get<double>();
  }
  return out;
}

ordered_json aggregate_to_json(const eval::Aggregate& agg) {
  return ordered_json{{"mean", agg.mean}, {"stddev", agg.stddev}};
}

ordered_json confusion_to_json(const eval::Confusion& c) {
  return ordered_json{{"tp", c.tp}, {"fn", c.fn}, {"tn", c.tn}, {"fp", c.fp}};
}

ordered_json split_to_json(const eval::SplitPlan& plan) {
  ordered_json out;
  out["seed"] = plan.seed;
  out["train_targets"] = plan.train_targets;
  out["train_negatives"] = plan.train_negatives;
  out["val_targets"] = plan.val_targets;
  out["val_negatives"] = plan.val_negatives;
  out["test_targets"] = plan.test_targets;
  out["test_negatives"] = plan.test_negatives;
  return out;
}

ordered_json repeat_to_json(const eval::RepeatResult& repeat,
                            bool scores_dataset) {
  ordered_json out;
  out["repeat"] = repeat.repeat;
  out["seed"] = repeat.plan.seed;
  ordered_json chosen;
  chosen["p"] = p_token(repeat.chosen.p);
  chosen["rho"] = repeat.chosen.rho;
  if (!scores_dataset) {
    chosen["sigma"] = repeat.chosen.sigma;
    chosen["q"] = repeat.chosen.q;
  }
  chosen["val_auc"] = repeat.chosen.val_auc;
  out["chosen"] = std::move(chosen);
  out["threshold"] = repeat.threshold;
  out["weights"] = vector_to_json(repeat.omega);
  ordered_json test;
  test["auc"] = repeat.test_auc;
  test["gmean"] = repeat.test_gmean;
  test["confusion"] = confusion_to_json(repeat.confusion);
  out["test"] = std::move(test);
  ordered_json baselines;
  for (const auto& b : repeat.baselines) {
    ordered_json entry;
    if (!scores_dataset && b.name != "gmm") {
      entry["sigma"] = b.sigma;
      if (b.name == "kpca") entry["q"] = b.q;
    }
    if (b.name == "sum_rule") entry["rho"] = b.rho;
    entry["val_auc"] = b.val_auc;
    entry["test_auc"] = b.test_auc;
    baselines[b.name] = std::move(entry);
  }
  out["baselines"] = std::move(baselines);
  out["split"] = split_to_json(repeat.plan);
  return out;
}

ordered_json config_to_json(const eval::ExperimentReport& report,
                            const ordered_json& config_extra) {
  ordered_json config;
  config["scenario"] = eval::to_string(report.scenario);
  config["seed"] = report.seed;
  config["repeats"] = report.n_repeats;
  ordered_json p_grid = ordered_json::array();
  for (double p : report.grids.p_grid) {
    p_grid.push_back(p_token(p));
  }
  config["p_grid"] = std::move(p_grid);
  config["rho_grid"] = report.grids.rho_grid;
  config["sigma_grid"] = report.grids.sigma_grid;
  config["q_grid"] = report.grids.q_grid;
  ordered_json solver;
  solver["iters"] = report.solver.max_iters;
  solver["gap_tol"] = report.solver.gap_tol;
  solver["precision_tol"] = report.solver.precision_tol;
  solver["loss"] = report.solver.loss == solver::Loss::kHinge
                       ? "hinge"
                       : "least-squares";
  config["solver"] = std::move(solver);
  if (config_extra.is_object()) {
    for (const auto& [key, value] : config_extra.items()) {
      config[key] = value;
    }
  }
  return config;
}

ordered_json dataset_to_json(const eval::ExperimentReport& report) {
  ordered_json dataset;
  dataset["kind"] =
      report.dataset_kind == eval::Dataset::Kind::kFeatures ? "features"
                                                            : "scores";
  dataset["samples"] = report.n_samples;
  dataset["columns"] = report.n_columns;
  dataset["targets"] = report.n_targets;
  dataset["negatives"] = report.n_negatives;
  dataset["ensemble"] = report.ensemble;
  return dataset;
}

ordered_json results_to_json(const eval::ExperimentReport& report) {
  ordered_json out;
  ordered_json agg;
  agg["fused_auc"] = aggregate_to_json(report.fused_auc);
  agg["fused_gmean"] = aggregate_to_json(report.fused_gmean);
  ordered_json baselines;
  for (const auto& [name, value] : report.baseline_auc) {
    baselines[name] = aggregate_to_json(value);
  }
  agg["baseline_auc"] = std::move(baselines);
  out["aggregate"] = std::move(agg);
  ordered_json repeats = ordered_json::array();
  const bool scores_dataset =
      report.dataset_kind == eval::Dataset::Kind::kScores;
  for (const auto& repeat : report.repeats) {
    repeats.push_back(repeat_to_json(repeat, scores_dataset));
  }
  out["repeats"] = std::move(repeats);
  return out;
}

}  // namespace

std::string p_token(double p) {
  for (const auto& fraction : kFractions) {
    if (p == fraction.value) {
      return fraction.token;
    }
  }
  if (std::isinf(p)) {
    return "inf";
  }
  if (p == std::floor(p) && p < 1e15) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.0f", p);
    return buf;
  }
  return format_double(p);
}

double parse_p(const std::string& token) {
  if (token == "inf") {
    return core::kInf;
  }
  for (const auto& fraction : kFractions) {
    if (token == fraction.token) {
      return fraction.value;
    }
  }
  const auto slash = token.find('/');
  try {
    if (slash != std::string::npos) {
      const double num = std::stod(token.substr(0, slash));
      const double den = std::stod(token.substr(slash + 1));
      if (den == 0.0) throw ParseError("p token divides by zero: " + token);
      return num / den;
    }
    std::size_t used = 0;
    const double value = std::stod(token, &used);
    if (used != token.size()) {
      throw ParseError("bad p value '" + token + "'");
    }
    return value;
  } catch (const std::logic_error&) {
    throw ParseError("bad p value '" + token + "'");
  }
}

std::string format_double(double value) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", value);
  return buf;
}

std::string model_to_text(const ModelDocument& doc) {
  const core::FusionModel& model = doc.model;
  ordered_json out;
  out["tool"] = kToolName;
  out["version"] = kVersion;
  out["kind"] = "fusion-model";
  out["r"] = model.classifiers();
  out["p"] = json_number(model.weights.p());
  out["threshold"] = model.threshold;
  out["weights"] = vector_to_json(model.weights.omega());
  out["omega_init"] = vector_to_json(model.omega_init);
  out["orientation"] = vector_to_json(model.orientation);
  ordered_json normalizers = ordered_json::array();
  for (const auto& state : model.normalizers) {
    normalizers.push_back(ordered_json{{"rho", state.rho},
                                       {"lower", state.lower},
                                       {"upper", state.upper},
                                       {"degenerate", state.degenerate}});
  }
  out["normalizers"] = std::move(normalizers);
  if (!doc.train_info.is_null()) {
    out["train"] = doc.train_info;
  }
  return out.dump(2) + "\n";
}

ModelDocument model_from_text(const std::string& text) {
  ordered_json parsed;
  try {
    parsed = ordered_json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string("model file is not valid JSON: ") + e.what());
  }
  if (!parsed.is_object() || parsed.value("kind", "") != "fusion-model") {
    throw ParseError("model file: expected a fusion-model document");
  }
  for (const char* field :
       {"r", "p", "threshold", "weights", "orientation", "normalizers"}) {
    if (!parsed.contains(field)) {
      throw ParseError(std::string("model file: missing field '") + field +
                       "'");
    }
  }

  const double p = number_from_json(parsed["p"], "p");
  const Eigen::VectorXd weights = vector_from_json(parsed["weights"], "weights");
  const auto r = static_cast<Eigen::Index>(parsed["r"].get<long long>());
  if (weights.size() != r) {
    throw ParseError("model file: r = " + std::to_string(r) + " but " +
                     std::to_string(weights.size()) + " weights");
  }

  std::vector<normalize::TwoSidedMinMaxState> normalizers;
  for (const auto& node : parsed["normalizers"]) {
    normalize::TwoSidedMinMaxState state;
    state.rho = node.at("rho").get<int>();
    state.lower = number_from_json(node.at("lower"), "lower");
    state.upper = number_from_json(node.at("upper"), "upper");
    state.degenerate = node.at("degenerate").get<bool>();
    normalizers.push_back(state);
  }

  core::FusionModel model{
      core::WeightVector(weights, p),
      number_from_json(parsed["threshold"], "threshold"),
      vector_from_json(parsed["orientation"], "orientation"),
      std::move(normalizers),
      parsed.contains("omega_init")
          ? vector_from_json(parsed["omega_init"], "omega_init")
          : Eigen::VectorXd()};
  if (!model.fitted()) {
    throw ParseError("model file: inconsistent field sizes");
  }
  model.validate();

  ModelDocument doc{std::move(model), ordered_json()};
  if (parsed.contains("train")) {
    doc.train_info = parsed["train"];
  }
  return doc;
}

std::string trace_to_csv(const solver::SolveTrace& trace) {
  std::string out = "# schema=trace, termination=";
  out += solver::to_string(trace.termination);
  out += ", columns=t,objective,gap,step\n";
  for (const auto& entry : trace.entries) {
    out += std::to_string(entry.t);
    out += ',';
    out += format_double(entry.objective);
    out += ',';
    out += format_double(entry.gap);
    out += ',';
    out += format_double(entry.step);
    out += '\n';
  }
  return out;
}

std::string report_to_text(const eval::ExperimentReport& report,
                           const ordered_json& config_extra) {
  ordered_json out;
  out["tool"] = kToolName;
  out["version"] = kVersion;
  out["kind"] = "benchmark-report";
  out["config"] = config_to_json(report, config_extra);
  out["dataset"] = dataset_to_json(report);
  const ordered_json results = results_to_json(report);
  out["aggregate"] = results["aggregate"];
  out["repeats"] = results["repeats"];
  return out.dump(2) + "\n";
}

std::string sweep_to_text(const eval::SweepResult& sweep,
                          const ordered_json& config_extra) {
  ordered_json out;
  out["tool"] = kToolName;
  out["version"] = kVersion;
  out["kind"] = "sweep-report";
  out["config"] = config_to_json(sweep.joint, config_extra);
  out["dataset"] = dataset_to_json(sweep.joint);
  out["joint"] = results_to_json(sweep.joint);
  ordered_json per_p = ordered_json::array();
  for (const auto& [p, report] : sweep.per_p) {
    ordered_json entry;
    entry["p"] = p_token(p);
    const ordered_json results = results_to_json(report);
    entry["aggregate"] = results["aggregate"];
    entry["repeats"] = results["repeats"];
    per_p.push_back(std::move(entry));
  }
  out["per_p"] = std::move(per_p);
  return out.dump(2) + "\n";
}

std::string sweep_weights_csv(const eval::SweepResult& sweep) {
  std::string out = "# schema=sweep-weights, columns=p,repeat";
  for (const auto& name : sweep.joint.ensemble) {
    out += ",w_" + name;
  }
  out += '\n';
  for (const auto& [p, report] : sweep.per_p) {
    for (const auto& repeat : report.repeats) {
      out += p_token(p);
      out += ',';
      out += std::to_string(repeat.repeat);
      for (Eigen::Index j = 0; j < repeat.omega.size(); ++j) {
        out += ',';
        out += format_double(repeat.omega[j]);
      }
      out += '\n';
    }
  }
  return out;
}

}  // namespace lpfusion::io
