#pragma once

#include <string>

#include <json.hpp>

#include "core/types.hpp"
#include "eval/benchmark.hpp"
#include "solver/frank_wolfe.hpp"

namespace lpfusion::io {

struct ParseError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Canonical text for a norm parameter: known grid fractions ("32/31"),
// plain integers ("2"), "inf", or a round-trip-exact decimal.
std::string p_token(double p);
double parse_p(const std::string& token);

// 17-significant-digit decimal (round-trip exact for doubles), used by the
// CSV emitters.
std::string format_double(double value);

// Fusion model files are pretty-printed JSON with a fixed field order; the
// optional "train" object is opaque provenance round-tripped verbatim.
struct ModelDocument {
  core::FusionModel model;
  nlohmann::ordered_json train_info;  // may be null
};

std::string model_to_text(const ModelDocument& doc);
ModelDocument model_from_text(const std::string& text);

// Solve trace as CSV: one row per iteration plus a header carrying the
// termination reason.
std::string trace_to_csv(const solver::SolveTrace& trace);

// Benchmark / sweep reports. `config_extra` is echoed into the config
// object (the CLI adds its input file paths there).
std::string report_to_text(const eval::ExperimentReport& report,
                           const nlohmann::ordered_json& config_extra = {});
std::string sweep_to_text(const eval::SweepResult& sweep,
                          const nlohmann::ordered_json& config_extra = {});

// Weight-versus-p data from a sweep: one CSV row per (p, repeat).
std::string sweep_weights_csv(const eval::SweepResult& sweep);

}  // namespace lpfusion::io
