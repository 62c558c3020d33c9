#pragma once

#include <iosfwd>
#include <string>

#include <json.hpp>

#include "quantseg/adaptive_lasso.hpp"
#include "quantseg/experiment.hpp"
#include "quantseg/model_selection.hpp"
#include "quantseg/segmentation.hpp"
#include "quantseg/simulation.hpp"

// JSON / CSV boundary. JSON objects use sorted keys (nlohmann defaults), so
// a report serializes to the same bytes whenever its values match; nothing
// time- or host-dependent is ever written.

namespace quantseg {

using json = nlohmann::json;

json to_json(const FitResult& fit);
FitResult fit_result_from_json(const json& j);
json to_json(const PenaltySpec& penalty);
PenaltySpec penalty_from_json(const json& j);
json to_json(const KktReport& report);
json to_json(const Segmentation& seg);
json to_json(const CriterionRow& row);
json to_json(const CriterionTrace& trace);
json to_json(const SelectionRates& rates);
json to_json(const SpreadStats& stats);

json to_json(const Design& design);  // doubles as the ground-truth record
Design design_from_json(const json& j);

json to_json(const ExperimentConfig& config);
ExperimentConfig experiment_config_from_json(const json& j);
ExperimentConfig load_experiment_config(const std::string& path);

json to_json(const Report& report);

// CSV views. Layout per report kind is documented in the README.
void write_criterion_trace_csv(std::ostream& out, const CriterionTrace& trace);
void write_report_csv(std::ostream& out, const Report& report);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);

}  // namespace quantseg
