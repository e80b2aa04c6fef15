// File formats.
//
//   state          {"n_qubits": n, "amplitudes": [[re, im], ...]}
//   GraphSpec      {"n_qubits": n, "system": s, "edges": [[j, k, phase], ...]}
//   CorrelatorTable {"entries": [{"string": "ZIZI", "value": v, "sigma": s}, ...]}
//   MeasurementPlan {"target": t, "correlators": [...], "settings": [...],
//                    "counts": {"n_correlators": a, "n_settings": b, "n_projectors": c}}
//   OutcomeCounts  {"setting": "XXYY", "shots": 4500, "counts": {"0000": 271, ...}}
//   MICurve CSV    delta,mean_mi,min_mi,max_mi,n_fragments,stderr
//
// Qubit indices in GraphSpec files are 0-based. Floats in CSV use 12
// significant digits and '.' regardless of locale.

#pragma once

#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "qdarwin/darwinism.hpp"
#include "qdarwin/estimator.hpp"
#include "qdarwin/graphstate.hpp"
#include "qdarwin/measurement.hpp"
#include "qdarwin/qcore.hpp"

namespace qdarwin::io {

using nlohmann::json;

json to_json(const qcore::StateVector& state);
qcore::StateVector state_from_json(const json& j);

json to_json(const graphstate::GraphSpec& spec);
graphstate::GraphSpec graph_spec_from_json(const json& j);

json to_json(const estimator::CorrelatorTable& table);
estimator::CorrelatorTable correlator_table_from_json(const json& j);

json to_json(const estimator::MeasurementPlan& plan);

json to_json(const measurement::OutcomeCounts& counts);
measurement::OutcomeCounts outcome_counts_from_json(const json& j);
/// Accepts a single OutcomeCounts object or an array of them.
std::vector<measurement::OutcomeCounts> outcome_counts_list_from_json(const json& j);

json to_json(const darwinism::MICurve& curve);
std::string to_csv(const darwinism::MICurve& curve);

/// 12 significant digits, locale independent.
std::string format_number(double value);

json read_json_file(const std::string& path);
void write_text_file(const std::string& path, std::string_view text);

}  // namespace qdarwin::io
