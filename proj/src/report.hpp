#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "analysis.hpp"
#include "idcore.hpp"
#include "profile.hpp"

namespace idprof::report {

/// Shortest round-trip decimal form (std::to_chars); stable across runs.
std::string number(double v);

nlohmann::json config_to_json(const idcore::EstimatorConfig& config);
idcore::EstimatorConfig config_from_json(const nlohmann::json& j);

/// `{"kind": "idprof.estimate", ...}`. `dataset_id` / `domain` are written
/// only when non-empty; with both present the file doubles as a d_data record.
nlohmann::json estimate_to_json(const idcore::IDEstimate& est, const std::string& source,
                                const std::string& dataset_id = {}, const std::string& domain = {});
idcore::IDEstimate estimate_from_json(const nlohmann::json& j);

/// `{"kind": "idprof.profile", ...}` with the curve and its peak.
nlohmann::json profile_to_json(const profile::IDCurve& curve, const profile::PeakSummary& peak);
std::string curve_to_csv(const profile::IDCurve& curve);
std::string curve_to_svg(const profile::IDCurve& curve, const profile::PeakSummary& peak);

std::string peak_table_to_csv(const analysis::PeakTable& table);
nlohmann::json peak_table_to_json(const analysis::PeakTable& table);

nlohmann::json correlation_to_json(const analysis::CorrelationReport& report);
std::string correlation_to_csv(const analysis::CorrelationReport& report);
std::string correlation_to_svg(const analysis::CorrelationReport& report);

std::string sweep_to_csv(const std::vector<analysis::SweepRow>& rows);
nlohmann::json sweep_to_json(const std::vector<analysis::SweepRow>& rows);

/// Serialised JSON text as written to disk (2-space indent, trailing newline).
std::string dump(const nlohmann::json& j);

}  // namespace idprof::report
