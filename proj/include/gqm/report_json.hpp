#pragma once

#include <json.hpp>

#include "gqm/bootstrap.hpp"
#include "gqm/classical.hpp"
#include "gqm/experiments.hpp"
#include "gqm/measures.hpp"
#include "gqm/quantile.hpp"

namespace gqm {

// JSON views of the report types (stable field names; consumed by the CLI
// and by downstream tooling).
nlohmann::json to_json(const QuantilePoint& point);
nlohmann::json to_json(const MeasureReport& report, const DirectionSet& dirs);
nlohmann::json to_json(const ClassicalReport& report);
nlohmann::json to_json(const ConfidenceRegion& region);
nlohmann::json to_json(const CoverageResult& result);
nlohmann::json to_json(const TableReport& report);

}  // namespace gqm
