#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "dilatlab/dilatation.hpp"

namespace dilatlab {

inline constexpr int kReportSchema = 1;

nlohmann::json to_json(const Report& r);
nlohmann::json to_json(const Point& p);

/// {"schema": 1, "reports": [...]} merged with `extra`; keys are sorted, so
/// equal inputs give equal bytes.
std::string reports_to_json(const std::vector<Report>& reports, const nlohmann::json& extra = nlohmann::json::object());

/// Header eps,value,diff,extrapolated,error followed by the report table.
std::string report_to_csv(const Report& r);

}  // namespace dilatlab
