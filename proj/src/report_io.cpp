#include "dilatlab/report_io.hpp"

#include <cmath>
#include <cstdio>

namespace dilatlab {

namespace {

// JSON has no infinities; they are written as null.
nlohmann::json num(double v) { return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(nullptr); }

std::string csv_num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

nlohmann::json to_json(const Point& p) {
  nlohmann::json a = nlohmann::json::array();
  for (Eigen::Index i = 0; i < p.size(); ++i) a.push_back(num(p[i]));
  return a;
}

nlohmann::json to_json(const Report& r) {
  nlohmann::json j;
  j["check"] = r.check;
  j["structure"] = r.structure;
  j["verdict"] = to_string(r.verdict);
  j["max_residual"] = num(r.max_residual);
  j["tolerance"] = num(r.tolerance);
  nlohmann::json f = nlohmann::json::array();
  for (const auto& x : r.failures) f.push_back({{"what", x.what}, {"residual", num(x.residual)}});
  j["failures"] = f;
  nlohmann::json t = nlohmann::json::array();
  for (const auto& row : r.table) {
    t.push_back({{"eps", num(row.eps)},
                 {"value", num(row.value)},
                 {"diff", num(row.diff)},
                 {"extrapolated", num(row.extrapolated)},
                 {"error", num(row.error)}});
  }
  j["table"] = t;
  nlohmann::json m = nlohmann::json::object();
  for (const auto& [k, v] : r.metrics) m[k] = num(v);
  j["metrics"] = m;
  return j;
}

std::string reports_to_json(const std::vector<Report>& reports, const nlohmann::json& extra) {
  nlohmann::json j = extra.is_object() ? extra : nlohmann::json::object();
  j["schema"] = kReportSchema;
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& r : reports) arr.push_back(to_json(r));
  j["reports"] = arr;
  return j.dump(2) + "\n";
}

std::string report_to_csv(const Report& r) {
  std::string out = "eps,value,diff,extrapolated,error\n";
  for (const auto& row : r.table) {
    out += csv_num(row.eps) + "," + csv_num(row.value) + "," + csv_num(row.diff) + "," + csv_num(row.extrapolated) +
           "," + csv_num(row.error) + "\n";
  }
  return out;
}

}  // namespace dilatlab
