#pragma once

// JSON-lines serialisation of verification reports. One JSON object per
// line, fields in a fixed order, reports sorted by (identity_id, params)
// before emission so that identical runs produce byte-identical streams.
#include <algorithm>
#include <ostream>
#include <string>
#include <vector>

#include "json.hpp"
#include "qleg/report.hpp"

namespace qleg {

using Json = nlohmann::ordered_json;

inline Json report_to_json(const VerificationReport& r) {
    Json j;
    j["identity_id"] = r.identity_id;
    Json params = Json::object();
    for (const auto& [k, v] : r.params) params[k] = v;
    j["params"] = std::move(params);
    j["lhs"] = r.lhs;
    j["rhs"] = r.rhs;
    j["abs_residual"] = r.abs_residual;
    j["rel_residual"] = r.rel_residual;
    j["tolerance"] = r.tolerance;
    j["passed"] = r.passed;
    Json trunc = Json::object();
    for (const auto& [k, v] : r.truncation) trunc[k] = v;
    j["truncation"] = std::move(trunc);
    j["precision"] = r.precision;
    return j;
}

/// Report order: identity id first, then the parameter record (std::map
/// compares key/value pairs lexicographically, keys already sorted).
inline bool report_less(const VerificationReport& a,
                        const VerificationReport& b) {
    if (a.identity_id != b.identity_id) return a.identity_id < b.identity_id;
    return a.params < b.params;
}

inline void sort_reports(std::vector<VerificationReport>& reports) {
    std::stable_sort(reports.begin(), reports.end(), report_less);
}

inline void write_json_lines(std::ostream& os,
                             const std::vector<VerificationReport>& reports) {
    for (const auto& r : reports) os << report_to_json(r).dump() << "\n";
}

}  // namespace qleg
