#pragma once

#include <map>
#include <string>
#include <utility>

#include "qleg/real.hpp"

namespace qleg {

// Outcome of checking one identity at one parameter point. All numeric
// fields are narrowed to double for reporting; the computation itself may
// have run in a wider type (see `precision`).
struct VerificationReport {
    std::string identity_id;
    std::map<std::string, double> params;
    double lhs = 0;
    double rhs = 0;
    double abs_residual = 0;
    double rel_residual = 0;
    double tolerance = 0;
    bool passed = false;
    // Series/integral term counts and similar diagnostics.
    std::map<std::string, double> truncation;
    std::string precision;
};

// Single choke point for the residual policy: relative residual against
// max(|lhs|, |rhs|, 1e-300), with a fallback absolute criterion when both
// sides are below the tolerance in magnitude (identities with vanishing
// sides need an absolute test).
template <class Real>
VerificationReport make_report(std::string identity_id,
                               std::map<std::string, double> params, Real lhs,
                               Real rhs, double tolerance,
                               std::map<std::string, double> truncation = {}) {
    using std::abs;
    VerificationReport r;
    r.identity_id = std::move(identity_id);
    r.params = std::move(params);
    r.lhs = to_double(lhs);
    r.rhs = to_double(rhs);
    Real absr = abs(lhs - rhs);
    Real scale = abs(lhs);
    if (abs(rhs) > scale) scale = abs(rhs);
    if (scale < Real(1e-300)) scale = Real(1e-300);
    r.abs_residual = to_double(absr);
    r.rel_residual = to_double(absr / scale);
    r.tolerance = tolerance;
    bool both_tiny =
        abs(lhs) < Real(tolerance) && abs(rhs) < Real(tolerance);
    r.passed = (r.rel_residual <= tolerance) ||
               (both_tiny && r.abs_residual <= tolerance);
    r.truncation = std::move(truncation);
    r.precision = precision_name<Real>;
    return r;
}

}  // namespace qleg
