#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace dsc {

struct CheckResult {
    int id = 0;
    std::string name;
    bool passed = false;
    /// Headline measured value and the threshold it is compared against.
    double measured = 0.0;
    double threshold = 0.0;
    /// Relation of measured to threshold for a pass, e.g. "<" or ">=".
    std::string relation;
    std::string detail;
    double seconds = 0.0;
};

struct ValidationOptions {
    /// Flips the sign of one flux coefficient in the geometry check.
    bool inject_flux_sign_error = false;
    /// Progress messages; may be null.
    std::ostream* log = nullptr;
};

/// Check ids for a suite name: one of geometry, gradient, diffusion,
/// conservation, projection, channel, cavity, annulus, scattering, quick,
/// all, or a single number 1..9. Throws Error for anything else.
std::vector<int> suite_checks(const std::string& selection);

/// Runs the checks; failures are report entries, never exceptions.
std::vector<CheckResult> run_validation_suite(const std::vector<int>& checks, const ValidationOptions& opt = {});

/// "C<id> PASS|FAIL <name>: measured <rel> threshold (detail) [seconds]".
std::string format_result(const CheckResult& r);

} // namespace dsc
