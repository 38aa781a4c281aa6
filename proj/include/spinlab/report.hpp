// Machine-readable reports for the CLI: per-pair invariant bundles, the
// contrast table, and the verification ledger. Schema "report_v1".
#pragma once

#include "spinlab/spectral.hpp"

#include <json.hpp>

#include <string>

namespace spinlab {

const char* tool_version();

nlohmann::json invariants2_report(const Angle& alpha, const Angle& beta, int levels,
                                  unsigned long long seed);
nlohmann::json invariants4_report(const Angle& a, const Angle& b, int levels,
                                  unsigned long long seed);
nlohmann::json table1_report();

struct VerifySummary {
    nlohmann::json ledger;
    bool pass = false;
    double max_residual = 0;
};

// Runs the tower and invariant property suites; fuzz > 0 injects a
// perturbation into u_1 and is expected to break the basic-step checks.
VerifySummary verify_report(int levels, double fuzz, unsigned long long seed);

}  // namespace spinlab
