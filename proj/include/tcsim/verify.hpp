#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "tcsim/config.hpp"

namespace tcsim {

struct CheckResult {
    std::string name;
    bool pass = false;
    bool warnOnly = false; // asymptotic check outside the declared regime
    double margin = 0.0;   // check-specific distance to the threshold (<= 1 passes)
    std::string detail;
};

struct VerifyReport {
    std::vector<CheckResult> checks;

    bool all_pass() const;
    /// 0 = pass (warnings allowed), 1 = at least one hard failure.
    int exit_code() const;
    void print(std::ostream& os) const;
};

/// Runs the primary acceptance checks appropriate for the config's model:
/// the Black-Scholes battery for "black-scholes", the degeneration and
/// generic-model battery for "stoch-vol". Budgets for the Monte Carlo checks
/// are pinned by the criteria, not by the config numerics; the config supplies
/// model parameters, the eps sweep, the seed and the worker count.
VerifyReport run_verify(const ExperimentConfig& cfg);

} // namespace tcsim
