#pragma once

#include <string>
#include <vector>

#include "tcsim/config.hpp"
#include "tcsim/engine.hpp"

namespace tcsim {

/// One spread level of a sweep, as written to sweep.csv.
struct SweepRow {
    double eps = 0.0;
    double primalCE = 0.0;
    double primalSe = 0.0;
    double dualCEBound = 0.0;
    double dualSe = 0.0;
    double leadingLoss = 0.0;
    double ergodicRatio = 0.0;
    double tauEarlyFrac = 0.0;
    double rho1Frac = 0.0;
    double rho2Frac = 0.0;
    EpsilonSummary summary;
};

struct SweepResult {
    std::vector<SweepRow> rows;
    double scalingSlope = 0.0; // log-log slope of measured CE loss vs eps
    bool slopeValid = false;
    double frictionlessCE = 0.0;
};

/// Runs one epsilon with the config's numerics. Throws on non-finite results.
EpsilonSummary run_single(const ExperimentConfig& cfg, double eps);

/// Runs every epsilon in the config, descending, and fits the scaling slope.
SweepResult run_sweep(const ExperimentConfig& cfg);

/// Byte-deterministic renderings.
std::string sweep_csv(const SweepResult& result);
std::string summary_json(const SweepResult& result, const ExperimentConfig& cfg);
std::string paths_csv(const std::vector<PathOutcome>& outcomes, std::size_t steps);

/// Writes sweep.csv / summary.json into cfg.outDir per cfg.formats.
void write_outputs(const SweepResult& result, const ExperimentConfig& cfg);

} // namespace tcsim
