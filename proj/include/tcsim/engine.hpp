#pragma once

#include <cstdint>
#include <vector>

#include "tcsim/models.hpp"
#include "tcsim/paths.hpp"

namespace tcsim {

struct EngineOptions {
    std::size_t steps = 10000;
    std::size_t paths = 10000;
    std::uint64_t seed = 1;
    unsigned workers = 0; // 0 = hardware concurrency
};

/// Everything one simulated path contributes to the ensemble reductions. The
/// whole pipeline is evaluated under Q in one streaming pass: candidate
/// strategy, bid/ask ledger, safety stop, and the dual density.
struct PathOutcome {
    double u = 1.0;       // unnormalized Q importance weight
    double pFactor = 1.0; // exp(int (b/sigma) dW^Q - 1/2 int (b/sigma)^2 dt)
    double FT = 0.0;      // frictionless wealth x + (phi . S)_T
    double XT = 0.0;      // terminal ledger wealth, frozen at tau
    double D = 0.0;       // XT - FT
    double expNegPD = 1.0;
    double gDual = 0.0;   // (Zbar-1)(-p FT - 1) + Zbar ln Zbar
    double zbarT = 1.0;
    double intDphiPlus2 = 0.0; // int (dPhi+)^2 c^{S,S} dt over [0, T]
    double intDphi2 = 0.0;     // int dPhi^2 c^{S,S} dt over [0, T]
    double intDphi2Stop = 0.0; // same, stopped at tau ^ rho
    double lossFormulaIntegral = 0.0; // int (9 p eta^2 / 32)^{1/3} sigma^2 dt
    double minX = 0.0;
    double thetaDevMax = 0.0;   // max_t |theta sigma^S - p dPhi sigma^S|
    double pDphiSigmaMax = 0.0; // max_t |p dPhi sigma^S|
    std::uint32_t tauIdx = 0;
    std::uint32_t rho1Idx = 0;
    std::uint32_t rho2Idx = 0;
    std::uint32_t coarseSteps = 0;
};

PathOutcome simulate_path(const BlackScholesModel& model, const FrictionParams& fp,
                          const TimeGrid& grid, std::uint64_t seed, std::uint64_t pathIndex);
PathOutcome simulate_path(const StochVolModel& model, const FrictionParams& fp,
                          const TimeGrid& grid, std::uint64_t seed, std::uint64_t pathIndex);

std::vector<PathOutcome> run_ensemble(const BlackScholesModel& model, const FrictionParams& fp,
                                      const EngineOptions& opt);
std::vector<PathOutcome> run_ensemble(const StochVolModel& model, const FrictionParams& fp,
                                      const EngineOptions& opt);

/// Ensemble reductions for one spread level.
struct EpsilonSummary {
    double eps = 0.0;
    double y = 0.0;              // dual multiplier E[U'(x + phi . S_T)]
    double frictionlessCE = 0.0; // -(1/p) ln(y/p)
    double primalU = 0.0, primalUSe = 0.0;
    double primalCE = 0.0, primalCESe = 0.0;
    double dualU = 0.0, dualUSe = 0.0;
    double dualCE = 0.0, dualCESe = 0.0;
    double leadingLoss = 0.0; // (p/2) E_Q[(dPhi+)^2 . [S,S]_T]
    double lossFormula = 0.0; // E_Q[int (9 p eta^2/32)^{1/3} sigma^2 dt] eps^{2/3}
    double ergodicRatio = 0.0;
    double tauFrac = 0.0, rho1Frac = 0.0, rho2Frac = 0.0;
    double zbarMean = 0.0, zbarMeanSe = 0.0;
    double zbarM2 = 0.0;       // E_Q[(Zbar_T - 1)^2]
    double dualMomentRef = 0.0; // p^2 E_Q[dPhi^2 . [S,S]_{tau ^ rho}]
    double thetaDevRatio = 0.0; // mean_t-max ratio for the theta order check
    double coarseFrac = 0.0;
    double minXWorst = 0.0;
    std::size_t paths = 0;
    std::size_t steps = 0;
};

EpsilonSummary summarize(const std::vector<PathOutcome>& outcomes, const FrictionParams& fp,
                         const EngineOptions& opt);

EpsilonSummary run_epsilon(const BlackScholesModel& model, const FrictionParams& fp,
                           const EngineOptions& opt);
EpsilonSummary run_epsilon(const StochVolModel& model, const FrictionParams& fp,
                           const EngineOptions& opt);

} // namespace tcsim
