#pragma once

#include <span>
#include <vector>

#include "tcsim/engine.hpp"
#include "tcsim/models.hpp"
#include "tcsim/paths.hpp"

namespace tcsim {

/// Monte Carlo certainty equivalent: ce = -(1/p) ln(-utility).
struct CEResult {
    double ce = 0.0;
    double utility = 0.0;
    double se = 0.0; // standard error of the utility estimate
    std::size_t nPaths = 0;
};

/// CE(X) = -(1/p) ln E[e^{-p X}] over weighted terminal-wealth samples.
/// Weights must be nonnegative with positive total; the exponent is shifted by
/// its maximum before averaging so large p or extreme samples cannot overflow.
CEResult certainty_equivalent(std::span<const double> samples, std::span<const double> weights,
                              double p);

/// Left-endpoint Riemann sum of f_t^2 c_t dt, one cov entry per interval.
double quadratic_integral(const SamplePath& f, const std::vector<double>& cov, double dt);

/// (p/2) E_Q[(dPhi+)^2 . [S,S]_T] from simulated Q-paths; weights are the
/// ensemble-normalized qWeights.
double leading_loss(std::span<const ModelPaths> paths, const FrictionParams& fp);

/// E_Q[dPhi^2 . [S,S]_T] / E_Q[(dPhi+)^2 . [S,S]_T] from per-path integrals.
double ergodic_ratio(std::span<const double> intDphi2, std::span<const double> intDphiPlus2,
                     std::span<const double> weights);

/// Quadratic-variation-weighted time average int q^2 d[q,q] / int d[q,q],
/// cqq per interval. Throws when the total quadratic variation degenerates.
double qv_weighted_average(const SamplePath& q, const std::vector<double>& cqq);

/// End-to-end expected utility and CE of the stopped candidate strategy.
CEResult primal_utility(const BlackScholesModel& model, const FrictionParams& fp,
                        const EngineOptions& opt);
CEResult primal_utility(const StochVolModel& model, const FrictionParams& fp,
                        const EngineOptions& opt);

/// Least-squares slope of log(loss) against log(eps).
double eps_scaling_fit(std::span<const double> epsList, std::span<const double> lossList);

} // namespace tcsim
