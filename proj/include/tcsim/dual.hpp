#pragma once

#include "tcsim/models.hpp"
#include "tcsim/paths.hpp"

namespace tcsim {

/// Per-interval Q-coefficients of the shadow displacement dS = f(dPhi, alpha,
/// gamma): its drift b^{dS}, its covariation with the price c^{dS,S}, and
/// c^{S,S} itself. Everything is assembled from the Ito expansion of the cubic
/// with the model's closed-form coefficients for phi, alpha and gamma.
struct ShadowCoeffs {
    double bDS = 0.0;
    double cDSS = 0.0;
    double cSS = 0.0;
};

/// Frozen per-point model data entering the corridor and dual coefficients.
/// For Black-Scholes the derivative block is zero and the whole struct is
/// path-constant; for stochastic volatility it is a function of the factor
/// level, with Y's physical drift standing in for its Q-drift (the
/// conditional-factor correction has no closed form and only touches the
/// subleading terms of b^{dS}).
struct PointData {
    double sigma = 0.0;
    double ratio = 0.0; // b / sigma
    double pi = 0.0;
    double eta = 0.0;
    double dPi = 0.0;
    double d2Pi = 0.0;
    double dEta = 0.0;
    double d2Eta = 0.0;
    double bY = 0.0;
    double sigmaY2 = 0.0;
    double alphaOverS4 = 0.0;     // p / (3 eta)
    double gammaOverS2 = 0.0;     // 3 (eps/2)^{2/3} (p/(3 eta))^{1/3}
    double halfwidthTimesS = 0.0; // (3 eta eps / (2p))^{1/3}
};

PointData point_data(const BlackScholesModel& model, const FrictionParams& fp, double y = 0.0);
PointData point_data(const StochVolModel& model, const FrictionParams& fp, double y);

/// The chain-rule assembly of b^{dS} and c^{dS,S} at (S, dPhi).
ShadowCoeffs shadow_from_point(const PointData& pd, const FrictionParams& fp, double S,
                               double dPhi);

ShadowCoeffs shadow_coeffs(const BlackScholesModel& model, const FrictionParams& fp,
                           double S, double dPhi);
ShadowCoeffs shadow_coeffs(const StochVolModel& model, const FrictionParams& fp,
                           double S, double y, double dPhi);

/// Explicit dual density for the stopped shadow price: theta, the log-density
/// N = -int theta dS - 1/2 int theta^2 d[S,S], Z = exp(N), and the version
/// Zbar frozen at rho ^ tau.
struct DualDensity {
    SamplePath theta;
    SamplePath N;
    SamplePath Z;
    SamplePath Zbar;
    std::size_t rho1Idx = 0;
    std::size_t rho2Idx = 0;
    std::size_t rhoIdx = 0; // rho1 ^ rho2 ^ T
};

/// First grid index with |c^{dS,S} / c^{S,S}| > 1/2; returns steps if never.
/// Inputs are per-interval tracks (size n).
std::size_t stop_rho1(const std::vector<double>& cDSS, const std::vector<double>& cSS);

/// theta = b^{dS} / (c^{S,S} + c^{dS,S}) on ]]0, rho1]], zero afterwards.
/// Returned as a per-interval track stored in SamplePath::values (size n).
SamplePath theta_path(const TimeGrid& grid, const std::vector<double>& bDS,
                      const std::vector<double>& cDSS, const std::vector<double>& cSS);

/// Left-point Euler sums for N against the realized price increments, with the
/// model c^{S,S} in the compensator; rho2 by threshold scan on Z; Zbar frozen
/// after rho1 ^ rho2 ^ tauIdx. rho1Idx comes from stop_rho1 (defaults to
/// "never" when larger than the grid).
DualDensity density_path(const SamplePath& theta, const SamplePath& S,
                         const std::vector<double>& cSS, std::size_t tauIdx,
                         std::size_t rho1Idx = static_cast<std::size_t>(-1));

/// Conjugate of U(x) = -exp(-p x): (y/p)(ln(y/p) - 1). Throws for y <= 0.
double conjugate(double y, double p);

} // namespace tcsim
