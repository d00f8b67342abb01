#pragma once

#include "tcsim/models.hpp"
#include "tcsim/paths.hpp"

namespace tcsim {

/// Pointwise corridor geometry: alpha = p c^{S,S} / (3 c^{phi,phi}),
/// beta = (S/alpha)^{1/3}, gamma = 3 alpha beta^2 (eps/2)^{2/3} and the
/// corridor half-width dPhiPlus. The cubic alpha x^3 - gamma x is tangent to
/// +-eps S exactly at x = +-dPhiPlus.
struct CorridorCoeffs {
    SamplePath alpha;
    SamplePath beta;
    SamplePath gamma;
    SamplePath dPhiPlus;
};

/// Shadow displacement and shadow price: dS = alpha dPhi^3 - gamma dPhi,
/// sEps = S + dS, constrained to the bid-ask band [(1-eps) S, (1+eps) S].
struct ShadowPath {
    SamplePath dS;
    SamplePath sEps;
};

/// Corridor half-width (3 eta eps / (2 p))^{1/3} / S, in shares.
double halfwidth(double eta, double S, double p, double eps);

/// Pointwise alpha/beta/gamma/half-width from simulated model paths, using
/// the closed-form coefficient tracks (c^{S,S} = sigma^2 S^2 and
/// c^{phi,phi} = sigma^2 eta / S^2), not realized estimates.
CorridorCoeffs corridor_coeffs(const ModelPaths& paths, const FrictionParams& fp);

/// alpha dPhi^3 - gamma dPhi.
double shadow_displacement(double dPhi, double alpha, double gamma);

/// Shadow price along a path. The offset must respect the corridor pointwise;
/// violations beyond a small tolerance throw.
ShadowPath shadow_price(const SamplePath& S, const SamplePath& dPhi, const CorridorCoeffs& coeffs);

} // namespace tcsim
