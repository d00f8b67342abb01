#include "tcsim/dual.hpp"

#include <cmath>
#include <stdexcept>

namespace tcsim {

PointData point_data(const BlackScholesModel& model, const FrictionParams& fp, double /*y*/) {
    PointData pd;
    pd.sigma = model.sigma();
    pd.ratio = model.b() / model.sigma();
    pd.pi = frictionless_position(model, fp.p);
    pd.eta = pd.pi * pd.pi;
    pd.alphaOverS4 = fp.p / (3.0 * pd.eta);
    pd.gammaOverS2 = 3.0 * std::pow(0.5 * fp.eps, 2.0 / 3.0) * std::cbrt(pd.alphaOverS4);
    pd.halfwidthTimesS = std::cbrt(1.5 * pd.eta * fp.eps / fp.p);
    return pd;
}

PointData point_data(const StochVolModel& model, const FrictionParams& fp, double y) {
    const SvDerivatives d = sv_derivatives(model, fp.p, y);
    PointData pd;
    pd.sigma = d.sigma;
    pd.ratio = d.b / d.sigma;
    pd.pi = d.pi;
    pd.eta = d.eta;
    pd.dPi = d.dPi;
    pd.d2Pi = d.d2Pi;
    pd.dEta = d.dEta;
    pd.d2Eta = d.d2Eta;
    pd.bY = model.params().kappa * (model.params().meanY - y);
    pd.sigmaY2 = model.params().sigmaY * model.params().sigmaY;
    pd.alphaOverS4 = fp.p / (3.0 * pd.eta);
    pd.gammaOverS2 = 3.0 * std::pow(0.5 * fp.eps, 2.0 / 3.0) * std::cbrt(pd.alphaOverS4);
    pd.halfwidthTimesS = std::cbrt(1.5 * pd.eta * fp.eps / fp.p);
    return pd;
}

ShadowCoeffs shadow_from_point(const PointData& pd, const FrictionParams& /*fp*/, double S,
                               double dPhi) {
    const double sig2 = pd.sigma * pd.sigma;
    const double S2 = S * S;
    const double alpha = pd.alphaOverS4 * S2 * S2;
    const double gamma = pd.gammaOverS2 * S2;
    const double eta = pd.eta;

    const double bEta = pd.dEta * pd.bY + 0.5 * pd.d2Eta * pd.sigmaY2;
    const double cEtaEta = pd.dEta * pd.dEta * pd.sigmaY2;
    const double cEtaPhi = pd.dEta * (pd.dPi / S) * pd.sigmaY2;

    const double bPhi = (pd.dPi * pd.bY + 0.5 * pd.d2Pi * pd.sigmaY2) / S + pd.pi * sig2 / S;
    const double cPhiS = -pd.pi * sig2;
    const double cPhiPhi = (pd.pi * pd.pi * sig2 + pd.dPi * pd.dPi * pd.sigmaY2) / S2;

    const double bAlpha = -(alpha / eta) * bEta + 6.0 * alpha * sig2 +
                          (alpha / (eta * eta)) * cEtaEta;
    const double cAlphaS = 4.0 * alpha * sig2 * S;
    const double cAlphaPhi = (4.0 * alpha / S) * cPhiS - (alpha / eta) * cEtaPhi;
    const double bGamma = -(gamma / (3.0 * eta)) * bEta + gamma * sig2 +
                          (2.0 / 9.0) * (gamma / (eta * eta)) * cEtaEta;
    const double cGammaS = 2.0 * gamma * sig2 * S;
    const double cGammaPhi = (2.0 * gamma / S) * cPhiS - (gamma / (3.0 * eta)) * cEtaPhi;

    // d(dS) = -(3 a x^2 - g) dphi + 3 a x d[phi,phi] - 3 x^2 d[a,phi] + x^3 da
    //         - x dg + d[g,phi]
    const double slope = 3.0 * alpha * dPhi * dPhi - gamma;
    ShadowCoeffs out;
    out.cSS = sig2 * S2;
    out.bDS = -slope * bPhi + 3.0 * alpha * dPhi * cPhiPhi - 3.0 * dPhi * dPhi * cAlphaPhi +
              dPhi * dPhi * dPhi * bAlpha - dPhi * bGamma + cGammaPhi;
    out.cDSS = -slope * cPhiS + dPhi * dPhi * dPhi * cAlphaS - dPhi * cGammaS;
    return out;
}

ShadowCoeffs shadow_coeffs(const BlackScholesModel& model, const FrictionParams& fp,
                           double S, double dPhi) {
    return shadow_from_point(point_data(model, fp), fp, S, dPhi);
}

ShadowCoeffs shadow_coeffs(const StochVolModel& model, const FrictionParams& fp,
                           double S, double y, double dPhi) {
    return shadow_from_point(point_data(model, fp, y), fp, S, dPhi);
}

std::size_t stop_rho1(const std::vector<double>& cDSS, const std::vector<double>& cSS) {
    if (cDSS.size() != cSS.size()) {
        throw std::invalid_argument("stop_rho1: coefficient tracks differ in length");
    }
    for (std::size_t k = 0; k < cDSS.size(); ++k) {
        if (std::abs(cDSS[k] / cSS[k]) > 0.5) return k;
    }
    return cDSS.size();
}

SamplePath theta_path(const TimeGrid& grid, const std::vector<double>& bDS,
                      const std::vector<double>& cDSS, const std::vector<double>& cSS) {
    const std::size_t n = grid.steps;
    if (bDS.size() != n || cDSS.size() != n || cSS.size() != n) {
        throw std::invalid_argument("theta_path: coefficient tracks must have one entry per interval");
    }
    const std::size_t rho1 = stop_rho1(cDSS, cSS);
    SamplePath theta;
    theta.grid = grid;
    theta.values.assign(n, 0.0);
    for (std::size_t k = 0; k < rho1; ++k) {
        theta.values[k] = bDS[k] / (cSS[k] + cDSS[k]);
    }
    return theta;
}

DualDensity density_path(const SamplePath& theta, const SamplePath& S,
                         const std::vector<double>& cSS, std::size_t tauIdx,
                         std::size_t rho1Idx) {
    const std::size_t n = S.grid.steps;
    if (theta.values.size() != n || cSS.size() != n) {
        throw std::invalid_argument("density_path: per-interval tracks must have size n");
    }
    DualDensity out;
    out.theta = theta;
    out.N.grid = out.Z.grid = out.Zbar.grid = S.grid;
    out.N.values.assign(n + 1, 0.0);
    out.Z.values.assign(n + 1, 1.0);
    out.Zbar.values.assign(n + 1, 1.0);
    out.rho1Idx = std::min(rho1Idx, n);
    out.rho2Idx = n;
    const double dt = S.grid.dt;

    double N = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        const double dS = S.values[k + 1] - S.values[k];
        N += -theta.values[k] * dS - 0.5 * theta.values[k] * theta.values[k] * cSS[k] * dt;
        out.N.values[k + 1] = N;
        out.Z.values[k + 1] = std::exp(N);
        if (out.rho2Idx == n && std::abs(out.Z.values[k + 1] - 1.0) > 0.5) {
            out.rho2Idx = k + 1;
        }
    }
    out.rhoIdx = std::min(out.rho1Idx, out.rho2Idx);
    const std::size_t freeze = std::min({out.rhoIdx, tauIdx, n});
    for (std::size_t k = 0; k <= n; ++k) {
        out.Zbar.values[k] = out.Z.values[std::min(k, freeze)];
    }
    return out;
}

double conjugate(double y, double p) {
    if (!(y > 0.0)) {
        throw std::invalid_argument("conjugate: y must be positive");
    }
    if (!(p > 0.0)) {
        throw std::invalid_argument("conjugate: p must be positive");
    }
    const double r = y / p;
    return r * (std::log(r) - 1.0);
}

} // namespace tcsim
