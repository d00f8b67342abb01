#include "tcsim/notrade.hpp"

#include <cmath>
#include <stdexcept>

namespace tcsim {

double halfwidth(double eta, double S, double p, double eps) {
    if (!(eta > 0.0) || !(S > 0.0) || !(p > 0.0) || !(eps > 0.0 && eps < 1.0)) {
        throw std::invalid_argument("halfwidth: need eta > 0, S > 0, p > 0, eps in (0,1)");
    }
    return std::cbrt(1.5 * eta * eps / p) / S;
}

CorridorCoeffs corridor_coeffs(const ModelPaths& paths, const FrictionParams& fp) {
    const std::size_t m = paths.S.points();
    CorridorCoeffs out;
    out.alpha.grid = out.beta.grid = out.gamma.grid = out.dPhiPlus.grid = paths.S.grid;
    out.alpha.values.resize(m);
    out.beta.values.resize(m);
    out.gamma.values.resize(m);
    out.dPhiPlus.values.resize(m);

    const double gammaScale = 3.0 * std::pow(0.5 * fp.eps, 2.0 / 3.0);
    for (std::size_t k = 0; k < m; ++k) {
        const double S = paths.S.values[k];
        const double eta = paths.eta.values[k];
        if (!(eta > 0.0)) {
            throw std::runtime_error("corridor_coeffs: degenerate model, c^{phi,phi} vanishes");
        }
        // alpha = p c^{S,S} / (3 c^{phi,phi}) = p S^4 / (3 eta)
        const double alpha = fp.p * S * S * S * S / (3.0 * eta);
        const double beta = std::cbrt(S / alpha);
        out.alpha.values[k] = alpha;
        out.beta.values[k] = beta;
        out.gamma.values[k] = gammaScale * alpha * beta * beta;
        out.dPhiPlus.values[k] = halfwidth(eta, S, fp.p, fp.eps);
    }
    return out;
}

double shadow_displacement(double dPhi, double alpha, double gamma) {
    return alpha * dPhi * dPhi * dPhi - gamma * dPhi;
}

ShadowPath shadow_price(const SamplePath& S, const SamplePath& dPhi, const CorridorCoeffs& coeffs) {
    if (!S.grid.same_as(dPhi.grid)) {
        throw std::invalid_argument("shadow_price: paths live on different grids");
    }
    const std::size_t m = S.points();
    ShadowPath out;
    out.dS.grid = out.sEps.grid = S.grid;
    out.dS.values.resize(m);
    out.sEps.values.resize(m);
    for (std::size_t k = 0; k < m; ++k) {
        const double w = coeffs.dPhiPlus.values[k];
        if (std::abs(dPhi.values[k]) > w * (1.0 + 1e-9)) {
            throw std::runtime_error("shadow_price: offset violates the corridor");
        }
        const double d = shadow_displacement(dPhi.values[k], coeffs.alpha.values[k],
                                             coeffs.gamma.values[k]);
        out.dS.values[k] = d;
        out.sEps.values[k] = S.values[k] + d;
    }
    return out;
}

} // namespace tcsim
