#include "tcsim/engine.hpp"

#include <cmath>
#include <stdexcept>

#include "tcsim/dual.hpp"
#include "tcsim/notrade.hpp"
#include "tcsim/parallel.hpp"
#include "tcsim/reflect.hpp"

namespace tcsim {

namespace {

constexpr double kPriceFloorScale = 1e-12;

double liquidation_value(double psi, double S, double eps) {
    return psi >= 0.0 ? psi * (1.0 - eps) * S : psi * (1.0 + eps) * S;
}

// Per-point model data with the eps-powers hoisted out of the hot loop. The
// expressions mirror point_data exactly so both routes agree bit for bit.
template <class Model>
struct Stepper {
    PointData pd;
    explicit Stepper(const Model& model, const FrictionParams& fp) : pd(point_data(model, fp)) {}
    const PointData& at(double /*y*/) const { return pd; }
};

template <>
struct Stepper<StochVolModel> {
    const StochVolModel* model;
    FrictionParams fp;
    double gammaScale;

    Stepper(const StochVolModel& m, const FrictionParams& params)
        : model(&m), fp(params), gammaScale(3.0 * std::pow(0.5 * params.eps, 2.0 / 3.0)) {}

    PointData at(double y) const {
        const SvDerivatives d = sv_derivatives(*model, fp.p, y);
        PointData pd;
        pd.sigma = d.sigma;
        pd.ratio = d.b / d.sigma;
        pd.pi = d.pi;
        pd.eta = d.eta;
        pd.dPi = d.dPi;
        pd.d2Pi = d.d2Pi;
        pd.dEta = d.dEta;
        pd.d2Eta = d.d2Eta;
        pd.bY = model->params().kappa * (model->params().meanY - y);
        pd.sigmaY2 = model->params().sigmaY * model->params().sigmaY;
        pd.alphaOverS4 = fp.p / (3.0 * pd.eta);
        pd.gammaOverS2 = gammaScale * std::cbrt(pd.alphaOverS4);
        pd.halfwidthTimesS = std::cbrt(1.5 * pd.eta * fp.eps / fp.p);
        return pd;
    }
};

template <class Model>
PathOutcome simulate_path_impl(const Model& model, const FrictionParams& fp, const TimeGrid& grid,
                               std::uint64_t seed, std::uint64_t pathIndex) {
    constexpr bool kStochVol = std::is_same_v<Model, StochVolModel>;
    const std::size_t n = grid.steps;
    const double dt = grid.dt;
    const double sqrtDt = std::sqrt(dt);
    const double eps = fp.eps;
    const double p = fp.p;
    const double wealthCap = std::pow(eps, -4.0 / 3.0);
    const double invEps23 = std::pow(eps, -2.0 / 3.0);
    const double logUpper = std::log(1.5);
    const double logLower = std::log(0.5);

    RngStream priceRng(seed, 2 * pathIndex);
    RngStream factorRng(seed, 2 * pathIndex + 1);
    double y = 0.0;
    double kappa = 0.0, meanY = 0.0, sigmaY = 0.0;
    if constexpr (kStochVol) {
        y = model.y0();
        kappa = model.params().kappa;
        meanY = model.params().meanY;
        sigmaY = model.params().sigmaY;
    }

    PathOutcome out;
    out.tauIdx = static_cast<std::uint32_t>(n);
    out.rho1Idx = static_cast<std::uint32_t>(n);
    out.rho2Idx = static_cast<std::uint32_t>(n);

    const Stepper<Model> stepper(model, fp);
    PointData pd = stepper.at(y);

    double S = model.s0();
    double w = pd.halfwidthTimesS / S;
    double phi = pd.pi / S;
    double dphi = initial_offset(fp.xS, S, phi, w);
    double psi = phi + dphi;

    double bank = fp.xB;
    {
        const double dPsi0 = psi - fp.xS / S;
        if (dPsi0 > 0.0) {
            bank -= dPsi0 * (1.0 + eps) * S;
        } else if (dPsi0 < 0.0) {
            bank += -dPsi0 * (1.0 - eps) * S;
        }
    }
    double X = bank + liquidation_value(psi, S, eps);
    double F = fp.x();
    out.minX = X;
    bool stopped = false;
    if (std::abs(X - F) > 1.0 || std::abs(X) > wealthCap) {
        out.tauIdx = 0;
        stopped = true;
        bank += liquidation_value(psi, S, eps);
        psi = 0.0;
        X = bank;
    }

    double logU = 0.0;
    double logPfac = 0.0;
    double N = 0.0;
    double zbarLogN = 0.0; // N frozen at tau ^ rho
    bool dualActive = !stopped;

    for (std::size_t k = 0; k < n; ++k) {
        const double sig2 = pd.sigma * pd.sigma;
        const double cSS = sig2 * S * S;
        out.intDphiPlus2 += w * w * cSS * dt;
        out.intDphi2 += dphi * dphi * cSS * dt;
        if (dualActive) out.intDphi2Stop += dphi * dphi * cSS * dt;
        out.lossFormulaIntegral +=
            0.5 * p * pd.halfwidthTimesS * pd.halfwidthTimesS * sig2 * invEps23 * dt;

        double theta = 0.0;
        if (dualActive) {
            const ShadowCoeffs sc = shadow_from_point(pd, fp, S, dphi);
            if (std::abs(sc.cDSS / sc.cSS) > 0.5) {
                out.rho1Idx = static_cast<std::uint32_t>(k);
                dualActive = false;
            } else {
                theta = sc.bDS / (sc.cSS + sc.cDSS);
                const double sigS = pd.sigma * S;
                out.thetaDevMax = std::max(out.thetaDevMax, std::abs((theta - p * dphi) * sigS));
                out.pDphiSigmaMax = std::max(out.pDphiSigmaMax, std::abs(p * dphi * sigS));
            }
        }

        const double dW = sqrtDt * priceRng.normal();
        double sNew = S + S * pd.sigma * dW;
        sNew = std::max(sNew, kPriceFloorScale * model.s0());
        const double dS = sNew - S;

        if (dualActive) {
            N += -theta * dS - 0.5 * theta * theta * cSS * dt;
            zbarLogN = N;
            if (N > logUpper || N < logLower) {
                out.rho2Idx = static_cast<std::uint32_t>(k + 1);
                dualActive = false;
            }
        }

        F += phi * dS;
        logU += -0.5 * pd.ratio * pd.ratio * dt;
        logPfac += pd.ratio * dW - 0.5 * pd.ratio * pd.ratio * dt;

        S = sNew;
        if constexpr (kStochVol) {
            y += kappa * (meanY - y) * dt + sigmaY * sqrtDt * factorRng.normal();
            pd = stepper.at(y);
        }
        const double phiNew = pd.pi / S;
        w = pd.halfwidthTimesS / S;

        const double proposed = dphi - (phiNew - phi);
        double upInc = 0.0;
        double downInc = 0.0;
        dphi = reflect_step(proposed, -w, w, upInc, downInc);
        if (std::max(upInc, downInc) > 2.0 * w) ++out.coarseSteps;
        phi = phiNew;

        if (!stopped) {
            if (upInc > 0.0) bank -= upInc * (1.0 + eps) * S;
            if (downInc > 0.0) bank += downInc * (1.0 - eps) * S;
            psi = phi + dphi;
            X = bank + liquidation_value(psi, S, eps);
            out.minX = std::min(out.minX, X);
            if (std::abs(X - F) > 1.0 || std::abs(X) > wealthCap) {
                out.tauIdx = static_cast<std::uint32_t>(k + 1);
                stopped = true;
                dualActive = false;
                bank += liquidation_value(psi, S, eps);
                psi = 0.0;
                X = bank;
            }
        }
    }

    out.u = std::exp(logU);
    out.pFactor = std::exp(logPfac);
    out.FT = F;
    out.XT = X;
    out.D = X - F;
    out.expNegPD = std::exp(-p * out.D);
    out.zbarT = std::exp(zbarLogN);
    out.gDual = (out.zbarT - 1.0) * (-p * F - 1.0) + out.zbarT * zbarLogN;
    return out;
}

struct WeightedMean {
    double mean = 0.0;
    double se = 0.0;
};

template <class Pick>
WeightedMean weighted_mean(const std::vector<PathOutcome>& outcomes, Pick pick) {
    const std::size_t m = outcomes.size();
    std::vector<double> wh(m), wsum(m);
    for (std::size_t i = 0; i < m; ++i) {
        wsum[i] = outcomes[i].u;
        wh[i] = outcomes[i].u * pick(outcomes[i]);
    }
    const double totW = pairwise_sum(wsum);
    const double mean = pairwise_sum(wh) / totW;
    std::vector<double> dev(m);
    for (std::size_t i = 0; i < m; ++i) {
        const double d = pick(outcomes[i]) - mean;
        dev[i] = outcomes[i].u * outcomes[i].u * d * d;
    }
    WeightedMean out;
    out.mean = mean;
    out.se = std::sqrt(pairwise_sum(dev)) / totW;
    return out;
}

} // namespace

PathOutcome simulate_path(const BlackScholesModel& model, const FrictionParams& fp,
                          const TimeGrid& grid, std::uint64_t seed, std::uint64_t pathIndex) {
    return simulate_path_impl(model, fp, grid, seed, pathIndex);
}

PathOutcome simulate_path(const StochVolModel& model, const FrictionParams& fp,
                          const TimeGrid& grid, std::uint64_t seed, std::uint64_t pathIndex) {
    return simulate_path_impl(model, fp, grid, seed, pathIndex);
}

namespace {

template <class Model>
std::vector<PathOutcome> run_ensemble_impl(const Model& model, const FrictionParams& fp,
                                           const EngineOptions& opt) {
    fp.validate();
    const TimeGrid grid = make_grid(fp.horizon, opt.steps);
    std::vector<PathOutcome> outcomes(opt.paths);
    parallel_for(opt.paths, opt.workers, [&](std::size_t i) {
        outcomes[i] = simulate_path_impl(model, fp, grid, opt.seed, i);
    });
    return outcomes;
}

} // namespace

std::vector<PathOutcome> run_ensemble(const BlackScholesModel& model, const FrictionParams& fp,
                                      const EngineOptions& opt) {
    return run_ensemble_impl(model, fp, opt);
}

std::vector<PathOutcome> run_ensemble(const StochVolModel& model, const FrictionParams& fp,
                                      const EngineOptions& opt) {
    return run_ensemble_impl(model, fp, opt);
}

EpsilonSummary summarize(const std::vector<PathOutcome>& outcomes, const FrictionParams& fp,
                         const EngineOptions& opt) {
    if (outcomes.empty()) {
        throw std::invalid_argument("summarize: empty ensemble");
    }
    const double p = fp.p;
    const std::size_t m = outcomes.size();
    const std::size_t n = opt.steps;

    EpsilonSummary s;
    s.eps = fp.eps;
    s.paths = m;
    s.steps = n;

    std::vector<double> tmp(m);
    for (std::size_t i = 0; i < m; ++i) tmp[i] = outcomes[i].u;
    const double meanU = pairwise_sum(tmp) / static_cast<double>(m);
    s.y = p * std::exp(-p * fp.x()) * meanU;
    s.frictionlessCE = -std::log(s.y / p) / p;

    // E[U(X_tau)] = -e^{-p x} E_Q-sample[u e^{-p D}]: the measure change and
    // the frictionless part of the wealth cancel exactly path by path, so the
    // estimator only carries the O(eps^{1/3}) fluctuation of D.
    for (std::size_t i = 0; i < m; ++i) tmp[i] = outcomes[i].u * outcomes[i].expNegPD;
    const double meanUD = pairwise_sum(tmp) / static_cast<double>(m);
    for (std::size_t i = 0; i < m; ++i) {
        const double d = outcomes[i].u * outcomes[i].expNegPD - meanUD;
        tmp[i] = d * d;
    }
    const double seUD =
        std::sqrt(pairwise_sum(tmp) / static_cast<double>(m)) / std::sqrt(static_cast<double>(m));
    const double scale = std::exp(-p * fp.x());
    s.primalU = -scale * meanUD;
    s.primalUSe = scale * seUD;

    // Dual bound E[conj(y Z Zbar)] + x y with the exact pieces
    // E[conj(y Z)] + x y = -y/p and E_Q[F_T] = x substituted as control
    // variates, leaving the weighted mean of g = (Zbar-1)(-pF-1) + Zbar ln Zbar.
    const WeightedMean g = weighted_mean(outcomes, [](const PathOutcome& o) { return o.gDual; });
    s.dualU = -(s.y / p) * (1.0 - g.mean);
    s.dualUSe = (s.y / p) * g.se;

    if (!(s.primalU < 0.0)) {
        throw std::runtime_error("summarize: non-negative primal utility estimate");
    }
    if (!(s.dualU < 0.0)) {
        throw std::runtime_error("summarize: non-negative dual utility bound");
    }
    s.primalCE = -std::log(-s.primalU) / p;
    s.primalCESe = s.primalUSe / (p * -s.primalU);
    s.dualCE = -std::log(-s.dualU) / p;
    s.dualCESe = s.dualUSe / (p * -s.dualU);

    const WeightedMean plus2 =
        weighted_mean(outcomes, [](const PathOutcome& o) { return o.intDphiPlus2; });
    const WeightedMean off2 =
        weighted_mean(outcomes, [](const PathOutcome& o) { return o.intDphi2; });
    const WeightedMean off2Stop =
        weighted_mean(outcomes, [](const PathOutcome& o) { return o.intDphi2Stop; });
    const WeightedMean lossInt =
        weighted_mean(outcomes, [](const PathOutcome& o) { return o.lossFormulaIntegral; });
    s.leadingLoss = 0.5 * p * plus2.mean;
    s.lossFormula = lossInt.mean * std::pow(fp.eps, 2.0 / 3.0);
    s.ergodicRatio = off2.mean / plus2.mean;
    s.dualMomentRef = p * p * off2Stop.mean;

    const WeightedMean zbar = weighted_mean(outcomes, [](const PathOutcome& o) { return o.zbarT; });
    s.zbarMean = zbar.mean;
    s.zbarMeanSe = zbar.se;
    const WeightedMean zbar2 = weighted_mean(
        outcomes, [](const PathOutcome& o) { return (o.zbarT - 1.0) * (o.zbarT - 1.0); });
    s.zbarM2 = zbar2.mean;

    std::size_t tauCount = 0, rho1Count = 0, rho2Count = 0;
    std::size_t coarse = 0;
    double devNum = 0.0, devDen = 0.0;
    double minX = outcomes[0].minX;
    for (const auto& o : outcomes) {
        if (o.tauIdx < n) ++tauCount;
        if (o.rho1Idx < n) ++rho1Count;
        if (o.rho2Idx < n) ++rho2Count;
        coarse += o.coarseSteps;
        devNum = std::max(devNum, o.thetaDevMax);
        devDen = std::max(devDen, o.pDphiSigmaMax);
        minX = std::min(minX, o.minX);
    }
    s.tauFrac = static_cast<double>(tauCount) / static_cast<double>(m);
    s.rho1Frac = static_cast<double>(rho1Count) / static_cast<double>(m);
    s.rho2Frac = static_cast<double>(rho2Count) / static_cast<double>(m);
    s.coarseFrac = static_cast<double>(coarse) / static_cast<double>(m * n);
    s.thetaDevRatio = devDen > 0.0 ? devNum / devDen : 0.0;
    s.minXWorst = minX;
    return s;
}

EpsilonSummary run_epsilon(const BlackScholesModel& model, const FrictionParams& fp,
                           const EngineOptions& opt) {
    return summarize(run_ensemble(model, fp, opt), fp, opt);
}

EpsilonSummary run_epsilon(const StochVolModel& model, const FrictionParams& fp,
                           const EngineOptions& opt) {
    return summarize(run_ensemble(model, fp, opt), fp, opt);
}

} // namespace tcsim
