#include "tcsim/verify.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <sstream>

#include "tcsim/dual.hpp"
#include "tcsim/engine.hpp"
#include "tcsim/experiment.hpp"
#include "tcsim/ledger.hpp"
#include "tcsim/metrics.hpp"
#include "tcsim/notrade.hpp"
#include "tcsim/parallel.hpp"
#include "tcsim/reflect.hpp"

namespace tcsim {

namespace {

std::string num(double x) {
    std::ostringstream os;
    os.precision(6);
    os << x;
    return os.str();
}

struct Tuple {
    double b, sigma, p, eps, T, s0;
};

std::vector<Tuple> random_tuples(std::uint64_t seed, std::size_t count) {
    std::vector<Tuple> out(count);
    RngStream rng(seed, 0);
    for (auto& t : out) {
        t.b = 0.02 + 0.28 * rng.uniform();
        t.sigma = 0.1 + 0.4 * rng.uniform();
        t.p = 0.5 + 4.5 * rng.uniform();
        t.eps = std::pow(10.0, -5.0 + 3.0 * rng.uniform());
        t.T = 0.25 + 3.75 * rng.uniform();
        t.s0 = 0.5 + 2.0 * rng.uniform();
    }
    return out;
}

// Criterion 1: the Black-Scholes leading loss computed from the corridor
// half-width agrees with the closed form (9 b^4 eps^2 / (32 sigma^2))^{1/3} T/p.
CheckResult check_bs_closed_form(const ExperimentConfig& cfg) {
    CheckResult r;
    r.name = "bs-closed-form-loss";
    double worst = 0.0;
    for (const Tuple& t : random_tuples(cfg.seed + 101, 20)) {
        const double pi = t.b / (t.p * t.sigma * t.sigma);
        const double eta = pi * pi;
        const double w = halfwidth(eta, t.s0, t.p, t.eps);
        const double viaModule = 0.5 * t.p * (w * t.s0) * (w * t.s0) * t.sigma * t.sigma * t.T;
        const double closedForm =
            std::cbrt(9.0 * std::pow(t.b, 4.0) * t.eps * t.eps / (32.0 * t.sigma * t.sigma)) *
            t.T / t.p;
        worst = std::max(worst, std::abs(viaModule / closedForm - 1.0));
    }
    r.margin = worst / 1e-10;
    r.pass = worst <= 1e-10;
    r.detail = "max relative error " + num(worst) + " (tolerance 1e-10)";
    return r;
}

// Criterion 2: cubic tangency 3 alpha (dPhi+)^2 = gamma and boundary values
// dS(+-dPhi+) = -+ eps S along simulated paths.
template <class Model>
double cubic_geometry_worst(const Model& model, const FrictionParams& fp, std::uint64_t seed,
                            std::size_t nPaths, std::size_t steps) {
    double worst = 0.0;
    const TimeGrid grid = make_grid(fp.horizon, steps);
    for (std::size_t i = 0; i < nPaths; ++i) {
        const ModelPaths paths = simulate_under_Q(model, grid, fp, seed, i);
        const CorridorCoeffs coeffs = corridor_coeffs(paths, fp);
        for (std::size_t k = 0; k <= steps; ++k) {
            const double S = paths.S.values[k];
            const double alpha = coeffs.alpha.values[k];
            const double gamma = coeffs.gamma.values[k];
            const double w = coeffs.dPhiPlus.values[k];
            worst = std::max(worst, std::abs(3.0 * alpha * w * w - gamma) / gamma);
            const double up = shadow_displacement(w, alpha, gamma);
            const double dn = shadow_displacement(-w, alpha, gamma);
            worst = std::max(worst, std::abs(up + fp.eps * S) / (fp.eps * S));
            worst = std::max(worst, std::abs(dn - fp.eps * S) / (fp.eps * S));
            const double beta = coeffs.beta.values[k];
            worst = std::max(worst,
                             std::abs(beta - w * std::cbrt(2.0 / fp.eps)) /
                                 std::max(beta, 1e-300));
        }
    }
    return worst;
}

CheckResult check_cubic_geometry(const ExperimentConfig& cfg) {
    CheckResult r;
    r.name = "cubic-shadow-geometry";
    double worst = 0.0;
    for (const Tuple& t : random_tuples(cfg.seed + 101, 20)) {
        const BlackScholesModel model(t.b, t.sigma, t.s0);
        FrictionParams fp;
        fp.eps = t.eps;
        fp.p = t.p;
        fp.xB = 0.5;
        fp.xS = 0.5;
        fp.horizon = t.T;
        worst = std::max(worst, cubic_geometry_worst(model, fp, cfg.seed + 202, 10, 64));
    }
    r.margin = worst / 1e-10;
    r.pass = worst <= 1e-10;
    r.detail = "max relative defect " + num(worst) + " (tolerance 1e-10)";
    return r;
}

// Criterion 3 core: containment, exact decomposition, strict complementarity.
struct SkorohodDefects {
    double containment = 0.0;
    double decomposition = 0.0;
    std::size_t complementarityBreaches = 0;
};

SkorohodDefects skorohod_defects(const SamplePath& phi, const SamplePath& lower,
                                 const SamplePath& upper, double dPhi0) {
    const ReflectedSolution sol = solve_skorohod(phi, lower, upper, dPhi0);
    SkorohodDefects d;
    const std::size_t n = phi.grid.steps;
    for (std::size_t k = 0; k <= n; ++k) {
        d.containment = std::max(d.containment, lower.values[k] - sol.dPhi.values[k]);
        d.containment = std::max(d.containment, sol.dPhi.values[k] - upper.values[k]);
        const double recon = dPhi0 - (phi.values[k] - phi.values[0]) + sol.up.values[k] -
                             sol.down.values[k];
        d.decomposition = std::max(d.decomposition, std::abs(sol.dPhi.values[k] - recon));
        if (k > 0) {
            const double upInc = sol.up.values[k] - sol.up.values[k - 1];
            const double downInc = sol.down.values[k] - sol.down.values[k - 1];
            if (upInc > 0.0 && downInc > 0.0) ++d.complementarityBreaches;
            if (upInc > 0.0 && sol.dPhi.values[k] != lower.values[k]) ++d.complementarityBreaches;
            if (downInc > 0.0 && sol.dPhi.values[k] != upper.values[k]) ++d.complementarityBreaches;
        }
    }
    return d;
}

CheckResult check_skorohod_invariants(const ExperimentConfig& cfg) {
    CheckResult r;
    r.name = "skorohod-invariants";
    const TimeGrid grid = make_grid(1.0, 1000);
    SkorohodDefects worst;
    for (std::size_t i = 0; i < 1000; ++i) {
        RngStream rng(cfg.seed + 303, i);
        const SamplePath phi = simulate_bm(grid, rng);
        SamplePath lower, upper;
        lower.grid = upper.grid = grid;
        lower.values.resize(grid.points());
        upper.values.resize(grid.points());
        for (std::size_t k = 0; k <= grid.steps; ++k) {
            const double w =
                (i % 2 == 0) ? 1.0 : 0.8 + 0.4 * std::cos(2.0 * 3.141592653589793 * grid.time_at(k));
            lower.values[k] = -w;
            upper.values[k] = w;
        }
        const SkorohodDefects d = skorohod_defects(phi, lower, upper, 0.0);
        worst.containment = std::max(worst.containment, d.containment);
        worst.decomposition = std::max(worst.decomposition, d.decomposition);
        worst.complementarityBreaches += d.complementarityBreaches;
    }

    // Self-convergence against the finest grid: strong order ~ 1/2 shows up as
    // an error ratio near sqrt(2) per grid doubling.
    const std::size_t fineLog = 20;
    const std::size_t fineN = std::size_t(1) << fineLog;
    std::vector<double> ratios;
    std::vector<double> pathRatio(100, 0.0);
    parallel_for(100, cfg.workers, [&](std::size_t i) {
        RngStream rng(cfg.seed + 404, i);
        std::vector<double> w(fineN + 1, 0.0);
        const double sqrtDt = std::sqrt(1.0 / static_cast<double>(fineN));
        for (std::size_t k = 0; k < fineN; ++k) w[k + 1] = w[k] + sqrtDt * rng.normal();

        auto solve_level = [&](std::size_t levelLog) {
            const std::size_t nL = std::size_t(1) << levelLog;
            const std::size_t stride = fineN / nL;
            SamplePath phi, lower, upper;
            phi.grid = lower.grid = upper.grid = make_grid(1.0, nL);
            phi.values.resize(nL + 1);
            for (std::size_t k = 0; k <= nL; ++k) phi.values[k] = w[k * stride];
            // Narrow corridor so every path reflects many times.
            lower.values.assign(nL + 1, -0.25);
            upper.values.assign(nL + 1, 0.25);
            return solve_skorohod(phi, lower, upper, 0.0).dPhi;
        };

        const SamplePath fine = solve_level(fineLog);
        std::vector<double> err;
        for (std::size_t levelLog = 10; levelLog < fineLog; ++levelLog) {
            const SamplePath coarse = solve_level(levelLog);
            const std::size_t stride = fineN >> levelLog;
            double e = 0.0;
            for (std::size_t k = 0; k < coarse.values.size(); ++k) {
                e = std::max(e, std::abs(coarse.values[k] - fine.values[k * stride]));
            }
            err.push_back(e);
        }
        double sum = 0.0;
        std::size_t used = 0;
        for (std::size_t j = 0; j + 1 < err.size(); ++j) {
            if (err[j + 1] > 1e-14) {
                sum += err[j] / err[j + 1];
                ++used;
            }
        }
        pathRatio[i] = used > 0 ? sum / static_cast<double>(used) : 1.45;
    });
    const double meanRatio = pairwise_sum(pathRatio) / 100.0;

    const bool pass = worst.containment <= 0.0 && worst.decomposition <= 1e-12 &&
                      worst.complementarityBreaches == 0 && meanRatio >= 1.2 && meanRatio <= 1.7;
    r.pass = pass;
    r.margin = std::max({worst.decomposition / 1e-12,
                         std::abs(meanRatio - 1.45) / 0.25,
                         worst.complementarityBreaches > 0 ? 2.0 : 0.0});
    r.detail = "decomposition " + num(worst.decomposition) + ", containment " +
               num(worst.containment) + ", complementarity breaches " +
               num(static_cast<double>(worst.complementarityBreaches)) + ", convergence ratio " +
               num(meanRatio) + " (window [1.2, 1.7])";
    return r;
}

// Criterion 4: ergodics of reflected Brownian motion on [-1, 1].
CheckResult check_reflected_bm(const ExperimentConfig& cfg) {
    CheckResult r;
    r.name = "reflected-bm-ergodics";
    const ReflectedBmStats stats = reflected_bm_occupation(1e4, 2.5e-4, cfg.seed + 505);
    const double errMean = std::abs(stats.qvWeightedQ2 - 1.0 / 3.0);
    r.pass = errMean <= 0.02 && stats.ksUniform <= 0.02;
    r.margin = std::max(errMean / 0.02, stats.ksUniform / 0.02);
    r.detail = "qv-weighted mean of q^2 = " + num(stats.qvWeightedQ2) + " (target 1/3 +- 0.02), KS = " +
               num(stats.ksUniform) + " (tolerance 0.02)";
    return r;
}

// Criterion 5: corridor ergodic ratio at eps = 1e-4.
CheckResult check_corridor_ergodic(const ExperimentConfig& cfg) {
    CheckResult r;
    r.name = "corridor-ergodic-ratio";
    const BlackScholesModel model(cfg.model.b, cfg.model.sigma, cfg.model.s0);
    EngineOptions opt;
    opt.steps = 100000;
    opt.paths = 10000;
    opt.seed = cfg.seed + 606;
    opt.workers = cfg.workers;
    const EpsilonSummary s = run_epsilon(model, cfg.friction(1e-4), opt);
    const double rel = std::abs(s.ergodicRatio * 3.0 - 1.0);
    r.pass = rel <= 0.10;
    r.margin = rel / 0.10;
    r.detail = "ratio " + num(s.ergodicRatio) + " vs 1/3, relative deviation " + num(rel) +
               " (tolerance 0.10)";
    return r;
}

// Shared by criteria 6 and 11: the path-level pipeline gap between bid/ask
// accounting and frictionless trading at the shadow price.
template <class Model>
double pipeline_gap(const Model& model, const FrictionParams& fp, std::size_t steps,
                    std::size_t nPaths, std::uint64_t seed, unsigned workers) {
    std::vector<double> gaps(nPaths, 0.0);
    parallel_for(nPaths, workers, [&](std::size_t i) {
        const TimeGrid grid = make_grid(fp.horizon, steps);
        const ModelPaths paths = simulate_under_Q(model, grid, fp, seed, i);
        const CorridorCoeffs coeffs = corridor_coeffs(paths, fp);
        SamplePath lower = coeffs.dPhiPlus, upper = coeffs.dPhiPlus;
        for (auto& v : lower.values) v = -v;
        const double dPhi0 = initial_offset(fp.xS, paths.S.values[0], paths.phi.values[0],
                                            coeffs.dPhiPlus.values[0]);
        const ReflectedSolution sol = solve_skorohod(paths.phi, lower, upper, dPhi0);
        SamplePath psi;
        psi.grid = grid;
        psi.values.resize(grid.points());
        for (std::size_t k = 0; k <= steps; ++k) {
            psi.values[k] = paths.phi.values[k] + sol.dPhi.values[k];
        }
        TradeLedger ledger = apply_strategy(paths.S, psi, fp);
        SamplePath frictionless;
        frictionless.grid = grid;
        frictionless.values.resize(grid.points());
        frictionless.values[0] = fp.x();
        for (std::size_t k = 0; k < steps; ++k) {
            frictionless.values[k + 1] =
                frictionless.values[k] +
                paths.phi.values[k] * (paths.S.values[k + 1] - paths.S.values[k]);
        }
        const std::size_t tau = stop_time_tau(ledger.X, frictionless, fp.eps);
        liquidate_at(ledger, paths.S, fp, tau);
        const ShadowPath shadow = shadow_price(paths.S, sol.dPhi, coeffs);
        gaps[i] = shadow_consistency_gap(ledger, shadow, fp);
    });
    double worst = 0.0;
    for (double g : gaps) worst = std::max(worst, g);
    return worst;
}

CheckResult check_shadow_consistency(const ExperimentConfig& cfg) {
    CheckResult r;
    r.name = "shadow-consistency";
    const BlackScholesModel model(cfg.model.b, cfg.model.sigma, cfg.model.s0);
    const FrictionParams fp = cfg.friction(1e-3);
    const double fine = pipeline_gap(model, fp, 100000, 100, cfg.seed + 707, cfg.workers);
    const double coarse = pipeline_gap(model, fp, 1000, 100, cfg.seed + 707, cfg.workers);
    r.pass = fine <= 0.01 && fine <= coarse + 1e-9;
    r.margin = fine / 0.01;
    r.detail = "max relative gap " + num(fine) + " at n=1e5 (tolerance 0.01), " + num(coarse) +
               " at n=1e3";
    return r;
}

// Criteria 7-10 share one sweep.
struct SweepChecks {
    CheckResult duality;
    CheckResult scaling;
    CheckResult dualMoments;
    CheckResult stopping;
};

// Steps that keep the reflected offset resolved: the corridor mixing time is
// (3 eps / (2 b sigma))^{2/3}, and the projection scheme needs a few hundred
// steps per mixing time for its occupation bias to stay in the noise.
std::size_t resolved_steps(const ExperimentConfig& cfg, double eps) {
    const double mix =
        std::pow(1.5 * eps / (cfg.model.b * cfg.model.sigma), 2.0 / 3.0);
    const double n = 250.0 * cfg.horizon / mix;
    return std::min<std::size_t>(110000,
                                 std::max<std::size_t>(4000, static_cast<std::size_t>(n)));
}

SweepChecks check_sweep(const ExperimentConfig& cfg) {
    ExperimentConfig sweepCfg = cfg;
    sweepCfg.paths = 100000;
    SweepResult sweep;
    for (double eps : sweepCfg.epsList) {
        sweepCfg.steps = resolved_steps(sweepCfg, eps);
        SweepRow row;
        const EpsilonSummary s = run_single(sweepCfg, eps);
        row.eps = s.eps;
        row.primalCE = s.primalCE;
        row.primalSe = s.primalCESe;
        row.dualCEBound = s.dualCE;
        row.dualSe = s.dualCESe;
        row.leadingLoss = s.leadingLoss;
        row.ergodicRatio = s.ergodicRatio;
        row.tauEarlyFrac = s.tauFrac;
        row.rho1Frac = s.rho1Frac;
        row.rho2Frac = s.rho2Frac;
        row.summary = s;
        sweep.rows.push_back(row);
    }
    sweep.frictionlessCE = sweep.rows.front().summary.frictionlessCE;
    {
        std::vector<double> epsV, lossV;
        for (const auto& row : sweep.rows) {
            const double loss = row.summary.frictionlessCE - row.primalCE;
            if (loss > 0.0) {
                epsV.push_back(row.eps);
                lossV.push_back(loss);
            }
        }
        if (epsV.size() >= 2) {
            sweep.scalingSlope = eps_scaling_fit(epsV, lossV);
            sweep.slopeValid = true;
        }
    }

    SweepChecks out;
    // 7: weak duality sandwich plus shrinking normalized gap.
    {
        CheckResult& r = out.duality;
        r.name = "weak-duality-sandwich";
        bool sandwich = true;
        bool shrinking = true;
        double worstMargin = 0.0;
        std::vector<double> normGap, normSlack;
        for (const auto& row : sweep.rows) {
            const double slack = 3.0 * (row.primalSe + row.dualSe);
            const double gap = row.dualCEBound - row.primalCE;
            if (gap < -slack) sandwich = false;
            worstMargin = std::max(worstMargin, slack > 0.0 ? -gap / slack : 0.0);
            const double e23 = std::pow(row.eps, 2.0 / 3.0);
            normGap.push_back(std::abs(gap) / e23);
            normSlack.push_back(3.0 * (row.primalSe + row.dualSe) / e23);
        }
        for (std::size_t i = 0; i + 1 < normGap.size(); ++i) {
            if (normGap[i + 1] > normGap[i] + normSlack[i] + normSlack[i + 1]) shrinking = false;
        }
        r.pass = sandwich && shrinking;
        r.margin = worstMargin;
        std::string gaps;
        for (double g : normGap) gaps += (gaps.empty() ? "" : ", ") + num(g);
        r.detail = std::string(sandwich ? "bound holds" : "bound violated") +
                   "; |dual-primal|/eps^{2/3} = [" + gaps + "]" +
                   (shrinking ? " nonincreasing within noise" : " NOT nonincreasing");
    }
    // 8: scaling slope.
    {
        CheckResult& r = out.scaling;
        r.name = "eps-scaling-slope";
        r.pass = sweep.slopeValid && sweep.scalingSlope >= 0.60 && sweep.scalingSlope <= 0.74;
        r.margin = sweep.slopeValid ? std::abs(sweep.scalingSlope - 2.0 / 3.0) / 0.07 : 2.0;
        r.detail = "measured slope " + (sweep.slopeValid ? num(sweep.scalingSlope) : "n/a") +
                   " (window [0.60, 0.74])";
    }
    // 9: dual density moments at eps = 1e-3, reusing the sweep row when the
    // sweep contains that spread and running a dedicated ensemble otherwise.
    {
        CheckResult& r = out.dualMoments;
        r.name = "dual-density-moments";
        const EpsilonSummary* at = nullptr;
        EpsilonSummary dedicated;
        for (const auto& row : sweep.rows) {
            if (std::abs(std::log(row.eps / 1e-3)) < 0.1) at = &row.summary;
        }
        if (at == nullptr) {
            sweepCfg.steps = resolved_steps(sweepCfg, 1e-3);
            dedicated = run_single(sweepCfg, 1e-3);
            at = &dedicated;
        }
        const double relMoment = std::abs(at->zbarM2 / at->dualMomentRef - 1.0);
        const double meanDev = std::abs(at->zbarMean - 1.0);
        const double meanSlack = 3.0 * at->zbarMeanSe;
        r.pass = relMoment <= 0.10 && meanDev <= meanSlack;
        r.margin = std::max(relMoment / 0.10, meanSlack > 0.0 ? meanDev / meanSlack : 0.0);
        r.detail = "E[(Zbar-1)^2]/ref = " + num(at->zbarM2 / at->dualMomentRef) +
                   " (tolerance 0.10), |E[Zbar]-1| = " + num(meanDev) + " vs 3 s.e. " +
                   num(meanSlack);
    }
    // 10: stopping rarity.
    {
        CheckResult& r = out.stopping;
        r.name = "stopping-rarity";
        bool monotone = true;
        for (std::size_t i = 0; i + 1 < sweep.rows.size(); ++i) {
            if (sweep.rows[i + 1].tauEarlyFrac > sweep.rows[i].tauEarlyFrac ||
                sweep.rows[i + 1].rho1Frac > sweep.rows[i].rho1Frac ||
                sweep.rows[i + 1].rho2Frac > sweep.rows[i].rho2Frac) {
                monotone = false;
            }
        }
        const auto& last = sweep.rows.back();
        const bool zeroAtSmallest =
            last.tauEarlyFrac == 0.0 && last.rho1Frac == 0.0 && last.rho2Frac == 0.0;
        r.pass = monotone && zeroAtSmallest;
        r.margin = r.pass ? 0.0 : 2.0;
        r.detail = std::string("fractions ") + (monotone ? "nonincreasing" : "NOT nonincreasing") +
                   ", smallest-eps fractions " +
                   (zeroAtSmallest ? "all zero" : "nonzero: tau " + num(last.tauEarlyFrac) +
                                                      " rho1 " + num(last.rho1Frac) + " rho2 " +
                                                      num(last.rho2Frac));
    }
    return out;
}

// Criterion 11 pieces for stochastic-vol configs.
CheckResult check_sv_degeneration(const ExperimentConfig& cfg) {
    CheckResult r;
    r.name = "sv-degeneration";
    ExperimentConfig svCfg = cfg;
    svCfg.paths = 10000;
    svCfg.steps = 2000;
    svCfg.epsList = {1e-2, 1e-3};
    ExperimentConfig bsCfg = svCfg;
    bsCfg.model.kind = "black-scholes";

    const SweepResult sv = run_sweep(svCfg);
    const SweepResult bs = run_sweep(bsCfg);
    double worst = 0.0;
    for (std::size_t i = 0; i < sv.rows.size(); ++i) {
        const auto rel = [](double a, double b) {
            return std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1e-12});
        };
        worst = std::max(worst, rel(sv.rows[i].primalCE, bs.rows[i].primalCE));
        worst = std::max(worst, rel(sv.rows[i].dualCEBound, bs.rows[i].dualCEBound));
        worst = std::max(worst, rel(sv.rows[i].leadingLoss, bs.rows[i].leadingLoss));
        worst = std::max(worst, rel(sv.rows[i].ergodicRatio, bs.rows[i].ergodicRatio));
    }
    r.pass = worst <= 1e-9;
    r.margin = worst / 1e-9;
    r.detail = "max relative deviation from the Black-Scholes twin " + num(worst) +
               " on matched seeds (tolerance 1e-9)";
    return r;
}

CheckResult check_sv_cubic_geometry(const ExperimentConfig& cfg, const StochVolModel& model) {
    CheckResult r;
    r.name = "sv-cubic-shadow-geometry";
    const FrictionParams fp = cfg.friction(1e-3);
    const double worst = cubic_geometry_worst(model, fp, cfg.seed + 808, 10, 64);
    r.pass = worst <= 1e-10;
    r.margin = worst / 1e-10;
    r.detail = "max relative defect " + num(worst) + " (tolerance 1e-10)";
    return r;
}

CheckResult check_sv_skorohod(const ExperimentConfig& cfg, const StochVolModel& model) {
    CheckResult r;
    r.name = "sv-skorohod-invariants";
    const FrictionParams fp = cfg.friction(1e-3);
    const TimeGrid grid = make_grid(fp.horizon, 2000);
    SkorohodDefects worst;
    for (std::size_t i = 0; i < 100; ++i) {
        const ModelPaths paths = simulate_under_Q(model, grid, fp, cfg.seed + 909, i);
        const CorridorCoeffs coeffs = corridor_coeffs(paths, fp);
        SamplePath lower = coeffs.dPhiPlus, upper = coeffs.dPhiPlus;
        for (auto& v : lower.values) v = -v;
        const double dPhi0 = initial_offset(fp.xS, paths.S.values[0], paths.phi.values[0],
                                            coeffs.dPhiPlus.values[0]);
        const SkorohodDefects d = skorohod_defects(paths.phi, lower, upper, dPhi0);
        worst.containment = std::max(worst.containment, d.containment);
        worst.decomposition = std::max(worst.decomposition, d.decomposition);
        worst.complementarityBreaches += d.complementarityBreaches;
    }
    r.pass = worst.containment <= 0.0 && worst.decomposition <= 1e-12 &&
             worst.complementarityBreaches == 0;
    r.margin = worst.decomposition / 1e-12;
    r.detail = "decomposition " + num(worst.decomposition) + ", complementarity breaches " +
               num(static_cast<double>(worst.complementarityBreaches));
    return r;
}

CheckResult check_sv_shadow_consistency(const ExperimentConfig& cfg, const StochVolModel& model) {
    CheckResult r;
    r.name = "sv-shadow-consistency";
    const FrictionParams fp = cfg.friction(1e-3);
    const double gap = pipeline_gap(model, fp, 100000, 100, cfg.seed + 1010, cfg.workers);
    r.pass = gap <= 0.01;
    r.margin = gap / 0.01;
    r.detail = "max relative gap " + num(gap) + " at n=1e5 (tolerance 0.01)";
    return r;
}

CheckResult check_sv_loss_formula(const ExperimentConfig& cfg) {
    CheckResult r;
    r.name = "sv-loss-formula";
    ExperimentConfig run = cfg;
    run.paths = 200000;
    run.steps = 20000;
    const EpsilonSummary s = run_single(run, 1e-3);
    const double measured = s.frictionlessCE - s.primalCE;
    const double rel = std::abs(measured / s.lossFormula - 1.0);
    r.pass = rel <= 0.15;
    r.margin = rel / 0.15;
    r.detail = "measured CE loss " + num(measured) + " vs formula " + num(s.lossFormula) +
               ", relative deviation " + num(rel) + " (tolerance 0.15)";
    return r;
}

void apply_regime(CheckResult& r, bool asymptoticRegime) {
    if (!asymptoticRegime) r.warnOnly = true;
}

} // namespace

bool VerifyReport::all_pass() const {
    for (const auto& c : checks) {
        if (!c.pass && !c.warnOnly) return false;
    }
    return true;
}

int VerifyReport::exit_code() const { return all_pass() ? 0 : 1; }

void VerifyReport::print(std::ostream& os) const {
    for (const auto& c : checks) {
        const char* tag = c.pass ? "PASS" : (c.warnOnly ? "WARN" : "FAIL");
        os << "[" << tag << "] " << c.name << ": " << c.detail << "\n";
    }
    os << (all_pass() ? "all checks passed" : "CHECK FAILURES PRESENT") << "\n";
}

VerifyReport run_verify(const ExperimentConfig& cfg) {
    VerifyReport report;
    if (cfg.model.kind == "black-scholes") {
        report.checks.push_back(check_bs_closed_form(cfg));
        report.checks.push_back(check_cubic_geometry(cfg));
        report.checks.push_back(check_skorohod_invariants(cfg));
        report.checks.push_back(check_reflected_bm(cfg));
        CheckResult ergodic = check_corridor_ergodic(cfg);
        apply_regime(ergodic, cfg.asymptotic);
        report.checks.push_back(ergodic);
        report.checks.push_back(check_shadow_consistency(cfg));
        SweepChecks sweep = check_sweep(cfg);
        apply_regime(sweep.duality, cfg.asymptotic);
        apply_regime(sweep.scaling, cfg.asymptotic);
        apply_regime(sweep.dualMoments, cfg.asymptotic);
        apply_regime(sweep.stopping, cfg.asymptotic);
        report.checks.push_back(sweep.duality);
        report.checks.push_back(sweep.scaling);
        report.checks.push_back(sweep.dualMoments);
        report.checks.push_back(sweep.stopping);
        return report;
    }

    const AnyModel model = make_model(cfg.model);
    const auto& sv = std::get<StochVolModel>(model);
    report.checks.push_back(check_sv_cubic_geometry(cfg, sv));
    report.checks.push_back(check_sv_skorohod(cfg, sv));
    report.checks.push_back(check_sv_shadow_consistency(cfg, sv));
    if (sv.constant_coefficients()) {
        report.checks.push_back(check_sv_degeneration(cfg));
    } else {
        CheckResult loss = check_sv_loss_formula(cfg);
        apply_regime(loss, cfg.asymptotic);
        report.checks.push_back(loss);
    }
    return report;
}

} // namespace tcsim
