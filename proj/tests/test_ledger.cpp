#include "doctest.h"

#include <cmath>
#include <stdexcept>

#include "tcsim/ledger.hpp"
#include "tcsim/models.hpp"
#include "tcsim/notrade.hpp"
#include "tcsim/paths.hpp"
#include "tcsim/reflect.hpp"

using namespace tcsim;

namespace {

FrictionParams friction(double eps, double p, double xB, double xS, double T) {
    FrictionParams fp;
    fp.eps = eps;
    fp.p = p;
    fp.xB = xB;
    fp.xS = xS;
    fp.horizon = T;
    return fp;
}

SamplePath constant_path(const TimeGrid& grid, double value) {
    SamplePath p;
    p.grid = grid;
    p.values.assign(grid.points(), value);
    return p;
}

struct Pipeline {
    ModelPaths paths;
    CorridorCoeffs coeffs;
    ReflectedSolution sol;
    TradeLedger ledger;
    SamplePath frictionless;
    ShadowPath shadow;
    std::size_t tau = 0;
};

Pipeline run_pipeline(const BlackScholesModel& model, const FrictionParams& fp,
                      std::size_t steps, std::uint64_t seed, std::uint64_t index) {
    Pipeline out;
    const TimeGrid grid = make_grid(fp.horizon, steps);
    out.paths = simulate_under_Q(model, grid, fp, seed, index);
    out.coeffs = corridor_coeffs(out.paths, fp);
    SamplePath lower = out.coeffs.dPhiPlus;
    for (auto& v : lower.values) v = -v;
    const double dPhi0 = initial_offset(fp.xS, out.paths.S.values[0], out.paths.phi.values[0],
                                        out.coeffs.dPhiPlus.values[0]);
    out.sol = solve_skorohod(out.paths.phi, lower, out.coeffs.dPhiPlus, dPhi0);
    SamplePath psi;
    psi.grid = grid;
    psi.values.resize(grid.points());
    for (std::size_t k = 0; k <= steps; ++k) {
        psi.values[k] = out.paths.phi.values[k] + out.sol.dPhi.values[k];
    }
    out.ledger = apply_strategy(out.paths.S, psi, fp);
    out.frictionless.grid = grid;
    out.frictionless.values.resize(grid.points());
    out.frictionless.values[0] = fp.x();
    for (std::size_t k = 0; k < steps; ++k) {
        out.frictionless.values[k + 1] =
            out.frictionless.values[k] +
            out.paths.phi.values[k] * (out.paths.S.values[k + 1] - out.paths.S.values[k]);
    }
    out.tau = stop_time_tau(out.ledger.X, out.frictionless, fp.eps);
    liquidate_at(out.ledger, out.paths.S, fp, out.tau);
    out.shadow = shadow_price(out.paths.S, out.sol.dPhi, out.coeffs);
    return out;
}

} // namespace

TEST_CASE("round-trip trade costs exactly the spread") {
    const TimeGrid grid = make_grid(1.0, 4);
    const double eps = 0.01;
    const FrictionParams fp = friction(eps, 1.0, 10.0, 0.0, 1.0);
    const SamplePath S = constant_path(grid, 5.0);
    SamplePath psi = constant_path(grid, 0.0);
    psi.values[1] = 1.0; // buy one share, sell it at the next step
    const TradeLedger ledger = apply_strategy(S, psi, fp);
    CHECK(ledger.X.values[0] == doctest::Approx(10.0).epsilon(1e-14));
    CHECK(ledger.X.values.back() == doctest::Approx(10.0 - 2.0 * eps * 5.0).epsilon(1e-12));
    CHECK(ledger.totalBought == doctest::Approx(1.0));
    CHECK(ledger.totalSold == doctest::Approx(1.0));
}

TEST_CASE("no trading liquidates the endowment at the bid") {
    const TimeGrid grid = make_grid(1.0, 8);
    const FrictionParams fp = friction(0.02, 1.0, 0.3, 0.7, 1.0);
    const SamplePath S = constant_path(grid, 2.0);
    const SamplePath psi = constant_path(grid, 0.0);
    const TradeLedger ledger = apply_strategy(S, psi, fp);
    // x^S/S_0 shares sold at the bid right away.
    CHECK(ledger.X.values[0] == doctest::Approx(0.3 + 0.7 * (1.0 - 0.02)).epsilon(1e-14));
    for (double x : ledger.X.values) {
        CHECK(x == doctest::Approx(ledger.X.values[0]).epsilon(1e-14));
    }
}

TEST_CASE("cash conservation: all legs plus liquidation reproduce terminal wealth") {
    const BlackScholesModel model(0.1, 0.2, 1.0);
    const FrictionParams fp = friction(1e-3, 1.0, 0.5, 0.5, 1.0);
    for (std::uint64_t i = 0; i < 10; ++i) {
        const Pipeline pipe = run_pipeline(model, fp, 2000, 616, i);
        const auto& ledger = pipe.ledger;
        const double psiT = ledger.psi.values.back();
        const double sT = pipe.paths.S.values.back();
        const double liq = psiT >= 0.0 ? psiT * (1.0 - fp.eps) * sT : psiT * (1.0 + fp.eps) * sT;
        const double recon = fp.xB - ledger.buyCost + ledger.sellProceeds + liq;
        CHECK(std::abs(recon - ledger.X.values.back()) <= 1e-10 * (1.0 + std::abs(recon)));
    }
}

TEST_CASE("spread monotonicity: terminal wealth nonincreasing in eps") {
    const BlackScholesModel model(0.1, 0.2, 1.0);
    const TimeGrid grid = make_grid(1.0, 1000);
    const FrictionParams base = friction(1e-3, 1.0, 0.5, 0.5, 1.0);
    const ModelPaths paths = simulate_under_Q(model, grid, base, 717, 0);
    SamplePath psi = paths.phi; // a strategy with genuine turnover
    double lastX = 1e300;
    for (double eps : {1e-4, 1e-3, 1e-2, 5e-2}) {
        const FrictionParams fp = friction(eps, 1.0, 0.5, 0.5, 1.0);
        const TradeLedger ledger = apply_strategy(paths.S, psi, fp);
        CHECK(ledger.X.values.back() <= lastX + 1e-12);
        lastX = ledger.X.values.back();
    }
}

TEST_CASE("stop time triggers on the synthetic thresholds") {
    const TimeGrid grid = make_grid(1.0, 10);
    SamplePath X = constant_path(grid, 1.0);
    SamplePath F = constant_path(grid, 1.0);

    // No trigger.
    CHECK(stop_time_tau(X, F, 1e-2) == grid.steps);

    // Wealth-gap trigger at t = 0.3.
    X.values[3] = 2.6; // gap 1.6 > 1
    CHECK(stop_time_tau(X, F, 1e-2) == 3);

    // Absolute-wealth trigger: eps^{-4/3} for eps = 0.1 is ~ 21.5.
    X = constant_path(grid, 1.0);
    X.values[7] = 25.0;
    F.values[7] = 24.5; // gap below 1, cap exceeded
    CHECK(stop_time_tau(X, F, 0.1) == 7);
}

TEST_CASE("liquidation freezes wealth and flattens the position") {
    const BlackScholesModel model(0.1, 0.2, 1.0);
    const FrictionParams fp = friction(1e-2, 1.0, 0.5, 0.5, 1.0);
    Pipeline pipe = run_pipeline(model, fp, 500, 818, 2);
    TradeLedger& ledger = pipe.ledger;
    liquidate_at(ledger, pipe.paths.S, fp, 200);
    const double frozen = ledger.X.values[200];
    for (std::size_t k = 200; k <= 500; ++k) {
        CHECK(ledger.psi.values[k] == 0.0);
        CHECK(ledger.X.values[k] == frozen);
    }
    // Wealth is continuous across the liquidation step: the trade realizes
    // exactly the liquidation value.
    const TradeLedger plain = apply_strategy(pipe.paths.S, pipe.ledger.psi, fp);
    CHECK(frozen == doctest::Approx(plain.X.values[200]).epsilon(1e-10));
}

TEST_CASE("tau frequency falls as the spread shrinks (stress parameters)") {
    // At desk-scale spreads with a volatile target the wealth-gap trigger
    // actually fires; its frequency must be nonincreasing in eps.
    const BlackScholesModel model(0.5, 0.1, 1.0);
    double lastFrac = 1.1;
    for (double eps : {0.3, 0.1, 0.03}) {
        const FrictionParams fp = friction(eps, 1.0, 0.5, 0.5, 3.0);
        std::size_t triggered = 0;
        const std::size_t nPaths = 400;
        for (std::uint64_t i = 0; i < nPaths; ++i) {
            const Pipeline pipe = run_pipeline(model, fp, 2000, 919, i);
            if (pipe.tau < 2000) ++triggered;
        }
        const double frac = static_cast<double>(triggered) / static_cast<double>(nPaths);
        CHECK(frac <= lastFrac + 1e-12);
        lastFrac = frac;
    }
}

TEST_CASE("frictionless comparison bound of the liquidation wealth") {
    // |X_t - (x + psi . sEps_t)| <= eps x^S + 2 eps |psi_t S_t| pointwise when
    // trades execute at prices consistent with the shadow price.
    const BlackScholesModel model(0.1, 0.2, 1.0);
    const FrictionParams fp = friction(1e-3, 1.0, 0.5, 0.5, 1.0);
    for (std::uint64_t i = 0; i < 5; ++i) {
        const Pipeline pipe = run_pipeline(model, fp, 4000, 1020, i);
        double gains = 0.0;
        for (std::size_t k = 1; k <= 4000; ++k) {
            gains += pipe.ledger.psi.values[k - 1] *
                     (pipe.shadow.sEps.values[k] - pipe.shadow.sEps.values[k - 1]);
            const double bound = fp.eps * fp.xS +
                                 2.0 * fp.eps * std::abs(pipe.ledger.psi.values[k] *
                                                          pipe.paths.S.values[k]) +
                                 1e-10;
            CHECK(std::abs(pipe.ledger.X.values[k] - (fp.x() + gains)) <= bound);
        }
    }
}

TEST_CASE("shadow consistency gap is at discretization level and within the coarse bound") {
    const BlackScholesModel model(0.1, 0.2, 1.0);
    const FrictionParams fp = friction(1e-3, 1.0, 0.5, 0.5, 1.0);
    double fineWorst = 0.0;
    for (std::uint64_t i = 0; i < 20; ++i) {
        const Pipeline pipe = run_pipeline(model, fp, 20000, 1121, i);
        const double gap = shadow_consistency_gap(pipe.ledger, pipe.shadow, fp);
        fineWorst = std::max(fineWorst, gap);
    }
    CHECK(fineWorst <= 0.01);

    // Coarse grids stay within the same budget; the gap never grows beyond
    // the tolerance as the grid refines.
    double coarseWorst = 0.0;
    for (std::uint64_t i = 0; i < 20; ++i) {
        const Pipeline pipe = run_pipeline(model, fp, 100, 1121, i);
        coarseWorst = std::max(coarseWorst, shadow_consistency_gap(pipe.ledger, pipe.shadow, fp));
    }
    CHECK(fineWorst <= coarseWorst + 1e-9);
}

TEST_CASE("ledger rejects mismatched grids") {
    const TimeGrid g1 = make_grid(1.0, 16);
    const TimeGrid g2 = make_grid(1.0, 32);
    const FrictionParams fp = friction(1e-2, 1.0, 1.0, 0.0, 1.0);
    CHECK_THROWS_AS(apply_strategy(constant_path(g1, 1.0), constant_path(g2, 0.0), fp),
                    std::invalid_argument);
    CHECK_THROWS_AS(stop_time_tau(constant_path(g1, 1.0), constant_path(g2, 1.0), 1e-2),
                    std::invalid_argument);
}
