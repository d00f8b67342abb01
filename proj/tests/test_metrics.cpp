#include "doctest.h"

#include <cmath>
#include <stdexcept>
#include <vector>

#include "tcsim/metrics.hpp"
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

} // namespace

TEST_CASE("certainty equivalent of a degenerate payoff is the payoff") {
    std::vector<double> samples(100, 2.75);
    std::vector<double> weights(100, 1.0);
    const CEResult r = certainty_equivalent(samples, weights, 3.0);
    CHECK(r.ce == doctest::Approx(2.75).epsilon(1e-12));
    CHECK(r.utility == doctest::Approx(-std::exp(-3.0 * 2.75)).epsilon(1e-12));
    CHECK(r.se == doctest::Approx(0.0));
}

TEST_CASE("certainty equivalent of a Gaussian payoff: m - p s^2 / 2") {
    // Gaussian moment-generating-function oracle at m=1, s=0.5, p=2 -> 0.75.
    const std::size_t n = 100000;
    std::vector<double> samples(n), weights(n, 1.0);
    RngStream rng(2024, 0);
    for (auto& s : samples) s = 1.0 + 0.5 * rng.normal();
    const CEResult r = certainty_equivalent(samples, weights, 2.0);
    const double seCE = r.se / (2.0 * -r.utility);
    CHECK(std::abs(r.ce - 0.75) <= 3.0 * seCE);

    // Translation invariance on matched samples.
    std::vector<double> shifted = samples;
    for (auto& s : shifted) s += 0.37;
    const CEResult r2 = certainty_equivalent(shifted, weights, 2.0);
    CHECK(r2.ce - r.ce == doctest::Approx(0.37).epsilon(1e-9));
}

TEST_CASE("certainty equivalent guards against overflow and bad input") {
    std::vector<double> samples = {-400.0, -401.0};
    std::vector<double> weights = {1.0, 1.0};
    const CEResult r = certainty_equivalent(samples, weights, 2.0);
    CHECK(std::isfinite(r.ce));
    CHECK(r.ce <= -400.0 + 1.0);
    CHECK_THROWS_AS(certainty_equivalent(samples, std::vector<double>{1.0}, 2.0),
                    std::invalid_argument);
    CHECK_THROWS_AS(certainty_equivalent(samples, weights, -1.0), std::invalid_argument);
}

TEST_CASE("leading loss in Black-Scholes is deterministic and matches the closed form") {
    const BlackScholesModel model(0.1, 0.2, 1.0);
    const FrictionParams fp = friction(1e-3, 1.0, 0.5, 0.5, 1.0);
    const TimeGrid grid = make_grid(1.0, 64);
    std::vector<ModelPaths> ensemble;
    for (std::uint64_t i = 0; i < 4; ++i) {
        ensemble.push_back(simulate_under_Q(model, grid, fp, 31415, i));
    }
    const double loss = leading_loss(ensemble, fp);
    const double closed =
        std::cbrt(9.0 * std::pow(0.1, 4.0) * 1e-6 / (32.0 * 0.04)) * 1.0 / 1.0;
    CHECK(loss == doctest::Approx(closed).epsilon(1e-10));
    CHECK(loss == doctest::Approx(8.894e-4).epsilon(1e-3));

    // Exact eps^{2/3} power law: eps * 8 -> loss * 4.
    FrictionParams fp8 = fp;
    fp8.eps = 8e-3;
    CHECK(leading_loss(ensemble, fp8) == doctest::Approx(4.0 * loss).epsilon(1e-12));
}

TEST_CASE("ergodic ratio on synthetic pinned and zero offsets") {
    std::vector<double> plus2 = {1.0, 2.0, 0.5};
    std::vector<double> weights = {1.0, 1.0, 1.0};
    // q == 1: offset glued to the barrier.
    CHECK(ergodic_ratio(plus2, plus2, weights) == doctest::Approx(1.0).epsilon(1e-14));
    // q == 0.
    std::vector<double> zeros = {0.0, 0.0, 0.0};
    CHECK(ergodic_ratio(zeros, plus2, weights) == doctest::Approx(0.0));
    CHECK_THROWS_AS(ergodic_ratio(zeros, zeros, weights), std::invalid_argument);
}

TEST_CASE("qv weighted average: reflected Brownian motion gives 1/3, constants pass through") {
    const TimeGrid grid = make_grid(5000.0, 5000000);
    RngStream rng(2025, 0);
    const SamplePath q = reflect_bm(grid, rng);
    const double avg = qv_weighted_average(q, q.cov);
    CHECK(std::abs(avg - 1.0 / 3.0) <= 0.02);

    SamplePath constQ;
    constQ.grid = make_grid(1.0, 10);
    constQ.values.assign(11, 0.4);
    const double c = qv_weighted_average(constQ, std::vector<double>(10, 2.0));
    CHECK(c == doctest::Approx(0.16).epsilon(1e-14));

    CHECK_THROWS_AS(qv_weighted_average(constQ, std::vector<double>(10, 0.0)),
                    std::runtime_error);
}

TEST_CASE("qv weighted average is stable under grid refinement") {
    auto run = [](std::size_t n) {
        const TimeGrid grid = make_grid(2000.0, n);
        RngStream rng(2026, 0);
        const SamplePath q = reflect_bm(grid, rng);
        return qv_weighted_average(q, q.cov);
    };
    const double coarse = run(1000000);
    const double fine = run(2000000);
    CHECK(std::abs(coarse - fine) <= 0.01 * std::max(coarse, fine) + 0.005);
}

TEST_CASE("primal utility recovers the frictionless limit as eps -> 0") {
    // With a shrinking spread the candidate converges to the frictionless
    // optimizer; the utility approaches -exp(-p x - (b/sigma)^2 T / 2).
    const BlackScholesModel model(0.1, 0.2, 1.0);
    EngineOptions opt;
    opt.steps = 2000;
    opt.paths = 20000;
    opt.seed = 777;
    opt.workers = 2;
    const FrictionParams tiny = friction(1e-7, 1.0, 0.5, 0.5, 1.0);
    const CEResult r = primal_utility(model, tiny, opt);
    const double frictionless = -std::exp(-1.0 - 0.125);
    CHECK(std::abs(r.utility - frictionless) <=
          3.0 * r.se + 0.01 * std::abs(frictionless));
    CHECK(r.ce == doctest::Approx(1.125).epsilon(5e-3));

    // The dual bound collapses to the conjugate relation in the same limit:
    // E[conj(y Z_T)] + x y = E[U(x + phi . S_T)] = -exp(-1.125).
    const EpsilonSummary s = run_epsilon(model, tiny, opt);
    CHECK(s.dualCE == doctest::Approx(1.125).epsilon(5e-3));
    CHECK(s.dualU == doctest::Approx(frictionless).epsilon(5e-3));
}

TEST_CASE("primal expansion: loss tracks the offset-integral reference") {
    // (frictionless utility - primal utility) / (y p) tracks
    // E_Q[((dPhi+)^2 - 1.5 dPhi^2) . [S,S]_T] up to O(eps) remainders and the
    // one-off liquidation costs; a generous band at eps = 1e-3.
    const BlackScholesModel model(0.036, 0.6, 1.0);
    EngineOptions opt;
    opt.steps = 10000;
    opt.paths = 20000;
    opt.seed = 778;
    opt.workers = 2;
    const FrictionParams fp = friction(1e-3, 1.0, 0.9, 0.1, 15.0);
    const std::vector<PathOutcome> outcomes = run_ensemble(model, fp, opt);
    const EpsilonSummary s = summarize(outcomes, fp, opt);

    std::vector<double> lhsTerms(outcomes.size()), refTerms(outcomes.size());
    for (std::size_t i = 0; i < outcomes.size(); ++i) {
        refTerms[i] = outcomes[i].intDphiPlus2 - 1.5 * outcomes[i].intDphi2;
    }
    const double ref = pairwise_sum(refTerms) / static_cast<double>(outcomes.size());
    const double frictionlessU = -s.y / fp.p;
    const double lhs = (frictionlessU - s.primalU) / (s.y * fp.p);
    CHECK(lhs == doctest::Approx(ref).epsilon(0.35));
}

TEST_CASE("eps scaling fit") {
    // Exact power law recovers 2/3 to machine precision.
    std::vector<double> eps = {1e-2, 3e-3, 1e-3, 3e-4, 1e-4};
    std::vector<double> loss(eps.size());
    for (std::size_t i = 0; i < eps.size(); ++i) loss[i] = 0.17 * std::pow(eps[i], 2.0 / 3.0);
    CHECK(eps_scaling_fit(eps, loss) == doctest::Approx(2.0 / 3.0).epsilon(1e-12));

    // Flat input has slope zero.
    std::vector<double> flat(eps.size(), 0.5);
    CHECK(eps_scaling_fit(eps, flat) == doctest::Approx(0.0));

    std::vector<double> bad = {0.1, -0.2, 0.3, 0.1, 0.2};
    CHECK_THROWS_AS(eps_scaling_fit(eps, bad), std::invalid_argument);
    CHECK_THROWS_AS(eps_scaling_fit(std::vector<double>{1e-3}, std::vector<double>{0.1}),
                    std::invalid_argument);
}
