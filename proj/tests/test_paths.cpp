#include "doctest.h"

#include <cmath>
#include <stdexcept>
#include <vector>

#include "tcsim/paths.hpp"

using namespace tcsim;

TEST_CASE("make_grid builds the uniform partition") {
    const TimeGrid g = make_grid(1.0, 4);
    CHECK(g.points() == 5);
    CHECK(g.time_at(0) == doctest::Approx(0.0));
    CHECK(g.time_at(1) == doctest::Approx(0.25));
    CHECK(g.time_at(2) == doctest::Approx(0.5));
    CHECK(g.time_at(3) == doctest::Approx(0.75));
    CHECK(g.time_at(4) == doctest::Approx(1.0));

    const TimeGrid fine = make_grid(2.0, 100000);
    CHECK(fine.dt == doctest::Approx(2e-5).epsilon(1e-12));

    CHECK_THROWS_AS(make_grid(1.0, 1), std::invalid_argument);
    CHECK_THROWS_AS(make_grid(0.0, 10), std::invalid_argument);
    CHECK_THROWS_AS(make_grid(-1.0, 10), std::invalid_argument);
}

TEST_CASE("simulate_bm starts at zero and is deterministic per (seed, index)") {
    const TimeGrid g = make_grid(1.0, 512);
    RngStream a(99, 7);
    const SamplePath w1 = simulate_bm(g, a);
    RngStream b(99, 7);
    const SamplePath w2 = simulate_bm(g, b);
    CHECK(w1.values[0] == 0.0);
    for (std::size_t k = 0; k <= g.steps; ++k) {
        CHECK(w1.values[k] == w2.values[k]); // bit-identical
    }
    RngStream c(99, 8);
    const SamplePath w3 = simulate_bm(g, c);
    CHECK(w3.values.back() != w1.values.back());
}

TEST_CASE("simulate_bm terminal variance matches t") {
    // Sample-variance oracle over the simulated ensemble.
    const TimeGrid g = make_grid(1.0, 64);
    const std::size_t nPaths = 100000;
    std::vector<double> wT(nPaths), wHalf(nPaths), wQuarter(nPaths);
    for (std::size_t i = 0; i < nPaths; ++i) {
        RngStream rng(2023, i);
        const SamplePath w = simulate_bm(g, rng);
        wT[i] = w.values[64];
        wHalf[i] = w.values[32];
        wQuarter[i] = w.values[16];
    }
    auto sampleVar = [&](const std::vector<double>& v) {
        const double mean = pairwise_sum(v) / static_cast<double>(v.size());
        double acc = 0.0;
        for (double x : v) acc += (x - mean) * (x - mean);
        return acc / static_cast<double>(v.size() - 1);
    };
    CHECK(sampleVar(wT) == doctest::Approx(1.0).epsilon(0.02));
    // Brownian scaling at interior times, three standard errors of the
    // variance estimator: var(s^2) ~ 2 t^2 / N.
    const double se = std::sqrt(2.0 / static_cast<double>(nPaths));
    CHECK(std::abs(sampleVar(wHalf) - 0.5) <= 3.0 * se * 0.5);
    CHECK(std::abs(sampleVar(wQuarter) - 0.25) <= 3.0 * se * 0.25);
}

TEST_CASE("integrate_ito handles degenerate coefficients exactly") {
    const TimeGrid g = make_grid(2.0, 1000);
    RngStream rng(5, 0);
    const SamplePath w = simulate_bm(g, rng);

    const std::vector<double> zero(g.steps, 0.0);
    const SamplePath constant = integrate_ito(zero, zero, w, 3.0);
    for (double v : constant.values) CHECK(v == 3.0);

    const std::vector<double> one(g.steps, 1.0);
    const SamplePath ramp = integrate_ito(one, zero, w, 1.0);
    CHECK(ramp.values.back() == doctest::Approx(3.0).epsilon(1e-12));

    CHECK_THROWS_AS(integrate_ito(std::vector<double>(g.steps - 1, 0.0), zero, w, 0.0),
                    std::invalid_argument);
}

TEST_CASE("driftless geometric Euler dynamics are a martingale") {
    const TimeGrid g = make_grid(1.0, 200);
    const std::size_t nPaths = 100000;
    std::vector<double> sT(nPaths);
    for (std::size_t i = 0; i < nPaths; ++i) {
        RngStream rng(17, i);
        const SamplePath w = simulate_bm(g, rng);
        double s = 1.0;
        for (std::size_t k = 0; k < g.steps; ++k) {
            s += 0.2 * s * (w.values[k + 1] - w.values[k]);
        }
        sT[i] = s;
    }
    const double mean = pairwise_sum(sT) / static_cast<double>(nPaths);
    CHECK(mean == doctest::Approx(1.0).epsilon(0.01));
}

TEST_CASE("realized_cov recovers the quadratic variation of scaled Brownian motion") {
    const TimeGrid g = make_grid(1.0, 20000);
    RngStream rng(31, 0);
    const SamplePath w = simulate_bm(g, rng);
    SamplePath x = w;
    for (auto& v : x.values) v *= 0.2;

    const SamplePath cav = realized_cov(x, x, g.steps); // full-window average
    CHECK(cav.values.back() == doctest::Approx(0.04).epsilon(0.05));

    // A finite-variation path has vanishing covariation with anything.
    SamplePath det = w;
    for (std::size_t k = 0; k <= g.steps; ++k) det.values[k] = g.time_at(k);
    const SamplePath cz = realized_cov(det, w, g.steps);
    CHECK(std::abs(cz.values.back()) < 0.01);

    // cov(W, -W) = -cov(W, W) ~ -1.
    SamplePath neg = w;
    for (auto& v : neg.values) v = -v;
    const SamplePath cn = realized_cov(w, neg, g.steps);
    const SamplePath cp = realized_cov(w, w, g.steps);
    CHECK(cn.values.back() == doctest::Approx(-cp.values.back()).epsilon(1e-12));
    CHECK(cp.values.back() == doctest::Approx(1.0).epsilon(0.05));
}

TEST_CASE("realized_cov is symmetric and bilinear pointwise") {
    const TimeGrid g = make_grid(1.0, 256);
    RngStream r1(41, 0), r2(41, 1), r3(41, 2);
    const SamplePath x = simulate_bm(g, r1);
    const SamplePath y = simulate_bm(g, r2);
    const SamplePath z = simulate_bm(g, r3);

    SamplePath combo = x;
    for (std::size_t k = 0; k <= g.steps; ++k) {
        combo.values[k] = 2.0 * x.values[k] - 3.0 * y.values[k];
    }
    const SamplePath lhs = realized_cov(combo, z, 16);
    const SamplePath xz = realized_cov(x, z, 16);
    const SamplePath yz = realized_cov(y, z, 16);
    const SamplePath zx = realized_cov(z, x, 16);
    for (std::size_t k = 0; k <= g.steps; ++k) {
        CHECK(lhs.values[k] ==
              doctest::Approx(2.0 * xz.values[k] - 3.0 * yz.values[k]).epsilon(1e-10));
        CHECK(xz.values[k] == doctest::Approx(zx.values[k]).epsilon(1e-12));
    }

    SamplePath other;
    other.grid = make_grid(1.0, 128);
    other.values.assign(129, 0.0);
    CHECK_THROWS_AS(realized_cov(x, other, 4), std::invalid_argument);
}

TEST_CASE("pairwise_sum matches plain summation") {
    std::vector<double> v(1000);
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = std::sin(static_cast<double>(i));
    double plain = 0.0;
    for (double x : v) plain += x;
    CHECK(pairwise_sum(v) == doctest::Approx(plain).epsilon(1e-12));
}
