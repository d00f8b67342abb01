#include "tcsim/reflect.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace tcsim {

double initial_offset(double xS, double S0, double phi0, double dPhiPlus0) {
    if (!(S0 > 0.0)) {
        throw std::invalid_argument("initial_offset: S0 must be positive");
    }
    const double target = xS / S0 - phi0;
    if (target > dPhiPlus0) return dPhiPlus0;
    if (target < -dPhiPlus0) return -dPhiPlus0;
    return target;
}

ReflectedSolution solve_skorohod(const SamplePath& phi, const SamplePath& lower,
                                 const SamplePath& upper, double dPhi0) {
    if (!phi.grid.same_as(lower.grid) || !phi.grid.same_as(upper.grid)) {
        throw std::invalid_argument("solve_skorohod: paths live on different grids");
    }
    const std::size_t n = phi.grid.steps;
    for (std::size_t k = 0; k <= n; ++k) {
        if (!(lower.values[k] < upper.values[k])) {
            throw std::invalid_argument("solve_skorohod: barriers must satisfy lower < upper");
        }
    }
    if (dPhi0 < lower.values[0] || dPhi0 > upper.values[0]) {
        throw std::invalid_argument("solve_skorohod: initial offset outside the corridor");
    }

    ReflectedSolution out;
    out.dPhi.grid = out.up.grid = out.down.grid = phi.grid;
    out.dPhi.values.resize(n + 1);
    out.up.values.resize(n + 1);
    out.down.values.resize(n + 1);
    out.dPhi.values[0] = dPhi0;
    out.up.values[0] = 0.0;
    out.down.values[0] = 0.0;

    double x = dPhi0;
    double up = 0.0;
    double down = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        const double proposed = x - (phi.values[k + 1] - phi.values[k]);
        const double lo = lower.values[k + 1];
        const double hi = upper.values[k + 1];
        double upInc = 0.0;
        double downInc = 0.0;
        x = reflect_step(proposed, lo, hi, upInc, downInc);
        if (std::max(upInc, downInc) > hi - lo) {
            ++out.coarseSteps;
        }
        up += upInc;
        down += downInc;
        out.dPhi.values[k + 1] = x;
        out.up.values[k + 1] = up;
        out.down.values[k + 1] = down;
    }
    return out;
}

SamplePath reflect_bm(const TimeGrid& grid, RngStream& rng) {
    SamplePath out;
    out.grid = grid;
    out.values.resize(grid.points());
    out.cov.assign(grid.steps, 1.0);
    const double sqrtDt = std::sqrt(grid.dt);
    double q = 0.0;
    out.values[0] = q;
    for (std::size_t k = 0; k < grid.steps; ++k) {
        double upInc = 0.0;
        double downInc = 0.0;
        q = reflect_step(q + sqrtDt * rng.normal(), -1.0, 1.0, upInc, downInc);
        out.values[k + 1] = q;
    }
    return out;
}

ReflectedBmStats reflected_bm_occupation(double horizon, double dt, std::uint64_t seed,
                                         std::size_t bins) {
    if (!(horizon > 0.0) || !(dt > 0.0) || bins < 3) {
        throw std::invalid_argument("reflected_bm_occupation: bad horizon, dt or bin count");
    }
    const std::size_t n = static_cast<std::size_t>(horizon / dt);
    RngStream rng(seed, 0);
    const double sqrtDt = std::sqrt(dt);

    std::vector<std::uint64_t> hist(bins, 0);
    double q = 0.0;
    double sumQ2 = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        double upInc = 0.0;
        double downInc = 0.0;
        q = reflect_step(q + sqrtDt * rng.normal(), -1.0, 1.0, upInc, downInc);
        sumQ2 += q * q;
        auto bin = static_cast<std::size_t>((q + 1.0) * 0.5 * static_cast<double>(bins));
        hist[std::min(bin, bins - 1)] += 1;
    }

    ReflectedBmStats stats;
    stats.steps = n;
    stats.meanQ2 = sumQ2 / static_cast<double>(n);
    stats.qvWeightedQ2 = stats.meanQ2; // c^{q,q} = 1: the clock is real time
    double cum = 0.0;
    double ks = 0.0;
    for (std::size_t i = 0; i < bins; ++i) {
        cum += static_cast<double>(hist[i]) / static_cast<double>(n);
        const double edge = -1.0 + 2.0 * static_cast<double>(i + 1) / static_cast<double>(bins);
        const double uniformCdf = 0.5 * (edge + 1.0);
        ks = std::max(ks, std::abs(cum - uniformCdf));
    }
    stats.ksUniform = ks;
    return stats;
}

} // namespace tcsim
