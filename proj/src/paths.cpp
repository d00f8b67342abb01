#include "tcsim/paths.hpp"

#include <cmath>
#include <stdexcept>

namespace tcsim {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

} // namespace

TimeGrid make_grid(double horizon, std::size_t steps) {
    if (!(horizon > 0.0)) {
        throw std::invalid_argument("make_grid: horizon must be positive");
    }
    if (steps < 2) {
        throw std::invalid_argument("make_grid: need at least 2 steps");
    }
    TimeGrid grid;
    grid.horizon = horizon;
    grid.steps = steps;
    grid.dt = horizon / static_cast<double>(steps);
    return grid;
}

RngStream::RngStream(std::uint64_t seed, std::uint64_t index)
    : seed_(seed), index_(index) {
    // Two rounds of splitmix decorrelate nearby (seed, index) pairs before
    // seeding the engine.
    std::uint64_t s = splitmix64(seed ^ splitmix64(index * 0xd1342543de82ef95ULL + 1));
    engine_.seed(s);
}

SamplePath simulate_bm(const TimeGrid& grid, RngStream& rng) {
    if (grid.steps < 2 || !(grid.dt > 0.0)) {
        throw std::invalid_argument("simulate_bm: invalid grid");
    }
    SamplePath path;
    path.grid = grid;
    path.values.resize(grid.points());
    path.values[0] = 0.0;
    const double sqrtDt = std::sqrt(grid.dt);
    for (std::size_t k = 0; k < grid.steps; ++k) {
        path.values[k + 1] = path.values[k] + sqrtDt * rng.normal();
    }
    path.drift.assign(grid.steps, 0.0);
    path.cov.assign(grid.steps, 1.0);
    return path;
}

SamplePath integrate_ito(const std::vector<double>& drift,
                         const std::vector<double>& diffusion,
                         const SamplePath& driver, double x0) {
    const std::size_t n = driver.grid.steps;
    if (driver.values.size() != n + 1) {
        throw std::invalid_argument("integrate_ito: driver length mismatch");
    }
    if (drift.size() != n || diffusion.size() != n) {
        throw std::invalid_argument("integrate_ito: coefficient arrays must have one entry per interval");
    }
    SamplePath out;
    out.grid = driver.grid;
    out.values.resize(n + 1);
    out.drift = drift;
    out.cov.resize(n);
    out.values[0] = x0;
    const double dt = driver.grid.dt;
    for (std::size_t k = 0; k < n; ++k) {
        const double dW = driver.values[k + 1] - driver.values[k];
        out.values[k + 1] = out.values[k] + drift[k] * dt + diffusion[k] * dW;
        out.cov[k] = diffusion[k] * diffusion[k];
    }
    return out;
}

SamplePath realized_cov(const SamplePath& x, const SamplePath& y, std::size_t window) {
    if (!x.grid.same_as(y.grid)) {
        throw std::invalid_argument("realized_cov: paths live on different grids");
    }
    if (window < 1) {
        throw std::invalid_argument("realized_cov: window must be >= 1");
    }
    const std::size_t n = x.grid.steps;
    const double dt = x.grid.dt;
    std::vector<double> products(n);
    for (std::size_t k = 0; k < n; ++k) {
        products[k] = (x.values[k + 1] - x.values[k]) * (y.values[k + 1] - y.values[k]);
    }
    SamplePath out;
    out.grid = x.grid;
    out.values.resize(n + 1);
    double rolling = 0.0;
    for (std::size_t k = 1; k <= n; ++k) {
        rolling += products[k - 1];
        if (k > window) {
            rolling -= products[k - 1 - window];
        }
        const std::size_t used = std::min(window, k);
        out.values[k] = rolling / (static_cast<double>(used) * dt);
    }
    out.values[0] = out.values[1];
    return out;
}

double pairwise_sum(const double* data, std::size_t n) {
    if (n == 0) return 0.0;
    if (n <= 8) {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i) s += data[i];
        return s;
    }
    const std::size_t half = n / 2;
    return pairwise_sum(data, half) + pairwise_sum(data + half, n - half);
}

double pairwise_sum(const std::vector<double>& data) {
    return pairwise_sum(data.data(), data.size());
}

} // namespace tcsim
