#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <vector>

namespace tcsim {

/// Uniform partition of [0, T] into n steps of length dt = T / n.
struct TimeGrid {
    double horizon = 0.0;
    std::size_t steps = 0;
    double dt = 0.0;

    std::size_t points() const { return steps + 1; }
    double time_at(std::size_t k) const { return static_cast<double>(k) * dt; }
    bool same_as(const TimeGrid& other) const {
        return steps == other.steps && horizon == other.horizon;
    }
};

/// Builds a uniform grid. Throws std::invalid_argument for T <= 0 or n < 2.
TimeGrid make_grid(double horizon, std::size_t steps);

/// Path values per grid point plus optional per-interval coefficient tracks:
/// drift[k] = b^X on [t_k, t_{k+1}), cov[k] = c^{X,X} on the same interval.
struct SamplePath {
    TimeGrid grid;
    std::vector<double> values;
    std::vector<double> drift;
    std::vector<double> cov;

    double front() const { return values.front(); }
    double back() const { return values.back(); }
    std::size_t points() const { return values.size(); }
};

/// Deterministic Gaussian stream keyed by (seed, index). The same pair always
/// reproduces the same draws, so path i is identical no matter in which order
/// or on which worker it is simulated.
class RngStream {
public:
    RngStream(std::uint64_t seed, std::uint64_t index);

    double normal() { return normal_(engine_); }
    double uniform() { return uniform_(engine_); }

    std::uint64_t seed() const { return seed_; }
    std::uint64_t index() const { return index_; }

private:
    std::uint64_t seed_;
    std::uint64_t index_;
    std::mt19937_64 engine_;
    std::normal_distribution<double> normal_{0.0, 1.0};
    std::uniform_real_distribution<double> uniform_{0.0, 1.0};
};

/// Standard Brownian motion on the grid: W_0 = 0, independent N(0, dt) increments.
SamplePath simulate_bm(const TimeGrid& grid, RngStream& rng);

/// Explicit Euler step X_{k+1} = X_k + drift_k dt + diffusion_k dW_k against the
/// increments of `driver`. Coefficients are per interval (size n) and evaluated
/// at the left endpoint; the result carries drift and c = diffusion^2 tracks.
SamplePath integrate_ito(const std::vector<double>& drift,
                         const std::vector<double>& diffusion,
                         const SamplePath& driver, double x0);

/// Rolling estimate of the local covariation c^{X,Y}: at grid point k the value
/// is the mean of increment products over the last `window` intervals ending at
/// k, divided by dt. Point 0 copies point 1.
SamplePath realized_cov(const SamplePath& x, const SamplePath& y, std::size_t window);

/// Deterministic pairwise-tree sum, independent of worker count.
double pairwise_sum(const double* data, std::size_t n);
double pairwise_sum(const std::vector<double>& data);

} // namespace tcsim
