#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "tcsim/jet.hpp"
#include "tcsim/paths.hpp"

namespace tcsim {

/// Spread, risk aversion and initial endowment of the frictional problem.
struct FrictionParams {
    double eps = 0.0;     // relative half-spread, in (0, 1)
    double p = 0.0;       // absolute risk aversion
    double xB = 0.0;      // initial bank account
    double xS = 0.0;      // initial stock value
    double horizon = 0.0; // T, years

    double x() const { return xB + xS; } // pre-liquidation initial wealth

    void validate() const;
};

/// dS = S (b dt + sigma dW). Requires sigma > 0, b != 0 (a vanishing drift
/// kills the activity rate and with it the corridor formulas) and S0 > 0.
class BlackScholesModel {
public:
    BlackScholesModel(double b, double sigma, double s0);

    double b() const { return b_; }
    double sigma() const { return sigma_; }
    double s0() const { return s0_; }

private:
    double b_;
    double sigma_;
    double s0_;
};

/// dS = S (b(Y) dt + sigma(Y) dW) with b(y) = b0 + b1 tanh(y),
/// sigma(y) = sigma0 + sigma1 tanh(y) and an Ornstein-Uhlenbeck factor
/// dY = kappa (meanY - Y) dt + sigmaY dB, B independent of W. The tanh form
/// keeps both coefficients bounded and bounded away from zero whenever
/// |b0| > |b1| and sigma0 > |sigma1|.
class StochVolModel {
public:
    struct Params {
        double b0 = 0.0;
        double b1 = 0.0;
        double sigma0 = 0.0;
        double sigma1 = 0.0;
        double kappa = 0.0;
        double meanY = 0.0;
        double sigmaY = 0.0;
        double s0 = 0.0;
        double y0 = 0.0;
    };

    explicit StochVolModel(const Params& params);

    const Params& params() const { return params_; }
    double s0() const { return params_.s0; }
    double y0() const { return params_.y0; }

    double drift_at(double y) const;
    double sigma_at(double y) const;

    detail::Jet3 drift_jet(double y) const;
    detail::Jet3 sigma_jet(double y) const;

    bool constant_coefficients() const {
        return params_.b1 == 0.0 && params_.sigma1 == 0.0;
    }

private:
    Params params_;
};

/// Simulated model state: price, frictionless position/holdings, activity
/// rate, optional volatility factor, the Brownian path that drove S, and the
/// per-path measure-change factors.
struct ModelPaths {
    SamplePath S;   // cov track = c^{S,S}
    SamplePath pi;  // holdings phi * S; cov track = c^{pi,pi}
    SamplePath phi; // shares
    SamplePath eta; // normalized activity rate rho * S^4
    std::optional<SamplePath> Y;
    SamplePath driver; // W under P simulations, W^Q under Q simulations
    double qWeight = 1.0; // importance weight for E_Q; ensemble-normalized
    double pFactor = 1.0; // turns Q-sample averages into P-expectations
};

/// Frictionless optimal stock holdings pi = b / (p sigma^2), in currency.
double frictionless_position(const BlackScholesModel& model, double p);
double frictionless_position(const StochVolModel& model, double p, double y);

/// Closed-form local data of the stochastic-vol optimizer at factor level y.
struct SvDerivatives {
    double sigma = 0.0;
    double b = 0.0;
    double pi = 0.0;
    double dPi = 0.0;  // d pi / dy
    double d2Pi = 0.0;
    double eta = 0.0;
    double dEta = 0.0;
    double d2Eta = 0.0;
};

SvDerivatives sv_derivatives(const StochVolModel& model, double p, double y);

/// Local quadratic variation rate of pi as a function of the factor level,
/// from the closed-form sensitivity of pi to Y.
double pi_cov_rate(const StochVolModel& model, double p, double y);

/// Normalized activity rate: constant b^2/(p^2 sigma^4) for Black-Scholes,
/// pi^2 + c^{pi,pi}/sigma(Y)^2 for stochastic volatility.
double activity_rate(const BlackScholesModel& model, double p);
double activity_rate(const StochVolModel& model, double p, double y);

SamplePath activity_rate_path(const BlackScholesModel& model, const ModelPaths& paths, double p);
SamplePath activity_rate_path(const StochVolModel& model, const ModelPaths& paths, double p);

/// Simulate under the minimal entropy martingale measure Q: S is driftless.
/// For stochastic volatility, Y keeps its P-dynamics and the path carries the
/// importance weight exp(-1/2 int (b/sigma)^2 dt); normalize_q_weights scales
/// an ensemble so the mean weight is one (the normalizer estimates the
/// time-zero conditional factor of the density).
ModelPaths simulate_under_Q(const BlackScholesModel& model, const TimeGrid& grid,
                            const FrictionParams& fp, std::uint64_t seed, std::uint64_t pathIndex);
ModelPaths simulate_under_Q(const StochVolModel& model, const TimeGrid& grid,
                            const FrictionParams& fp, std::uint64_t seed, std::uint64_t pathIndex);

/// Simulate under the physical measure P (S keeps its drift).
ModelPaths simulate_under_P(const BlackScholesModel& model, const TimeGrid& grid,
                            const FrictionParams& fp, std::uint64_t seed, std::uint64_t pathIndex);
ModelPaths simulate_under_P(const StochVolModel& model, const TimeGrid& grid,
                            const FrictionParams& fp, std::uint64_t seed, std::uint64_t pathIndex);

void normalize_q_weights(std::span<ModelPaths> ensemble);

/// exp(-int h dW - 1/2 int h^2 dt) for a per-interval integrand h against the
/// given driver path.
SamplePath stochastic_exponential(const SamplePath& driver, const std::vector<double>& integrand);

/// Stochastic exponential Zbar_t = exp(-int b/sigma dW - 1/2 int (b/sigma)^2 dt)
/// along P-measure paths (driver = W).
SamplePath memm_density_factor(const BlackScholesModel& model, const ModelPaths& paths);
SamplePath memm_density_factor(const StochVolModel& model, const ModelPaths& paths);

/// y = E[U'(x + phi . S_T)]. Closed form for Black-Scholes; Monte Carlo via
/// the conditional-factor identity y = p e^{-p x} E[exp(-1/2 int (b/sigma)^2 dt)]
/// for stochastic volatility.
double frictionless_dual_y(const BlackScholesModel& model, const FrictionParams& fp);
double frictionless_dual_y(const StochVolModel& model, const FrictionParams& fp,
                           const TimeGrid& grid, std::uint64_t seed, std::size_t nPaths);

} // namespace tcsim
