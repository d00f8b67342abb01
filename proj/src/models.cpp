#include "tcsim/models.hpp"

#include <cmath>
#include <stdexcept>

namespace tcsim {

void FrictionParams::validate() const {
    if (!(eps > 0.0 && eps < 1.0)) {
        throw std::invalid_argument("friction.eps must lie in (0, 1)");
    }
    if (!(p > 0.0)) {
        throw std::invalid_argument("friction.p must be positive");
    }
    if (!(horizon > 0.0)) {
        throw std::invalid_argument("friction.horizon must be positive");
    }
}

BlackScholesModel::BlackScholesModel(double b, double sigma, double s0)
    : b_(b), sigma_(sigma), s0_(s0) {
    if (!(sigma > 0.0)) {
        throw std::invalid_argument("model.sigma must be positive");
    }
    if (b == 0.0) {
        throw std::invalid_argument("model.b must be nonzero: the activity rate would vanish");
    }
    if (!(s0 > 0.0)) {
        throw std::invalid_argument("model.s0 must be positive");
    }
}

StochVolModel::StochVolModel(const Params& params) : params_(params) {
    if (!(params.sigma0 > std::abs(params.sigma1))) {
        throw std::invalid_argument("model.sigma0 must exceed |model.sigma1| so sigma(Y) stays away from zero");
    }
    if (!(std::abs(params.b0) > std::abs(params.b1))) {
        throw std::invalid_argument("model.b0 must exceed |model.b1| in magnitude so b(Y) never vanishes");
    }
    if (params.kappa < 0.0 || params.sigmaY < 0.0) {
        throw std::invalid_argument("model.kappa and model.sigma_y must be nonnegative");
    }
    if (!(params.s0 > 0.0)) {
        throw std::invalid_argument("model.s0 must be positive");
    }
}

double StochVolModel::drift_at(double y) const {
    return params_.b0 + params_.b1 * std::tanh(y);
}

double StochVolModel::sigma_at(double y) const {
    return params_.sigma0 + params_.sigma1 * std::tanh(y);
}

detail::Jet3 StochVolModel::drift_jet(double y) const {
    using detail::Jet3;
    return Jet3::constant(params_.b0) + params_.b1 * detail::tanh(Jet3::variable(y));
}

detail::Jet3 StochVolModel::sigma_jet(double y) const {
    using detail::Jet3;
    return Jet3::constant(params_.sigma0) + params_.sigma1 * detail::tanh(Jet3::variable(y));
}

double frictionless_position(const BlackScholesModel& model, double p) {
    return model.b() / (p * model.sigma() * model.sigma());
}

double frictionless_position(const StochVolModel& model, double p, double y) {
    const double s = model.sigma_at(y);
    return model.drift_at(y) / (p * s * s);
}

SvDerivatives sv_derivatives(const StochVolModel& model, double p, double y) {
    using detail::Jet3;
    const Jet3 th = detail::tanh(Jet3::variable(y));
    const Jet3 bj = Jet3::constant(model.params().b0) + model.params().b1 * th;
    const Jet3 sj = Jet3::constant(model.params().sigma0) + model.params().sigma1 * th;
    const Jet3 piJ = bj / (Jet3::constant(p) * sj * sj);
    const double sy2 = model.params().sigmaY * model.params().sigmaY;
    // eta = pi^2 + (pi')^2 sigmaY^2 / sigma^2; derivatives of pi' come from
    // shifting pi's jet, valid through second order.
    const Jet3 dPiJ = piJ.derivative();
    const Jet3 etaJ = piJ * piJ + sy2 * (dPiJ * dPiJ) * detail::inverse(sj * sj);

    SvDerivatives out;
    out.sigma = sj.v;
    out.b = bj.v;
    out.pi = piJ.v;
    out.dPi = piJ.d1;
    out.d2Pi = piJ.d2;
    out.eta = etaJ.v;
    out.dEta = etaJ.d1;
    out.d2Eta = etaJ.d2;
    return out;
}

double pi_cov_rate(const StochVolModel& model, double p, double y) {
    const SvDerivatives d = sv_derivatives(model, p, y);
    const double sy = model.params().sigmaY;
    return d.dPi * d.dPi * sy * sy;
}

double activity_rate(const BlackScholesModel& model, double p) {
    const double pi = frictionless_position(model, p);
    return pi * pi;
}

double activity_rate(const StochVolModel& model, double p, double y) {
    const double pi = frictionless_position(model, p, y);
    const double s = model.sigma_at(y);
    return pi * pi + pi_cov_rate(model, p, y) / (s * s);
}

SamplePath activity_rate_path(const BlackScholesModel& model, const ModelPaths& paths, double p) {
    SamplePath eta;
    eta.grid = paths.S.grid;
    eta.values.assign(paths.S.points(), activity_rate(model, p));
    return eta;
}

SamplePath activity_rate_path(const StochVolModel& model, const ModelPaths& paths, double p) {
    if (!paths.Y) {
        throw std::invalid_argument("activity_rate_path: stochastic-vol paths carry no factor path");
    }
    SamplePath eta;
    eta.grid = paths.S.grid;
    eta.values.resize(paths.S.points());
    for (std::size_t k = 0; k < eta.values.size(); ++k) {
        eta.values[k] = activity_rate(model, p, paths.Y->values[k]);
    }
    return eta;
}

namespace {

constexpr double kPriceFloorScale = 1e-12;

template <bool UnderQ>
ModelPaths simulate_bs(const BlackScholesModel& model, const TimeGrid& grid,
                       const FrictionParams& fp, std::uint64_t seed, std::uint64_t pathIndex) {
    RngStream rng(seed, 2 * pathIndex);
    const std::size_t n = grid.steps;
    const double dt = grid.dt;
    const double sqrtDt = std::sqrt(dt);
    const double sigma = model.sigma();
    const double lambda = model.b() / sigma; // market price of risk
    const double pi = frictionless_position(model, fp.p);

    ModelPaths out;
    out.S.grid = out.pi.grid = out.phi.grid = out.eta.grid = out.driver.grid = grid;
    out.S.values.resize(n + 1);
    out.S.cov.resize(n);
    out.S.drift.assign(n, 0.0);
    out.pi.values.assign(n + 1, pi);
    out.pi.cov.assign(n, 0.0);
    out.phi.values.resize(n + 1);
    out.eta.values.assign(n + 1, pi * pi);
    out.driver.values.resize(n + 1);

    double s = model.s0();
    double w = 0.0;
    out.S.values[0] = s;
    out.phi.values[0] = pi / s;
    out.driver.values[0] = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        const double dW = sqrtDt * rng.normal();
        out.S.cov[k] = sigma * sigma * s * s;
        if constexpr (UnderQ) {
            s += s * sigma * dW;
        } else {
            out.S.drift[k] = model.b() * s;
            s += s * (model.b() * dt + sigma * dW);
        }
        s = std::max(s, kPriceFloorScale * model.s0());
        w += dW;
        out.S.values[k + 1] = s;
        out.phi.values[k + 1] = pi / s;
        out.driver.values[k + 1] = w;
    }
    if constexpr (UnderQ) {
        out.qWeight = std::exp(-0.5 * lambda * lambda * grid.horizon);
        out.pFactor = std::exp(lambda * w - 0.5 * lambda * lambda * grid.horizon);
    }
    return out;
}

template <bool UnderQ>
ModelPaths simulate_sv(const StochVolModel& model, const TimeGrid& grid,
                       const FrictionParams& fp, std::uint64_t seed, std::uint64_t pathIndex) {
    RngStream priceRng(seed, 2 * pathIndex);
    RngStream factorRng(seed, 2 * pathIndex + 1);
    const std::size_t n = grid.steps;
    const double dt = grid.dt;
    const double sqrtDt = std::sqrt(dt);
    const auto& par = model.params();

    ModelPaths out;
    out.S.grid = out.pi.grid = out.phi.grid = out.eta.grid = out.driver.grid = grid;
    out.S.values.resize(n + 1);
    out.S.cov.resize(n);
    out.S.drift.assign(n, 0.0);
    out.pi.values.resize(n + 1);
    out.pi.cov.resize(n);
    out.phi.values.resize(n + 1);
    out.eta.values.resize(n + 1);
    out.driver.values.resize(n + 1);
    out.Y.emplace();
    out.Y->grid = grid;
    out.Y->values.resize(n + 1);

    double s = model.s0();
    double y = model.y0();
    double w = 0.0;
    double logU = 0.0;     // -1/2 int (b/sigma)^2 dt
    double logPfac = 0.0;  // int (b/sigma) dW - 1/2 int (b/sigma)^2 dt
    out.S.values[0] = s;
    out.Y->values[0] = y;
    out.pi.values[0] = frictionless_position(model, fp.p, y);
    out.phi.values[0] = out.pi.values[0] / s;
    out.eta.values[0] = activity_rate(model, fp.p, y);
    out.driver.values[0] = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        const double sig = model.sigma_at(y);
        const double ratio = model.drift_at(y) / sig;
        const double dW = sqrtDt * priceRng.normal();
        const double dB = sqrtDt * factorRng.normal();
        out.S.cov[k] = sig * sig * s * s;
        out.pi.cov[k] = pi_cov_rate(model, fp.p, y);
        if constexpr (UnderQ) {
            s += s * sig * dW;
            logU += -0.5 * ratio * ratio * dt;
            logPfac += ratio * dW - 0.5 * ratio * ratio * dt;
        } else {
            out.S.drift[k] = model.drift_at(y) * s;
            s += s * (model.drift_at(y) * dt + sig * dW);
        }
        s = std::max(s, kPriceFloorScale * model.s0());
        y += par.kappa * (par.meanY - y) * dt + par.sigmaY * dB;
        w += dW;
        out.S.values[k + 1] = s;
        out.Y->values[k + 1] = y;
        out.pi.values[k + 1] = frictionless_position(model, fp.p, y);
        out.phi.values[k + 1] = out.pi.values[k + 1] / s;
        out.eta.values[k + 1] = activity_rate(model, fp.p, y);
        out.driver.values[k + 1] = w;
    }
    if constexpr (UnderQ) {
        out.qWeight = std::exp(logU);
        out.pFactor = std::exp(logPfac);
    }
    return out;
}

} // namespace

ModelPaths simulate_under_Q(const BlackScholesModel& model, const TimeGrid& grid,
                            const FrictionParams& fp, std::uint64_t seed, std::uint64_t pathIndex) {
    return simulate_bs<true>(model, grid, fp, seed, pathIndex);
}

ModelPaths simulate_under_Q(const StochVolModel& model, const TimeGrid& grid,
                            const FrictionParams& fp, std::uint64_t seed, std::uint64_t pathIndex) {
    return simulate_sv<true>(model, grid, fp, seed, pathIndex);
}

ModelPaths simulate_under_P(const BlackScholesModel& model, const TimeGrid& grid,
                            const FrictionParams& fp, std::uint64_t seed, std::uint64_t pathIndex) {
    return simulate_bs<false>(model, grid, fp, seed, pathIndex);
}

ModelPaths simulate_under_P(const StochVolModel& model, const TimeGrid& grid,
                            const FrictionParams& fp, std::uint64_t seed, std::uint64_t pathIndex) {
    return simulate_sv<false>(model, grid, fp, seed, pathIndex);
}

void normalize_q_weights(std::span<ModelPaths> ensemble) {
    if (ensemble.empty()) return;
    std::vector<double> weights(ensemble.size());
    for (std::size_t i = 0; i < ensemble.size(); ++i) weights[i] = ensemble[i].qWeight;
    const double mean = pairwise_sum(weights) / static_cast<double>(ensemble.size());
    if (!(mean > 0.0)) {
        throw std::runtime_error("normalize_q_weights: degenerate weight ensemble");
    }
    for (auto& paths : ensemble) paths.qWeight /= mean;
}

SamplePath stochastic_exponential(const SamplePath& driver, const std::vector<double>& integrand) {
    const std::size_t n = driver.grid.steps;
    if (integrand.size() != n) {
        throw std::invalid_argument("stochastic_exponential: integrand must have one entry per interval");
    }
    SamplePath out;
    out.grid = driver.grid;
    out.values.resize(n + 1);
    double logZ = 0.0;
    out.values[0] = 1.0;
    const double dt = driver.grid.dt;
    for (std::size_t k = 0; k < n; ++k) {
        const double dW = driver.values[k + 1] - driver.values[k];
        logZ += -integrand[k] * dW - 0.5 * integrand[k] * integrand[k] * dt;
        out.values[k + 1] = std::exp(logZ);
    }
    return out;
}

SamplePath memm_density_factor(const BlackScholesModel& model, const ModelPaths& paths) {
    std::vector<double> ratio(paths.S.grid.steps, model.b() / model.sigma());
    return stochastic_exponential(paths.driver, ratio);
}

SamplePath memm_density_factor(const StochVolModel& model, const ModelPaths& paths) {
    if (!paths.Y) {
        throw std::invalid_argument("memm_density_factor: stochastic-vol paths carry no factor path");
    }
    const std::size_t n = paths.S.grid.steps;
    std::vector<double> ratio(n);
    for (std::size_t k = 0; k < n; ++k) {
        const double y = paths.Y->values[k];
        ratio[k] = model.drift_at(y) / model.sigma_at(y);
    }
    return stochastic_exponential(paths.driver, ratio);
}

double frictionless_dual_y(const BlackScholesModel& model, const FrictionParams& fp) {
    const double lambda = model.b() / model.sigma();
    return fp.p * std::exp(-fp.p * fp.x() - 0.5 * lambda * lambda * fp.horizon);
}

double frictionless_dual_y(const StochVolModel& model, const FrictionParams& fp,
                           const TimeGrid& grid, std::uint64_t seed, std::size_t nPaths) {
    const auto& par = model.params();
    const double dt = grid.dt;
    const double sqrtDt = std::sqrt(dt);
    std::vector<double> u(nPaths);
    for (std::size_t i = 0; i < nPaths; ++i) {
        RngStream factorRng(seed, 2 * i + 1);
        double y = model.y0();
        double logU = 0.0;
        for (std::size_t k = 0; k < grid.steps; ++k) {
            const double ratio = model.drift_at(y) / model.sigma_at(y);
            logU += -0.5 * ratio * ratio * dt;
            y += par.kappa * (par.meanY - y) * dt + par.sigmaY * sqrtDt * factorRng.normal();
        }
        u[i] = std::exp(logU);
    }
    const double zTilde0 = pairwise_sum(u) / static_cast<double>(nPaths);
    return fp.p * std::exp(-fp.p * fp.x()) * zTilde0;
}

} // namespace tcsim
