#include "tcsim/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "tcsim/notrade.hpp"

namespace tcsim {

CEResult certainty_equivalent(std::span<const double> samples, std::span<const double> weights,
                              double p) {
    if (!(p > 0.0)) {
        throw std::invalid_argument("certainty_equivalent: p must be positive");
    }
    if (samples.empty() || samples.size() != weights.size()) {
        throw std::invalid_argument("certainty_equivalent: samples/weights size mismatch");
    }
    const std::size_t m = samples.size();
    double shift = -p * samples[0];
    for (std::size_t i = 1; i < m; ++i) shift = std::max(shift, -p * samples[i]);

    std::vector<double> terms(m), wsum(m);
    for (std::size_t i = 0; i < m; ++i) {
        if (weights[i] < 0.0) {
            throw std::invalid_argument("certainty_equivalent: weights must be nonnegative");
        }
        wsum[i] = weights[i];
        terms[i] = weights[i] * std::exp(-p * samples[i] - shift);
    }
    const double totW = pairwise_sum(wsum);
    if (!(totW > 0.0)) {
        throw std::invalid_argument("certainty_equivalent: total weight must be positive");
    }
    const double meanShifted = pairwise_sum(terms) / totW;

    std::vector<double> dev(m);
    for (std::size_t i = 0; i < m; ++i) {
        const double d = std::exp(-p * samples[i] - shift) - meanShifted;
        dev[i] = weights[i] * weights[i] * d * d;
    }
    const double seShifted = std::sqrt(pairwise_sum(dev)) / totW;

    CEResult out;
    out.nPaths = m;
    out.ce = -(std::log(meanShifted) + shift) / p;
    out.utility = -meanShifted * std::exp(shift);
    out.se = seShifted * std::exp(shift);
    return out;
}

double quadratic_integral(const SamplePath& f, const std::vector<double>& cov, double dt) {
    if (cov.size() + 1 != f.values.size()) {
        throw std::invalid_argument("quadratic_integral: cov must have one entry per interval");
    }
    std::vector<double> terms(cov.size());
    for (std::size_t k = 0; k < cov.size(); ++k) {
        terms[k] = f.values[k] * f.values[k] * cov[k] * dt;
    }
    return pairwise_sum(terms);
}

double leading_loss(std::span<const ModelPaths> paths, const FrictionParams& fp) {
    if (paths.empty()) {
        throw std::invalid_argument("leading_loss: empty ensemble");
    }
    std::vector<double> weighted(paths.size()), weights(paths.size());
    for (std::size_t i = 0; i < paths.size(); ++i) {
        const CorridorCoeffs coeffs = corridor_coeffs(paths[i], fp);
        const double integral =
            quadratic_integral(coeffs.dPhiPlus, paths[i].S.cov, paths[i].S.grid.dt);
        weights[i] = paths[i].qWeight;
        weighted[i] = paths[i].qWeight * integral;
    }
    return 0.5 * fp.p * pairwise_sum(weighted) / pairwise_sum(weights);
}

double ergodic_ratio(std::span<const double> intDphi2, std::span<const double> intDphiPlus2,
                     std::span<const double> weights) {
    if (intDphi2.size() != intDphiPlus2.size() || intDphi2.size() != weights.size() ||
        intDphi2.empty()) {
        throw std::invalid_argument("ergodic_ratio: input size mismatch");
    }
    std::vector<double> num(weights.size()), den(weights.size());
    for (std::size_t i = 0; i < weights.size(); ++i) {
        num[i] = weights[i] * intDphi2[i];
        den[i] = weights[i] * intDphiPlus2[i];
    }
    const double d = pairwise_sum(den);
    if (!(d > 0.0)) {
        throw std::invalid_argument("ergodic_ratio: degenerate denominator");
    }
    return pairwise_sum(num) / d;
}

double qv_weighted_average(const SamplePath& q, const std::vector<double>& cqq) {
    if (cqq.size() + 1 != q.values.size()) {
        throw std::invalid_argument("qv_weighted_average: cqq must have one entry per interval");
    }
    std::vector<double> num(cqq.size()), den(cqq.size());
    for (std::size_t k = 0; k < cqq.size(); ++k) {
        num[k] = q.values[k] * q.values[k] * cqq[k];
        den[k] = cqq[k];
    }
    const double total = pairwise_sum(den);
    if (!(total > 0.0)) {
        throw std::runtime_error("qv_weighted_average: total quadratic variation is degenerate");
    }
    return pairwise_sum(num) / total;
}

namespace {

CEResult primal_from_summary(const EpsilonSummary& s) {
    CEResult out;
    out.ce = s.primalCE;
    out.utility = s.primalU;
    out.se = s.primalUSe;
    out.nPaths = s.paths;
    return out;
}

} // namespace

CEResult primal_utility(const BlackScholesModel& model, const FrictionParams& fp,
                        const EngineOptions& opt) {
    return primal_from_summary(run_epsilon(model, fp, opt));
}

CEResult primal_utility(const StochVolModel& model, const FrictionParams& fp,
                        const EngineOptions& opt) {
    return primal_from_summary(run_epsilon(model, fp, opt));
}

double eps_scaling_fit(std::span<const double> epsList, std::span<const double> lossList) {
    if (epsList.size() != lossList.size() || epsList.size() < 2) {
        throw std::invalid_argument("eps_scaling_fit: need at least two (eps, loss) pairs");
    }
    const std::size_t m = epsList.size();
    double meanX = 0.0, meanY = 0.0;
    std::vector<double> lx(m), ly(m);
    for (std::size_t i = 0; i < m; ++i) {
        if (!(epsList[i] > 0.0) || !(lossList[i] > 0.0)) {
            throw std::invalid_argument("eps_scaling_fit: eps and loss values must be positive");
        }
        lx[i] = std::log(epsList[i]);
        ly[i] = std::log(lossList[i]);
        meanX += lx[i];
        meanY += ly[i];
    }
    meanX /= static_cast<double>(m);
    meanY /= static_cast<double>(m);
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        sxx += (lx[i] - meanX) * (lx[i] - meanX);
        sxy += (lx[i] - meanX) * (ly[i] - meanY);
    }
    if (!(sxx > 0.0)) {
        throw std::invalid_argument("eps_scaling_fit: eps values must not be all equal");
    }
    return sxy / sxx;
}

} // namespace tcsim
