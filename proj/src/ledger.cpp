#include "tcsim/ledger.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace tcsim {

namespace {

double liquidation_value(double psi, double S, double eps) {
    return psi >= 0.0 ? psi * (1.0 - eps) * S : psi * (1.0 + eps) * S;
}

} // namespace

TradeLedger apply_strategy(const SamplePath& S, const SamplePath& psi, const FrictionParams& fp) {
    if (!S.grid.same_as(psi.grid)) {
        throw std::invalid_argument("apply_strategy: paths live on different grids");
    }
    const std::size_t n = S.grid.steps;
    const double eps = fp.eps;

    TradeLedger ledger;
    ledger.psi0.grid = ledger.psi.grid = ledger.X.grid = S.grid;
    ledger.psi0.values.resize(n + 1);
    ledger.psi.values = psi.values;
    ledger.X.values.resize(n + 1);
    ledger.tauIdx = n;

    double bank = fp.xB;
    double held = fp.xS / S.values[0]; // endowed shares before the block trade
    for (std::size_t k = 0; k <= n; ++k) {
        const double s = S.values[k];
        const double dPsi = psi.values[k] - held;
        if (dPsi > 0.0) {
            const double cost = dPsi * (1.0 + eps) * s;
            bank -= cost;
            ledger.totalBought += dPsi;
            ledger.buyCost += cost;
        } else if (dPsi < 0.0) {
            const double proceeds = -dPsi * (1.0 - eps) * s;
            bank += proceeds;
            ledger.totalSold += -dPsi;
            ledger.sellProceeds += proceeds;
        }
        held = psi.values[k];
        ledger.psi0.values[k] = bank;
        ledger.X.values[k] = bank + liquidation_value(held, s, eps);
    }
    ledger.minX = *std::min_element(ledger.X.values.begin(), ledger.X.values.end());
    return ledger;
}

std::size_t stop_time_tau(const SamplePath& X, const SamplePath& frictionlessWealth, double eps) {
    if (!X.grid.same_as(frictionlessWealth.grid)) {
        throw std::invalid_argument("stop_time_tau: paths live on different grids");
    }
    const double cap = std::pow(eps, -4.0 / 3.0);
    for (std::size_t k = 0; k <= X.grid.steps; ++k) {
        if (std::abs(X.values[k] - frictionlessWealth.values[k]) > 1.0 ||
            std::abs(X.values[k]) > cap) {
            return k;
        }
    }
    return X.grid.steps;
}

void liquidate_at(TradeLedger& ledger, const SamplePath& S, const FrictionParams& fp,
                  std::size_t tauIdx) {
    const std::size_t n = S.grid.steps;
    if (tauIdx >= n) {
        ledger.tauIdx = n;
        return;
    }
    ledger.tauIdx = tauIdx;
    const double psiTau = ledger.psi.values[tauIdx];
    const double proceeds = liquidation_value(psiTau, S.values[tauIdx], fp.eps);
    if (psiTau > 0.0) {
        ledger.totalSold += psiTau;
        ledger.sellProceeds += proceeds;
    } else if (psiTau < 0.0) {
        ledger.totalBought += -psiTau;
        ledger.buyCost += -proceeds;
    }
    const double bank = ledger.psi0.values[tauIdx] + proceeds;
    for (std::size_t k = tauIdx; k <= n; ++k) {
        ledger.psi.values[k] = 0.0;
        ledger.psi0.values[k] = bank;
        ledger.X.values[k] = bank;
    }
    ledger.minX = *std::min_element(ledger.X.values.begin(), ledger.X.values.end());
}

double shadow_consistency_gap(const TradeLedger& ledger, const ShadowPath& shadow,
                              const FrictionParams& fp) {
    const std::size_t n = ledger.X.grid.steps;
    if (!ledger.X.grid.same_as(shadow.sEps.grid)) {
        throw std::invalid_argument("shadow_consistency_gap: paths live on different grids");
    }
    const double eps = fp.eps;
    const double S0 = shadow.sEps.values[0] - shadow.dS.values[0];
    const double endowShares = fp.xS / S0;

    // Frictionless account marked at the shadow price. Barrier trades are
    // value-neutral there; only the forced liquidation at tau is booked at the
    // ledger's bid/ask.
    double shadowVal = fp.x() + endowShares * shadow.dS.values[0];
    double held = endowShares;
    double maxGap = 0.0;
    for (std::size_t k = 0; k <= n; ++k) {
        const double sEps = shadow.sEps.values[k];
        const double s = sEps - shadow.dS.values[k];
        if (k > 0) {
            shadowVal += held * (sEps - shadow.sEps.values[k - 1]);
        }
        const double dPsi = ledger.psi.values[k] - held;
        if (k == ledger.tauIdx && ledger.tauIdx < n && dPsi != 0.0) {
            const double price = dPsi > 0.0 ? (1.0 + eps) * s : (1.0 - eps) * s;
            shadowVal += dPsi * (sEps - price);
        }
        held = ledger.psi.values[k];
        const double liqAdj =
            held >= 0.0 ? held * (sEps - (1.0 - eps) * s) : held * (sEps - (1.0 + eps) * s);
        const double adjusted = shadowVal - liqAdj;
        const double gap = std::abs(ledger.X.values[k] - adjusted) /
                           std::max(1.0, std::abs(ledger.X.values[k]));
        maxGap = std::max(maxGap, gap);
    }
    return maxGap;
}

} // namespace tcsim
