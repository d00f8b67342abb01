#pragma once

#include "tcsim/models.hpp"
#include "tcsim/notrade.hpp"
#include "tcsim/paths.hpp"

namespace tcsim {

/// Self-financing bid/ask accounting of a share-path strategy. Buys execute at
/// the ask (1+eps) S, sells at the bid (1-eps) S; X is the liquidation wealth
/// psi0 + psi (1-eps) S on {psi >= 0} and psi0 + psi (1+eps) S on {psi < 0}.
struct TradeLedger {
    SamplePath psi0; // bank account
    SamplePath psi;  // shares held
    SamplePath X;    // liquidation wealth
    std::size_t tauIdx = 0;     // grid index of the safety stop; steps if never
    double minX = 0.0;          // realized admissibility floor
    double totalBought = 0.0;   // shares through the ask leg
    double totalSold = 0.0;     // shares through the bid leg
    double buyCost = 0.0;       // currency paid at the ask
    double sellProceeds = 0.0;  // currency received at the bid
};

/// Runs the ledger for a target share path. The initial endowment is
/// x^S / S_0 shares; any mismatch with psi_0 becomes a block trade at the
/// step-0 bid/ask. Each later increment is split into buy/sell legs at that
/// step's prices.
TradeLedger apply_strategy(const SamplePath& S, const SamplePath& psi, const FrictionParams& fp);

/// First grid index where |X - frictionless| > 1 or |X| > eps^{-4/3}; returns
/// the number of steps when neither triggers.
std::size_t stop_time_tau(const SamplePath& X, const SamplePath& frictionlessWealth, double eps);

/// Liquidates the ledger position at grid index tauIdx (bid/ask of that step)
/// and freezes wealth from there on.
void liquidate_at(TradeLedger& ledger, const SamplePath& S, const FrictionParams& fp,
                  std::size_t tauIdx);

/// Max relative pointwise gap between the bid/ask ledger and frictionless
/// trading of the same strategy at the shadow price, with the liquidation
/// adjustment applied. Barrier trades are booked at sEps, so the gap measures
/// how exactly the boundary trades execute at the touched bid/ask.
double shadow_consistency_gap(const TradeLedger& ledger, const ShadowPath& shadow,
                              const FrictionParams& fp);

} // namespace tcsim
