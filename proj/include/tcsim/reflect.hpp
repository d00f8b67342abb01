#pragma once

#include <cstdint>

#include "tcsim/paths.hpp"

namespace tcsim {

/// Solution of the Skorohod SDE d(dPhi) = -d(phi) with reflection at
/// time-dependent barriers: the offset path plus the cumulative boundary
/// pushes (up = shares bought at the lower barrier, down = shares sold at the
/// upper barrier). At every grid point
///   dPhi_k = dPhi_0 - (phi_k - phi_0) + up_k - down_k
/// holds exactly, up/down are nondecreasing, and an up (down) increment occurs
/// only at steps where dPhi lands on the lower (upper) barrier.
struct ReflectedSolution {
    SamplePath dPhi;
    SamplePath up;
    SamplePath down;
    /// Steps whose one-sided overshoot exceeded the corridor width: the grid
    /// is too coarse to resolve the reflection there.
    std::size_t coarseSteps = 0;
};

/// One projection step. `proposed` is the pre-projection value; on exit the
/// local-time increments say how far it was pushed back. Returns the clamped
/// value, which sits exactly on a barrier whenever a push happened.
inline double reflect_step(double proposed, double lo, double hi,
                           double& upInc, double& downInc) {
    upInc = 0.0;
    downInc = 0.0;
    if (proposed < lo) {
        upInc = lo - proposed;
        return lo;
    }
    if (proposed > hi) {
        downInc = proposed - hi;
        return hi;
    }
    return proposed;
}

/// Three-case projection of the initial offset x^S/S_0 - phi_0 onto
/// [-dPhiPlus0, dPhiPlus0].
double initial_offset(double xS, double S0, double phi0, double dPhiPlus0);

/// Discrete projection scheme with barrier evaluation at the right endpoint of
/// each step, so reflected points sit exactly on the current barrier.
ReflectedSolution solve_skorohod(const SamplePath& phi, const SamplePath& lower,
                                 const SamplePath& upper, double dPhi0);

/// Brownian motion reflected to stay in [-1, 1], started at 0.
SamplePath reflect_bm(const TimeGrid& grid, RngStream& rng);

/// Long-horizon occupation statistics of reflected Brownian motion on [-1,1],
/// accumulated streaming so the horizon can be large without storing a path.
struct ReflectedBmStats {
    double meanQ2 = 0.0;       // time average of q^2
    double qvWeightedQ2 = 0.0; // int q^2 d[q,q] / [q,q]_T (c^{q,q} = 1 here)
    double ksUniform = 0.0;    // KS distance of the occupation law to U[-1,1]
    std::size_t steps = 0;
};

ReflectedBmStats reflected_bm_occupation(double horizon, double dt, std::uint64_t seed,
                                         std::size_t bins = 2001);

} // namespace tcsim
