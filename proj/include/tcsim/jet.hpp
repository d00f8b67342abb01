#pragma once

#include <cmath>

namespace tcsim::detail {

/// Value and first three derivatives of a scalar function at a point,
/// propagated through arithmetic and tanh. Used to evaluate the closed-form
/// sensitivities of the stochastic-vol optimizer without hand-derived chains.
struct Jet3 {
    double v = 0.0;
    double d1 = 0.0;
    double d2 = 0.0;
    double d3 = 0.0;

    static Jet3 variable(double y) { return {y, 1.0, 0.0, 0.0}; }
    static Jet3 constant(double c) { return {c, 0.0, 0.0, 0.0}; }

    /// Shift down: the jet of this function's first derivative, with the
    /// third-order slot unknown (zeroed). Only valid where the caller never
    /// reads beyond d2 of the result.
    Jet3 derivative() const { return {d1, d2, d3, 0.0}; }
};

inline Jet3 operator+(const Jet3& a, const Jet3& b) {
    return {a.v + b.v, a.d1 + b.d1, a.d2 + b.d2, a.d3 + b.d3};
}

inline Jet3 operator-(const Jet3& a, const Jet3& b) {
    return {a.v - b.v, a.d1 - b.d1, a.d2 - b.d2, a.d3 - b.d3};
}

inline Jet3 operator*(const Jet3& a, const Jet3& b) {
    return {a.v * b.v,
            a.d1 * b.v + a.v * b.d1,
            a.d2 * b.v + 2.0 * a.d1 * b.d1 + a.v * b.d2,
            a.d3 * b.v + 3.0 * a.d2 * b.d1 + 3.0 * a.d1 * b.d2 + a.v * b.d3};
}

inline Jet3 operator*(double c, const Jet3& a) { return {c * a.v, c * a.d1, c * a.d2, c * a.d3}; }

/// Composition f(g) by Faa di Bruno up to order three; f derivatives are
/// evaluated at g.v.
inline Jet3 compose(double f0, double f1, double f2, double f3, const Jet3& g) {
    Jet3 out;
    out.v = f0;
    out.d1 = f1 * g.d1;
    out.d2 = f2 * g.d1 * g.d1 + f1 * g.d2;
    out.d3 = f3 * g.d1 * g.d1 * g.d1 + 3.0 * f2 * g.d1 * g.d2 + f1 * g.d3;
    return out;
}

inline Jet3 inverse(const Jet3& a) {
    const double w = 1.0 / a.v;
    return compose(w, -w * w, 2.0 * w * w * w, -6.0 * w * w * w * w, a);
}

inline Jet3 operator/(const Jet3& a, const Jet3& b) { return a * inverse(b); }

inline Jet3 tanh(const Jet3& a) {
    const double t = std::tanh(a.v);
    const double s = 1.0 - t * t;
    // f' = 1 - t^2, f'' = -2 t (1 - t^2), f''' = (6 t^2 - 2)(1 - t^2)
    return compose(t, s, -2.0 * t * s, (6.0 * t * t - 2.0) * s, a);
}

} // namespace tcsim::detail
