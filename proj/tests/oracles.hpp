#pragma once

// Closed-form derivative oracles for the analytic reference solutions,
// independent of the tape/jet engine. Used to verify that each reference
// satisfies its PDE.

#include <cmath>

#include "rang/problems.hpp"

namespace oracle {

struct WaveDerivs {
    double u, uxx, utt;
};

// Sum of four sech pulses: c_i * sech(2 (x + a_i t + b_i)).
inline WaveDerivs wave_derivs(double t, double x) {
    const double r3 = std::sqrt(3.0);
    const double coef[4] = {0.5, -0.5, 0.5, -0.5};
    const double a[4] = {r3, r3, -r3, -r3};
    const double b[4] = {0.0, -8.0, 0.0, 8.0};
    WaveDerivs d{0, 0, 0};
    for (int i = 0; i < 4; ++i) {
        const double xi = x + a[i] * t + b[i];
        const double s = 1.0 / std::cosh(2.0 * xi);
        const double th = std::tanh(2.0 * xi);
        const double sec_dd = 4.0 * s * (th * th - s * s); // d^2/dxi^2 sech(2 xi)
        d.u += coef[i] * s;
        d.uxx += coef[i] * sec_dd;
        d.utt += coef[i] * a[i] * a[i] * sec_dd;
    }
    return d;
}

inline double wave_residual(double t, double x) {
    const WaveDerivs d = wave_derivs(t, x);
    return d.utt - 3.0 * d.uxx;
}

struct KdvDerivs {
    double u, ux, ut, uxxx;
};

// Soliton 3.5 sech^2(w), w = (sqrt(7)/2)(x - 7 t + 7).
inline KdvDerivs kdv_derivs(double t, double x) {
    const double k = 0.5 * std::sqrt(7.0), c = 7.0;
    const double w = k * (x - c * t + 7.0);
    const double s = 1.0 / std::cosh(w), th = std::tanh(w);
    const double s2 = s * s;
    const double u_w = -7.0 * s2 * th;
    const double u_www = 56.0 * s2 * s2 * th - 28.0 * s2 * th * th * th;
    return {3.5 * s2, k * u_w, -c * k * u_w, k * k * k * u_www};
}

inline double kdv_residual(double t, double x) {
    const KdvDerivs d = kdv_derivs(t, x);
    return d.ut + 6.0 * d.u * d.ux + d.uxxx;
}

// Two-Gaussian field: second partials of each Gaussian computed directly.
inline double poisson_residual(double x, double y) {
    const double s2 = 0.01;
    auto lap = [&](double dx, double dy, double sign) {
        const double g = std::exp(-(dx * dx + dy * dy) / (2.0 * s2));
        const double gxx = g * (dx * dx / (s2 * s2) - 1.0 / s2);
        const double gyy = g * (dy * dy / (s2 * s2) - 1.0 / s2);
        return sign * (gxx + gyy);
    };
    return lap(x - 0.3, y - 0.3, 1.0) + lap(x + 0.3, y + 0.3, -1.0) -
           rang::poisson_forcing(x, y);
}

struct ConvDiffDerivs {
    double u, ux, uxx, ut;
};

// Advected-diffused Gaussian pulse, log-derivative bookkeeping.
inline ConvDiffDerivs convdiff_derivs(double t, double x) {
    const double mu = 0.05;
    const double tau = t + 0.1, xi = x + 2.0 - 4.0 * t;
    const double u = 0.1 / std::sqrt(mu * tau) * std::exp(-xi * xi / (4.0 * mu * tau));
    const double ux = u * (-xi / (2.0 * mu * tau));
    const double uxx = u * (xi * xi / (4.0 * mu * mu * tau * tau) - 1.0 / (2.0 * mu * tau));
    const double ut =
        u * (-0.5 / tau + 2.0 * xi / (mu * tau) + xi * xi / (4.0 * mu * tau * tau));
    return {u, ux, uxx, ut};
}

inline double convdiff_residual(double t, double x) {
    const ConvDiffDerivs d = convdiff_derivs(t, x);
    return d.ut + 4.0 * d.ux - 0.05 * d.uxx;
}

} // namespace oracle
