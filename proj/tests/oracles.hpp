#pragma once

// Brute-force oracles, independent of the adaptive engines in spflab/norms.hpp:
// dense grid scan + golden-section refinement for sup-norms, composite Simpson
// plus a leading-order analytic tail for L^p norms.

#include <algorithm>
#include <cmath>
#include <vector>

#include "spflab/spf.hpp"

namespace oracle {

using spflab::Complex;
using spflab::Spf;

inline double eval_abs(const Spf& s, double x, bool deriv) {
    return std::abs(deriv ? s.eval_derivative(Complex(x, 0))
                          : s.eval(Complex(x, 0)));
}

inline double golden_refine(const Spf& s, bool deriv, double lo, double hi) {
    const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
    double a = lo, b = hi;
    double c = b - gr * (b - a), d = a + gr * (b - a);
    double fc = eval_abs(s, c, deriv), fd = eval_abs(s, d, deriv);
    for (int it = 0; it < 90; ++it) {
        if (fc > fd) {
            b = d; d = c; fd = fc;
            c = b - gr * (b - a);
            fc = eval_abs(s, c, deriv);
        } else {
            a = c; c = d; fc = fd;
            d = a + gr * (b - a);
            fd = eval_abs(s, d, deriv);
        }
    }
    return std::max(fc, fd);
}

inline double brute_sup(const Spf& s, bool deriv, int grid_points = 200001) {
    const int dlev = deriv ? 1 : 0;
    double A = 0.0, ymax = 0.0;
    for (const auto& p : s.poles()) {
        A = std::max(A, std::abs(p.location.real()));
        ymax = std::max(ymax, std::abs(p.location.imag()));
    }
    double low = 0.0;
    for (const auto& p : s.poles())
        low = std::max(low, eval_abs(s, p.location.real(), deriv));
    const double fact = dlev == 0 ? 1.0 : 1.0;
    const double reach = std::pow(s.order() * fact / (0.25 * std::max(low, 1e-12)),
                                  1.0 / (dlev + 1));
    const double X = A + std::max(reach, 1.0) + 2.0 * ymax;

    const double h = 2.0 * X / (grid_points - 1);
    double best = 0.0;
    int best_i = 0;
    for (int i = 0; i < grid_points; ++i) {
        const double v = eval_abs(s, -X + i * h, deriv);
        if (v > best) { best = v; best_i = i; }
    }
    const double xl = -X + std::max(best_i - 2, 0) * h;
    const double xr = -X + std::min(best_i + 2, grid_points - 1) * h;
    return std::max(best, golden_refine(s, deriv, xl, xr));
}

// Simpson on [-window, window] plus the leading-order tail of |f|^p, where
// f ~ n * d! / (x - mean)^{d+1} far out.
inline double brute_lp(const Spf& s, double p, bool deriv, double window = 1e4,
                       int intervals = 2000000) {
    const int dlev = deriv ? 1 : 0;
    auto h = [&](double x) { return std::pow(eval_abs(s, x, deriv), p); };

    const double step = 2.0 * window / intervals;
    double sum = h(-window) + h(window);
    for (int i = 1; i < intervals; ++i)
        sum += h(-window + i * step) * (i % 2 == 1 ? 4.0 : 2.0);
    double integral = sum * step / 3.0;

    double mean = 0.0;
    for (const auto& q : s.poles()) mean += q.multiplicity * q.location.real();
    mean /= s.order();
    const double fact = dlev == 0 ? 1.0 : 1.0;
    const double expo = p * (dlev + 1) - 1.0;
    const double c = std::pow(s.order() * fact, p) / expo;
    integral += c * (std::pow(window - mean, -expo) + std::pow(window + mean, -expo));

    return std::pow(integral, 1.0 / p);
}

} // namespace oracle
