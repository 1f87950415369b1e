#pragma once

// Norms of SPFs and their derivatives on the real line, certified.
//
// Sup-norm: branch-and-bound on |f|^2 over a window that provably contains
// the maximum, with per-panel Lipschitz bounds from pole distances, plus a
// safeguarded Newton polish of the best local maximum.  L^p: adaptive
// Gauss panels on a window plus a closed-form bound for the tails.

#include <cmath>
#include <limits>
#include <vector>

#include "spflab/error.hpp"
#include "spflab/numerics.hpp"
#include "spflab/report.hpp"
#include "spflab/spf.hpp"

namespace spflab::norms {

struct NormResult {
    double value = 0.0;
    double witness = 0.0;         // argmax for sup-norm; meaningless for L^p
    double certified_error = 0.0; // bound on |reported - true|, never zero
};

struct NormOptions {
    double rel_tol = 1e-10;  // target certification gap, relative
    int max_panels = 400000; // branch-and-bound / quadrature budget
};

namespace detail {

// f = rho^{(level)} with level 0 or 1; |f^{(j)}| <= sum n_k c_j / dist^{level+1+j}.
struct LevelBounds {
    const Spf& spf;
    int level; // 0: the SPF itself, 1: its derivative

    double factorial(int m) const { return m == 0 ? 1.0 : (m == 1 ? 1.0 : (m == 2 ? 2.0 : 6.0)); }

    // Distance from the segment [lo, hi] on R to pole k.
    static double panel_distance(const Pole& p, double lo, double hi) {
        const double x = p.location.real();
        const double h = x < lo ? lo - x : (x > hi ? x - hi : 0.0);
        return std::hypot(h, p.location.imag());
    }

    // sup over [lo, hi] of |f^{(j)}|, triangle inequality per pole.
    double sup_bound(double lo, double hi, int j) const {
        const int pow_ord = level + 1 + j;
        const double c = factorial(level + j);
        double sum = 0.0;
        for (const Pole& p : spf.poles()) {
            const double d = panel_distance(p, lo, hi);
            sum += c * p.multiplicity / std::pow(d, pow_ord);
        }
        return sum;
    }

    Complex eval(double x) const {
        return level == 0 ? spf.eval(Complex(x, 0.0)) : spf.eval_derivative(Complex(x, 0.0));
    }
    Complex eval_next(double x) const {
        return level == 0 ? spf.eval_derivative(Complex(x, 0.0))
                          : spf.eval_second_derivative(Complex(x, 0.0));
    }

    // |f(x)| <= order * level! / (|x| - A)^{level+1} once |x| > A = max |Re xi_k|.
    double max_abs_re() const {
        double a = 0.0;
        for (const Pole& p : spf.poles()) a = std::max(a, std::abs(p.location.real()));
        return a;
    }
    double tail_bound(double dist_beyond_A) const {
        return spf.order() * factorial(level) / std::pow(dist_beyond_A, level + 1);
    }
};

// Safeguarded Newton on phi = (|f|^2)' around x0, constrained to [lo, hi].
inline double polish_square_max(const LevelBounds& lb, double x0, double lo, double hi) {
    auto phi = [&](double x) {
        const Complex f = lb.eval(x), fp = lb.eval_next(x);
        return 2.0 * (f.real() * fp.real() + f.imag() * fp.imag());
    };
    auto g = [&](double x) { return std::norm(lb.eval(x)); };
    double best_x = x0, best_g = g(x0);
    double x = x0;
    double step = 0.25 * (hi - lo);
    for (int it = 0; it < 12; ++it) {
        const double h = std::max(1e-7 * (1.0 + std::abs(x)), 1e-12);
        const double d = (phi(x + h) - phi(x - h)) / (2.0 * h);
        double xn = d != 0.0 ? x - phi(x) / d : x;
        if (!(xn > lo && xn < hi) || !std::isfinite(xn)) xn = 0.5 * (x + best_x);
        if (std::abs(xn - x) > step) xn = x + (xn > x ? step : -step);
        x = xn;
        const double gx = g(x);
        if (gx > best_g) { best_g = gx; best_x = x; }
        step *= 0.5;
    }
    return best_x;
}

} // namespace detail

inline NormResult sup_norm_real(const Spf& spf, bool use_derivative = false,
                                const NormOptions& opts = {}) {
    const detail::LevelBounds lb{spf, use_derivative ? 1 : 0};
    const double A = lb.max_abs_re();

    // Initial lower bound from per-pole candidate abscissae.
    std::vector<double> candidates{0.0};
    for (const Pole& p : spf.poles()) {
        const double x = p.location.real(), y = std::abs(p.location.imag());
        candidates.insert(candidates.end(), {x, x - y, x + y, x - 2 * y, x + 2 * y});
    }
    double low = 0.0, low_x = 0.0;
    for (double x : candidates) {
        const double v = std::abs(lb.eval(x));
        if (v > low) { low = v; low_x = x; }
    }
    // The window bound below needs an achieved positive lower bound.  |f| has
    // finitely many real zeros, so walking outward always finds one.
    for (double x = A + 1.0; low == 0.0 && x < 1e12; x *= 2.0) {
        const double v = std::abs(lb.eval(x));
        if (v > low) { low = v; low_x = x; }
    }
    if (low == 0.0)
        throw errors::convergence_failure("could not find a nonzero sample of |f|");

    // Window so the tail cannot contain the maximum: tail <= low / 4.
    const int d = lb.level;
    const double reach = std::pow(spf.order() * lb.factorial(d) / (0.25 * low), 1.0 / (d + 1));
    const double X = A + std::max(reach, 1.0);

    std::vector<double> breaks;
    for (const Pole& p : spf.poles()) breaks.push_back(p.location.real());
    breaks.push_back(low_x);
    breaks.push_back(detail::polish_square_max(lb, low_x, -X, X));

    auto g = [&](double x) { return std::norm(lb.eval(x)); };
    // g = |f|^2: |g'| <= 2 B0 B1 and |g''| <= 2 (B1^2 + B0 B2) per panel.
    auto g_deriv_bound = [&](double lo, double hi) {
        return 2.0 * lb.sup_bound(lo, hi, 0) * lb.sup_bound(lo, hi, 1);
    };
    auto g_curv_bound = [&](double lo, double hi) {
        const double b1 = lb.sup_bound(lo, hi, 1);
        return 2.0 * (b1 * b1 + lb.sup_bound(lo, hi, 0) * lb.sup_bound(lo, hi, 2));
    };
    num::CertifiedExtremum ext =
        num::maximize_certified(g, g_deriv_bound, g_curv_bound, -X, X, opts.rel_tol, 1e-300,
                                opts.max_panels, breaks);

    // One more polish pass from the branch-and-bound witness.
    const double xp = detail::polish_square_max(lb, ext.witness, -X, X);
    const double gp = g(xp);
    if (gp > ext.value) { ext.value = gp; ext.witness = xp; }

    NormResult out;
    out.value = std::sqrt(ext.value);
    out.witness = ext.witness;
    const double upper = std::sqrt(std::max(ext.bound, ext.value));
    out.certified_error = (upper - out.value) + 4.0 * std::numeric_limits<double>::epsilon() *
                                                     (1.0 + out.value);
    return out;
}

inline NormResult lp_norm_real(const Spf& spf, double p, bool use_derivative = false,
                               const NormOptions& opts = {}) {
    if (!(p > 1.0) || std::isinf(p))
        throw errors::unsupported_exponent("L^p norm needs finite p > 1, got " +
                                           std::to_string(p));
    const detail::LevelBounds lb{spf, use_derivative ? 1 : 0};
    const double A = lb.max_abs_re();
    double ymax = 0.0;
    for (const Pole& q : spf.poles()) ymax = std::max(ymax, std::abs(q.location.imag()));

    auto h = [&](double x) { return std::pow(std::abs(lb.eval(x)), p); };
    std::vector<double> breaks;
    for (const Pole& q : spf.poles()) breaks.push_back(q.location.real());

    // Rough scale to budget panel tolerances.
    const double X0 = A + 10.0 * (1.0 + ymax);
    double rough = 0.0;
    {
        const int m = 2048;
        const double step = 2.0 * X0 / m;
        for (int i = 0; i <= m; ++i) rough += h(-X0 + i * step) * step;
        rough = std::max(rough, 1e-300);
    }
    const double abs_tol = 1e-12 * std::max(1.0, rough);

    num::QuadratureResult core =
        num::integrate_adaptive(h, -X0, X0, abs_tol, breaks, opts.max_panels);

    // Extend the window until the closed-form tail bound
    //   int_X^inf (n d!/(x-A))^{p(d+1)} dx  is negligible.
    const int dl = lb.level;
    const double expo = p * (dl + 1) - 1.0; // > 0 since p > 1
    const double coef = std::pow(spf.order() * lb.factorial(dl), p);
    auto tail_beyond = [&](double X) { return 2.0 * coef / (expo * std::pow(X - A, expo)); };

    double X = X0;
    const double target_tail = 1e-13 * std::max(core.value, rough * 1e-3);
    if (tail_beyond(X) > target_tail) {
        // For p near 1 the slowly decaying tail would ask for an astronomically
        // wide window; cap it and let the tail bound flow into certified_error.
        const double needed =
            std::min(std::pow(2.0 * coef / (expo * target_tail), 1.0 / expo), 1e13);
        X = A + std::max(needed, X0 - A);
        num::QuadratureResult right =
            num::integrate_adaptive(h, X0, X, abs_tol, {}, opts.max_panels);
        num::QuadratureResult left =
            num::integrate_adaptive(h, -X, -X0, abs_tol, {}, opts.max_panels);
        core.value += right.value + left.value;
        core.error += right.error + left.error;
    }

    const double integral = core.value;
    const double integral_err = core.error + tail_beyond(X);

    NormResult out;
    out.value = std::pow(integral, 1.0 / p);
    out.witness = 0.0;
    const double deriv = out.value / (p * std::max(integral, 1e-300));
    out.certified_error = 2.0 * integral_err * deriv +
                          4.0 * std::numeric_limits<double>::epsilon() * (1.0 + out.value);
    return out;
}

inline double conjugate_exponent(double p) {
    if (std::isinf(p)) return 1.0; // convention from the functional definitions
    if (!(p > 1.0)) throw errors::unsupported_exponent("need p > 1");
    return p / (p - 1.0);
}

inline NormResult norm_for(const Spf& spf, double p, bool use_derivative,
                           const NormOptions& opts = {}) {
    return std::isinf(p) ? sup_norm_real(spf, use_derivative, opts)
                         : lp_norm_real(spf, p, use_derivative, opts);
}

// Y(rho) * ||rho||_p^q
inline FunctionalValue gorin_functional(const Spf& spf, double p, const NormOptions& opts = {}) {
    const double q = conjugate_exponent(p);
    FunctionalValue out;
    out.kind = FunctionalKind::gorin;
    out.p = p;
    out.value = spf.min_abs_imag() * std::pow(norm_for(spf, p, false, opts).value, q);
    return out;
}

// Y(rho) * ||rho'||_p^{q/(q+1)}; the exponent is 1/2 at p = infinity.
inline FunctionalValue gelfond_functional(const Spf& spf, double p, const NormOptions& opts = {}) {
    const double q = conjugate_exponent(p);
    FunctionalValue out;
    out.kind = FunctionalKind::gelfond;
    out.p = p;
    out.value = spf.min_abs_imag() *
                std::pow(norm_for(spf, p, true, opts).value, q / (q + 1.0));
    return out;
}

// max(||rho^+||_inf, ||rho^-||_inf) <= 2p sin^{-q}(pi/p) ||rho||_p^q.
// The constant here is explicit, so the check is a real pass/fail predicate.
inline BoundReport beta_p_check(const Spf& spf, double p, const NormOptions& opts = {}) {
    if (!(p > 1.0) || std::isinf(p))
        throw errors::unsupported_exponent("beta_p check needs finite p > 1");
    const double q = conjugate_exponent(p);
    const HalfPlaneSplit split = split_half_planes(spf);
    double lhs = 0.0;
    if (split.has_upper()) lhs = std::max(lhs, sup_norm_real(split.upper_spf(), false, opts).value);
    if (split.has_lower()) lhs = std::max(lhs, sup_norm_real(split.lower_spf(), false, opts).value);
    const double norm_p = lp_norm_real(spf, p, false, opts).value;
    BoundReport rep;
    rep.name = "beta_p";
    rep.lhs = lhs;
    rep.rhs_without_constant = 2.0 * p * std::pow(std::sin(M_PI / p), -q) * std::pow(norm_p, q);
    rep.set_ratio();
    rep.pass = lhs <= rep.rhs_without_constant;
    rep.context = {{"p", p}, {"q", q}, {"lp_norm", norm_p}, {"n", double(spf.order())}};
    return rep;
}

} // namespace spflab::norms
