#pragma once

// Machinery for 4-fold-symmetric pole configurations in the upper half-plane:
// the Blaschke product B(z) = prod ((z - z_k)/(z - conj z_k))^{n_k}, its phase
// density mu on R, the unwrapped phase Theta(x) = 2 int_0^x mu (computed in
// closed form as a sum of arctangents), the roots of B(x) = -1 obtained by
// inverting the globally monotone Theta, and the partial-fraction
// decomposition of (1 - B)/(1 + B) over those roots.

#include <cmath>
#include <complex>
#include <utility>
#include <vector>

#include "spflab/error.hpp"
#include "spflab/numerics.hpp"
#include "spflab/report.hpp"
#include "spflab/spf.hpp"

namespace spflab::blaschke {

class SymmetricConfiguration {
public:
    // Validates: all poles strictly in C^+; poles off the imaginary axis come
    // in mirror pairs (z, -conj z) with equal residues; imaginary-axis poles
    // have even residues.  These force B(iy) >= 0 and an even total 2*eta.
    explicit SymmetricConfiguration(std::vector<Pole> upper_poles) {
        if (upper_poles.empty())
            throw errors::invalid_configuration("configuration needs at least one pole");
        for (const Pole& p : upper_poles) {
            if (!(p.location.imag() > 0.0))
                throw errors::invalid_configuration(
                    "all poles must lie strictly in the upper half-plane");
            if (p.multiplicity < 1)
                throw errors::invalid_configuration("residues must be positive");
        }
        std::sort(upper_poles.begin(), upper_poles.end(), [](const Pole& a, const Pole& b) {
            return pole_location_less(a.location, b.location);
        });
        for (std::size_t i = 1; i < upper_poles.size(); ++i)
            if (upper_poles[i].location == upper_poles[i - 1].location)
                throw errors::invalid_configuration("duplicate pole in configuration");

        eta2_ = 0;
        for (const Pole& p : upper_poles) {
            eta2_ += p.multiplicity;
            if (p.location.real() == 0.0) {
                if (p.multiplicity % 2 != 0)
                    throw errors::invalid_configuration(
                        "imaginary-axis poles must have even residues");
            } else {
                const Complex mirror(-p.location.real(), p.location.imag());
                bool found = false;
                for (const Pole& q : upper_poles)
                    if (q.location == mirror && q.multiplicity == p.multiplicity) {
                        found = true;
                        break;
                    }
                if (!found)
                    throw errors::invalid_configuration(
                        "pole set is not symmetric with respect to the imaginary axis");
            }
        }
        if (eta2_ % 2 != 0)
            throw errors::invalid_configuration("total residue count must be even");
        poles_ = std::move(upper_poles);
    }

    const std::vector<Pole>& upper_poles() const noexcept { return poles_; }
    int eta2() const noexcept { return eta2_; }
    int eta() const noexcept { return eta2_ / 2; }

    // The full conjugate-symmetric SPF (order 2 * eta2) this configuration
    // represents.
    Spf full_spf() const {
        std::vector<Pole> all = poles_;
        for (const Pole& p : poles_)
            all.push_back({std::conj(p.location), p.multiplicity});
        return Spf(std::move(all));
    }

    Spf upper_spf() const { return Spf(poles_); }

private:
    std::vector<Pole> poles_;
    int eta2_ = 0;
};

// B(z); |B| = 1 on R, 0 <= B(iy) < 1 for y > 0, B(0) = 1.
inline Complex blaschke_eval(const SymmetricConfiguration& conf, const Complex& z) {
    for (const Pole& p : conf.upper_poles())
        if (z == std::conj(p.location))
            throw errors::eval_at_conjugate_pole("denominator zero at " +
                                                 detail::complex_str(z));
    if (conf.eta2() <= 32) {
        Complex prod = 1.0;
        for (const Pole& p : conf.upper_poles()) {
            const Complex factor = (z - p.location) / (z - std::conj(p.location));
            for (int j = 0; j < p.multiplicity; ++j) prod *= factor;
        }
        return prod;
    }
    // exp of sum of logs; per-factor branch choices cancel under exp.
    Complex logsum = 0.0;
    for (const Pole& p : conf.upper_poles()) {
        if (z == p.location) return 0.0;
        logsum += static_cast<double>(p.multiplicity) *
                  (std::log(z - p.location) - std::log(z - std::conj(p.location)));
    }
    return std::exp(logsum);
}

// mu(x) = (1/2i) B'(x)/B(x) = sum n_k y_k / ((x - x_k)^2 + y_k^2) > 0, even.
inline double mu(const SymmetricConfiguration& conf, double x) {
    double sum = 0.0;
    for (const Pole& p : conf.upper_poles()) {
        const double u = x - p.location.real();
        const double y = p.location.imag();
        sum += p.multiplicity * y / (u * u + y * y);
    }
    return sum;
}

// Unwrapped phase Theta(x) = 2 int_0^x mu(t) dt
//                          = 2 sum n_k [arctan((x-x_k)/y_k) + arctan(x_k/y_k)],
// strictly increasing, odd, with total increment 2 pi eta2 over R.
inline double phase(const SymmetricConfiguration& conf, double x) {
    double sum = 0.0;
    for (const Pole& p : conf.upper_poles()) {
        const double xk = p.location.real(), yk = p.location.imag();
        sum += p.multiplicity * (std::atan((x - xk) / yk) + std::atan(xk / yk));
    }
    return 2.0 * sum;
}

struct RootSet {
    std::vector<double> roots;                 // t_1 < ... < t_{2 eta}, antisymmetric
    std::size_t eta() const noexcept { return roots.size() / 2; }
    double positive_root(std::size_t k) const { // r_k = t_{eta + k}, 1-based
        if (k < 1 || k > eta())
            throw errors::index_out_of_range("root index " + std::to_string(k) +
                                             " not in 1.." + std::to_string(eta()));
        return roots[eta() + k - 1];
    }
};

namespace detail {

// Solve Theta(t) = level (level > 0) with bisection-guarded Newton,
// Theta' = 2 mu.
inline double solve_phase_level(const SymmetricConfiguration& conf, double level) {
    double lo = 0.0;
    double hi = 1.0;
    for (const Pole& p : conf.upper_poles())
        hi = std::max(hi, std::abs(p.location.real()) + p.location.imag());
    while (phase(conf, hi) <= level) {
        hi *= 2.0;
        if (hi > 1e300)
            throw errors::convergence_failure("phase level bracket expansion diverged");
    }
    double t = 0.5 * (lo + hi);
    // |B(t)+1| ~ |Theta(t) - level|, so the phase must be hit well inside the
    // 1e-10 root residual gate; the Theta evaluation noise floor is ~1e-13.
    const double tol = 2.5e-11;
    double best_t = t, best_diff = std::numeric_limits<double>::infinity();
    for (int it = 0; it < 300; ++it) {
        const double diff = phase(conf, t) - level;
        if (std::abs(diff) < best_diff) { best_diff = std::abs(diff); best_t = t; }
        if (std::abs(diff) <= tol) return t;
        if (diff < 0.0) lo = t; else hi = t;
        const double step = diff / (2.0 * mu(conf, t));
        double tn = t - step;
        if (!(tn > lo && tn < hi)) tn = 0.5 * (lo + hi);
        if (tn == t) break; // fp resolution reached
        t = tn;
    }
    if (best_diff <= tol) return best_t;
    throw errors::convergence_failure("phase level " + std::to_string(level) +
                                      " not reached (residual " +
                                      std::to_string(best_diff) + ")");
}

} // namespace detail

// The 2*eta real solutions of B(t) = -1, i.e. Theta(t) odd multiple of pi.
// Positive roots are solved; negatives mirror them, so antisymmetry is exact.
inline RootSet minus_one_roots(const SymmetricConfiguration& conf) {
    const int eta = conf.eta();
    std::vector<double> positive(eta);
    for (int k = 1; k <= eta; ++k)
        positive[k - 1] = detail::solve_phase_level(conf, (2.0 * k - 1.0) * M_PI);

    for (double r : positive) {
        if (r == 0.0) // impossible while B(0) = 1 holds; guards invariant bugs
            throw errors::convergence_failure("root collapsed to the origin");
        const Complex b = blaschke_eval(conf, Complex(r, 0.0));
        if (std::abs(b + 1.0) > 1e-10)
            throw errors::convergence_failure("root residual |B(t)+1| above tolerance");
    }

    RootSet out;
    out.roots.resize(2 * eta);
    for (int k = 0; k < eta; ++k) {
        out.roots[eta + k] = positive[k];
        out.roots[eta - 1 - k] = -positive[k];
    }
    return out;
}

// (1 - B(z))/(1 + B(z)) = i sum_k (1/mu(t_k)) / (z - t_k) at the sample points.
inline BoundReport decomposition_check(const SymmetricConfiguration& conf,
                                       const std::vector<Complex>& sample_points) {
    const RootSet rs = minus_one_roots(conf);
    std::vector<double> mu_at_root(rs.roots.size());
    for (std::size_t i = 0; i < rs.roots.size(); ++i) mu_at_root[i] = mu(conf, rs.roots[i]);

    double max_resid = 0.0, lhs_at_worst = 0.0, max_lhs = 0.0;
    bool pass = true;
    for (const Complex& z : sample_points) {
        const Complex b = blaschke_eval(conf, z);
        const Complex lhs = (1.0 - b) / (1.0 + b);
        Complex rhs = 0.0;
        for (std::size_t i = 0; i < rs.roots.size(); ++i)
            rhs += 1.0 / (mu_at_root[i] * (z - rs.roots[i]));
        rhs *= Complex(0.0, 1.0);
        const double resid = std::abs(lhs - rhs);
        max_lhs = std::max(max_lhs, std::abs(lhs));
        if (resid > max_resid) { max_resid = resid; lhs_at_worst = std::abs(lhs); }
        if (resid > 1e-9 * (1.0 + std::abs(lhs))) pass = false;
    }

    BoundReport rep;
    rep.name = "decomposition";
    rep.lhs = max_resid;
    rep.rhs_without_constant = 1e-9 * (1.0 + lhs_at_worst);
    rep.set_ratio();
    rep.pass = pass;
    rep.context = {{"eta2", double(conf.eta2())},
                   {"samples", double(sample_points.size())},
                   {"max_lhs_magnitude", max_lhs}};
    return rep;
}

// Theta(r_k)/2 = int_0^{r_k} mu = pi (2k - 1)/2.
inline BoundReport phase_integral_check(const SymmetricConfiguration& conf, int k) {
    if (k < 1 || k > conf.eta())
        throw errors::index_out_of_range("k = " + std::to_string(k) + " exceeds eta = " +
                                         std::to_string(conf.eta()));
    const RootSet rs = minus_one_roots(conf);
    const double rk = rs.positive_root(k);
    BoundReport rep;
    rep.name = "phase_integral";
    rep.lhs = phase(conf, rk) / 2.0;
    rep.rhs_without_constant = M_PI * (2.0 * k - 1.0) / 2.0;
    rep.set_ratio();
    rep.pass = std::abs(rep.lhs - rep.rhs_without_constant) <= 1e-9;
    rep.context = {{"k", double(k)}, {"r_k", rk}};
    return rep;
}

namespace detail {

inline double mu_deriv_bound(const SymmetricConfiguration& conf, double lo, double hi) {
    double sum = 0.0;
    for (const Pole& p : conf.upper_poles()) {
        const double xk = p.location.real(), yk = p.location.imag();
        const double h = xk < lo ? lo - xk : (xk > hi ? xk - hi : 0.0);
        const double d2 = h * h + yk * yk;
        const double panel = 2.0 * yk * std::max(std::abs(lo - xk), std::abs(hi - xk)) /
                             (d2 * d2);
        const double global = 9.0 / (8.0 * std::sqrt(3.0) * yk * yk); // max of |d/dx| term
        sum += p.multiplicity * std::min(panel, global);
    }
    return sum;
}

inline double mu_curv_bound(const SymmetricConfiguration& conf, double lo, double hi) {
    double sum = 0.0;
    for (const Pole& p : conf.upper_poles()) {
        const double xk = p.location.real(), yk = p.location.imag();
        const double h = xk < lo ? lo - xk : (xk > hi ? xk - hi : 0.0);
        const double d2 = h * h + yk * yk;
        sum += p.multiplicity * 6.0 * yk / (d2 * d2); // |mu''| <= 6 y / dist^4 per pole
    }
    return sum;
}

} // namespace detail

// Certified (min, max) of mu on [0, r].
inline std::pair<double, double> mu_range(const SymmetricConfiguration& conf, double r,
                                          double rel_tol = 1e-9) {
    if (!(r > 0.0)) throw errors::domain_error("mu_range needs r > 0");
    auto f = [&](double x) { return mu(conf, x); };
    auto db = [&](double lo, double hi) { return detail::mu_deriv_bound(conf, lo, hi); };
    auto cb = [&](double lo, double hi) { return detail::mu_curv_bound(conf, lo, hi); };
    const num::CertifiedExtremum mx = num::maximize_certified(f, db, cb, 0.0, r, rel_tol);
    const num::CertifiedExtremum mn = num::minimize_certified(f, db, cb, 0.0, r, rel_tol);
    return {mn.value, mx.value};
}

// Certified sup of mu over R (mu is even, decays like 1/x^2).
inline double mu_sup(const SymmetricConfiguration& conf, double rel_tol = 1e-9) {
    double A = 0.0, weight = 0.0, low = mu(conf, 0.0);
    for (const Pole& p : conf.upper_poles()) {
        A = std::max(A, std::abs(p.location.real()));
        weight += p.multiplicity * p.location.imag();
        low = std::max(low, mu(conf, p.location.real()));
    }
    const double X = A + std::sqrt(weight / (0.25 * low)) + 1.0;
    auto f = [&](double x) { return mu(conf, x); };
    auto db = [&](double lo, double hi) { return detail::mu_deriv_bound(conf, lo, hi); };
    auto cb = [&](double lo, double hi) { return detail::mu_curv_bound(conf, lo, hi); };
    std::vector<double> breaks;
    for (const Pole& p : conf.upper_poles()) breaks.push_back(p.location.real());
    const num::CertifiedExtremum mx =
        num::maximize_certified(f, db, cb, 0.0, X, rel_tol, 1e-300, 400000, breaks);
    return mx.value;
}

// Checks |mu(x1) - mu(x2)| <= 3 ln(1 + r/(2 y1)) for the given pairs.
// A predicate, not a theorem: arbitrary configurations may fail it.
inline BoundReport mu_continuity_check(const SymmetricConfiguration& conf, double y1,
                                       const std::vector<std::pair<double, double>>& pairs) {
    if (!(y1 > 0.0)) throw errors::domain_error("mu_continuity_check needs y1 > 0");
    double worst_excess = -std::numeric_limits<double>::infinity();
    double worst_lhs = 0.0, worst_rhs = 0.0, worst_r = 0.0;
    for (const auto& [x1, x2] : pairs) {
        const double r = std::abs(x1 - x2);
        const double lhs = std::abs(mu(conf, x1) - mu(conf, x2));
        const double rhs = 3.0 * std::log1p(r / (2.0 * y1));
        const double excess = lhs - rhs;
        if (excess > worst_excess) {
            worst_excess = excess;
            worst_lhs = lhs;
            worst_rhs = rhs;
            worst_r = r;
        }
    }
    BoundReport rep;
    rep.name = "mu_continuity";
    rep.lhs = worst_lhs;
    rep.rhs_without_constant = worst_rhs;
    rep.set_ratio();
    rep.pass = worst_excess <= 1e-12 * (1.0 + std::abs(worst_lhs));
    rep.context = {{"y1", y1}, {"pairs", double(pairs.size())}, {"worst_r", worst_r},
                   {"worst_excess", worst_excess}};
    return rep;
}

} // namespace spflab::blaschke
