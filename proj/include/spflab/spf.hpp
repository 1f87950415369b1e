#pragma once

// Simple partial fractions (SPFs): finite sums  sum_k n_k / (z - xi_k)  with
// positive integer residues n_k and poles xi_k off the real axis.  The SPF of
// order n = sum n_k is the logarithmic derivative of prod_k (z - xi_k)^{n_k}.
//
// All types here are immutable values; all operations are pure.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include "spflab/error.hpp"

namespace spflab {

using Complex = std::complex<double>;

struct Pole {
    Complex location;
    int multiplicity = 1;

    friend bool operator==(const Pole&, const Pole&) = default;
};

// Deterministic pole order: by (re, im), exact coordinate comparison.
inline bool pole_location_less(const Complex& a, const Complex& b) {
    if (a.real() != b.real()) return a.real() < b.real();
    return a.imag() < b.imag();
}

namespace detail {

// Merge exactly coincident locations by adding multiplicities.  Used by the
// symmetrisation pipeline, where collisions are the polynomial-product rule;
// user-facing construction rejects duplicates instead.
inline std::vector<Pole> sort_and_merge(std::vector<Pole> poles) {
    std::sort(poles.begin(), poles.end(), [](const Pole& a, const Pole& b) {
        return pole_location_less(a.location, b.location);
    });
    std::vector<Pole> merged;
    merged.reserve(poles.size());
    for (const Pole& p : poles) {
        if (!merged.empty() && merged.back().location == p.location)
            merged.back().multiplicity += p.multiplicity;
        else
            merged.push_back(p);
    }
    return merged;
}

inline std::string complex_str(const Complex& z) {
    return "(" + std::to_string(z.real()) + ", " + std::to_string(z.imag()) + ")";
}

} // namespace detail

class Spf {
public:
    // Validating constructor; rejects empty input, poles on R and exact
    // duplicates (duplicates are never merged here: silently merging would
    // change the order n behind the caller's back).
    explicit Spf(std::vector<Pole> poles) {
        if (poles.empty())
            throw errors::empty_input("an SPF needs at least one pole");
        for (const Pole& p : poles) {
            if (!std::isfinite(p.location.real()) || !std::isfinite(p.location.imag()))
                throw errors::domain_error("pole location must be finite");
            if (p.location.imag() == 0.0)
                throw errors::real_pole("pole at " + detail::complex_str(p.location) +
                                        " lies on the real axis");
            if (p.multiplicity < 1)
                throw errors::domain_error("multiplicity must be >= 1");
        }
        std::sort(poles.begin(), poles.end(), [](const Pole& a, const Pole& b) {
            return pole_location_less(a.location, b.location);
        });
        for (std::size_t i = 1; i < poles.size(); ++i)
            if (poles[i].location == poles[i - 1].location)
                throw errors::duplicate_pole("pole " + detail::complex_str(poles[i].location) +
                                             " listed twice");
        poles_ = std::move(poles);
        order_ = 0;
        for (const Pole& p : poles_) order_ += p.multiplicity;
    }

    const std::vector<Pole>& poles() const noexcept { return poles_; }
    int order() const noexcept { return order_; }

    bool is_pole_location(const Complex& z) const {
        for (const Pole& p : poles_)
            if (p.location == z) return true;
        return false;
    }

    // rho(z) = sum n_k / (z - xi_k)
    Complex eval(const Complex& z) const {
        Complex sum = 0.0;
        for (const Pole& p : poles_) {
            const Complex d = z - p.location;
            if (d == Complex(0.0, 0.0))
                throw errors::eval_at_pole("evaluation at pole " +
                                           detail::complex_str(p.location));
            sum += static_cast<double>(p.multiplicity) / d;
        }
        return sum;
    }

    // rho'(z) = -sum n_k / (z - xi_k)^2
    Complex eval_derivative(const Complex& z) const {
        Complex sum = 0.0;
        for (const Pole& p : poles_) {
            const Complex d = z - p.location;
            if (d == Complex(0.0, 0.0))
                throw errors::eval_at_pole("evaluation at pole " +
                                           detail::complex_str(p.location));
            sum += static_cast<double>(p.multiplicity) / (d * d);
        }
        return -sum;
    }

    // rho''(z) = 2 sum n_k / (z - xi_k)^3
    Complex eval_second_derivative(const Complex& z) const {
        Complex sum = 0.0;
        for (const Pole& p : poles_) {
            const Complex d = z - p.location;
            if (d == Complex(0.0, 0.0))
                throw errors::eval_at_pole("evaluation at pole " +
                                           detail::complex_str(p.location));
            sum += static_cast<double>(p.multiplicity) / (d * d * d);
        }
        return 2.0 * sum;
    }

    // Y(rho) = min_k |Im xi_k|, the vertical distance of the pole set from R.
    double min_abs_imag() const {
        double y = std::abs(poles_.front().location.imag());
        for (const Pole& p : poles_) y = std::min(y, std::abs(p.location.imag()));
        return y;
    }

    double min_pole_distance(const Complex& z) const {
        double d = std::abs(z - poles_.front().location);
        for (const Pole& p : poles_) d = std::min(d, std::abs(z - p.location));
        return d;
    }

private:
    std::vector<Pole> poles_;
    int order_ = 0;
};

inline Spf make_spf(const std::vector<Pole>& poles) { return Spf(poles); }

// varrho(z) = c * rho(c z): poles move to xi_k / c, Y scales by 1/c, and the
// SPF form (integer residues) is preserved.
inline Spf rescale(const Spf& spf, double c) {
    if (!(c > 0.0) || !std::isfinite(c))
        throw errors::nonpositive_scale("scale must be a positive finite real, got " +
                                        std::to_string(c));
    std::vector<Pole> poles = spf.poles();
    for (Pole& p : poles) p.location /= c;
    return Spf(std::move(poles));
}

// Shift every pole by w; the result is z -> rho(z - w).
inline Spf translate(const Spf& spf, const Complex& w) {
    std::vector<Pole> poles = spf.poles();
    for (Pole& p : poles) {
        p.location += w;
        if (p.location.imag() == 0.0)
            throw errors::real_pole("translation puts a pole on the real axis at " +
                                    detail::complex_str(p.location));
    }
    return Spf(std::move(poles));
}

struct HalfPlaneSplit {
    std::vector<Pole> upper; // Im > 0
    std::vector<Pole> lower; // Im < 0

    bool has_upper() const noexcept { return !upper.empty(); }
    bool has_lower() const noexcept { return !lower.empty(); }
    Spf upper_spf() const {
        if (upper.empty()) throw errors::degenerate_input("no poles in the upper half-plane");
        return Spf(upper);
    }
    Spf lower_spf() const {
        if (lower.empty()) throw errors::degenerate_input("no poles in the lower half-plane");
        return Spf(lower);
    }
};

// rho = rho^+ + rho^-: partial sums over poles in C^+ and C^-.
inline HalfPlaneSplit split_half_planes(const Spf& spf) {
    HalfPlaneSplit out;
    for (const Pole& p : spf.poles())
        (p.location.imag() > 0.0 ? out.upper : out.lower).push_back(p);
    return out;
}

} // namespace spflab
