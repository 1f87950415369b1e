#pragma once

// Shared numerical machinery: a deterministic RNG (stable across platforms,
// unlike std:: distributions), a certified 1-D extremum search driven by
// interval derivative bounds, and adaptive Gauss-Legendre quadrature.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <queue>
#include <utility>
#include <vector>

#include "spflab/error.hpp"

namespace spflab::num {

// SplitMix64-seeded xoshiro256**; bit-stable everywhere.
class Rng {
public:
    explicit Rng(std::uint64_t seed) {
        std::uint64_t x = seed;
        for (auto& s : state_) {
            x += 0x9e3779b97f4a7c15ULL;
            std::uint64_t z = x;
            z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
            z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
            s = z ^ (z >> 31);
        }
    }

    std::uint64_t next_u64() {
        const std::uint64_t result = rotl(state_[1] * 5, 7) * 9;
        const std::uint64_t t = state_[1] << 17;
        state_[2] ^= state_[0];
        state_[3] ^= state_[1];
        state_[1] ^= state_[2];
        state_[0] ^= state_[3];
        state_[2] ^= t;
        state_[3] = rotl(state_[3], 45);
        return result;
    }

    // Uniform in [0, 1).
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    // Integer in [lo, hi] inclusive.
    int uniform_int(int lo, int hi) {
        const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
        return lo + static_cast<int>(next_u64() % span);
    }

    bool coin() { return (next_u64() & 1u) != 0; }

private:
    static std::uint64_t rotl(std::uint64_t v, int k) { return (v << k) | (v >> (64 - k)); }
    std::array<std::uint64_t, 4> state_{};
};

// Derive an independent stream for a worker from a base seed.
inline std::uint64_t substream_seed(std::uint64_t seed, std::uint64_t index) {
    std::uint64_t z = seed ^ (0x9e3779b97f4a7c15ULL * (index + 1));
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

struct CertifiedExtremum {
    double value = 0.0;          // best evaluated objective value (a true lower bound for max)
    double bound = 0.0;          // certified upper bound for max (lower bound for min)
    double witness = 0.0;        // abscissa achieving `value`
    bool converged = false;      // gap <= requested tolerance
};

// Certified maximum of g on [a, b].  `deriv_bound(lo, hi)` / `curv_bound(lo, hi)`
// must bound sup |g'| / sup |g''| on [lo, hi].  Branch and bound on panels with
// U(panel) = max(g(lo), g(hi)) + min(L w / 2, M w^2 / 8), midpoint refinement,
// until bound - value <= rel_tol * max(|value|, floor) or the budget runs out.
// The curvature term makes convergence near a smooth interior maximum
// logarithmic in the tolerance instead of ~ 1/sqrt(tol).
template <class F, class DB, class CB>
CertifiedExtremum maximize_certified(const F& g, const DB& deriv_bound, const CB& curv_bound,
                                     double a, double b, double rel_tol,
                                     double abs_floor = 1e-300, int max_panels = 400000,
                                     const std::vector<double>& forced_breaks = {}) {
    struct Panel {
        double lo, hi, glo, ghi, ub;
        bool operator<(const Panel& o) const { return ub < o.ub; }
    };

    auto make_panel = [&](double lo, double hi, double glo, double ghi) {
        const double w = hi - lo;
        const double slack = std::min(0.5 * deriv_bound(lo, hi) * w,
                                      0.125 * curv_bound(lo, hi) * w * w);
        Panel p{lo, hi, glo, ghi, std::max(glo, ghi) + slack};
        return p;
    };

    CertifiedExtremum best;
    best.witness = a;
    best.value = g(a);
    const double gb = g(b);
    if (gb > best.value) { best.value = gb; best.witness = b; }

    std::priority_queue<Panel> queue;
    std::vector<double> cuts{a};
    for (double c : forced_breaks)
        if (c > a && c < b) cuts.push_back(c);
    cuts.push_back(b);
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

    double gprev = g(cuts.front());
    for (std::size_t i = 1; i < cuts.size(); ++i) {
        const double gcur = g(cuts[i]);
        if (gcur > best.value) { best.value = gcur; best.witness = cuts[i]; }
        queue.push(make_panel(cuts[i - 1], cuts[i], gprev, gcur));
        gprev = gcur;
    }

    int panels = static_cast<int>(cuts.size());
    double global_ub = best.value;
    while (!queue.empty()) {
        const Panel top = queue.top();
        global_ub = top.ub;
        const double tol = rel_tol * std::max(std::abs(best.value), abs_floor);
        if (top.ub <= best.value + tol) { best.converged = true; break; }
        if (panels >= max_panels) break;
        queue.pop();
        const double mid = 0.5 * (top.lo + top.hi);
        if (!(mid > top.lo && mid < top.hi)) continue; // interval exhausted at fp resolution
        const double gmid = g(mid);
        if (gmid > best.value) { best.value = gmid; best.witness = mid; }
        queue.push(make_panel(top.lo, mid, top.glo, gmid));
        queue.push(make_panel(mid, top.hi, gmid, top.ghi));
        panels += 2;
    }
    best.bound = std::max(global_ub, best.value);
    return best;
}

template <class F, class DB, class CB>
CertifiedExtremum minimize_certified(const F& g, const DB& deriv_bound, const CB& curv_bound,
                                     double a, double b, double rel_tol,
                                     double abs_floor = 1e-300, int max_panels = 400000) {
    auto neg = [&](double x) { return -g(x); };
    CertifiedExtremum m =
        maximize_certified(neg, deriv_bound, curv_bound, a, b, rel_tol, abs_floor, max_panels);
    CertifiedExtremum out;
    out.value = -m.value;
    out.bound = -m.bound;
    out.witness = m.witness;
    out.converged = m.converged;
    return out;
}

// Gauss-Legendre nodes/weights on [-1, 1], computed once by Newton iteration
// on P_n (standard initial guesses; converges to machine precision).
inline const std::vector<std::pair<double, double>>& gauss_legendre_15() {
    static const std::vector<std::pair<double, double>> table = [] {
        constexpr int n = 15;
        std::vector<std::pair<double, double>> nw(n);
        for (int i = 0; i < n; ++i) {
            double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
            double dp = 0.0;
            for (int it = 0; it < 100; ++it) {
                double p0 = 1.0, p1 = x;
                for (int k = 2; k <= n; ++k) {
                    const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                    p0 = p1;
                    p1 = p2;
                }
                dp = n * (x * p1 - p0) / (x * x - 1.0);
                const double dx = p1 / dp;
                x -= dx;
                if (std::abs(dx) < 1e-16) break;
            }
            nw[i] = {x, 2.0 / ((1.0 - x * x) * dp * dp)};
        }
        return nw;
    }();
    return table;
}

template <class F>
double gauss15(const F& f, double a, double b) {
    const double c = 0.5 * (a + b), h = 0.5 * (b - a);
    double sum = 0.0;
    for (const auto& [x, w] : gauss_legendre_15()) sum += w * f(c + h * x);
    return h * sum;
}

struct QuadratureResult {
    double value = 0.0;
    double error = 0.0;   // accumulated local error estimates
    int panels = 0;
};

// Adaptive bisection with fixed-order Gauss panels.  A panel is accepted when
// the whole-vs-halves discrepancy is below the budgeted tolerance.
template <class F>
QuadratureResult integrate_adaptive(const F& f, double a, double b, double abs_tol,
                                    const std::vector<double>& forced_breaks = {},
                                    int max_panels = 200000) {
    struct Segment { double lo, hi; int depth; };
    std::vector<Segment> stack;

    std::vector<double> cuts{a};
    for (double c : forced_breaks)
        if (c > a && c < b) cuts.push_back(c);
    cuts.push_back(b);
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
    for (std::size_t i = cuts.size(); i-- > 1;) stack.push_back({cuts[i - 1], cuts[i], 0});

    QuadratureResult out;
    const double span = b - a;
    while (!stack.empty()) {
        const Segment seg = stack.back();
        stack.pop_back();
        const double whole = gauss15(f, seg.lo, seg.hi);
        const double mid = 0.5 * (seg.lo + seg.hi);
        const double halves = gauss15(f, seg.lo, mid) + gauss15(f, mid, seg.hi);
        const double err = std::abs(whole - halves);
        const double local_tol = abs_tol * std::max((seg.hi - seg.lo) / span, 1e-6);
        ++out.panels;
        if (err <= local_tol || seg.depth >= 48 || out.panels >= max_panels ||
            !(mid > seg.lo && mid < seg.hi)) {
            out.value += halves;
            out.error += err;
            continue;
        }
        stack.push_back({seg.lo, mid, seg.depth + 1});
        stack.push_back({mid, seg.hi, seg.depth + 1});
    }
    return out;
}

} // namespace spflab::num
