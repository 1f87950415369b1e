#pragma once

// Test-only fixtures and random generators.  Deterministic via spflab::num::Rng.

#include <vector>

#include "spflab/numerics.hpp"
#include "spflab/spf.hpp"

namespace testgen {

using spflab::Complex;
using spflab::Pole;
using spflab::Spf;

inline Spf f1() { return Spf({{Complex(0.0, 1.0), 1}}); }

inline Spf f2() { return Spf({{Complex(0.0, 1.0), 1}, {Complex(0.0, -1.0), 1}}); }

// Random SPF with poles in both half-planes, order <= max_order.
inline Spf random_spf(spflab::num::Rng& rng, int max_order, double ymin = 0.2,
                      double ymax = 3.0) {
    while (true) {
        const int m = rng.uniform_int(1, 4);
        std::vector<Pole> poles;
        int order = 0;
        for (int k = 0; k < m; ++k) {
            const double x = rng.uniform(-5.0, 5.0);
            double y = rng.uniform(ymin, ymax);
            if (rng.coin()) y = -y;
            const int mult = rng.uniform_int(1, 3);
            poles.push_back({Complex(x, y), mult});
            order += mult;
        }
        if (order > max_order) continue;
        bool distinct = true;
        for (std::size_t i = 0; i < poles.size() && distinct; ++i)
            for (std::size_t j = i + 1; j < poles.size(); ++j)
                if (poles[i].location == poles[j].location) { distinct = false; break; }
        if (distinct) return Spf(poles);
    }
}

// Random SPF whose pole set is closed under conjugation with equal residues.
inline Spf random_conjugate_symmetric_spf(spflab::num::Rng& rng, int max_pairs = 3) {
    const int m = rng.uniform_int(1, max_pairs);
    std::vector<Pole> poles;
    for (int k = 0; k < m; ++k) {
        const double x = rng.uniform(-4.0, 4.0) + 1e-3 * k; // avoid exact collisions
        const double y = rng.uniform(0.3, 2.5);
        const int mult = rng.uniform_int(1, 3);
        poles.push_back({Complex(x, y), mult});
        poles.push_back({Complex(x, -y), mult});
    }
    return Spf(poles);
}

// Random valid symmetric configuration: mirror pairs off the axis plus
// even-residue poles on it.  eta2 is automatically even.
inline std::vector<Pole> random_symmetric_upper_poles(spflab::num::Rng& rng,
                                                      int max_eta2 = 16) {
    while (true) {
        std::vector<Pole> poles;
        int eta2 = 0;
        const int pairs = rng.uniform_int(0, 2);
        for (int k = 0; k < pairs; ++k) {
            const double x = rng.uniform(0.4, 4.0) + 0.01 * k;
            const double y = rng.uniform(0.3, 2.5);
            const int mult = rng.uniform_int(1, 2);
            poles.push_back({Complex(x, y), mult});
            poles.push_back({Complex(-x, y), mult});
            eta2 += 2 * mult;
        }
        const int axis = rng.uniform_int(pairs == 0 ? 1 : 0, 2);
        for (int k = 0; k < axis; ++k) {
            const double y = rng.uniform(0.3, 2.5) + 0.7 * k;
            const int mult = 2 * rng.uniform_int(1, 2);
            poles.push_back({Complex(0.0, y), mult});
            eta2 += mult;
        }
        if (eta2 == 0 || eta2 > max_eta2) continue;
        bool distinct = true;
        for (std::size_t i = 0; i < poles.size() && distinct; ++i)
            for (std::size_t j = i + 1; j < poles.size(); ++j)
                if (poles[i].location == poles[j].location) { distinct = false; break; }
        if (distinct) return poles;
    }
}

} // namespace testgen
