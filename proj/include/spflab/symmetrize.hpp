#pragma once

// Reduction of an arbitrary SPF to a 4-fold-symmetric configuration with
// controlled sup-norm growth and a tracked pole:
//
//   s1(z)     = rho(z) + conj(rho(conj z))         poles closed under conj
//   sigma0(z) = s1(z) - conj(s1(-conj z))          also closed under z -> -conj z
//   rho_l(z)  = sigma(z - i y1) + conj(sigma(conj z - i y1))
//               where sigma = upper-half part of sigma0 (poles move away
//               from R by y1)
//   R(z)      = rho_l(z/4) / 4
//
// R has order 4n, poles symmetric in both axes, sup-norm at most that of the
// input, and an imaginary-axis pole at 8 i y1 with residue >= 2 n1.

#include <cmath>
#include <limits>
#include <optional>
#include <vector>

#include "spflab/blaschke.hpp"
#include "spflab/error.hpp"
#include "spflab/norms.hpp"
#include "spflab/spf.hpp"

namespace spflab::symmetrize {

// s1 = rho + conj(rho(conj .)): mirror every pole across R, residues add on
// exact collision.  Result has order 2n and is real-valued on R.
inline Spf symmetrize_real(const Spf& spf) {
    std::vector<Pole> poles = spf.poles();
    for (const Pole& p : spf.poles()) poles.push_back({std::conj(p.location), p.multiplicity});
    return Spf(detail::sort_and_merge(std::move(poles)));
}

// sigma0 = s1 - conj(s1(-conj .)): mirror every pole across the imaginary
// axis; residues are positive on both sides, so nothing can cancel, but the
// guard stays in case an invariant is ever broken upstream.
inline Spf antisymmetrize_imag(const Spf& spf) {
    std::vector<Pole> poles = spf.poles();
    for (const Pole& p : spf.poles())
        poles.push_back({Complex(-p.location.real(), p.location.imag()), p.multiplicity});
    poles = detail::sort_and_merge(std::move(poles));
    if (poles.empty())
        throw errors::degenerate_cancellation("antisymmetrisation annihilated all poles");
    return Spf(std::move(poles));
}

struct PipelineStages {
    std::optional<Spf> s1; // absent when the pipeline was entered at sigma0
    Spf sigma0;
    Spf sigma;   // upper-half part of sigma0
    Spf lifted;  // rho_l, poles moved away from R by y1
    Spf scaled;  // R = rho_l(./4)/4
};

struct PipelineOutput {
    blaschke::SymmetricConfiguration result; // upper poles of R
    Complex tracked_pole;                    // 8 i y1, exact
    int tracked_residue = 0;                 // >= 2 n1
    double y1 = 0.0;                         // height of the tracked input pole
    // max(||sigma0||, ||rho_l||) / ||input||; <= 4 by the subharmonic maximum
    // argument.  NaN when the input norm was not supplied/measured.
    double norm_factor = std::numeric_limits<double>::quiet_NaN();
    PipelineStages stages;
};

// sigma0 must carry an imaginary-axis pole at i y1 (the tracked pole after
// the two symmetrisations).  input_sup_norm, when finite, is used for the
// norm_factor bookkeeping.
inline PipelineOutput lift_and_scale(const Spf& sigma0, double y1,
                                     double input_sup_norm =
                                         std::numeric_limits<double>::quiet_NaN(),
                                     const norms::NormOptions& opts = {}) {
    if (!(y1 > 0.0)) throw errors::domain_error("lift_and_scale needs y1 > 0");
    bool tracked_found = false;
    for (const Pole& p : sigma0.poles())
        if (p.location == Complex(0.0, y1)) tracked_found = true;
    if (!tracked_found)
        throw errors::domain_error("sigma0 has no pole at i*y1; not a pipeline input");

    const HalfPlaneSplit split = split_half_planes(sigma0);
    if (!split.has_upper())
        throw errors::degenerate_input("sigma0 has no poles in the upper half-plane");
    const Spf sigma = split.upper_spf();
    const Spf shifted_up = translate(sigma, Complex(0.0, y1));
    const Spf lifted = symmetrize_real(shifted_up);
    const Spf scaled = rescale(lifted, 0.25);

    std::vector<Pole> upper;
    for (const Pole& p : scaled.poles())
        if (p.location.imag() > 0.0) upper.push_back(p);

    PipelineOutput out{blaschke::SymmetricConfiguration(std::move(upper)),
                       Complex(0.0, 8.0 * y1),
                       0,
                       y1,
                       std::numeric_limits<double>::quiet_NaN(),
                       {std::nullopt, sigma0, sigma, lifted, scaled}};

    for (const Pole& p : out.result.upper_poles())
        if (p.location == out.tracked_pole) out.tracked_residue = p.multiplicity;
    if (out.tracked_residue == 0)
        throw errors::domain_error("tracked pole lost by the pipeline");

    if (std::isfinite(input_sup_norm) && input_sup_norm > 0.0) {
        const double s0 = norms::sup_norm_real(sigma0, false, opts).value;
        const double sl = norms::sup_norm_real(lifted, false, opts).value;
        out.norm_factor = std::max(s0, sl) / input_sup_norm;
    }
    return out;
}

// Full reduction.  target_pole_index refers to the deterministic (re, im)
// pole order of the input.  A target pole off the imaginary axis is first
// moved onto it by a horizontal translation, which changes no real-line norm
// and no Y.
inline PipelineOutput run_pipeline(const Spf& input, std::size_t target_pole_index,
                                   bool measure_norms = true,
                                   const norms::NormOptions& opts = {}) {
    if (target_pole_index >= input.poles().size())
        throw errors::index_out_of_range("pole index " + std::to_string(target_pole_index) +
                                         " out of range");
    const Pole target = input.poles()[target_pole_index];
    Spf working = input;
    if (target.location.real() != 0.0)
        working = translate(input, Complex(-target.location.real(), 0.0));
    const double y1 = std::abs(target.location.imag());
    const int n1 = target.multiplicity;

    const Spf s1 = symmetrize_real(working);
    const Spf sigma0 = antisymmetrize_imag(s1);

    double input_sup = std::numeric_limits<double>::quiet_NaN();
    if (measure_norms) input_sup = norms::sup_norm_real(working, false, opts).value;

    PipelineOutput out = lift_and_scale(sigma0, y1, input_sup, opts);
    out.stages.s1 = s1;

    if (out.tracked_residue < 2 * n1)
        throw errors::domain_error("tracked residue below 2*n1; pipeline invariant broken");
    if (out.result.eta2() * 2 != 4 * input.order())
        throw errors::domain_error("pipeline output order is not 4n");
    return out;
}

} // namespace spflab::symmetrize
