#pragma once

#include "milburn/types.hpp"

namespace milburn {

/// The two conjugate decay factors entering every first-moment expectation:
///   plus  = exp(-gamma t (1 - e^{+i omega/gamma}))
///   minus = conj(plus)
/// |plus| = exp(-gamma t (1 - cos(omega/gamma))); the lost phase coherence is
/// what damps the oscillations.
struct DecayKernel {
    Complex plus;
    Complex minus;
};

/// Closed-form expectation split into its transient and its limit:
/// value = 2 Re(oscillating_part) + constant_part.
struct ClosedFormResult {
    double value;
    Complex oscillating_part;
    double constant_part;
};

/// First moments of the initial state, <a^+> and <a>. Physical states have
/// mean_a = conj(mean_adag).
struct FirstMoments {
    Complex mean_adag;
    Complex mean_a;
};

/// gamma (1 - cos(omega/gamma)), the envelope decay rate. Tends to omega^2/(2 gamma)
/// for gamma >> omega and vanishes as gamma -> infinity (unitary limit).
double envelope_rate(const OscillatorParams& params);

DecayKernel decay_kernel(const OscillatorParams& params, double t);

/// <a^+ + a>(t) for any initial first moments:
///   (mean_adag + beta) plus + (mean_a + beta) minus - 2 beta,  beta = lambda/omega.
/// The imaginary residue of the sum must stay below 1e-12 (it does for
/// conjugate moments); larger residues throw.
ClosedFormResult quad_general(const FirstMoments& moments, const OscillatorParams& params,
                              double t);

/// <a^+ + a>(t) for an initial coherent state |alpha>.
ClosedFormResult quad_coherent(Complex alpha, const OscillatorParams& params, double t);

/// <a^+ a>(t) for an initial coherent state. The photon number relaxes from
/// |alpha|^2 + 2 beta Re(alpha) + 2 beta^2 transients to a constant; only the
/// beta-coupled moment terms oscillate.
ClosedFormResult num_coherent(Complex alpha, const OscillatorParams& params, double t);

/// <a^+ + a>(t) for an initial squeezed coherent state S(z)|alpha>, via the
/// Bogoliubov moments <a> = mu alpha - nu alpha*.
ClosedFormResult quad_squeezed(Complex alpha, const SqueezeParameter& squeeze,
                               const OscillatorParams& params, double t);

/// <a^+ a>(t) for an initial squeezed coherent state.
ClosedFormResult num_squeezed(Complex alpha, const SqueezeParameter& squeeze,
                              const OscillatorParams& params, double t);

}  // namespace milburn
