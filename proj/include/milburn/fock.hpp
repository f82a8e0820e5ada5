#pragma once

#include "milburn/types.hpp"

namespace milburn {

/// Annihilation operator on the truncated basis: a[n-1, n] = sqrt(n).
/// The commutator [a, a^+] equals the identity except for the (N-1, N-1)
/// entry, which is -(N-1); that defect is the price of truncation.
Matrix make_annihilation(const TruncationPolicy& policy);

/// H = omega a^+a + lambda (a + a^+), real symmetric tridiagonal.
/// True spectrum (before truncation): omega n - lambda^2/omega.
Matrix make_hamiltonian(const OscillatorParams& params, const TruncationPolicy& policy);

/// Normalized coherent state by the stable recurrence c_{n+1} = c_n alpha/sqrt(n+1).
/// Throws TruncationError when the top 5 levels hold more than
/// policy.edge_tolerance of the population; needs roughly |alpha|^2 + 10|alpha|
/// levels to fit.
Vector coherent_state(Complex alpha, const TruncationPolicy& policy);

/// Basis state |n>.
Vector fock_state(int level, const TruncationPolicy& policy);

/// D(beta) = exp(beta a^+ - beta* a), built by exponentiating the anti-Hermitian
/// generator through its eigensystem. Unitary up to truncation effects confined
/// to the highest levels.
Matrix displacement_operator(Complex beta, const TruncationPolicy& policy);

/// S(z) = exp((z* a a - z a^+a^+)/2) for z = r e^{i theta}. Satisfies the
/// Bogoliubov transform S^+ a S = mu a - nu a^+ away from the cutoff.
Matrix squeeze_operator(const SqueezeParameter& squeeze, const TruncationPolicy& policy);

/// S(z) D(alpha) |0> = S(z) |alpha>, edge-checked like coherent_state.
Vector squeezed_state(Complex alpha, const SqueezeParameter& squeeze,
                      const TruncationPolicy& policy);

/// Prepare the state described by a StateSpec.
Vector make_state(const StateSpec& state, const TruncationPolicy& policy);

/// <state|obs|state>. The caller asserts the imaginary part is negligible when
/// obs is Hermitian.
Complex expectation(const Vector& state, const Matrix& obs);

/// tr(rho obs) for a density matrix.
Complex expectation(const Matrix& rho, const Matrix& obs);

/// Population in the top 5 levels; the truncation health measure used by the
/// edge checks.
double edge_population(const Vector& state);

/// Eigensystem of a Hermitian matrix. Rejects inputs whose anti-Hermitian part
/// exceeds 1e-10 relative to the largest entry.
SpectralDecomposition hermitian_eig(const Matrix& h);

}  // namespace milburn
