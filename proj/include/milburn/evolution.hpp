#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "milburn/types.hpp"

namespace milburn {

enum class Observable { Quadrature, Number };
enum class Method { ClosedForm, DisplacedFrame, Lindblad, Series };

std::string observable_name(Observable o);
std::string method_name(Method m);
Observable observable_from_name(const std::string& name);  // throws std::invalid_argument
Method method_from_name(const std::string& name);          // throws UnknownMethod

/// a^+ + a (Quadrature) or a^+ a (Number) on the truncated basis.
Matrix observable_matrix(Observable o, const TruncationPolicy& policy);

/// One application of the decoherence map's unitary kernel U = exp(-i H / gamma),
/// kept with the eigensystem it was built from.
struct MilburnKernel {
    Matrix unitary;
    SpectralDecomposition spectral;
    OscillatorParams params;
    TruncationPolicy policy;
};

MilburnKernel build_kernel(const OscillatorParams& params, const TruncationPolicy& policy);

/// Poisson weights w_k = e^{-gamma t} (gamma t)^k / k! for the series solution,
/// truncated once the remaining tail mass drops below poisson_tail_tol.
/// sum(weights) + tail_mass = 1.
struct SeriesPlan {
    double t = 0.0;
    long k_max = 0;                // last index kept; weights.size() == k_max + 1
    std::vector<double> weights;
    double tail_mass = 0.0;
};

/// Builds the weight table by the recurrence w_{k+1} = w_k gamma t/(k+1),
/// switching to log space above gamma t = 700 to dodge underflow of w_0.
/// Throws PlanOverflow when the tail cannot be beaten below tolerance within
/// policy.max_series_terms terms.
SeriesPlan plan_series(const OscillatorParams& params, const TruncationPolicy& policy,
                       double t);

/// Exact solution at one time: rho(t) = sum_k w_k |psi_k><psi_k| with
/// |psi_k> = U^k |psi_0>. Returns <obs> for each observable, accumulated one
/// Poisson term at a time (memory stays O(N) per observable).
std::vector<double> evolve_series(const Vector& initial, const MilburnKernel& kernel,
                                  const SeriesPlan& plan,
                                  const std::vector<Matrix>& observables);

/// Same series, but accumulates the full density matrix.
Matrix evolve_series_density(const Vector& initial, const MilburnKernel& kernel,
                             const SeriesPlan& plan);

/// Same expectations evaluated in the displaced frame, where the kernel is the
/// diagonal phase exp(-i n omega k/gamma) conjugated by D(lambda/omega). An
/// independent path used to cross-check evolve_series.
std::vector<double> evolve_series_displaced_frame(const Vector& initial,
                                                  const OscillatorParams& params,
                                                  const TruncationPolicy& policy,
                                                  const SeriesPlan& plan,
                                                  const std::vector<Matrix>& observables);

/// Second-order (short-memory) approximation of the decoherence map:
///   d rho/dt = -i [H, rho] - [H, [H, rho]] / (2 gamma).
/// Trace- and Hermiticity-preserving; accurate for gamma >> omega.
Matrix lindblad_rhs(const Matrix& rho, const Matrix& hamiltonian, double gamma);

/// Time series of expectation values on a shared grid. Track keys are
/// "<observable>.<method>", e.g. "quadrature.series".
struct TimeSeries {
    std::vector<double> times;
    std::map<std::string, std::vector<double>> tracks;
};

/// Fixed-step RK4 for lindblad_rhs, run in the eigenbasis of H where both
/// commutators act elementwise (identical numerics to the matrix form, since
/// the basis change is constant and linear). Step size
/// h = min(0.01/omega, 0.1 gamma/||H||_max^2); throws StepSizeUnderflow below
/// 1e-9. The trace is renormalized when it drifts beyond 1e-9; the largest
/// drift seen is reported through max_trace_drift when given.
TimeSeries integrate_lindblad(const Matrix& initial, const OscillatorParams& params,
                              const TruncationPolicy& policy,
                              const std::vector<double>& t_grid,
                              const std::vector<Observable>& observables,
                              double* max_trace_drift = nullptr);

/// Runs every requested method over the grid and collects the tracks.
/// closed_form applies to coherent and squeezed states only and is silently
/// omitted for Fock states; lindblad requires the grid to start at 0.
TimeSeries run_timeseries(const StateSpec& state, const OscillatorParams& params,
                          const TruncationPolicy& policy, const std::vector<double>& t_grid,
                          const std::vector<Observable>& observables,
                          const std::set<Method>& methods);

}  // namespace milburn
