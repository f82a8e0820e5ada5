#pragma once

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace milburn {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

// Thrown when a prepared state carries too much population near the Fock cutoff.
struct TruncationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct DimensionMismatch : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct NotHermitian : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Thrown when a Poisson series plan would need more terms than the configured ceiling.
struct PlanOverflow : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct StepSizeUnderflow : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct UnknownMethod : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Physical constants of the displaced oscillator: H = omega a^+a + lambda (a + a^+),
/// decohering at rate gamma. gamma -> infinity is ordinary data (use a large finite
/// sentinel such as 1e12) and recovers unitary dynamics.
struct OscillatorParams {
    double omega = 1.0;   // oscillator frequency, > 0
    double lambda = 0.0;  // displacement drive amplitude, any finite real
    double gamma = 1.0;   // intrinsic decoherence rate, > 0

    OscillatorParams() = default;
    OscillatorParams(double omega_, double lambda_, double gamma_);

    // lambda/omega, the shift that diagonalizes H in the displaced frame.
    double displacement_ratio() const { return lambda / omega; }

    void validate() const;
};

/// Knobs controlling every numerical error source: the Fock cutoff, the allowed
/// population in the top 5 levels of a prepared state (0 disables the check),
/// the Poisson tail mass dropped from series evolution, and a ceiling on series length.
struct TruncationPolicy {
    int fock_cutoff = 96;
    double edge_tolerance = 1e-10;
    double poisson_tail_tol = 1e-12;
    long max_series_terms = 1000000;

    TruncationPolicy() = default;
    explicit TruncationPolicy(int fock_cutoff_, double edge_tolerance_ = 1e-10,
                              double poisson_tail_tol_ = 1e-12,
                              long max_series_terms_ = 1000000);

    void validate() const;
};

/// Squeeze parameter z = r e^{i theta} with the derived Bogoliubov coefficients
/// mu = cosh r, nu = e^{i theta} sinh r (so mu^2 - |nu|^2 = 1).
struct SqueezeParameter {
    double r = 0.0;
    double theta = 0.0;  // wrapped into [0, 2*pi)
    double mu = 1.0;
    Complex nu = 0.0;

    SqueezeParameter() = default;
    SqueezeParameter(double r_, double theta_);

    Complex z() const { return std::polar(r, theta); }
};

/// Eigensystem of a Hermitian matrix; eigenvalues ascending, eigenvectors the
/// columns of a unitary matrix.
struct SpectralDecomposition {
    RealVector eigenvalues;
    Matrix eigenvectors;
};

/// Tagged description of an initial state; carries enough information for both
/// numerical preparation and closed-form evaluation.
struct StateSpec {
    enum class Kind { Coherent, Squeezed, Fock };

    Kind kind = Kind::Coherent;
    Complex alpha = 0.0;        // coherent / squeezed
    SqueezeParameter squeeze;   // squeezed only
    int fock_level = 0;         // fock only

    static StateSpec coherent(Complex alpha);
    static StateSpec squeezed(Complex alpha, const SqueezeParameter& z);
    static StateSpec fock(int level);
};

}  // namespace milburn
