#include "milburn/closed_form.hpp"

#include <cmath>

namespace milburn {

namespace {

// Residue allowed before the combined plus/minus terms are declared non-real.
constexpr double kImagResidue = 1e-12;

double real_part_checked(Complex sum, const char* what) {
    if (std::abs(sum.imag()) > kImagResidue * std::max(1.0, std::abs(sum.real()))) {
        throw std::invalid_argument(std::string(what) +
                                    ": moments are not conjugate, expectation not real");
    }
    return sum.real();
}

// <a>(0) for S(z)|alpha>; <a^+>(0) is its conjugate.
Complex squeezed_mean_a(Complex alpha, const SqueezeParameter& squeeze) {
    return squeeze.mu * alpha - squeeze.nu * std::conj(alpha);
}

ClosedFormResult number_result(const FirstMoments& m, double constant,
                               const OscillatorParams& params, double t) {
    const DecayKernel k = decay_kernel(params, t);
    const double beta = params.displacement_ratio();
    const Complex plus_term = -beta * (m.mean_adag + beta) * k.plus;
    const Complex minus_term = -beta * (m.mean_a + beta) * k.minus;
    const double osc = real_part_checked(plus_term + minus_term, "number closed form");
    return {constant + osc, plus_term, constant};
}

}  // namespace

double envelope_rate(const OscillatorParams& params) {
    // gamma (1 - cos x) evaluated as 2 gamma sin^2(x/2), exact as x -> 0
    const double s = std::sin(0.5 * params.omega / params.gamma);
    return 2.0 * params.gamma * s * s;
}

DecayKernel decay_kernel(const OscillatorParams& params, double t) {
    if (!(t >= 0.0) || !std::isfinite(t)) {
        throw std::invalid_argument("decay_kernel: t must be finite and >= 0");
    }
    const double x = params.omega / params.gamma;
    // 1 - e^{ix} = 2 sin^2(x/2) - i sin x, free of cancellation for small x
    const double s = std::sin(0.5 * x);
    const Complex one_minus_eix(2.0 * s * s, -std::sin(x));
    DecayKernel k;
    k.plus = std::exp(-params.gamma * t * one_minus_eix);
    k.minus = std::conj(k.plus);
    return k;
}

ClosedFormResult quad_general(const FirstMoments& m, const OscillatorParams& params,
                              double t) {
    const DecayKernel k = decay_kernel(params, t);
    const double beta = params.displacement_ratio();
    const Complex plus_term = (m.mean_adag + beta) * k.plus;
    const Complex minus_term = (m.mean_a + beta) * k.minus;
    const Complex sum = plus_term + minus_term - 2.0 * beta;
    return {real_part_checked(sum, "quadrature closed form"), plus_term, -2.0 * beta};
}

ClosedFormResult quad_coherent(Complex alpha, const OscillatorParams& params, double t) {
    return quad_general({std::conj(alpha), alpha}, params, t);
}

ClosedFormResult num_coherent(Complex alpha, const OscillatorParams& params, double t) {
    const double beta = params.displacement_ratio();
    const double constant =
        std::norm(alpha) + 2.0 * beta * alpha.real() + 2.0 * beta * beta;
    return number_result({std::conj(alpha), alpha}, constant, params, t);
}

ClosedFormResult quad_squeezed(Complex alpha, const SqueezeParameter& squeeze,
                               const OscillatorParams& params, double t) {
    const Complex mean_a = squeezed_mean_a(alpha, squeeze);
    return quad_general({std::conj(mean_a), mean_a}, params, t);
}

ClosedFormResult num_squeezed(Complex alpha, const SqueezeParameter& squeeze,
                              const OscillatorParams& params, double t) {
    const double beta = params.displacement_ratio();
    const double mu = squeeze.mu;
    const Complex nu = squeeze.nu;
    const Complex mean_a = squeezed_mean_a(alpha, squeeze);
    // <a^+a>(0) = (mu^2 + |nu|^2)|alpha|^2 - 2 mu Re(nu alpha*^2) + |nu|^2; the
    // drive couples through the same first moments as the coherent case.
    const double constant = (mu * mu + std::norm(nu)) * std::norm(alpha) -
                            2.0 * mu * (nu * std::conj(alpha) * std::conj(alpha)).real() +
                            std::norm(nu) + 2.0 * beta * mean_a.real() + 2.0 * beta * beta;
    return number_result({std::conj(mean_a), mean_a}, constant, params, t);
}

}  // namespace milburn
