#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "milburn/closed_form.hpp"
#include "milburn/fock.hpp"

using namespace milburn;

namespace {

constexpr double kPi = std::numbers::pi;
const OscillatorParams kFigureParams(4.0, 0.7, 10.0);

std::vector<double> linspace(double a, double b, int n) {
    std::vector<double> g(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        g[static_cast<std::size_t>(i)] = a + (b - a) * i / (n - 1);
    }
    return g;
}

}  // namespace

TEST_CASE("decay kernel: t = 0, conjugacy, modulus, rejection of negative t") {
    const DecayKernel at_zero = decay_kernel(kFigureParams, 0.0);
    CHECK(std::abs(at_zero.plus - Complex(1.0)) <= 1e-15);
    CHECK(std::abs(at_zero.minus - Complex(1.0)) <= 1e-15);

    std::mt19937 rng(21u);
    std::uniform_real_distribution<double> dist(0.1, 5.0);
    for (int trial = 0; trial < 30; ++trial) {
        const OscillatorParams p(dist(rng), dist(rng) - 2.5, 10.0 * dist(rng));
        const double t = dist(rng);
        const DecayKernel k = decay_kernel(p, t);
        CHECK(k.minus == std::conj(k.plus));  // exact by construction
        CHECK(std::abs(std::abs(k.plus) - std::exp(-envelope_rate(p) * t)) <=
              1e-13 * std::abs(k.plus) + 1e-300);
    }

    CHECK_THROWS_AS((void)decay_kernel(kFigureParams, -0.5), std::invalid_argument);
}

TEST_CASE("decay kernel agrees with the naive complex expression") {
    // independent route: exponent built from 1 - e^{ix} directly
    for (const double t : {0.3, 1.0, 2.7}) {
        const double x = kFigureParams.omega / kFigureParams.gamma;
        const Complex naive =
            std::exp(-kFigureParams.gamma * t * (1.0 - std::exp(Complex(0.0, x))));
        CHECK(std::abs(decay_kernel(kFigureParams, t).plus - naive) <= 1e-14);
    }
}

TEST_CASE("decay kernel at resonance omega/gamma = 2 pi does not decay") {
    // each kernel application is a full rotation, so coherence survives
    const OscillatorParams p(1.0, 0.0, 1.0 / (2.0 * kPi));
    for (const double t : {1.0, 10.0, 100.0}) {
        CHECK(std::abs(decay_kernel(p, t).plus - Complex(1.0)) <= 1e-12);
    }
}

TEST_CASE("envelope rate stays accurate deep in the unitary regime") {
    const OscillatorParams nearly_unitary(4.0, 0.7, 1e8);
    const double limit = nearly_unitary.omega * nearly_unitary.omega /
                         (2.0 * nearly_unitary.gamma);
    CHECK(std::abs(envelope_rate(nearly_unitary) - limit) <= 1e-8 * limit);
    CHECK(envelope_rate(kFigureParams) ==
          doctest::Approx(10.0 * (1.0 - std::cos(0.4))).epsilon(1e-12));
}

TEST_CASE("coherent quadrature: anchors at t = 0 and at the steady state") {
    for (const double lambda : {0.1, 0.7, 1.5}) {
        const OscillatorParams p(4.0, lambda, 10.0);
        CHECK(std::abs(quad_coherent(4.0, p, 0.0).value - 8.0) <= 1e-12);
        CHECK(std::abs(quad_coherent(4.0, p, 50.0).value - (-2.0 * lambda / 4.0)) <= 1e-8);
    }
}

TEST_CASE("coherent quadrature without drive reduces to the bare decay") {
    const OscillatorParams p(4.0, 0.0, 10.0);
    const Complex alpha(1.3, -0.4);
    for (const double t : linspace(0.0, 4.0, 41)) {
        const Complex minus = std::conj(decay_kernel(p, t).plus);
        const double oracle = 2.0 * (alpha * minus).real();
        CHECK(std::abs(quad_coherent(alpha, p, t).value - oracle) <= 1e-13);
    }
}

TEST_CASE("coherent photon number: anchors, steady value, driveless constancy") {
    CHECK(std::abs(num_coherent(4.0, kFigureParams, 0.0).value - 16.0) <= 1e-12);
    CHECK(std::abs(num_coherent(4.0, kFigureParams, 50.0).value - 17.46125) <= 1e-8);

    const OscillatorParams undriven(4.0, 0.0, 10.0);
    for (const double t : linspace(0.0, 10.0, 11)) {
        CHECK(num_coherent(4.0, undriven, t).value == 16.0);
    }
}

TEST_CASE("squeezed evaluators with r = 0 reduce to the coherent ones") {
    const SqueezeParameter none(0.0, 0.0);
    const Complex alpha(2.0, 1.1);  // complex alpha pins the kernel pairing
    for (const double t : linspace(0.0, 5.0, 101)) {
        CHECK(std::abs(quad_squeezed(alpha, none, kFigureParams, t).value -
                       quad_coherent(alpha, kFigureParams, t).value) <= 1e-13);
        CHECK(std::abs(num_squeezed(alpha, none, kFigureParams, t).value -
                       num_coherent(alpha, kFigureParams, t).value) <= 1e-13);
    }
}

TEST_CASE("squeezed evaluators at t = 0 match numeric expectations on the state") {
    // 128 levels: the anti-squeezed (theta = pi) state trips the edge check at 96
    const TruncationPolicy policy(128);
    const Matrix a = make_annihilation(policy);
    const Matrix quad = Matrix(a.adjoint()) + a;
    const Matrix num = a.adjoint() * a;
    for (const double theta : {0.0, kPi / 2.0, kPi}) {
        const SqueezeParameter z(0.3, theta);
        const Vector v = squeezed_state(4.0, z, policy);
        CHECK(std::abs(quad_squeezed(4.0, z, kFigureParams, 0.0).value -
                       expectation(v, quad).real()) <= 1e-7);
        CHECK(std::abs(num_squeezed(4.0, z, kFigureParams, 0.0).value -
                       expectation(v, num).real()) <= 1e-7);
    }
}

TEST_CASE("every evaluator settles to its constant part") {
    const double t_steady = 60.0 / envelope_rate(kFigureParams);
    const SqueezeParameter z(0.3, kPi / 2.0);

    const ClosedFormResult qc = quad_coherent(4.0, kFigureParams, t_steady);
    const ClosedFormResult nc = num_coherent(4.0, kFigureParams, t_steady);
    const ClosedFormResult qs = quad_squeezed(4.0, z, kFigureParams, t_steady);
    const ClosedFormResult ns = num_squeezed(4.0, z, kFigureParams, t_steady);
    for (const ClosedFormResult& r : {qc, nc, qs, ns}) {
        CHECK(std::abs(r.value - r.constant_part) <=
              1e-12 * std::max(1.0, std::abs(r.constant_part)));
    }
    CHECK(qc.constant_part == doctest::Approx(-0.35).epsilon(1e-14));
    CHECK(nc.constant_part == doctest::Approx(17.46125).epsilon(1e-14));
}

TEST_CASE("result decomposition: value = 2 Re(oscillating) + constant") {
    std::mt19937 rng(31u);
    std::uniform_real_distribution<double> dist(-2.0, 2.0);
    for (int trial = 0; trial < 50; ++trial) {
        const OscillatorParams p(0.5 + std::abs(dist(rng)), dist(rng),
                                 1.0 + std::abs(10.0 * dist(rng)));
        const Complex mean_a(dist(rng), dist(rng));
        const double t = std::abs(dist(rng));
        const ClosedFormResult r = quad_general({std::conj(mean_a), mean_a}, p, t);
        CHECK(std::abs(r.value - (2.0 * r.oscillating_part.real() + r.constant_part)) <=
              1e-13 * std::max(1.0, std::abs(r.value)));
    }
}

TEST_CASE("quad_general rejects non-conjugate moments") {
    const FirstMoments bogus{Complex(1.0, 1.0), Complex(1.0, 1.0)};
    CHECK_THROWS_AS((void)quad_general(bogus, kFigureParams, 0.1), std::invalid_argument);
}

TEST_CASE("oscillation peaks decay on the predicted envelope") {
    const double rate = envelope_rate(kFigureParams);
    const double amplitude = 2.0 * std::abs(Complex(4.0) + 0.175);
    const double constant = -2.0 * 0.175;

    const std::vector<double> grid = linspace(0.0, 6.0, 3001);
    std::vector<double> dev(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
        dev[i] = quad_coherent(4.0, kFigureParams, grid[i]).value - constant;
        // pointwise bound by the envelope
        CHECK(std::abs(dev[i]) <= amplitude * std::exp(-rate * grid[i]) + 1e-12);
    }

    std::vector<std::pair<double, double>> peaks;  // (t, |dev|) at interior maxima
    for (std::size_t i = 1; i + 1 < grid.size(); ++i) {
        if (std::abs(dev[i]) > std::abs(dev[i - 1]) &&
            std::abs(dev[i]) > std::abs(dev[i + 1])) {
            peaks.emplace_back(grid[i], std::abs(dev[i]));
        }
    }
    REQUIRE(peaks.size() >= 5);
    for (std::size_t i = 1; i < peaks.size(); ++i) {
        const double expected =
            std::exp(-rate * (peaks[i].first - peaks[i - 1].first));
        const double measured = peaks[i].second / peaks[i - 1].second;
        CHECK(std::abs(measured - expected) <= 0.01 * expected);
    }
}

TEST_CASE("enormous gamma recovers the undamped oscillation") {
    const OscillatorParams p(4.0, 0.7, 1e8);
    const double beta = p.displacement_ratio();
    for (const double t : linspace(0.0, 10.0, 101)) {
        const double oracle =
            2.0 * ((Complex(4.0) + beta) * std::exp(Complex(0.0, -p.omega * t))).real() -
            2.0 * beta;
        CHECK(std::abs(quad_coherent(4.0, p, t).value - oracle) <= 1e-5);
    }
}
