#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "milburn/fock.hpp"

using namespace milburn;

namespace {

constexpr double kPi = std::numbers::pi;

double max_abs(const Matrix& m) { return m.cwiseAbs().maxCoeff(); }

Matrix random_hermitian(int n, unsigned seed) {
    std::mt19937 rng(seed);
    std::normal_distribution<double> dist(0.0, 1.0);
    Matrix m(n, n);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            m(i, j) = Complex(dist(rng), dist(rng));
        }
    }
    return Matrix((m + m.adjoint()) / 2.0);
}

}  // namespace

TEST_CASE("annihilation matrix holds sqrt(n) on the superdiagonal") {
    const Matrix a = make_annihilation(TruncationPolicy(4));
    CHECK(a.rows() == 4);
    CHECK(a(0, 1).real() == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(a(1, 2).real() == doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));
    CHECK(a(2, 3).real() == doctest::Approx(std::sqrt(3.0)).epsilon(1e-15));
    double off_mass = 0.0;
    for (int i = 0; i < 4; ++i) {
        for (int j = 0; j < 4; ++j) {
            if (j != i + 1) {
                off_mass += std::abs(a(i, j));
            }
        }
    }
    CHECK(off_mass == 0.0);
}

TEST_CASE("ladder commutator is the identity except the truncation corner") {
    const int n = 16;
    const Matrix a = make_annihilation(TruncationPolicy(n));
    const Matrix comm = a * a.adjoint() - a.adjoint() * a;
    Matrix expected = Matrix::Identity(n, n);
    expected(n - 1, n - 1) = -(n - 1.0);  // the truncated ladder cannot do better
    CHECK(max_abs(comm - expected) <= 1e-13);
}

TEST_CASE("hamiltonian is the expected tridiagonal") {
    const OscillatorParams params(4.0, 0.7, 10.0);
    const Matrix h = make_hamiltonian(params, TruncationPolicy(3));
    CHECK(h(0, 0) == Complex(0.0));
    CHECK(h(1, 1) == Complex(4.0));
    CHECK(h(2, 2) == Complex(8.0));
    CHECK(h(0, 1) == Complex(0.7));
    CHECK(h(1, 0) == Complex(0.7));
    CHECK(std::abs(h(1, 2) - Complex(0.7 * std::sqrt(2.0))) <= 1e-15);
    CHECK(h(0, 2) == Complex(0.0));
    CHECK(max_abs(h - h.adjoint()) == 0.0);
}

TEST_CASE("hamiltonian spectrum matches omega n - lambda^2/omega away from the cutoff") {
    const OscillatorParams params(4.0, 0.7, 10.0);
    const SpectralDecomposition eig =
        hermitian_eig(make_hamiltonian(params, TruncationPolicy(64)));
    const double shift = params.lambda * params.lambda / params.omega;
    for (int n = 0; n <= 50; ++n) {
        CHECK(std::abs(eig.eigenvalues[n] - (4.0 * n - shift)) <= 1e-8);
        if (n > 0) {
            CHECK(std::abs(eig.eigenvalues[n] - eig.eigenvalues[n - 1] - 4.0) <= 1e-8);
        }
    }
}

TEST_CASE("coherent state: vacuum, normalization, ladder eigenvalue") {
    const TruncationPolicy policy(64);

    const Vector vac = coherent_state(0.0, policy);
    CHECK(std::abs(vac[0] - Complex(1.0)) <= 1e-15);
    CHECK(vac.tail(63).norm() == 0.0);

    const Matrix a = make_annihilation(policy);
    for (const Complex alpha : {Complex(4.0, 0.0), Complex(2.8, 2.8), Complex(0.0, -4.0)}) {
        const Vector v = coherent_state(alpha, policy);
        CHECK(std::abs(v.norm() - 1.0) <= 1e-12);
        CHECK(std::abs(expectation(v, a) - alpha) <= 1e-10);
        // eigenstate of a: exact off the last row, |alpha c_{N-1}| on it
        const Vector residual = a * v - alpha * v;
        CHECK(residual.head(63).cwiseAbs().maxCoeff() <= 1e-12);
        CHECK(std::abs(residual[63]) <= 1e-8);
    }

    const Vector v4 = coherent_state(4.0, policy);
    CHECK(std::abs(expectation(v4, Matrix(a.adjoint() * a)).real() - 16.0) <= 1e-9);
}

TEST_CASE("coherent state rejects a cutoff that clips the photon distribution") {
    CHECK_THROWS_AS((void)coherent_state(4.0, TruncationPolicy(18)), TruncationError);
    // edge_tolerance = 0 disables the check entirely
    CHECK_NOTHROW((void)coherent_state(4.0, TruncationPolicy(18, 0.0)));
}

TEST_CASE("fock basis states") {
    const TruncationPolicy policy(8);
    const Vector v = fock_state(3, policy);
    CHECK(v[3] == Complex(1.0));
    CHECK(std::abs(v.norm() - 1.0) == 0.0);
    CHECK_THROWS_AS((void)fock_state(8, policy), std::invalid_argument);
    CHECK_THROWS_AS((void)fock_state(-1, policy), std::invalid_argument);
}

TEST_CASE("displacement operator: identity limit, unitarity, vacuum displacement") {
    const TruncationPolicy policy(64);
    const int n = policy.fock_cutoff;

    CHECK(max_abs(displacement_operator(0.0, policy) - Matrix::Identity(n, n)) <= 1e-12);

    const Matrix d = displacement_operator(Complex(1.0, 1.0), policy);
    CHECK(max_abs(d.adjoint() * d - Matrix::Identity(n, n)) <= 1e-9);

    // D(beta)|0> is the coherent state |beta>
    const Matrix d_small = displacement_operator(0.175, policy);
    const Vector displaced = d_small * fock_state(0, policy);
    const Vector reference = coherent_state(0.175, policy);
    for (int level = 0; level <= 50; ++level) {
        CHECK(std::abs(displaced[level] - reference[level]) <= 1e-9);
    }
}

TEST_CASE("displacement conjugation shifts the quadrature by 2 Re(beta)") {
    const TruncationPolicy policy(64);
    const int n = policy.fock_cutoff;
    const Matrix a = make_annihilation(policy);
    const Matrix quad = Matrix(a.adjoint()) + a;
    for (const Complex beta : {Complex(0.175, 0.0), Complex(0.1, 0.2)}) {
        const Matrix d = displacement_operator(beta, policy);
        const Matrix lhs = d.adjoint() * quad * d;
        const Matrix rhs = quad + 2.0 * beta.real() * Matrix::Identity(n, n);
        // truncation corrupts a band whose width scales with beta sqrt(n);
        // 16 rows is comfortably past it for these beta
        const int keep = n - 16;
        CHECK(max_abs(lhs.topLeftCorner(keep, keep) - rhs.topLeftCorner(keep, keep)) <=
              1e-11);
    }
}

TEST_CASE("squeeze parameter: wrap, Bogoliubov coefficients, hyperbolic identity") {
    const SqueezeParameter z(0.3, kPi / 2.0);
    CHECK(z.mu == doctest::Approx(std::cosh(0.3)).epsilon(1e-15));
    CHECK(std::abs(z.nu - Complex(0.0, std::sinh(0.3))) <= 1e-15);

    CHECK(SqueezeParameter(0.3, 2.0 * kPi + 0.5).theta == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(SqueezeParameter(0.3, -0.5).theta ==
          doctest::Approx(2.0 * kPi - 0.5).epsilon(1e-12));

    std::mt19937 rng(7u);
    std::uniform_real_distribution<double> r_dist(0.0, 2.0);
    std::uniform_real_distribution<double> th_dist(0.0, 2.0 * kPi);
    for (int trial = 0; trial < 50; ++trial) {
        const SqueezeParameter s(r_dist(rng), th_dist(rng));
        CHECK(std::abs(s.mu * s.mu - std::norm(s.nu) - 1.0) <= 1e-12);
    }

    CHECK_THROWS_AS(SqueezeParameter(-0.1, 0.0), std::invalid_argument);
}

TEST_CASE("squeeze operator: identity limit, unitarity, Bogoliubov transform") {
    const TruncationPolicy policy(64);
    const int n = policy.fock_cutoff;

    CHECK(max_abs(squeeze_operator(SqueezeParameter(0.0, 0.0), policy) -
                  Matrix::Identity(n, n)) <= 1e-12);

    const Matrix s1 = squeeze_operator(SqueezeParameter(1.0, 1.1), policy);
    CHECK(max_abs(s1.adjoint() * s1 - Matrix::Identity(n, n)) <= 1e-9);

    // squeezing smears level m over a band of width ~ m sinh(2r), so only the
    // bottom third of a 96-level space transforms cleanly at r = 0.3
    const TruncationPolicy wide(96);
    const Matrix a = make_annihilation(wide);
    for (const double theta : {0.0, kPi / 2.0}) {
        const SqueezeParameter z(0.3, theta);
        const Matrix s = squeeze_operator(z, wide);
        const Matrix lhs = s.adjoint() * a * s;
        const Matrix rhs = z.mu * a - z.nu * Matrix(a.adjoint());
        const int keep = 32;
        CHECK(max_abs(lhs.topLeftCorner(keep, keep) - rhs.topLeftCorner(keep, keep)) <=
              1e-10);
    }
}

TEST_CASE("squeezed state moments match the Bogoliubov-transformed values") {
    const TruncationPolicy policy(96);
    const Matrix a = make_annihilation(policy);
    const Matrix num = a.adjoint() * a;
    const Matrix quad = Matrix(a.adjoint()) + a;

    // r = 0 degenerates to the coherent state
    const Vector plain = squeezed_state(4.0, SqueezeParameter(0.0, 0.0), policy);
    CHECK((plain - coherent_state(4.0, policy)).cwiseAbs().maxCoeff() <= 1e-12);

    const Vector v = squeezed_state(4.0, SqueezeParameter(0.3, 0.0), policy);
    CHECK(std::abs(v.norm() - 1.0) <= 1e-12);
    CHECK(std::abs(expectation(v, quad).real() - 8.0 * std::exp(-0.3)) <= 1e-9);
    const double num_expected = 16.0 * std::exp(-0.6) + std::sinh(0.3) * std::sinh(0.3);
    CHECK(std::abs(expectation(v, num).real() - num_expected) <= 1e-9);
}

TEST_CASE("expectation checks dimensions and handles density matrices") {
    const TruncationPolicy policy(24);
    const Vector v = coherent_state(1.0, policy);
    const Matrix a = make_annihilation(policy);
    const Matrix num = a.adjoint() * a;

    const Matrix rho = v * v.adjoint();
    CHECK(std::abs(expectation(rho, num) - expectation(v, num)) <= 1e-12);

    const Matrix wrong = Matrix::Identity(8, 8);
    CHECK_THROWS_AS((void)expectation(v, wrong), DimensionMismatch);
    CHECK_THROWS_AS((void)expectation(rho, wrong), DimensionMismatch);
}

TEST_CASE("edge population sums the top five level weights") {
    Vector v(6);
    v << 0.1, 0.2, 0.3, 0.4, 0.5, 0.6;
    double expected = 0.0;
    for (const double x : {0.2, 0.3, 0.4, 0.5, 0.6}) {
        expected += x * x;
    }
    CHECK(edge_population(v) == doctest::Approx(expected).epsilon(1e-15));

    Vector small(3);
    small << 0.5, 0.5, 0.5;
    CHECK(edge_population(small) == doctest::Approx(0.75).epsilon(1e-15));
}

TEST_CASE("hermitian_eig: exact diagonal case and rejection of non-Hermitian input") {
    Matrix diag = Matrix::Zero(3, 3);
    diag(0, 0) = 3.0;
    diag(1, 1) = 1.0;
    diag(2, 2) = 2.0;
    const SpectralDecomposition eig = hermitian_eig(diag);
    CHECK(eig.eigenvalues[0] == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(eig.eigenvalues[1] == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(eig.eigenvalues[2] == doctest::Approx(3.0).epsilon(1e-14));

    CHECK_THROWS_AS((void)hermitian_eig(make_annihilation(TruncationPolicy(8))),
                    NotHermitian);
    CHECK_THROWS_AS((void)hermitian_eig(Matrix::Zero(3, 2)), DimensionMismatch);
}

TEST_CASE("hermitian_eig reconstructs random Hermitian matrices") {
    for (const unsigned seed : {11u, 12u, 13u}) {
        const Matrix h = random_hermitian(32, seed);
        const SpectralDecomposition eig = hermitian_eig(h);
        const double scale = std::max(1.0, max_abs(h));

        const Matrix rebuilt = eig.eigenvectors *
                               eig.eigenvalues.cast<Complex>().asDiagonal() *
                               eig.eigenvectors.adjoint();
        CHECK(max_abs(rebuilt - h) <= 1e-10 * scale);
        CHECK(max_abs(eig.eigenvectors.adjoint() * eig.eigenvectors -
                      Matrix::Identity(32, 32)) <= 1e-10);
        for (int i = 1; i < 32; ++i) {
            CHECK(eig.eigenvalues[i] >= eig.eigenvalues[i - 1]);
        }
    }
}

TEST_CASE("parameter validation rejects unphysical inputs") {
    CHECK_THROWS_AS(OscillatorParams(0.0, 0.7, 10.0), std::invalid_argument);
    CHECK_THROWS_AS(OscillatorParams(-4.0, 0.7, 10.0), std::invalid_argument);
    CHECK_THROWS_AS(OscillatorParams(4.0, 0.7, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(OscillatorParams(4.0, 0.7, -1.0), std::invalid_argument);
    CHECK_NOTHROW(OscillatorParams(4.0, -0.7, 10.0));

    CHECK_THROWS_AS(TruncationPolicy(1), std::invalid_argument);
    CHECK_THROWS_AS(TruncationPolicy(64, -1e-10), std::invalid_argument);
    CHECK_THROWS_AS(TruncationPolicy(64, 1e-10, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(TruncationPolicy(64, 1e-10, 1e-12, 0), std::invalid_argument);
    CHECK_NOTHROW(TruncationPolicy(2, 0.0));
}
