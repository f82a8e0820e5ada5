#include "milburn/fock.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

namespace milburn {

namespace {

// exp(G) for anti-Hermitian G, via the Hermitian matrix iG: if iG = V E V^+
// then exp(G) = V exp(-iE) V^+.
Matrix exp_antihermitian(const Matrix& gen) {
    const SpectralDecomposition eig = hermitian_eig(Complex(0.0, 1.0) * gen);
    const Eigen::Index n = gen.rows();
    Vector phases(n);
    for (Eigen::Index j = 0; j < n; ++j) {
        phases[j] = std::exp(Complex(0.0, -eig.eigenvalues[j]));
    }
    return eig.eigenvectors * phases.asDiagonal() * eig.eigenvectors.adjoint();
}

void enforce_edge(const Vector& state, const TruncationPolicy& policy, const char* what) {
    if (policy.edge_tolerance == 0.0) {
        return;  // check disabled
    }
    const double pop = edge_population(state);
    if (pop > policy.edge_tolerance) {
        std::ostringstream msg;
        msg << what << ": top-5-level population " << pop << " exceeds edge tolerance "
            << policy.edge_tolerance << " at fock_cutoff " << policy.fock_cutoff
            << "; raise the cutoff";
        throw TruncationError(msg.str());
    }
}

}  // namespace

OscillatorParams::OscillatorParams(double omega_, double lambda_, double gamma_)
    : omega(omega_), lambda(lambda_), gamma(gamma_) {
    validate();
}

void OscillatorParams::validate() const {
    if (!(std::isfinite(omega) && omega > 0.0)) {
        throw std::invalid_argument("omega must be finite and > 0");
    }
    if (!std::isfinite(lambda)) {
        throw std::invalid_argument("lambda must be finite");
    }
    if (!(std::isfinite(gamma) && gamma > 0.0)) {
        throw std::invalid_argument("gamma must be finite and > 0");
    }
}

TruncationPolicy::TruncationPolicy(int fock_cutoff_, double edge_tolerance_,
                                   double poisson_tail_tol_, long max_series_terms_)
    : fock_cutoff(fock_cutoff_),
      edge_tolerance(edge_tolerance_),
      poisson_tail_tol(poisson_tail_tol_),
      max_series_terms(max_series_terms_) {
    validate();
}

void TruncationPolicy::validate() const {
    if (fock_cutoff < 2) {
        throw std::invalid_argument("fock_cutoff must be >= 2");
    }
    if (!(std::isfinite(edge_tolerance) && edge_tolerance >= 0.0)) {
        throw std::invalid_argument("edge_tolerance must be finite and >= 0");
    }
    if (!(std::isfinite(poisson_tail_tol) && poisson_tail_tol > 0.0)) {
        throw std::invalid_argument("poisson_tail_tol must be finite and > 0");
    }
    if (max_series_terms < 1) {
        throw std::invalid_argument("max_series_terms must be >= 1");
    }
}

SqueezeParameter::SqueezeParameter(double r_, double theta_) : r(r_), theta(theta_) {
    if (!(std::isfinite(r) && r >= 0.0)) {
        throw std::invalid_argument("squeeze amplitude r must be finite and >= 0");
    }
    if (!std::isfinite(theta)) {
        throw std::invalid_argument("squeeze angle theta must be finite");
    }
    const double two_pi = 2.0 * std::numbers::pi;
    theta = std::fmod(theta, two_pi);
    if (theta < 0.0) {
        theta += two_pi;
    }
    mu = std::cosh(r);
    nu = std::polar(std::sinh(r), theta);
}

StateSpec StateSpec::coherent(Complex alpha) {
    StateSpec s;
    s.kind = Kind::Coherent;
    s.alpha = alpha;
    return s;
}

StateSpec StateSpec::squeezed(Complex alpha, const SqueezeParameter& z) {
    StateSpec s;
    s.kind = Kind::Squeezed;
    s.alpha = alpha;
    s.squeeze = z;
    return s;
}

StateSpec StateSpec::fock(int level) {
    StateSpec s;
    s.kind = Kind::Fock;
    s.fock_level = level;
    return s;
}

Matrix make_annihilation(const TruncationPolicy& policy) {
    const int n = policy.fock_cutoff;
    Matrix a = Matrix::Zero(n, n);
    for (int level = 1; level < n; ++level) {
        a(level - 1, level) = std::sqrt(static_cast<double>(level));
    }
    return a;
}

Matrix make_hamiltonian(const OscillatorParams& params, const TruncationPolicy& policy) {
    const int n = policy.fock_cutoff;
    Matrix h = Matrix::Zero(n, n);
    for (int level = 0; level < n; ++level) {
        h(level, level) = params.omega * level;
    }
    for (int level = 0; level + 1 < n; ++level) {
        const double coupling = params.lambda * std::sqrt(level + 1.0);
        h(level, level + 1) = coupling;
        h(level + 1, level) = coupling;
    }
    return h;
}

Vector coherent_state(Complex alpha, const TruncationPolicy& policy) {
    const int n = policy.fock_cutoff;
    Vector v(n);
    Complex c = std::exp(-0.5 * std::norm(alpha));
    for (int level = 0; level < n; ++level) {
        v[level] = c;
        c *= alpha / std::sqrt(level + 1.0);
    }
    const double norm = v.norm();
    if (!(norm > 0.0) || !std::isfinite(norm)) {
        throw TruncationError("coherent_state: amplitude pattern under/overflows; |alpha| too large");
    }
    v /= norm;
    enforce_edge(v, policy, "coherent_state");
    return v;
}

Vector fock_state(int level, const TruncationPolicy& policy) {
    if (level < 0 || level >= policy.fock_cutoff) {
        throw std::invalid_argument("fock level outside the truncated basis");
    }
    Vector v = Vector::Zero(policy.fock_cutoff);
    v[level] = 1.0;
    return v;
}

Matrix displacement_operator(Complex beta, const TruncationPolicy& policy) {
    const Matrix a = make_annihilation(policy);
    const Matrix gen = beta * a.adjoint() - std::conj(beta) * a;
    return exp_antihermitian(gen);
}

Matrix squeeze_operator(const SqueezeParameter& squeeze, const TruncationPolicy& policy) {
    const Matrix a = make_annihilation(policy);
    const Complex z = squeeze.z();
    const Matrix gen = 0.5 * (std::conj(z) * a * a - z * a.adjoint() * a.adjoint());
    return exp_antihermitian(gen);
}

Vector squeezed_state(Complex alpha, const SqueezeParameter& squeeze,
                      const TruncationPolicy& policy) {
    Vector v = squeeze_operator(squeeze, policy) * coherent_state(alpha, policy);
    v.normalize();
    enforce_edge(v, policy, "squeezed_state");
    return v;
}

Vector make_state(const StateSpec& state, const TruncationPolicy& policy) {
    switch (state.kind) {
        case StateSpec::Kind::Coherent:
            return coherent_state(state.alpha, policy);
        case StateSpec::Kind::Squeezed:
            return squeezed_state(state.alpha, state.squeeze, policy);
        case StateSpec::Kind::Fock:
            return fock_state(state.fock_level, policy);
    }
    throw std::logic_error("unreachable state kind");
}

Complex expectation(const Vector& state, const Matrix& obs) {
    if (obs.rows() != obs.cols() || obs.cols() != state.size()) {
        throw DimensionMismatch("expectation: observable does not match state dimension");
    }
    return state.dot(obs * state);
}

Complex expectation(const Matrix& rho, const Matrix& obs) {
    if (obs.rows() != obs.cols() || rho.rows() != rho.cols() || rho.rows() != obs.rows()) {
        throw DimensionMismatch("expectation: observable does not match density matrix");
    }
    // tr(rho obs) without forming the product matrix
    return rho.transpose().cwiseProduct(obs).sum();
}

double edge_population(const Vector& state) {
    const Eigen::Index n = state.size();
    const Eigen::Index take = std::min<Eigen::Index>(5, n);
    double pop = 0.0;
    for (Eigen::Index j = n - take; j < n; ++j) {
        pop += std::norm(state[j]);
    }
    return pop;
}

SpectralDecomposition hermitian_eig(const Matrix& h) {
    if (h.rows() != h.cols()) {
        throw DimensionMismatch("hermitian_eig: matrix is not square");
    }
    const double scale = std::max(1.0, h.cwiseAbs().maxCoeff());
    const double defect = (h - h.adjoint()).cwiseAbs().maxCoeff();
    if (defect > 1e-10 * scale) {
        std::ostringstream msg;
        msg << "hermitian_eig: anti-Hermitian part " << defect << " exceeds tolerance";
        throw NotHermitian(msg.str());
    }
    Eigen::SelfAdjointEigenSolver<Matrix> solver(h);
    if (solver.info() != Eigen::Success) {
        throw std::runtime_error("hermitian_eig: eigensolver failed to converge");
    }
    return {solver.eigenvalues(), solver.eigenvectors()};
}

}  // namespace milburn
