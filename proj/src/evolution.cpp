#include "milburn/evolution.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "milburn/closed_form.hpp"
#include "milburn/fock.hpp"

namespace milburn {

namespace {

// e^{-i H t} from the eigensystem of H.
Matrix propagator(const SpectralDecomposition& spec, double t) {
    const Eigen::Index n = spec.eigenvalues.size();
    Vector phases(n);
    for (Eigen::Index j = 0; j < n; ++j) {
        phases[j] = std::exp(Complex(0.0, -spec.eigenvalues[j] * t));
    }
    return spec.eigenvectors * phases.asDiagonal() * spec.eigenvectors.adjoint();
}

void check_grid(const std::vector<double>& t_grid) {
    if (t_grid.empty()) {
        throw std::invalid_argument("time grid is empty");
    }
    for (std::size_t i = 0; i < t_grid.size(); ++i) {
        if (!(t_grid[i] >= 0.0) || !std::isfinite(t_grid[i])) {
            throw std::invalid_argument("time grid entries must be finite and >= 0");
        }
        if (i > 0 && !(t_grid[i] > t_grid[i - 1])) {
            throw std::invalid_argument("time grid must be strictly ascending");
        }
    }
}

double closed_form_value(const StateSpec& state, Observable o,
                         const OscillatorParams& params, double t) {
    switch (state.kind) {
        case StateSpec::Kind::Coherent:
            return o == Observable::Quadrature ? quad_coherent(state.alpha, params, t).value
                                               : num_coherent(state.alpha, params, t).value;
        case StateSpec::Kind::Squeezed:
            return o == Observable::Quadrature
                       ? quad_squeezed(state.alpha, state.squeeze, params, t).value
                       : num_squeezed(state.alpha, state.squeeze, params, t).value;
        case StateSpec::Kind::Fock:
            break;
    }
    throw std::logic_error("closed form requested for a state without one");
}

}  // namespace

std::string observable_name(Observable o) {
    switch (o) {
        case Observable::Quadrature: return "quadrature";
        case Observable::Number: return "number";
    }
    throw std::logic_error("unreachable observable");
}

std::string method_name(Method m) {
    switch (m) {
        case Method::ClosedForm: return "closed_form";
        case Method::DisplacedFrame: return "displaced_frame";
        case Method::Lindblad: return "lindblad";
        case Method::Series: return "series";
    }
    throw std::logic_error("unreachable method");
}

Observable observable_from_name(const std::string& name) {
    if (name == "quadrature") return Observable::Quadrature;
    if (name == "number") return Observable::Number;
    throw std::invalid_argument("unknown observable '" + name + "'");
}

Method method_from_name(const std::string& name) {
    if (name == "closed_form") return Method::ClosedForm;
    if (name == "displaced_frame") return Method::DisplacedFrame;
    if (name == "lindblad") return Method::Lindblad;
    if (name == "series") return Method::Series;
    throw UnknownMethod("unknown method '" + name + "'");
}

Matrix observable_matrix(Observable o, const TruncationPolicy& policy) {
    const Matrix a = make_annihilation(policy);
    switch (o) {
        case Observable::Quadrature: return Matrix(a.adjoint()) + a;
        case Observable::Number: return a.adjoint() * a;
    }
    throw std::logic_error("unreachable observable");
}

MilburnKernel build_kernel(const OscillatorParams& params, const TruncationPolicy& policy) {
    MilburnKernel kernel;
    kernel.params = params;
    kernel.policy = policy;
    kernel.spectral = hermitian_eig(make_hamiltonian(params, policy));
    kernel.unitary = propagator(kernel.spectral, 1.0 / params.gamma);
    return kernel;
}

SeriesPlan plan_series(const OscillatorParams& params, const TruncationPolicy& policy,
                       double t) {
    if (!(t >= 0.0) || !std::isfinite(t)) {
        throw std::invalid_argument("plan_series: t must be finite and >= 0");
    }
    const double mean = params.gamma * t;
    SeriesPlan plan;
    plan.t = t;
    if (mean == 0.0) {
        plan.k_max = 0;
        plan.weights = {1.0};
        plan.tail_mass = 0.0;
        return plan;
    }
    if (mean > static_cast<double>(policy.max_series_terms)) {
        // k_max can only exceed the mean; no point scanning
        std::ostringstream msg;
        msg << "plan_series: gamma*t = " << mean << " needs more than "
            << policy.max_series_terms << " terms";
        throw PlanOverflow(msg.str());
    }

    const bool log_space = mean > 700.0;  // below this e^{-mean} is a normal double
    const double log_mean = std::log(mean);
    plan.weights.reserve(static_cast<std::size_t>(mean + 10.0 * std::sqrt(mean) + 32.0));

    double w = log_space ? 0.0 : std::exp(-mean);
    double log_w = -mean;
    double sum = 0.0;
    double comp = 0.0;  // Kahan compensation; the tail test needs ~1e-15 sums
    long k = 0;
    for (;;) {
        const double wk = log_space ? std::exp(log_w) : w;
        plan.weights.push_back(wk);
        const double y = wk - comp;
        const double s = sum + y;
        comp = (s - sum) - y;
        sum = s;
        const double tail = 1.0 - sum;
        if (tail <= policy.poisson_tail_tol) {
            plan.k_max = k;
            plan.tail_mass = std::max(0.0, tail);
            return plan;
        }
        if (k >= policy.max_series_terms) {
            std::ostringstream msg;
            msg << "plan_series: tail still " << tail << " after " << k
                << " terms (ceiling " << policy.max_series_terms << ")";
            throw PlanOverflow(msg.str());
        }
        ++k;
        if (log_space) {
            log_w += log_mean - std::log(static_cast<double>(k));
        } else {
            w *= mean / static_cast<double>(k);
        }
    }
}

std::vector<double> evolve_series(const Vector& initial, const MilburnKernel& kernel,
                                  const SeriesPlan& plan,
                                  const std::vector<Matrix>& observables) {
    if (initial.size() != kernel.unitary.rows()) {
        throw DimensionMismatch("evolve_series: state does not match kernel dimension");
    }
    std::vector<double> acc(observables.size(), 0.0);
    Vector psi = initial;
    for (long k = 0; k <= plan.k_max; ++k) {
        const double w = plan.weights[static_cast<std::size_t>(k)];
        for (std::size_t i = 0; i < observables.size(); ++i) {
            acc[i] += w * expectation(psi, observables[i]).real();
        }
        if (k < plan.k_max) {
            psi = kernel.unitary * psi;
        }
    }
    return acc;
}

Matrix evolve_series_density(const Vector& initial, const MilburnKernel& kernel,
                             const SeriesPlan& plan) {
    if (initial.size() != kernel.unitary.rows()) {
        throw DimensionMismatch("evolve_series_density: state does not match kernel");
    }
    Matrix rho = Matrix::Zero(initial.size(), initial.size());
    Vector psi = initial;
    for (long k = 0; k <= plan.k_max; ++k) {
        rho.noalias() += plan.weights[static_cast<std::size_t>(k)] * (psi * psi.adjoint());
        if (k < plan.k_max) {
            psi = kernel.unitary * psi;
        }
    }
    return rho;
}

namespace {

// Shared displaced-frame walk; D and its adjoint are built once by the callers
// that loop over many times.
std::vector<double> displaced_frame_walk(const Vector& initial, const Matrix& disp,
                                         const Matrix& disp_adj,
                                         const OscillatorParams& params,
                                         const SeriesPlan& plan,
                                         const std::vector<Matrix>& observables) {
    const Eigen::Index n = initial.size();
    Vector step_phase(n);
    for (Eigen::Index j = 0; j < n; ++j) {
        step_phase[j] = std::exp(Complex(0.0, -params.omega * j / params.gamma));
    }
    std::vector<double> acc(observables.size(), 0.0);
    Vector phi = disp * initial;  // rotates level-wise under the kernel
    Vector psi(n);
    for (long k = 0; k <= plan.k_max; ++k) {
        psi.noalias() = disp_adj * phi;
        const double w = plan.weights[static_cast<std::size_t>(k)];
        for (std::size_t i = 0; i < observables.size(); ++i) {
            acc[i] += w * expectation(psi, observables[i]).real();
        }
        if (k < plan.k_max) {
            phi.array() *= step_phase.array();
        }
    }
    return acc;
}

}  // namespace

std::vector<double> evolve_series_displaced_frame(const Vector& initial,
                                                  const OscillatorParams& params,
                                                  const TruncationPolicy& policy,
                                                  const SeriesPlan& plan,
                                                  const std::vector<Matrix>& observables) {
    if (initial.size() != policy.fock_cutoff) {
        throw DimensionMismatch("evolve_series_displaced_frame: state does not match policy");
    }
    const Matrix disp = displacement_operator(params.displacement_ratio(), policy);
    const Matrix disp_adj = disp.adjoint();
    return displaced_frame_walk(initial, disp, disp_adj, params, plan, observables);
}

Matrix lindblad_rhs(const Matrix& rho, const Matrix& hamiltonian, double gamma) {
    if (rho.rows() != rho.cols() || hamiltonian.rows() != hamiltonian.cols() ||
        rho.rows() != hamiltonian.rows()) {
        throw DimensionMismatch("lindblad_rhs: dimension mismatch");
    }
    const Matrix c1 = hamiltonian * rho - rho * hamiltonian;
    const Matrix c2 = hamiltonian * c1 - c1 * hamiltonian;
    return Complex(0.0, -1.0) * c1 - c2 / (2.0 * gamma);
}

TimeSeries integrate_lindblad(const Matrix& initial, const OscillatorParams& params,
                              const TruncationPolicy& policy,
                              const std::vector<double>& t_grid,
                              const std::vector<Observable>& observables,
                              double* max_trace_drift) {
    check_grid(t_grid);
    if (t_grid.front() != 0.0) {
        throw std::invalid_argument("integrate_lindblad: grid must start at t = 0");
    }
    const int n = policy.fock_cutoff;
    if (initial.rows() != n || initial.cols() != n) {
        throw DimensionMismatch("integrate_lindblad: state does not match policy");
    }

    const Matrix h = make_hamiltonian(params, policy);
    const double h_norm = h.cwiseAbs().maxCoeff();
    const double step = std::min(0.01 / params.omega,
                                 0.1 * params.gamma / std::max(h_norm * h_norm, 1e-300));
    if (step < 1e-9) {
        std::ostringstream msg;
        msg << "integrate_lindblad: required step " << step
            << " below 1e-9; shrink the cutoff or raise gamma";
        throw StepSizeUnderflow(msg.str());
    }

    // Work in the eigenbasis of H, where both commutators act elementwise:
    // d rho_mn/dt = (-i d_mn - d_mn^2/(2 gamma)) rho_mn, d_mn = E_m - E_n.
    // RK4 here is step-for-step identical to RK4 on the matrix form because the
    // basis change is constant and linear.
    const SpectralDecomposition spec = hermitian_eig(h);
    const Matrix& v = spec.eigenvectors;
    Matrix rho = v.adjoint() * initial * v;
    Matrix rates(n, n);
    for (int row = 0; row < n; ++row) {
        for (int col = 0; col < n; ++col) {
            const double d = spec.eigenvalues[row] - spec.eigenvalues[col];
            rates(row, col) = Complex(-d * d / (2.0 * params.gamma), -d);
        }
    }
    std::vector<Matrix> obs_eig;
    obs_eig.reserve(observables.size());
    for (const Observable o : observables) {
        obs_eig.push_back(v.adjoint() * observable_matrix(o, policy) * v);
    }

    TimeSeries out;
    out.times = t_grid;
    std::vector<std::vector<double>*> track_ptrs;
    for (const Observable o : observables) {
        auto& track = out.tracks[observable_name(o) + ".lindblad"];
        track.reserve(t_grid.size());
        track_ptrs.push_back(&track);
    }

    double worst_drift = 0.0;
    Matrix k1(n, n), k2(n, n), k3(n, n), k4(n, n), tmp(n, n);
    auto record = [&]() {
        const double trace = rho.trace().real();
        const double drift = std::abs(trace - 1.0);
        worst_drift = std::max(worst_drift, drift);
        if (drift > 1e-9) {
            rho /= trace;
        }
        for (std::size_t i = 0; i < obs_eig.size(); ++i) {
            track_ptrs[i]->push_back(
                rho.transpose().cwiseProduct(obs_eig[i]).sum().real());
        }
    };

    record();
    for (std::size_t seg = 1; seg < t_grid.size(); ++seg) {
        const double dt = t_grid[seg] - t_grid[seg - 1];
        const long steps = std::max(1L, static_cast<long>(std::ceil(dt / step)));
        const double hh = dt / static_cast<double>(steps);
        for (long s = 0; s < steps; ++s) {
            k1.array() = rates.array() * rho.array();
            tmp.array() = rho.array() + (0.5 * hh) * k1.array();
            k2.array() = rates.array() * tmp.array();
            tmp.array() = rho.array() + (0.5 * hh) * k2.array();
            k3.array() = rates.array() * tmp.array();
            tmp.array() = rho.array() + hh * k3.array();
            k4.array() = rates.array() * tmp.array();
            rho.array() +=
                (hh / 6.0) * (k1.array() + 2.0 * k2.array() + 2.0 * k3.array() + k4.array());
        }
        record();
    }
    if (max_trace_drift != nullptr) {
        *max_trace_drift = worst_drift;
    }
    return out;
}

TimeSeries run_timeseries(const StateSpec& state, const OscillatorParams& params,
                          const TruncationPolicy& policy, const std::vector<double>& t_grid,
                          const std::vector<Observable>& observables,
                          const std::set<Method>& methods) {
    check_grid(t_grid);
    if (observables.empty()) {
        throw std::invalid_argument("run_timeseries: no observables requested");
    }
    if (methods.empty()) {
        throw std::invalid_argument("run_timeseries: no methods requested");
    }

    TimeSeries out;
    out.times = t_grid;

    std::vector<Matrix> obs;
    obs.reserve(observables.size());
    for (const Observable o : observables) {
        obs.push_back(observable_matrix(o, policy));
    }

    auto add_point = [&](Method m, const std::vector<double>& values) {
        for (std::size_t j = 0; j < observables.size(); ++j) {
            out.tracks[observable_name(observables[j]) + "." + method_name(m)]
                .push_back(values[j]);
        }
    };

    if (methods.count(Method::Series) != 0) {
        const Vector psi0 = make_state(state, policy);
        const MilburnKernel kernel = build_kernel(params, policy);
        for (const double t : t_grid) {
            const SeriesPlan plan = plan_series(params, policy, t);
            add_point(Method::Series, evolve_series(psi0, kernel, plan, obs));
        }
    }
    if (methods.count(Method::DisplacedFrame) != 0) {
        const Vector psi0 = make_state(state, policy);
        const Matrix disp = displacement_operator(params.displacement_ratio(), policy);
        const Matrix disp_adj = disp.adjoint();
        for (const double t : t_grid) {
            const SeriesPlan plan = plan_series(params, policy, t);
            add_point(Method::DisplacedFrame,
                      displaced_frame_walk(psi0, disp, disp_adj, params, plan, obs));
        }
    }
    if (methods.count(Method::Lindblad) != 0) {
        if (t_grid.front() != 0.0) {
            throw std::invalid_argument("run_timeseries: lindblad needs a grid starting at 0");
        }
        const Vector psi0 = make_state(state, policy);
        const Matrix rho0 = psi0 * psi0.adjoint();
        const TimeSeries sub = integrate_lindblad(rho0, params, policy, t_grid, observables);
        for (const auto& [key, track] : sub.tracks) {
            out.tracks[key] = track;
        }
    }
    if (methods.count(Method::ClosedForm) != 0 && state.kind != StateSpec::Kind::Fock) {
        for (const Observable o : observables) {
            auto& track = out.tracks[observable_name(o) + ".closed_form"];
            track.reserve(t_grid.size());
            for (const double t : t_grid) {
                track.push_back(closed_form_value(state, o, params, t));
            }
        }
    }
    return out;
}

}  // namespace milburn
