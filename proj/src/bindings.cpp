#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "milburn/closed_form.hpp"
#include "milburn/evolution.hpp"
#include "milburn/fock.hpp"
#include "milburn/harness.hpp"

namespace py = pybind11;
using namespace milburn;

PYBIND11_MODULE(_core, m) {
    m.doc() = "Intrinsic-decoherence dynamics of a driven harmonic oscillator";

    py::register_exception<TruncationError>(m, "TruncationError", PyExc_RuntimeError);
    py::register_exception<DimensionMismatch>(m, "DimensionMismatch", PyExc_ValueError);
    py::register_exception<NotHermitian>(m, "NotHermitian", PyExc_ValueError);
    py::register_exception<PlanOverflow>(m, "PlanOverflow", PyExc_RuntimeError);
    py::register_exception<StepSizeUnderflow>(m, "StepSizeUnderflow", PyExc_RuntimeError);
    py::register_exception<UnknownMethod>(m, "UnknownMethod", PyExc_ValueError);
    py::register_exception<ParseError>(m, "ParseError", PyExc_ValueError);
    py::register_exception<ValidationError>(m, "ValidationError", PyExc_ValueError);
    py::register_exception<IoError>(m, "IoError", PyExc_OSError);

    py::class_<OscillatorParams>(m, "OscillatorParams")
        .def(py::init<double, double, double>(), py::arg("omega"), py::arg("lambda_"),
             py::arg("gamma"))
        .def_readonly("omega", &OscillatorParams::omega)
        .def_readonly("lambda_", &OscillatorParams::lambda)
        .def_readonly("gamma", &OscillatorParams::gamma)
        .def("displacement_ratio", &OscillatorParams::displacement_ratio);

    py::class_<TruncationPolicy>(m, "TruncationPolicy")
        .def(py::init<int, double, double, long>(), py::arg("fock_cutoff") = 96,
             py::arg("edge_tolerance") = 1e-10, py::arg("poisson_tail_tol") = 1e-12,
             py::arg("max_series_terms") = 1000000)
        .def_readonly("fock_cutoff", &TruncationPolicy::fock_cutoff)
        .def_readonly("edge_tolerance", &TruncationPolicy::edge_tolerance)
        .def_readonly("poisson_tail_tol", &TruncationPolicy::poisson_tail_tol)
        .def_readonly("max_series_terms", &TruncationPolicy::max_series_terms);

    py::class_<SqueezeParameter>(m, "SqueezeParameter")
        .def(py::init<double, double>(), py::arg("r"), py::arg("theta") = 0.0)
        .def_readonly("r", &SqueezeParameter::r)
        .def_readonly("theta", &SqueezeParameter::theta)
        .def_readonly("mu", &SqueezeParameter::mu)
        .def_readonly("nu", &SqueezeParameter::nu);

    py::class_<SpectralDecomposition>(m, "SpectralDecomposition")
        .def_readonly("eigenvalues", &SpectralDecomposition::eigenvalues)
        .def_readonly("eigenvectors", &SpectralDecomposition::eigenvectors);

    auto state_spec = py::class_<StateSpec>(m, "StateSpec");
    py::enum_<StateSpec::Kind>(state_spec, "Kind")
        .value("Coherent", StateSpec::Kind::Coherent)
        .value("Squeezed", StateSpec::Kind::Squeezed)
        .value("Fock", StateSpec::Kind::Fock);
    state_spec
        .def_static("coherent", &StateSpec::coherent, py::arg("alpha"))
        .def_static("squeezed", &StateSpec::squeezed, py::arg("alpha"), py::arg("squeeze"))
        .def_static("fock", &StateSpec::fock, py::arg("level"))
        .def_readonly("kind", &StateSpec::kind)
        .def_readonly("alpha", &StateSpec::alpha)
        .def_readonly("squeeze", &StateSpec::squeeze)
        .def_readonly("fock_level", &StateSpec::fock_level);

    py::enum_<Observable>(m, "Observable")
        .value("Quadrature", Observable::Quadrature)
        .value("Number", Observable::Number);
    py::enum_<Method>(m, "Method")
        .value("ClosedForm", Method::ClosedForm)
        .value("DisplacedFrame", Method::DisplacedFrame)
        .value("Lindblad", Method::Lindblad)
        .value("Series", Method::Series);

    py::class_<DecayKernel>(m, "DecayKernel")
        .def_readonly("plus", &DecayKernel::plus)
        .def_readonly("minus", &DecayKernel::minus);

    py::class_<ClosedFormResult>(m, "ClosedFormResult")
        .def_readonly("value", &ClosedFormResult::value)
        .def_readonly("oscillating_part", &ClosedFormResult::oscillating_part)
        .def_readonly("constant_part", &ClosedFormResult::constant_part);

    py::class_<FirstMoments>(m, "FirstMoments")
        .def(py::init([](Complex mean_adag, Complex mean_a) {
                 return FirstMoments{mean_adag, mean_a};
             }),
             py::arg("mean_adag"), py::arg("mean_a"))
        .def_readonly("mean_adag", &FirstMoments::mean_adag)
        .def_readonly("mean_a", &FirstMoments::mean_a);

    py::class_<MilburnKernel>(m, "MilburnKernel")
        .def_readonly("unitary", &MilburnKernel::unitary)
        .def_readonly("spectral", &MilburnKernel::spectral);

    py::class_<SeriesPlan>(m, "SeriesPlan")
        .def_readonly("t", &SeriesPlan::t)
        .def_readonly("k_max", &SeriesPlan::k_max)
        .def_readonly("weights", &SeriesPlan::weights)
        .def_readonly("tail_mass", &SeriesPlan::tail_mass);

    py::class_<TimeSeries>(m, "TimeSeries")
        .def_readonly("times", &TimeSeries::times)
        .def_readonly("tracks", &TimeSeries::tracks);

    py::class_<SweepSpec>(m, "SweepSpec")
        .def(py::init([](std::string field, std::vector<double> values,
                         std::vector<std::string> labels) {
                 return SweepSpec{std::move(field), std::move(values), std::move(labels)};
             }),
             py::arg("field"), py::arg("values"), py::arg("labels"))
        .def_readonly("field", &SweepSpec::field)
        .def_readonly("values", &SweepSpec::values)
        .def_readonly("labels", &SweepSpec::labels);

    py::class_<ExperimentConfig>(m, "ExperimentConfig")
        .def(py::init<>())
        .def_readwrite("params", &ExperimentConfig::params)
        .def_readwrite("policy", &ExperimentConfig::policy)
        .def_readwrite("state", &ExperimentConfig::state)
        .def_readwrite("t_start", &ExperimentConfig::t_start)
        .def_readwrite("t_end", &ExperimentConfig::t_end)
        .def_readwrite("t_points", &ExperimentConfig::t_points)
        .def_readwrite("observables", &ExperimentConfig::observables)
        .def_readwrite("methods", &ExperimentConfig::methods)
        .def_readwrite("sweep", &ExperimentConfig::sweep)
        .def("time_grid", &ExperimentConfig::time_grid);

    py::class_<SweepCase>(m, "SweepCase")
        .def_readonly("label", &SweepCase::label)
        .def_readonly("config", &SweepCase::config)
        .def_readonly("series", &SweepCase::series)
        .def_readonly("edge_population", &SweepCase::edge_population)
        .def_readonly("max_tail_mass", &SweepCase::max_tail_mass);

    py::class_<ValidationReport::PairLine>(m, "PairLine")
        .def_readonly("case_label", &ValidationReport::PairLine::case_label)
        .def_readonly("pair", &ValidationReport::PairLine::pair)
        .def_readonly("max_deviation", &ValidationReport::PairLine::max_deviation)
        .def_readonly("pass_", &ValidationReport::PairLine::pass);

    py::class_<ValidationReport>(m, "ValidationReport")
        .def_readonly("tolerance", &ValidationReport::tolerance)
        .def_readonly("lines", &ValidationReport::lines)
        .def("passed", &ValidationReport::passed);

    py::class_<RunResult>(m, "RunResult")
        .def_readonly("cases", &RunResult::cases)
        .def_readonly("report", &RunResult::report);

    py::class_<FigureDef>(m, "FigureDef")
        .def_readonly("name", &FigureDef::name)
        .def_readonly("config", &FigureDef::config);

    m.def("make_annihilation", &make_annihilation, py::arg("policy"));
    m.def("make_hamiltonian", &make_hamiltonian, py::arg("params"), py::arg("policy"));
    m.def("coherent_state", &coherent_state, py::arg("alpha"), py::arg("policy"));
    m.def("fock_state", &fock_state, py::arg("level"), py::arg("policy"));
    m.def("displacement_operator", &displacement_operator, py::arg("beta"),
          py::arg("policy"));
    m.def("squeeze_operator", &squeeze_operator, py::arg("squeeze"), py::arg("policy"));
    m.def("squeezed_state", &squeezed_state, py::arg("alpha"), py::arg("squeeze"),
          py::arg("policy"));
    m.def("make_state", &make_state, py::arg("state"), py::arg("policy"));
    m.def(
        "expectation",
        [](const Vector& state, const Matrix& obs) { return expectation(state, obs); },
        py::arg("state"), py::arg("obs"));
    m.def(
        "expectation_density",
        [](const Matrix& rho, const Matrix& obs) { return expectation(rho, obs); },
        py::arg("rho"), py::arg("obs"));
    m.def("edge_population", &edge_population, py::arg("state"));
    m.def("hermitian_eig", &hermitian_eig, py::arg("h"));

    m.def("envelope_rate", &envelope_rate, py::arg("params"));
    m.def("decay_kernel", &decay_kernel, py::arg("params"), py::arg("t"));
    m.def("quad_general", &quad_general, py::arg("moments"), py::arg("params"),
          py::arg("t"));
    m.def("quad_coherent", &quad_coherent, py::arg("alpha"), py::arg("params"),
          py::arg("t"));
    m.def("num_coherent", &num_coherent, py::arg("alpha"), py::arg("params"), py::arg("t"));
    m.def("quad_squeezed", &quad_squeezed, py::arg("alpha"), py::arg("squeeze"),
          py::arg("params"), py::arg("t"));
    m.def("num_squeezed", &num_squeezed, py::arg("alpha"), py::arg("squeeze"),
          py::arg("params"), py::arg("t"));

    m.def("observable_matrix", &observable_matrix, py::arg("observable"), py::arg("policy"));
    m.def("observable_name", &observable_name, py::arg("observable"));
    m.def("method_name", &method_name, py::arg("method"));
    m.def("observable_from_name", &observable_from_name, py::arg("name"));
    m.def("method_from_name", &method_from_name, py::arg("name"));
    m.def("build_kernel", &build_kernel, py::arg("params"), py::arg("policy"));
    m.def("plan_series", &plan_series, py::arg("params"), py::arg("policy"), py::arg("t"));
    m.def("evolve_series", &evolve_series, py::arg("initial"), py::arg("kernel"),
          py::arg("plan"), py::arg("observables"));
    m.def("evolve_series_density", &evolve_series_density, py::arg("initial"),
          py::arg("kernel"), py::arg("plan"));
    m.def("evolve_series_displaced_frame", &evolve_series_displaced_frame,
          py::arg("initial"), py::arg("params"), py::arg("policy"), py::arg("plan"),
          py::arg("observables"));
    m.def("lindblad_rhs", &lindblad_rhs, py::arg("rho"), py::arg("hamiltonian"),
          py::arg("gamma"));
    m.def(
        "integrate_lindblad",
        [](const Matrix& initial, const OscillatorParams& params,
           const TruncationPolicy& policy, const std::vector<double>& t_grid,
           const std::vector<Observable>& observables) {
            return integrate_lindblad(initial, params, policy, t_grid, observables);
        },
        py::arg("initial"), py::arg("params"), py::arg("policy"), py::arg("t_grid"),
        py::arg("observables"));
    m.def("run_timeseries", &run_timeseries, py::arg("state"), py::arg("params"),
          py::arg("policy"), py::arg("t_grid"), py::arg("observables"), py::arg("methods"));

    m.def("load_config_text", &load_config_text, py::arg("text"));
    m.def("load_config_file", &load_config_file, py::arg("path"));
    m.def("run_experiment", &run_experiment, py::arg("config"),
          py::arg("tolerance") = 1e-6);
    m.def("merged_series", &merged_series, py::arg("result"));
    m.def("report_text", &report_text, py::arg("result"));
    m.def("emit_csv", &emit_csv, py::arg("series"), py::arg("path"));
    m.def("emit_plot_script", &emit_plot_script, py::arg("series"), py::arg("result"),
          py::arg("path"));
    m.def("builtin_figures", &builtin_figures);
}
