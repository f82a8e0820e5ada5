#pragma once

#include <optional>
#include <string>
#include <vector>

#include "milburn/evolution.hpp"
#include "milburn/types.hpp"

namespace milburn {

/// Malformed config syntax; message carries the line number.
struct ParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// A config value violates a constraint; message names the offending key.
struct ValidationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// One swept field and the values it takes, one experiment case per value.
struct SweepSpec {
    std::string field;
    std::vector<double> values;
    std::vector<std::string> labels;  // e.g. "lambda=0.1"; same length as values
};

/// A full experiment: physics, initial state, time grid, what to compute and how.
/// Parsed from flat key=value text (see load_config_text) or built directly.
struct ExperimentConfig {
    OscillatorParams params{4.0, 0.7, 10.0};
    TruncationPolicy policy;
    StateSpec state = StateSpec::coherent(4.0);
    double t_start = 0.0;
    double t_end = 10.0;
    int t_points = 1001;
    std::vector<Observable> observables{Observable::Quadrature, Observable::Number};
    std::vector<Method> methods{Method::Series};
    std::optional<SweepSpec> sweep;

    std::vector<double> time_grid() const;
};

/// Parses the flat key=value config dialect: one assignment per line, '#'
/// comments, dotted key names (params.omega, grid.t_end, ...). Unknown keys and
/// constraint violations raise ValidationError naming the key; syntax problems
/// raise ParseError with the line number.
ExperimentConfig load_config_text(const std::string& text);
ExperimentConfig load_config_file(const std::string& path);

/// One resolved sweep case with its computed series and truncation diagnostics.
struct SweepCase {
    std::string label;
    ExperimentConfig config;
    TimeSeries series;
    double edge_population = 0.0;  // top-5-level population of the initial state
    double max_tail_mass = 0.0;    // largest Poisson tail dropped over the grid
};

/// Pairwise cross-validation of the methods that ran: one line per case and
/// unordered method pair, with the max pointwise deviation over the grid and
/// all observables.
struct ValidationReport {
    struct PairLine {
        std::string case_label;
        std::string pair;  // "closed_form/series"
        double max_deviation = 0.0;
        bool pass = false;
    };
    double tolerance = 1e-6;
    std::vector<PairLine> lines;

    bool passed() const;
};

struct RunResult {
    std::vector<SweepCase> cases;
    ValidationReport report;
};

/// Expands the sweep, runs every case, and cross-validates all method pairs.
/// TruncationError from state preparation is rethrown with the case label
/// attached.
RunResult run_experiment(const ExperimentConfig& config, double tolerance = 1e-6);

/// All tracks of all cases on the shared grid; sweep runs get the case label
/// appended to each track key ("quadrature.series.lambda=0.1").
TimeSeries merged_series(const RunResult& result);

/// Plain-text report: a CASE line with truncation diagnostics per case, a
/// CASE/PAIR/MAXDEV/PASS|FAIL line per comparison, and a final RESULT line.
std::string report_text(const RunResult& result);

/// Writes "t,<track>,<track>,..." with columns in sorted track order, every
/// value as %.16e (17 significant digits), LF line endings. Byte-identical
/// across reruns of the same config.
void emit_csv(const TimeSeries& series, const std::string& path);

/// Writes a gnuplot script next to the CSV it renders (same stem, .csv
/// extension, referenced by relative name). One output image per observable.
void emit_plot_script(const TimeSeries& series, const RunResult& result,
                      const std::string& path);

/// The four built-in validation figures: coherent-state quadrature and photon
/// number under a lambda sweep, and their squeezed-state counterparts under a
/// theta sweep.
struct FigureDef {
    std::string name;
    ExperimentConfig config;
};
std::vector<FigureDef> builtin_figures();

/// Entry point behind the `milburn` binary. Subcommands: run <config>,
/// validate <config>, figures. Exit code 0 on success, 1 when cross-validation
/// fails, 2 on usage or config errors.
int cli_main(int argc, const char* const* argv);

}  // namespace milburn
