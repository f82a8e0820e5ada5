#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "milburn/harness.hpp"

namespace milburn {

namespace {

namespace fs = std::filesystem;

void write_text(const fs::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw IoError("cannot open '" + path.string() + "' for writing");
    }
    out << text;
    if (!out) {
        throw IoError("write to '" + path.string() + "' failed");
    }
}

// Emits <stem>.csv, <stem>.gp and <stem>_report.txt into out_dir.
void write_outputs(const RunResult& result, const std::string& stem,
                   const std::string& out_dir, bool quiet) {
    fs::create_directories(out_dir);
    const TimeSeries merged = merged_series(result);
    const fs::path csv = fs::path(out_dir) / (stem + ".csv");
    const fs::path script = fs::path(out_dir) / (stem + ".gp");
    const fs::path report = fs::path(out_dir) / (stem + "_report.txt");
    emit_csv(merged, csv.string());
    emit_plot_script(merged, result, script.string());
    write_text(report, report_text(result));
    if (!quiet) {
        std::cout << "wrote " << csv.string() << "\n";
        std::cout << "wrote " << script.string() << "\n";
        std::cout << "wrote " << report.string() << "\n";
    }
}

int do_run(const std::string& config_path, const std::string& out_dir, double tolerance,
           bool quiet) {
    const ExperimentConfig config = load_config_file(config_path);
    const RunResult result = run_experiment(config, tolerance);
    std::string stem = fs::path(config_path).stem().string();
    if (stem.empty()) {
        stem = "experiment";
    }
    write_outputs(result, stem, out_dir, quiet);
    if (!quiet) {
        std::cout << report_text(result);
    }
    return result.report.passed() ? 0 : 1;
}

int do_validate(const std::string& config_path, double tolerance, bool quiet) {
    const ExperimentConfig config = load_config_file(config_path);
    const RunResult result = run_experiment(config, tolerance);
    if (!quiet) {
        std::cout << report_text(result);
    }
    return result.report.passed() ? 0 : 1;
}

int do_figures(const std::string& out_dir, double tolerance, bool quiet) {
    bool all_passed = true;
    std::string combined;
    for (const FigureDef& figure : builtin_figures()) {
        const RunResult result = run_experiment(figure.config, tolerance);
        write_outputs(result, figure.name, out_dir, quiet);
        combined += "FIGURE " + figure.name + "\n" + report_text(result);
        all_passed = all_passed && result.report.passed();
        if (!quiet) {
            std::cout << figure.name << ": "
                      << (result.report.passed() ? "PASS" : "FAIL") << "\n";
        }
    }
    fs::create_directories(out_dir);
    write_text(fs::path(out_dir) / "figures_report.txt", combined);
    return all_passed ? 0 : 1;
}

}  // namespace

int cli_main(int argc, const char* const* argv) {
    CLI::App app{"Intrinsic-decoherence dynamics of a driven harmonic oscillator"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir = "out";
    double tolerance = 1e-6;
    bool quiet = false;

    const auto add_common = [&](CLI::App* sub, bool with_out) {
        sub->add_option("--tolerance", tolerance,
                        "cross-validation tolerance (default 1e-6)")
            ->check(CLI::PositiveNumber);
        sub->add_flag("--quiet", quiet, "suppress progress and report output");
        if (with_out) {
            sub->add_option("--out", out_dir, "output directory (default ./out)");
        }
    };

    CLI::App* run = app.add_subcommand(
        "run", "run a config; write CSV, gnuplot script and validation report");
    run->add_option("config", config_path, "experiment config file")->required();
    add_common(run, true);

    CLI::App* validate = app.add_subcommand(
        "validate", "run a config and print the cross-validation report only");
    validate->add_option("config", config_path, "experiment config file")->required();
    add_common(validate, false);

    CLI::App* figures = app.add_subcommand(
        "figures", "regenerate the four built-in validation figures");
    add_common(figures, true);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;  // --help exits cleanly; usage errors are config errors
    }

    try {
        if (run->parsed()) {
            return do_run(config_path, out_dir, tolerance, quiet);
        }
        if (validate->parsed()) {
            return do_validate(config_path, tolerance, quiet);
        }
        return do_figures(out_dir, tolerance, quiet);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}

}  // namespace milburn
