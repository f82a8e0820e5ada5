#include "milburn/harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <numbers>
#include <set>
#include <sstream>

#include "milburn/closed_form.hpp"
#include "milburn/fock.hpp"

namespace milburn {

namespace {

std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r");
    if (begin == std::string::npos) {
        return "";
    }
    const auto end = s.find_last_not_of(" \t\r");
    return s.substr(begin, end - begin + 1);
}

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> items;
    std::string::size_type start = 0;
    while (true) {
        const auto comma = s.find(',', start);
        items.push_back(trim(s.substr(start, comma - start)));
        if (comma == std::string::npos) {
            break;
        }
        start = comma + 1;
    }
    return items;
}

struct RawEntry {
    std::string value;
    int line = 0;
};

using RawConfig = std::map<std::string, RawEntry>;

const std::set<std::string>& known_keys() {
    static const std::set<std::string> keys = {
        "params.omega",          "params.lambda",        "params.gamma",
        "state.kind",            "state.alpha_re",       "state.alpha_im",
        "state.r",               "state.theta",          "state.n",
        "grid.t_start",          "grid.t_end",           "grid.points",
        "run.observables",       "run.methods",
        "sweep.field",           "sweep.values",
        "policy.fock_cutoff",    "policy.edge_tolerance",
        "policy.poisson_tail_tol", "policy.max_series_terms",
    };
    return keys;
}

RawConfig tokenize(const std::string& text) {
    RawConfig raw;
    std::istringstream stream(text);
    std::string line;
    int line_no = 0;
    while (std::getline(stream, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos) {
            line.erase(hash);
        }
        const std::string stripped = trim(line);
        if (stripped.empty()) {
            continue;
        }
        const auto eq = stripped.find('=');
        if (eq == std::string::npos) {
            throw ParseError("line " + std::to_string(line_no) +
                             ": expected 'key = value', got '" + stripped + "'");
        }
        const std::string key = trim(stripped.substr(0, eq));
        const std::string value = trim(stripped.substr(eq + 1));
        if (key.empty()) {
            throw ParseError("line " + std::to_string(line_no) + ": missing key before '='");
        }
        if (key.find_first_not_of(
                "abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ0123456789_.") !=
            std::string::npos) {
            throw ParseError("line " + std::to_string(line_no) + ": malformed key '" + key +
                             "'");
        }
        if (value.empty()) {
            throw ParseError("line " + std::to_string(line_no) + ": missing value for '" +
                             key + "'");
        }
        if (raw.count(key) != 0) {
            throw ParseError("line " + std::to_string(line_no) + ": duplicate key '" + key +
                             "' (first set on line " + std::to_string(raw[key].line) + ")");
        }
        raw[key] = {value, line_no};
    }
    for (const auto& [key, entry] : raw) {
        if (known_keys().count(key) == 0) {
            throw ValidationError("unknown key '" + key + "' (line " +
                                  std::to_string(entry.line) + ")");
        }
    }
    return raw;
}

double parse_double(const RawConfig& raw, const std::string& key) {
    const RawEntry& entry = raw.at(key);
    std::size_t used = 0;
    double value = 0.0;
    try {
        value = std::stod(entry.value, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used != entry.value.size() || !std::isfinite(value)) {
        throw ParseError("line " + std::to_string(entry.line) + ": value for '" + key +
                         "' is not a finite number: '" + entry.value + "'");
    }
    return value;
}

long parse_integer(const RawConfig& raw, const std::string& key) {
    const RawEntry& entry = raw.at(key);
    std::size_t used = 0;
    long value = 0;
    try {
        value = std::stol(entry.value, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used != entry.value.size()) {
        throw ParseError("line " + std::to_string(entry.line) + ": value for '" + key +
                         "' is not an integer: '" + entry.value + "'");
    }
    return value;
}

void require(const RawConfig& raw, const std::string& key) {
    if (raw.count(key) == 0) {
        throw ValidationError("missing required key '" + key + "'");
    }
}

void reject_inapplicable(const RawConfig& raw, const std::string& key,
                         const std::string& kind) {
    if (raw.count(key) != 0) {
        throw ValidationError("'" + key + "' does not apply to state.kind = " + kind);
    }
}

// Sweepable fields and how to apply a value to a resolved config.
void apply_sweep_value(ExperimentConfig& config, const std::string& field, double value) {
    try {
        if (field == "params.omega") {
            config.params = OscillatorParams(value, config.params.lambda, config.params.gamma);
        } else if (field == "params.lambda") {
            config.params = OscillatorParams(config.params.omega, value, config.params.gamma);
        } else if (field == "params.gamma") {
            config.params = OscillatorParams(config.params.omega, config.params.lambda, value);
        } else if (field == "state.alpha_re") {
            config.state.alpha = Complex(value, config.state.alpha.imag());
        } else if (field == "state.alpha_im") {
            config.state.alpha = Complex(config.state.alpha.real(), value);
        } else if (field == "state.r") {
            config.state.squeeze = SqueezeParameter(value, config.state.squeeze.theta);
        } else if (field == "state.theta") {
            config.state.squeeze = SqueezeParameter(config.state.squeeze.r, value);
        } else {
            throw ValidationError("sweep.field '" + field + "' is not sweepable");
        }
    } catch (const std::invalid_argument& e) {
        throw ValidationError("sweep.values: value " + std::to_string(value) + " for " +
                              field + " is invalid: " + e.what());
    }
}

void check_sweep_applicable(const ExperimentConfig& config, const std::string& field) {
    const bool squeezed = config.state.kind == StateSpec::Kind::Squeezed;
    const bool has_alpha = config.state.kind != StateSpec::Kind::Fock;
    if ((field == "state.r" || field == "state.theta") && !squeezed) {
        throw ValidationError("sweep.field '" + field + "' needs state.kind = squeezed");
    }
    if ((field == "state.alpha_re" || field == "state.alpha_im") && !has_alpha) {
        throw ValidationError("sweep.field '" + field + "' needs a coherent or squeezed state");
    }
}

std::string format_value(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.16e", v);
    return buf;
}

std::string format_short(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.3e", v);
    return buf;
}

}  // namespace

std::vector<double> ExperimentConfig::time_grid() const {
    if (t_points < 2) {
        throw std::invalid_argument("time grid needs at least 2 points");
    }
    std::vector<double> grid(static_cast<std::size_t>(t_points));
    const double dt = (t_end - t_start) / static_cast<double>(t_points - 1);
    for (int i = 0; i < t_points; ++i) {
        grid[static_cast<std::size_t>(i)] = t_start + dt * i;
    }
    grid.back() = t_end;
    return grid;
}

ExperimentConfig load_config_text(const std::string& text) {
    const RawConfig raw = tokenize(text);
    ExperimentConfig config;

    require(raw, "params.omega");
    require(raw, "params.lambda");
    require(raw, "params.gamma");
    const double omega = parse_double(raw, "params.omega");
    const double lambda = parse_double(raw, "params.lambda");
    const double gamma = parse_double(raw, "params.gamma");
    if (!(omega > 0.0)) {
        throw ValidationError("params.omega must be > 0");
    }
    if (!(gamma > 0.0)) {
        throw ValidationError("params.gamma must be > 0");
    }
    config.params = OscillatorParams(omega, lambda, gamma);

    TruncationPolicy policy;
    if (raw.count("policy.fock_cutoff") != 0) {
        const long cutoff = parse_integer(raw, "policy.fock_cutoff");
        if (cutoff < 2) {
            throw ValidationError("policy.fock_cutoff must be >= 2");
        }
        policy.fock_cutoff = static_cast<int>(cutoff);
    }
    if (raw.count("policy.edge_tolerance") != 0) {
        policy.edge_tolerance = parse_double(raw, "policy.edge_tolerance");
        if (!(policy.edge_tolerance >= 0.0)) {
            throw ValidationError("policy.edge_tolerance must be >= 0");
        }
    }
    if (raw.count("policy.poisson_tail_tol") != 0) {
        policy.poisson_tail_tol = parse_double(raw, "policy.poisson_tail_tol");
        if (!(policy.poisson_tail_tol > 0.0)) {
            throw ValidationError("policy.poisson_tail_tol must be > 0");
        }
    }
    if (raw.count("policy.max_series_terms") != 0) {
        policy.max_series_terms = parse_integer(raw, "policy.max_series_terms");
        if (policy.max_series_terms < 1) {
            throw ValidationError("policy.max_series_terms must be >= 1");
        }
    }
    config.policy = policy;

    require(raw, "state.kind");
    const std::string kind = raw.at("state.kind").value;
    if (kind == "coherent" || kind == "squeezed") {
        require(raw, "state.alpha_re");
        const double re = parse_double(raw, "state.alpha_re");
        const double im =
            raw.count("state.alpha_im") != 0 ? parse_double(raw, "state.alpha_im") : 0.0;
        if (kind == "coherent") {
            reject_inapplicable(raw, "state.r", kind);
            reject_inapplicable(raw, "state.theta", kind);
            reject_inapplicable(raw, "state.n", kind);
            config.state = StateSpec::coherent(Complex(re, im));
        } else {
            require(raw, "state.r");
            const double r = parse_double(raw, "state.r");
            if (!(r >= 0.0)) {
                throw ValidationError("state.r must be >= 0");
            }
            const double theta =
                raw.count("state.theta") != 0 ? parse_double(raw, "state.theta") : 0.0;
            reject_inapplicable(raw, "state.n", kind);
            config.state = StateSpec::squeezed(Complex(re, im), SqueezeParameter(r, theta));
        }
    } else if (kind == "fock") {
        require(raw, "state.n");
        reject_inapplicable(raw, "state.alpha_re", kind);
        reject_inapplicable(raw, "state.alpha_im", kind);
        reject_inapplicable(raw, "state.r", kind);
        reject_inapplicable(raw, "state.theta", kind);
        const long level = parse_integer(raw, "state.n");
        if (level < 0 || level >= config.policy.fock_cutoff) {
            throw ValidationError("state.n must lie in [0, policy.fock_cutoff)");
        }
        config.state = StateSpec::fock(static_cast<int>(level));
    } else {
        throw ValidationError("state.kind must be coherent, squeezed or fock (got '" + kind +
                              "')");
    }

    if (raw.count("grid.t_start") != 0) {
        config.t_start = parse_double(raw, "grid.t_start");
        if (!(config.t_start >= 0.0)) {
            throw ValidationError("grid.t_start must be >= 0");
        }
    }
    if (raw.count("grid.t_end") != 0) {
        config.t_end = parse_double(raw, "grid.t_end");
    }
    if (!(config.t_end > config.t_start)) {
        throw ValidationError("grid.t_end must be greater than grid.t_start");
    }
    if (raw.count("grid.points") != 0) {
        const long points = parse_integer(raw, "grid.points");
        if (points < 2) {
            throw ValidationError("grid.points must be >= 2");
        }
        config.t_points = static_cast<int>(points);
    }

    if (raw.count("run.observables") != 0) {
        config.observables.clear();
        for (const std::string& item : split_list(raw.at("run.observables").value)) {
            if (item.empty()) {
                throw ValidationError("run.observables contains an empty item");
            }
            Observable o;
            try {
                o = observable_from_name(item);
            } catch (const std::invalid_argument& e) {
                throw ValidationError(std::string("run.observables: ") + e.what());
            }
            if (std::find(config.observables.begin(), config.observables.end(), o) !=
                config.observables.end()) {
                throw ValidationError("run.observables lists '" + item + "' twice");
            }
            config.observables.push_back(o);
        }
    }
    if (raw.count("run.methods") != 0) {
        config.methods.clear();
        for (const std::string& item : split_list(raw.at("run.methods").value)) {
            if (item.empty()) {
                throw ValidationError("run.methods contains an empty item");
            }
            Method m;
            try {
                m = method_from_name(item);
            } catch (const UnknownMethod& e) {
                throw ValidationError(std::string("run.methods: ") + e.what());
            }
            if (std::find(config.methods.begin(), config.methods.end(), m) !=
                config.methods.end()) {
                throw ValidationError("run.methods lists '" + item + "' twice");
            }
            config.methods.push_back(m);
        }
    }
    if (config.state.kind == StateSpec::Kind::Fock &&
        std::find(config.methods.begin(), config.methods.end(), Method::ClosedForm) !=
            config.methods.end()) {
        throw ValidationError(
            "run.methods: closed_form needs a coherent or squeezed initial state");
    }

    const bool has_field = raw.count("sweep.field") != 0;
    const bool has_values = raw.count("sweep.values") != 0;
    if (has_field != has_values) {
        throw ValidationError("sweep.field and sweep.values must be given together");
    }
    if (has_field) {
        SweepSpec sweep;
        sweep.field = raw.at("sweep.field").value;
        check_sweep_applicable(config, sweep.field);
        const std::string short_name = sweep.field.substr(sweep.field.rfind('.') + 1);
        for (const std::string& item : split_list(raw.at("sweep.values").value)) {
            if (item.empty()) {
                throw ValidationError("sweep.values contains an empty item");
            }
            std::size_t used = 0;
            double value = 0.0;
            try {
                value = std::stod(item, &used);
            } catch (const std::exception&) {
                used = 0;
            }
            if (used != item.size() || !std::isfinite(value)) {
                throw ValidationError("sweep.values item '" + item +
                                      "' is not a finite number");
            }
            sweep.values.push_back(value);
            sweep.labels.push_back(short_name + "=" + item);
        }
        if (sweep.values.empty()) {
            throw ValidationError("sweep.values is empty");
        }
        // every case must itself be a valid configuration
        for (std::size_t i = 0; i < sweep.values.size(); ++i) {
            ExperimentConfig probe = config;
            apply_sweep_value(probe, sweep.field, sweep.values[i]);
        }
        config.sweep = sweep;
    }
    return config;
}

ExperimentConfig load_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw IoError("cannot read config file '" + path + "'");
    }
    std::ostringstream text;
    text << in.rdbuf();
    return load_config_text(text.str());
}

bool ValidationReport::passed() const {
    return std::all_of(lines.begin(), lines.end(),
                       [](const PairLine& l) { return l.pass; });
}

RunResult run_experiment(const ExperimentConfig& config, double tolerance) {
    config.params.validate();
    config.policy.validate();
    if (config.observables.empty()) {
        throw ValidationError("run.observables is empty");
    }
    if (config.methods.empty()) {
        throw ValidationError("run.methods is empty");
    }
    if (!(tolerance > 0.0) || !std::isfinite(tolerance)) {
        throw std::invalid_argument("tolerance must be finite and > 0");
    }

    std::vector<std::pair<std::string, ExperimentConfig>> resolved;
    if (config.sweep.has_value()) {
        const SweepSpec& sweep = *config.sweep;
        if (sweep.values.empty() || sweep.values.size() != sweep.labels.size()) {
            throw ValidationError("sweep.values and labels are inconsistent");
        }
        for (std::size_t i = 0; i < sweep.values.size(); ++i) {
            ExperimentConfig one = config;
            one.sweep.reset();
            apply_sweep_value(one, sweep.field, sweep.values[i]);
            resolved.emplace_back(sweep.labels[i], one);
        }
    } else {
        resolved.emplace_back("base", config);
    }

    const std::vector<double> grid = config.time_grid();
    const bool series_methods =
        std::find(config.methods.begin(), config.methods.end(), Method::Series) !=
            config.methods.end() ||
        std::find(config.methods.begin(), config.methods.end(), Method::DisplacedFrame) !=
            config.methods.end();

    RunResult result;
    result.report.tolerance = tolerance;

    for (const auto& [label, one] : resolved) {
        const std::set<Method> methods(one.methods.begin(), one.methods.end());
        SweepCase item;
        item.label = label;
        item.config = one;
        try {
            item.series = run_timeseries(one.state, one.params, one.policy, grid,
                                         one.observables, methods);
        } catch (const TruncationError& e) {
            throw TruncationError("case " + label + ": " + e.what());
        }
        // diagnostics: edge population measured with the check disabled, so a
        // closed-form-only run can still report an unhealthy cutoff
        TruncationPolicy relaxed = one.policy;
        relaxed.edge_tolerance = 0.0;
        item.edge_population = edge_population(make_state(one.state, relaxed));
        if (series_methods) {
            for (const double t : grid) {
                item.max_tail_mass = std::max(
                    item.max_tail_mass, plan_series(one.params, one.policy, t).tail_mass);
            }
        }
        result.cases.push_back(std::move(item));
    }

    std::vector<std::string> names;
    for (const Method m : config.methods) {
        names.push_back(method_name(m));
    }
    std::sort(names.begin(), names.end());
    names.erase(std::unique(names.begin(), names.end()), names.end());

    for (const SweepCase& item : result.cases) {
        for (std::size_t i = 0; i < names.size(); ++i) {
            for (std::size_t j = i + 1; j < names.size(); ++j) {
                double maxdev = 0.0;
                bool have_both = true;
                for (const Observable o : config.observables) {
                    const auto a = item.series.tracks.find(observable_name(o) + "." + names[i]);
                    const auto b = item.series.tracks.find(observable_name(o) + "." + names[j]);
                    if (a == item.series.tracks.end() || b == item.series.tracks.end()) {
                        have_both = false;
                        break;
                    }
                    for (std::size_t p = 0; p < grid.size(); ++p) {
                        maxdev = std::max(maxdev, std::abs(a->second[p] - b->second[p]));
                    }
                }
                if (!have_both) {
                    continue;  // e.g. closed_form asked of a Fock state via the direct API
                }
                result.report.lines.push_back(
                    {item.label, names[i] + "/" + names[j], maxdev, maxdev <= tolerance});
            }
        }
    }
    return result;
}

TimeSeries merged_series(const RunResult& result) {
    if (result.cases.empty()) {
        throw std::invalid_argument("merged_series: no cases");
    }
    TimeSeries merged;
    merged.times = result.cases.front().series.times;
    const bool suffix = result.cases.size() > 1;
    for (const SweepCase& item : result.cases) {
        for (const auto& [key, track] : item.series.tracks) {
            merged.tracks[suffix ? key + "." + item.label : key] = track;
        }
    }
    return merged;
}

std::string report_text(const RunResult& result) {
    std::ostringstream out;
    for (const SweepCase& item : result.cases) {
        out << "CASE " << item.label << " EDGE " << format_short(item.edge_population)
            << " TAIL " << format_short(item.max_tail_mass) << "\n";
        for (const auto& line : result.report.lines) {
            if (line.case_label != item.label) {
                continue;
            }
            out << "CASE " << line.case_label << " PAIR " << line.pair << " MAXDEV "
                << format_value(line.max_deviation) << (line.pass ? " PASS" : " FAIL")
                << "\n";
        }
    }
    out << "RESULT " << (result.report.passed() ? "PASS" : "FAIL") << " (tolerance "
        << format_short(result.report.tolerance) << ")\n";
    return out.str();
}

void emit_csv(const TimeSeries& series, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw IoError("cannot open '" + path + "' for writing");
    }
    out << "t";
    for (const auto& [key, track] : series.tracks) {
        if (track.size() != series.times.size()) {
            throw std::invalid_argument("emit_csv: track '" + key + "' length mismatch");
        }
        out << "," << key;
    }
    out << "\n";
    for (std::size_t i = 0; i < series.times.size(); ++i) {
        out << format_value(series.times[i]);
        for (const auto& [key, track] : series.tracks) {
            out << "," << format_value(track[i]);
        }
        out << "\n";
    }
    if (!out) {
        throw IoError("write to '" + path + "' failed");
    }
}

void emit_plot_script(const TimeSeries& series, const RunResult& result,
                      const std::string& path) {
    const std::string stem = std::filesystem::path(path).stem().string();
    const std::string csv_name = stem + ".csv";

    // column positions follow the CSV layout: t first, tracks in key order
    struct Curve {
        int column;
        std::string title;
    };
    std::map<std::string, std::vector<Curve>> by_observable;
    int column = 2;
    for (const auto& [key, track] : series.tracks) {
        (void)track;
        const auto dot = key.find('.');
        const std::string obs = key.substr(0, dot);
        std::string title = dot == std::string::npos ? key : key.substr(dot + 1);
        std::replace(title.begin(), title.end(), '.', ' ');
        by_observable[obs].push_back({column, title});
        ++column;
    }

    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw IoError("cannot open '" + path + "' for writing");
    }
    out << "# renders " << csv_name << " (expected in the working directory)\n";
    out << "# validation: " << (result.report.passed() ? "PASS" : "FAIL") << "\n";
    out << "set datafile separator ','\n";
    out << "set terminal pngcairo size 960,640\n";
    out << "set termoption noenhanced\n";
    out << "set grid\n";
    out << "set key outside right top\n";
    out << "set xlabel 't'\n";
    for (const auto& [obs, curves] : by_observable) {
        const std::string image = by_observable.size() == 1 ? stem + ".png"
                                                            : stem + "_" + obs + ".png";
        out << "set output '" << image << "'\n";
        if (obs == "quadrature") {
            out << "set ylabel '<a^+ + a>'\n";
        } else if (obs == "number") {
            out << "set ylabel '<a^+ a>'\n";
        } else {
            out << "set ylabel '" << obs << "'\n";
        }
        out << "plot";
        for (std::size_t i = 0; i < curves.size(); ++i) {
            if (i > 0) {
                out << ",";
            }
            out << " \\\n  '" << csv_name << "' using 1:" << curves[i].column
                << " with lines lw 2 title '" << curves[i].title << "'";
        }
        out << "\n";
    }
    if (!out) {
        throw IoError("write to '" + path + "' failed");
    }
}

std::vector<FigureDef> builtin_figures() {
    const double pi = std::numbers::pi;

    ExperimentConfig coherent_base;
    coherent_base.params = OscillatorParams(4.0, 0.7, 10.0);
    coherent_base.policy = TruncationPolicy(96);
    coherent_base.state = StateSpec::coherent(4.0);
    coherent_base.t_start = 0.0;
    coherent_base.t_end = 6.0;
    coherent_base.t_points = 601;
    coherent_base.methods = {Method::ClosedForm, Method::Series};
    SweepSpec lambda_sweep{"params.lambda",
                           {0.1, 0.7, 1.5},
                           {"lambda=0.1", "lambda=0.7", "lambda=1.5"}};

    ExperimentConfig squeezed_base = coherent_base;
    squeezed_base.state = StateSpec::squeezed(4.0, SqueezeParameter(0.3, 0.0));
    // anti-squeezed (theta = pi) photon statistics are fatter than coherent
    // ones; 96 levels leave just-over-tolerance edge population, 128 is clean
    squeezed_base.policy = TruncationPolicy(128);
    squeezed_base.t_end = 3.0;
    squeezed_base.t_points = 1501;
    SweepSpec theta_sweep{"state.theta", {0.0, pi / 2.0, pi}, {"theta=0", "theta=pi/2", "theta=pi"}};

    std::vector<FigureDef> figures(4);
    figures[0].name = "figure1";
    figures[0].config = coherent_base;
    figures[0].config.observables = {Observable::Quadrature};
    figures[0].config.sweep = lambda_sweep;

    figures[1].name = "figure2";
    figures[1].config = coherent_base;
    figures[1].config.observables = {Observable::Number};
    figures[1].config.sweep = lambda_sweep;

    figures[2].name = "figure3";
    figures[2].config = squeezed_base;
    figures[2].config.observables = {Observable::Quadrature};
    figures[2].config.sweep = theta_sweep;

    figures[3].name = "figure4";
    figures[3].config = squeezed_base;
    figures[3].config.observables = {Observable::Number};
    figures[3].config.sweep = theta_sweep;
    return figures;
}

}  // namespace milburn
