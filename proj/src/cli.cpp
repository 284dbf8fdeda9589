#include "langcomp/cli.hpp"

#include "langcomp/analysis.hpp"
#include "langcomp/dataset.hpp"
#include "langcomp/errors.hpp"
#include "langcomp/export.hpp"
#include "langcomp/fitting.hpp"
#include "langcomp/fixtures.hpp"
#include "langcomp/integrator.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <iomanip>
#include <optional>
#include <ostream>
#include <sstream>
#include <utility>

namespace langcomp::cli {
namespace {

// Summary lines only; files keep the exact round-trip form.
std::string readable(double v) {
    std::ostringstream os;
    os << std::setprecision(6) << v;
    return os.str();
}

class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct RunSpec {
    std::string command;
    std::string fixture;
    std::string data;
    std::string beta;
    std::string ma;
    std::string utilities;
    std::string target;
    std::string values;
    double t_end = 0.0;
    double step = 0.0;
    double t_max = kDefaultTMax;
    double band_delta = kDefaultBandDelta;
    double extinction_threshold = kDefaultExtinctionThreshold;
    std::size_t rounds = FitConfig{}.rounds;
    std::string out;
    std::string format;
    std::size_t jobs = 0;

    bool has_t_end = false;
    bool has_step = false;
};

double parse_number(const std::string& text, const std::string& flag) {
    double v = 0.0;
    const char* first = text.data();
    const char* last = first + text.size();
    const auto [ptr, ec] = std::from_chars(first, last, v);
    if (text.empty() || ec != std::errc{} || ptr != last || !std::isfinite(v)) {
        throw UsageError(flag + ": invalid number '" + text + "'");
    }
    return v;
}

std::vector<std::string> split(const std::string& text, char sep) {
    std::vector<std::string> parts;
    std::string part;
    std::istringstream ss(text);
    while (std::getline(ss, part, sep)) parts.push_back(part);
    if (!text.empty() && text.back() == sep) parts.emplace_back();
    return parts;
}

// "lo:hi:count"
std::vector<double> parse_grid(const std::string& text, const std::string& flag) {
    const auto parts = split(text, ':');
    if (parts.size() != 3) throw UsageError(flag + ": expected lo:hi:count, got '" + text + "'");
    const double lo = parse_number(parts[0], flag);
    const double hi = parse_number(parts[1], flag);
    const double count = parse_number(parts[2], flag);
    if (count < 1 || count != std::floor(count)) {
        throw UsageError(flag + ": count must be a positive integer");
    }
    if (count > 1 && !(hi > lo)) throw UsageError(flag + ": need lo < hi");
    return linear_grid(lo, hi, static_cast<std::size_t>(count));
}

std::vector<double> parse_list(const std::string& text, const std::string& flag) {
    std::vector<double> v;
    for (const auto& p : split(text, ',')) v.push_back(parse_number(p, flag));
    return v;
}

struct Inputs {
    Dataset dataset;
    std::optional<ModelParams> fitted;  // from a fixture
};

Inputs load_inputs(const RunSpec& spec) {
    if (spec.fixture.empty() == spec.data.empty()) {
        throw UsageError("exactly one of --fixture or --data is required");
    }
    Inputs in;
    if (!spec.fixture.empty()) {
        const Fixture* f = nullptr;
        try {
            f = &find_fixture(spec.fixture);
        } catch (const DomainError& e) {
            throw UsageError(e.what());
        }
        in.dataset = f->dataset;
        in.fitted = f->fitted;
    } else {
        if (!std::filesystem::exists(spec.data)) {
            throw UsageError("--data: no such file '" + spec.data + "'");
        }
        in.dataset = load_dataset(spec.data);
    }
    return in;
}

// Fixture parameters with --beta/--ma/--utilities applied on top.
ModelParams resolve_params(const RunSpec& spec, const Inputs& in, bool grid_bias) {
    ModelParams p;
    p.language_names = in.dataset.language_names;
    if (in.fitted) p = *in.fitted;
    if (!grid_bias) {
        if (!spec.beta.empty()) p.beta = parse_number(spec.beta, "--beta");
        if (!spec.ma.empty()) p.minority_aversion = parse_number(spec.ma, "--ma");
    }
    if (!spec.utilities.empty()) p.utilities = parse_list(spec.utilities, "--utilities");
    if (!in.fitted) {
        const bool missing = spec.utilities.empty() ||
                             (!grid_bias && (spec.beta.empty() || spec.ma.empty()));
        if (missing) {
            throw UsageError("--data needs --beta, --ma and --utilities (or use --fixture)");
        }
    }
    if (p.utilities.size() != in.dataset.language_count()) {
        throw UsageError("--utilities: expected " + std::to_string(in.dataset.language_count()) +
                         " values");
    }
    try {
        p.validate();
    } catch (const DomainError& e) {
        throw UsageError(e.what());
    }
    return p;
}

RunOptions run_options(const RunSpec& spec) {
    RunOptions o;
    if (spec.has_step) o.step = spec.step;
    o.t_max = spec.t_max;
    o.band_delta = spec.band_delta;
    o.extinction_threshold = spec.extinction_threshold;
    o.jobs = spec.jobs;
    return o;
}

std::size_t target_language(const RunSpec& spec, const Dataset& d) {
    if (spec.target.empty()) throw UsageError("--target is required");
    try {
        return language_index(d.language_names, spec.target);
    } catch (const DomainError& e) {
        throw UsageError("--target: " + std::string(e.what()));
    }
}

std::vector<double> sweep_values(const RunSpec& spec) {
    if (spec.values.empty()) throw UsageError("--values lo:hi:count is required");
    return parse_grid(spec.values, "--values");
}

Format output_format(const RunSpec& spec) {
    if (!spec.format.empty()) return parse_format(spec.format);
    return std::filesystem::path(spec.out).extension() == ".json" ? Format::json : Format::csv;
}

template <typename... Args>
void emit(const RunSpec& spec, std::ostream& out, const Args&... args) {
    if (spec.out.empty()) return;
    export_results(spec.out, output_format(spec), args...);
    out << "wrote " << spec.out << "\n";
}

void print_state(std::ostream& out, const std::vector<std::string>& names, const StateVector& x) {
    for (std::size_t i = 0; i < x.size(); ++i) {
        out << (i ? ", " : "") << names[i] << " " << std::setprecision(6) << x[i];
    }
}

std::string describe(const Outcome& o, const std::vector<std::string>& names) {
    if (o.dominant) return names[*o.dominant] + " dominant";
    return "coexistence, " + names[o.most_popular] + " most popular";
}

void print_sweep(std::ostream& out, const std::vector<SweepPoint>& points,
                 const std::vector<std::string>& names) {
    std::optional<std::string> previous;
    for (const auto& p : points) {
        const std::string label = p.outcome ? describe(*p.outcome, names) : "unresolved";
        if (!previous || *previous != label) {
            out << "  from " << readable(p.swept_value) << ": " << label << "\n";
            previous = label;
        }
    }
    const auto peak = std::max_element(points.begin(), points.end(), [](const auto& a, const auto& b) {
        return a.convergence_time.value_or(-1.0) < b.convergence_time.value_or(-1.0);
    });
    if (peak != points.end() && peak->convergence_time) {
        out << "  peak convergence time " << readable(*peak->convergence_time) << " at "
            << readable(peak->swept_value) << "\n";
    }
}

int cmd_simulate(const RunSpec& spec, std::ostream& out) {
    const auto in = load_inputs(spec);
    const auto params = resolve_params(spec, in, false);
    const double step = spec.has_step ? spec.step : kDefaultStep;
    const int first_year = in.dataset.years.front();
    const double t_end =
        spec.has_t_end ? spec.t_end : static_cast<double>(in.dataset.years.back() - first_year);
    if (!(t_end > 0.0)) throw UsageError("--t-end must be > 0");
    const double per_year = 1.0 / step;
    const std::size_t record_every =
        std::abs(per_year - std::round(per_year)) < 1e-9 ? static_cast<std::size_t>(std::round(per_year))
                                                         : 1;
    const auto traj = integrate(params, in.dataset.row(0), t_end, step, std::max<std::size_t>(1, record_every));
    out << "simulated " << in.dataset.name << " from " << first_year << " for "
        << readable(t_end) << " years\n  final: ";
    print_state(out, params.language_names, traj.states.back());
    out << "\n";
    emit(spec, out, traj);
    return kExitOk;
}

int cmd_fit(const RunSpec& spec, std::ostream& out) {
    const auto in = load_inputs(spec);
    FitConfig config;
    config.rounds = spec.rounds;
    config.jobs = spec.jobs;
    if (spec.has_step) config.step = spec.step;
    try {
        config.validate();
    } catch (const ConfigError& e) {
        throw UsageError(e.what());
    }
    const auto result = fit(in.dataset, config);
    const auto& p = result.params;
    out << "fit " << in.dataset.name << ": beta " << readable(p.beta) << ", alpha-beta "
        << readable(p.minority_aversion) << ", utilities (";
    for (std::size_t i = 0; i < p.size(); ++i) {
        out << (i ? ", " : "") << p.language_names[i] << " " << readable(p.utilities[i]);
    }
    out << "), D " << readable(result.error_d) << "\n";
    emit(spec, out, result);
    return kExitOk;
}

int cmd_sweep(const RunSpec& spec, std::ostream& out) {
    const auto in = load_inputs(spec);
    const auto params = resolve_params(spec, in, false);
    const auto values = sweep_values(spec);
    const auto opts = run_options(spec);
    const StateVector x0 = in.dataset.row(0);
    std::vector<SweepPoint> points;
    if (spec.command == "sweep-utility") {
        points = utility_sweep(params, x0, target_language(spec, in.dataset), values, opts);
    } else if (spec.command == "sweep-initial") {
        points = initial_fraction_sweep(params, x0, target_language(spec, in.dataset), values, opts);
    } else {
        Bias which;
        if (spec.target == "beta") {
            which = Bias::beta;
        } else if (spec.target == "ma") {
            which = Bias::minority_aversion;
        } else {
            throw UsageError("--target must be beta or ma for sweep-bias");
        }
        points = bias_sweep(params, x0, which, values, opts);
    }
    out << spec.command << " over " << values.size() << " values:\n";
    print_sweep(out, points, params.language_names);
    emit(spec, out, points, params.language_names);
    return kExitOk;
}

int cmd_phase(const RunSpec& spec, std::ostream& out) {
    const auto in = load_inputs(spec);
    const auto params = resolve_params(spec, in, true);
    const auto betas = parse_grid(spec.beta.empty() ? "0:2:101" : spec.beta, "--beta");
    const auto mas = parse_grid(spec.ma.empty() ? "0:2:101" : spec.ma, "--ma");
    const auto diagram = phase_diagram(params, in.dataset.row(0), betas, mas, run_options(spec));
    std::size_t unresolved = 0;
    std::vector<std::size_t> dominant(params.size(), 0);
    std::size_t coexist = 0;
    for (const auto& row : diagram) {
        for (const auto& cell : row) {
            if (!cell.label) {
                ++unresolved;
            } else if (cell.label->kind == OutcomeKind::dominance) {
                ++dominant[cell.label->most_popular];
            } else {
                ++coexist;
            }
        }
    }
    out << "phase diagram " << betas.size() << " x " << mas.size() << ": " << coexist
        << " coexistence";
    for (std::size_t i = 0; i < dominant.size(); ++i) {
        out << ", " << dominant[i] << " " << params.language_names[i] << " dominant";
    }
    out << ", " << unresolved << " unresolved\n";
    emit(spec, out, diagram, params.language_names);
    return kExitOk;
}

int cmd_convergence(const RunSpec& spec, std::ostream& out, std::ostream& err) {
    const auto in = load_inputs(spec);
    const auto params = resolve_params(spec, in, false);
    const auto opts = run_options(spec);
    ConvergenceReport report{params.language_names,
                             measure_convergence(params, in.dataset.row(0), opts.convergence()),
                             opts.extinction_threshold};
    const auto& steady = report.result.steady;
    if (!steady.converged) {
        err << "error: no steady state within t_max = " << readable(opts.t_max) << "\n";
        emit(spec, out, report);
        return kExitRuntime;
    }
    const auto outcome = classify(steady.final_state, opts.extinction_threshold);
    out << "steady state: ";
    print_state(out, params.language_names, steady.final_state);
    out << "\n  " << describe(outcome, params.language_names) << "\n  convergence time "
        << readable(*report.result.tau) << "\n";
    emit(spec, out, report);
    return kExitOk;
}

void add_source(CLI::App* cmd, RunSpec& spec) {
    cmd->add_option("--fixture", spec.fixture, "Bundled dataset key");
    cmd->add_option("--data", spec.data, "Census CSV file");
    cmd->add_option("--out", spec.out, "Output file");
    cmd->add_option("--format", spec.format, "csv or json (default from --out extension)")
        ->check(CLI::IsMember({"csv", "json"}));
}

void add_params(CLI::App* cmd, RunSpec& spec, const char* beta_help, const char* ma_help) {
    cmd->add_option("--beta", spec.beta, beta_help);
    cmd->add_option("--ma", spec.ma, ma_help);
    cmd->add_option("--utilities", spec.utilities, "Comma-separated utilities");
}

void add_step(CLI::App* cmd, RunSpec& spec) {
    cmd->add_option("--step", spec.step, "Integration step")->check(CLI::PositiveNumber);
}

void add_run(CLI::App* cmd, RunSpec& spec) {
    add_step(cmd, spec);
    cmd->add_option("--t-max", spec.t_max, "Give-up time for steady state")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--band-delta", spec.band_delta, "Convergence band")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--extinction-threshold", spec.extinction_threshold, "Extinction threshold")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--jobs", spec.jobs, "Worker threads (0 = all cores)");
}

}  // namespace

int run(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
    RunSpec spec;
    CLI::App app{"Multi-language competition model"};
    app.name("langcomp");
    app.require_subcommand(1);

    auto* simulate = app.add_subcommand("simulate", "Integrate from the first census row");
    add_source(simulate, spec);
    add_params(simulate, spec, "Majority preference", "Minority aversion (alpha - beta)");
    add_step(simulate, spec);
    simulate->add_option("--t-end", spec.t_end, "Years to integrate (default: dataset span)");

    auto* fit_cmd = app.add_subcommand("fit", "Estimate parameters from a census series");
    add_source(fit_cmd, spec);
    add_step(fit_cmd, spec);
    fit_cmd->add_option("--rounds", spec.rounds, "Refinement rounds");
    fit_cmd->add_option("--jobs", spec.jobs, "Worker threads (0 = all cores)");

    const std::pair<const char*, const char*> sweeps[] = {
        {"sweep-utility", "Sweep one language's utility"},
        {"sweep-bias", "Sweep beta or alpha - beta"},
        {"sweep-initial", "Sweep one language's initial fraction"},
    };
    for (const auto& [name, about] : sweeps) {
        auto* sweep = app.add_subcommand(name, about);
        add_source(sweep, spec);
        add_params(sweep, spec, "Majority preference", "Minority aversion (alpha - beta)");
        add_run(sweep, spec);
        sweep->add_option("--target", spec.target, "Language name, or beta|ma for sweep-bias");
        sweep->add_option("--values", spec.values, "Sweep grid lo:hi:count");
    }

    auto* phase = app.add_subcommand("phase", "Outcome over a (beta, alpha - beta) grid");
    add_source(phase, spec);
    add_params(phase, spec, "Beta grid lo:hi:count", "Alpha - beta grid lo:hi:count");
    add_run(phase, spec);

    auto* convergence = app.add_subcommand("convergence", "Steady state and convergence time");
    add_source(convergence, spec);
    add_params(convergence, spec, "Majority preference", "Minority aversion (alpha - beta)");
    add_run(convergence, spec);

    std::reverse(args.begin(), args.end());
    try {
        app.parse(args);
    } catch (const CLI::ParseError& e) {
        return app.exit(e, out, err) == 0 ? kExitOk : kExitUsage;
    }
    for (auto* sub : app.get_subcommands()) spec.command = sub->get_name();
    if (auto* sub = app.get_subcommand(spec.command)) {
        spec.has_step = sub->count("--step") > 0;
        spec.has_t_end = spec.command == "simulate" && sub->count("--t-end") > 0;
    }

    try {
        if (spec.command == "simulate") return cmd_simulate(spec, out);
        if (spec.command == "fit") return cmd_fit(spec, out);
        if (spec.command == "phase") return cmd_phase(spec, out);
        if (spec.command == "convergence") return cmd_convergence(spec, out, err);
        return cmd_sweep(spec, out);
    } catch (const UsageError& e) {
        err << "usage error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const ParseError& e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitRuntime;
    }
}

}  // namespace langcomp::cli
