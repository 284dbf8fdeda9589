#include "langcomp/export.hpp"

#include "langcomp/errors.hpp"

#include <json.hpp>

#include <charconv>
#include <fstream>
#include <sstream>

namespace langcomp {
namespace {

using Json = nlohmann::ordered_json;

constexpr int kSchemaVersion = 1;
constexpr std::string_view kUnresolved = "unresolved";

std::string label_name(const std::vector<std::string>& names, std::size_t i) {
    return i < names.size() ? names[i] : "L" + std::to_string(i);
}

Json state_json(const StateVector& x) { return Json(x.fractions); }

Json number_or_null(const std::optional<double>& v) { return v ? Json(*v) : Json(nullptr); }

std::string join_header(std::string_view first, const std::vector<std::string>& names,
                        std::string_view suffix) {
    std::string h(first);
    for (const auto& n : names) {
        h += ',';
        h += n;
        h += suffix;
    }
    return h;
}

void append_state(std::string& line, const StateVector& x) {
    for (double v : x.fractions) {
        line += ',';
        line += format_number(v);
    }
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

std::string trajectory_csv(const Trajectory& traj) {
    std::string out = join_header("t", traj.params.language_names, "") + "\n";
    for (std::size_t k = 0; k < traj.size(); ++k) {
        out += format_number(traj.times[k]);
        append_state(out, traj.states[k]);
        out += '\n';
    }
    return out;
}

std::string sweep_csv(const std::vector<SweepPoint>& sweep, const std::vector<std::string>& names) {
    std::string out = join_header("swept_value", names, "_star");
    out += ",kind,most_popular,convergence_time\n";
    for (const auto& p : sweep) {
        out += format_number(p.swept_value);
        append_state(out, p.final_state);
        if (p.outcome) {
            out += ',';
            out += to_string(p.outcome->kind);
            out += ',';
            out += label_name(names, p.outcome->most_popular);
        } else {
            out += ',';
            out += kUnresolved;
            out += ',';
            out += kUnresolved;
        }
        out += ',';
        if (p.convergence_time) out += format_number(*p.convergence_time);
        out += '\n';
    }
    return out;
}

Json sweep_json(const std::vector<SweepPoint>& sweep, const std::vector<std::string>& names) {
    Json points = Json::array();
    for (const auto& p : sweep) {
        Json j;
        j["swept_value"] = p.swept_value;
        j["final_state"] = state_json(p.final_state);
        j["converged"] = p.converged;
        if (p.outcome) {
            j["kind"] = to_string(p.outcome->kind);
            j["most_popular"] = label_name(names, p.outcome->most_popular);
        } else {
            j["kind"] = kUnresolved;
            j["most_popular"] = kUnresolved;
        }
        j["convergence_time"] = number_or_null(p.convergence_time);
        j["beta"] = p.effective_params.beta;
        j["minority_aversion"] = p.effective_params.minority_aversion;
        j["utilities"] = p.effective_params.utilities;
        j["x0"] = state_json(p.x0);
        points.push_back(std::move(j));
    }
    Json root;
    root["schema_version"] = kSchemaVersion;
    root["type"] = "sweep";
    root["language_names"] = names;
    root["points"] = std::move(points);
    return root;
}

std::string phase_csv(const PhaseDiagram& diagram, const std::vector<std::string>& names) {
    std::string out = "beta,minority_aversion,most_popular,kind\n";
    for (const auto& row : diagram) {
        for (const auto& cell : row) {
            out += format_number(cell.beta);
            out += ',';
            out += format_number(cell.minority_aversion);
            out += ',';
            if (cell.label) {
                out += label_name(names, cell.label->most_popular);
                out += ',';
                out += to_string(cell.label->kind);
            } else {
                out += kUnresolved;
                out += ',';
                out += kUnresolved;
            }
            out += '\n';
        }
    }
    return out;
}

Json phase_json(const PhaseDiagram& diagram, const std::vector<std::string>& names) {
    Json cells = Json::array();
    for (const auto& row : diagram) {
        for (const auto& cell : row) {
            Json j;
            j["beta"] = cell.beta;
            j["minority_aversion"] = cell.minority_aversion;
            j["most_popular"] =
                cell.label ? label_name(names, cell.label->most_popular) : std::string(kUnresolved);
            j["kind"] = cell.label ? std::string(to_string(cell.label->kind))
                                   : std::string(kUnresolved);
            cells.push_back(std::move(j));
        }
    }
    Json root;
    root["schema_version"] = kSchemaVersion;
    root["type"] = "phase";
    root["language_names"] = names;
    root["rows"] = diagram.size();
    root["columns"] = diagram.empty() ? 0 : diagram.front().size();
    root["cells"] = std::move(cells);
    return root;
}

std::vector<std::string> split(const std::string& line) {
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream ss(line);
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (!line.empty() && line.back() == ',') cells.emplace_back();
    return cells;
}

double parse_double(const std::string& s) {
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size()) {
        throw ParseError("not a number: '" + s + "'");
    }
    return v;
}

}  // namespace

Format parse_format(std::string_view name) {
    if (name == "csv") return Format::csv;
    if (name == "json") return Format::json;
    throw DomainError("unknown format '" + std::string(name) + "' (expected csv or json)");
}

std::string format_number(double v) {
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    if (ec != std::errc{}) throw NumericError("number formatting failed");
    return std::string(buf, ptr);
}

std::string render(const Trajectory& traj, Format format) {
    if (format == Format::csv) return trajectory_csv(traj);
    Json points = Json::array();
    for (std::size_t k = 0; k < traj.size(); ++k) {
        points.push_back(Json{{"t", traj.times[k]}, {"x", state_json(traj.states[k])}});
    }
    Json root;
    root["schema_version"] = kSchemaVersion;
    root["type"] = "trajectory";
    root["language_names"] = traj.params.language_names;
    root["beta"] = traj.params.beta;
    root["minority_aversion"] = traj.params.minority_aversion;
    root["utilities"] = traj.params.utilities;
    root["points"] = std::move(points);
    return dump(root);
}

std::string render(const std::vector<SweepPoint>& sweep, const std::vector<std::string>& names,
                   Format format) {
    return format == Format::csv ? sweep_csv(sweep, names) : dump(sweep_json(sweep, names));
}

std::string render(const PhaseDiagram& diagram, const std::vector<std::string>& names,
                   Format format) {
    return format == Format::csv ? phase_csv(diagram, names) : dump(phase_json(diagram, names));
}

std::string render(const FitResult& fit, Format format) {
    const auto& p = fit.params;
    if (format == Format::csv) {
        std::string out = join_header("beta,minority_aversion", p.language_names, "");
        out += ",error_d,rounds_performed,evaluations\n";
        out += format_number(p.beta) + ',' + format_number(p.minority_aversion);
        for (double s : p.utilities) out += ',' + format_number(s);
        out += ',' + format_number(fit.error_d) + ',' + std::to_string(fit.rounds_performed) + ',' +
               std::to_string(fit.evaluations) + '\n';
        return out;
    }
    Json root;
    root["schema_version"] = kSchemaVersion;
    root["type"] = "fit";
    root["language_names"] = p.language_names;
    root["beta"] = p.beta;
    root["minority_aversion"] = p.minority_aversion;
    root["utilities"] = p.utilities;
    root["error_d"] = fit.error_d;
    root["rounds_performed"] = fit.rounds_performed;
    root["evaluations"] = fit.evaluations;
    root["round_errors"] = fit.round_errors;
    return dump(root);
}

std::string render(const ConvergenceReport& report, Format format) {
    const auto& names = report.language_names;
    const auto& steady = report.result.steady;
    std::optional<Outcome> outcome;
    if (steady.converged) outcome = classify(steady.final_state, report.extinction_threshold);
    const std::string kind =
        outcome ? std::string(to_string(outcome->kind)) : std::string(kUnresolved);
    const std::string popular =
        outcome ? label_name(names, outcome->most_popular) : std::string(kUnresolved);

    if (format == Format::csv) {
        std::string out = "tau,steady_time";
        for (const auto& n : names) out += ',' + n + "_star";
        out += ",kind,most_popular\n";
        if (report.result.tau) out += format_number(*report.result.tau);
        out += ',';
        if (steady.convergence_time) out += format_number(*steady.convergence_time);
        append_state(out, steady.final_state);
        out += ',' + kind + ',' + popular + '\n';
        return out;
    }
    Json root;
    root["schema_version"] = kSchemaVersion;
    root["type"] = "convergence";
    root["language_names"] = names;
    root["converged"] = steady.converged;
    root["tau"] = number_or_null(report.result.tau);
    root["steady_time"] = number_or_null(steady.convergence_time);
    root["final_state"] = state_json(steady.final_state);
    root["kind"] = kind;
    root["most_popular"] = popular;
    return dump(root);
}

void write_file(const std::filesystem::path& destination, std::string_view content) {
    std::ofstream out(destination, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open '" + destination.string() + "' for writing");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.close();
    if (!out) throw IoError("write to '" + destination.string() + "' failed");
}

std::size_t CsvTable::column(std::string_view name) const {
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (header[i] == name) return i;
    }
    throw DomainError("no column named '" + std::string(name) + "'");
}

CsvTable read_csv_table(std::istream& in) {
    CsvTable table;
    std::string line;
    bool have_header = false;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (!have_header) {
            table.header = split(line);
            have_header = true;
            continue;
        }
        auto cells = split(line);
        if (cells.size() != table.header.size()) {
            throw ParseError("row " + std::to_string(table.rows.size() + 2) + " has " +
                             std::to_string(cells.size()) + " cells, header has " +
                             std::to_string(table.header.size()));
        }
        table.rows.push_back(std::move(cells));
    }
    if (!have_header) throw ParseError("empty CSV");
    return table;
}

Trajectory read_trajectory_csv(std::istream& in) {
    const auto table = read_csv_table(in);
    if (table.header.empty() || table.header.front() != "t") {
        throw ParseError("trajectory CSV must start with column 't'");
    }
    Trajectory traj;
    traj.params.language_names.assign(table.header.begin() + 1, table.header.end());
    for (const auto& row : table.rows) {
        traj.times.push_back(parse_double(row[0]));
        StateVector x;
        for (std::size_t i = 1; i < row.size(); ++i) x.fractions.push_back(parse_double(row[i]));
        traj.states.push_back(std::move(x));
    }
    return traj;
}

}  // namespace langcomp
