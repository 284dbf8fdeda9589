#pragma once

// Plot-ready output files.
//
// CSV layouts:
//   trajectory   t,<lang1>,...,<langN>
//   sweep        swept_value,<lang1>_star,...,<langN>_star,kind,most_popular,convergence_time
//   phase        beta,minority_aversion,most_popular,kind
//   fit          beta,minority_aversion,<lang1>,...,<langN>,error_d,rounds_performed,evaluations
//   convergence  tau,steady_time,<lang1>_star,...,<langN>_star,kind,most_popular
//
// JSON files carry the same fields as objects plus a top-level
// "schema_version": 1. Numbers use the shortest decimal form that round-trips.
// Language labels are names; unresolved (non-converged) entries are labelled
// "unresolved".

#include "langcomp/analysis.hpp"
#include "langcomp/fitting.hpp"
#include "langcomp/integrator.hpp"

#include <filesystem>
#include <istream>
#include <string>
#include <string_view>
#include <vector>

namespace langcomp {

enum class Format { csv, json };

/// Parses "csv" or "json"; throws DomainError otherwise.
[[nodiscard]] Format parse_format(std::string_view name);

/// Shortest round-trip decimal representation.
[[nodiscard]] std::string format_number(double v);

[[nodiscard]] std::string render(const Trajectory& traj, Format format);
[[nodiscard]] std::string render(const std::vector<SweepPoint>& sweep,
                                 const std::vector<std::string>& language_names, Format format);
[[nodiscard]] std::string render(const PhaseDiagram& diagram,
                                 const std::vector<std::string>& language_names, Format format);
[[nodiscard]] std::string render(const FitResult& fit, Format format);

/// Single steady-state run summary (the `convergence` command).
struct ConvergenceReport {
    std::vector<std::string> language_names;
    ConvergenceResult result;
    double extinction_threshold = kDefaultExtinctionThreshold;
};
[[nodiscard]] std::string render(const ConvergenceReport& report, Format format);

/// Writes `content` to `destination`; throws IoError naming the path.
void write_file(const std::filesystem::path& destination, std::string_view content);

template <typename... Args>
void export_results(const std::filesystem::path& destination, Format format, const Args&... args) {
    write_file(destination, render(args..., format));
}

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    /// Column position by name; throws DomainError if absent.
    [[nodiscard]] std::size_t column(std::string_view name) const;
};

/// Minimal reader for the files written here (no quoting).
[[nodiscard]] CsvTable read_csv_table(std::istream& in);

/// Reads back a trajectory CSV. Params are left default-constructed except
/// for the language names.
[[nodiscard]] Trajectory read_trajectory_csv(std::istream& in);

}  // namespace langcomp
