#include "langcomp/dataset.hpp"

#include "langcomp/errors.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numeric>
#include <set>
#include <sstream>
#include <string_view>

namespace langcomp {
namespace {

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split(std::string_view line) {
    std::vector<std::string_view> cells;
    std::size_t start = 0;
    for (;;) {
        const auto comma = line.find(',', start);
        cells.push_back(trim(line.substr(start, comma - start)));
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    return cells;
}

std::string where(std::size_t line_no, std::size_t column, const std::string& column_name) {
    return "line " + std::to_string(line_no) + ", column " + std::to_string(column + 1) + " (" +
           column_name + ")";
}

}  // namespace

void Dataset::validate() const {
    const std::size_t n = language_names.size();
    if (n < 2) throw DomainError("dataset '" + name + "' needs at least two languages");
    if (years.size() < 2) throw DomainError("dataset '" + name + "' needs at least two rows");
    if (fractions.size() != years.size()) throw DomainError("dataset rows and years differ in count");
    for (std::size_t r = 0; r < years.size(); ++r) {
        if (r > 0 && years[r] <= years[r - 1]) {
            throw DomainError("dataset years must be strictly increasing");
        }
        if (fractions[r].size() != n) throw DomainError("dataset row has wrong width");
        double sum = 0.0;
        for (double v : fractions[r]) {
            if (!(v >= 0.0)) throw DomainError("dataset entries must be >= 0");
            sum += v;
        }
        if (std::abs(sum - 1.0) > 1e-6) {
            throw DomainError("dataset row for year " + std::to_string(years[r]) +
                              " does not sum to 1");
        }
    }
}

Dataset normalize(Dataset d) {
    for (std::size_t r = 0; r < d.fractions.size(); ++r) {
        auto& row = d.fractions[r];
        const double sum = std::accumulate(row.begin(), row.end(), 0.0);
        if (std::any_of(row.begin(), row.end(), [](double v) { return !(v >= 0.0); })) {
            throw DomainError("row " + std::to_string(r) + " has a negative entry");
        }
        if (!(sum > 0.0) || !std::isfinite(sum)) {
            throw DomainError("row " + std::to_string(r) + " cannot be normalized (sum " +
                              std::to_string(sum) + ")");
        }
        for (double& v : row) v /= sum;
    }
    return d;
}

Dataset parse_dataset(std::istream& in, std::string name) {
    Dataset d;
    d.name = std::move(name);
    std::string line;
    std::size_t line_no = 0;
    bool have_header = false;
    std::size_t pending_blank = 0;  // blank lines are only tolerated at end of input
    while (std::getline(in, line)) {
        ++line_no;
        const auto content = trim(line);
        if (!have_header && (content.empty() || content.front() == '#')) continue;
        if (content.empty()) {
            if (pending_blank == 0) pending_blank = line_no;
            continue;
        }
        if (pending_blank != 0) {
            throw ParseError(d.name + ": empty row at line " + std::to_string(pending_blank));
        }
        const auto cells = split(content);
        if (!have_header) {
            if (cells.front() != "year") {
                throw ParseError(d.name + ": header at line " + std::to_string(line_no) +
                                 " must start with 'year'");
            }
            std::set<std::string_view> seen;
            for (std::size_t c = 1; c < cells.size(); ++c) {
                if (cells[c].empty() || !seen.insert(cells[c]).second) {
                    throw ParseError(d.name + ": empty or duplicate language name in header, " +
                                     where(line_no, c, std::string(cells[c])));
                }
                d.language_names.emplace_back(cells[c]);
            }
            if (d.language_names.size() < 2) {
                throw ParseError(d.name + ": header needs at least two language columns");
            }
            have_header = true;
            continue;
        }
        if (cells.size() != d.language_names.size() + 1) {
            throw ParseError(d.name + ": line " + std::to_string(line_no) + " has " +
                             std::to_string(cells.size()) + " cells, expected " +
                             std::to_string(d.language_names.size() + 1));
        }
        int year = 0;
        const auto y = cells[0];
        auto [yp, yec] = std::from_chars(y.data(), y.data() + y.size(), year);
        if (yec != std::errc{} || yp != y.data() + y.size()) {
            throw ParseError(d.name + ": non-integer year at " + where(line_no, 0, "year"));
        }
        if (!d.years.empty() && year <= d.years.back()) {
            throw ParseError(d.name + ": year " + std::to_string(year) + " at line " +
                             std::to_string(line_no) + " does not increase");
        }
        std::vector<double> row;
        row.reserve(d.language_names.size());
        for (std::size_t c = 1; c < cells.size(); ++c) {
            const auto cell = cells[c];
            const auto& col = d.language_names[c - 1];
            if (cell.empty()) {
                throw ParseError(d.name + ": empty cell at " + where(line_no, c, col));
            }
            double v = 0.0;
            auto [p, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
            if (ec != std::errc{} || p != cell.data() + cell.size() || !std::isfinite(v)) {
                throw ParseError(d.name + ": non-numeric value '" + std::string(cell) + "' at " +
                                 where(line_no, c, col));
            }
            if (v < 0.0) {
                throw ParseError(d.name + ": negative value at " + where(line_no, c, col));
            }
            row.push_back(v);
        }
        if (std::accumulate(row.begin(), row.end(), 0.0) <= 0.0) {
            throw ParseError(d.name + ": row at line " + std::to_string(line_no) +
                             " sums to zero and cannot be normalized");
        }
        d.years.push_back(year);
        d.fractions.push_back(std::move(row));
    }
    if (!have_header) throw ParseError(d.name + ": missing header");
    if (d.years.size() < 2) throw ParseError(d.name + ": need at least two data rows");
    d = normalize(std::move(d));
    d.validate();
    return d;
}

Dataset parse_dataset(const std::string& text, std::string name) {
    std::istringstream in(text);
    return parse_dataset(in, std::move(name));
}

Dataset load_dataset(const std::filesystem::path& source) {
    std::ifstream in(source);
    if (!in) throw IoError("cannot open dataset " + source.string());
    return parse_dataset(in, source.string());
}

std::size_t language_index(const std::vector<std::string>& names, const std::string& name) {
    const auto it = std::find(names.begin(), names.end(), name);
    if (it == names.end()) throw DomainError("unknown language '" + name + "'");
    return static_cast<std::size_t>(it - names.begin());
}

}  // namespace langcomp
