#pragma once

// Census time series: loading, validation and normalization.
//
// CSV contract (UTF-8, comma separated):
//
//     # optional comment lines
//     year,English,Dialect,Mandarin
//     1957,0.02368,0.975,0.00132
//     ...
//
// Cells may be fractions or raw counts; every row is divided by its sum.

#include "langcomp/model.hpp"

#include <cstddef>
#include <filesystem>
#include <istream>
#include <string>
#include <vector>

namespace langcomp {

struct Dataset {
    std::string name;
    std::vector<std::string> language_names;
    std::vector<int> years;
    std::vector<std::vector<double>> fractions;  ///< [row][language]

    [[nodiscard]] std::size_t language_count() const noexcept { return language_names.size(); }
    [[nodiscard]] std::size_t row_count() const noexcept { return years.size(); }
    [[nodiscard]] StateVector row(std::size_t i) const { return StateVector{fractions.at(i)}; }

    /// Throws DomainError if the dataset violates its invariants.
    void validate() const;
};

/// Divides every row by its sum. Throws DomainError for negative entries or zero rows.
[[nodiscard]] Dataset normalize(Dataset d);

[[nodiscard]] Dataset parse_dataset(std::istream& in, std::string name);
[[nodiscard]] Dataset parse_dataset(const std::string& text, std::string name);
[[nodiscard]] Dataset load_dataset(const std::filesystem::path& source);

/// Index of `name` among the dataset's languages; throws DomainError if absent.
[[nodiscard]] std::size_t language_index(const std::vector<std::string>& names,
                                         const std::string& name);

}  // namespace langcomp
