#pragma once

#include "langcomp/dataset.hpp"
#include "langcomp/model.hpp"

#include <cstddef>
#include <utility>
#include <vector>

namespace langcomp {

using Matrix = std::vector<std::vector<double>>;

struct Range {
    double lo = 0.0;
    double hi = 0.0;
    [[nodiscard]] double width() const noexcept { return hi - lo; }
};

struct FitConfig {
    Range beta_range{0.0, 2.0};
    Range ma_range{0.0, 2.0};
    double simplex_step = 0.05;
    std::size_t rounds = 4;
    double shrink_factor = 0.5;
    std::size_t grid_points_per_axis = 21;
    /// Local minima of the first-round grid that are refined independently.
    std::size_t starts = 4;
    /// Integration step used when predicting observations.
    double step = 0.1;
    std::size_t jobs = 0;  ///< 0 = available parallelism

    /// Throws ConfigError on invalid settings.
    void validate() const;
};

struct FitResult {
    ModelParams params;
    double error_d = 0.0;
    std::size_t rounds_performed = 0;
    std::size_t evaluations = 0;
    std::vector<double> round_errors;  ///< incumbent D after each round
};

/// Sum over observation times of the Euclidean norm of the residual row.
[[nodiscard]] double objective_d(const Matrix& predicted, const Matrix& observed);

/// Integrates from the first observed row and samples at each observation
/// year, with t = year - first_year.
[[nodiscard]] Matrix predict_at_observations(const ModelParams& params, const Dataset& dataset,
                                             double step = 0.01);

/// Every vector of positive multiples of `step` summing to 1, ascending
/// lexicographic order. 1/step must be an integer within 1e-12.
[[nodiscard]] std::vector<std::vector<double>> simplex_grid(std::size_t n, double step);

/// Range-narrowing grid search over (beta, alpha - beta, utilities).
///
/// Round 1 scores the full (beta, alpha - beta) grid against the whole utility
/// lattice. The best `starts` local minima of that map are then refined
/// independently: each round shrinks the exponent ranges around the chain's
/// incumbent, halves the lattice step and searches a utility window around
/// the incumbent. The best chain wins; ties go to the lexicographically
/// smallest (D, beta, alpha - beta, utilities).
[[nodiscard]] FitResult fit(const Dataset& dataset, const FitConfig& config = {});

}  // namespace langcomp
