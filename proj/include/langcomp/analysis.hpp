#pragma once

// Steady-state classification and the sweep experiments built on it.

#include "langcomp/integrator.hpp"
#include "langcomp/model.hpp"

#include <cstddef>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

namespace langcomp {

inline constexpr double kDefaultExtinctionThreshold = 1e-3;

enum class OutcomeKind { dominance, coexistence };

[[nodiscard]] std::string_view to_string(OutcomeKind kind) noexcept;

struct Outcome {
    OutcomeKind kind = OutcomeKind::coexistence;
    std::vector<std::size_t> survivors;
    std::vector<std::size_t> extinct;
    std::size_t most_popular = 0;        ///< argmax, ties to the lowest index
    std::optional<std::size_t> dominant; ///< set iff kind == dominance
    StateVector final_state;
};

/// Language i is extinct iff x_i < extinction_threshold.
[[nodiscard]] Outcome classify(const StateVector& x_star,
                               double extinction_threshold = kDefaultExtinctionThreshold);

/// Sets s_target = value and rescales the other utilities proportionally.
[[nodiscard]] ModelParams set_utility(const ModelParams& params, std::size_t target, double value);

/// Same rescaling rule applied to speaker fractions.
[[nodiscard]] StateVector set_fraction(const StateVector& x, std::size_t target, double value);

struct RunOptions {
    double step = kDefaultStep;
    double t_max = kDefaultTMax;
    double derivative_tolerance = kDefaultDerivativeTolerance;
    double band_delta = kDefaultBandDelta;
    double record_interval = 1.0;
    double extinction_threshold = kDefaultExtinctionThreshold;
    std::size_t jobs = 0;  ///< 0 = available parallelism

    [[nodiscard]] ConvergenceOptions convergence() const;
};

struct SweepPoint {
    double swept_value = 0.0;
    ModelParams effective_params;
    StateVector x0;
    bool converged = false;
    StateVector final_state;
    std::optional<Outcome> outcome;           ///< empty when the run did not converge
    std::optional<double> convergence_time;   ///< last-exit tau
};

/// One steady-state run, classified. Sweeps are assembled from these.
[[nodiscard]] SweepPoint evaluate_point(double swept_value, const ModelParams& params,
                                        const StateVector& x0, const RunOptions& opts);

[[nodiscard]] std::vector<SweepPoint> utility_sweep(const ModelParams& base, const StateVector& x0,
                                                    std::size_t target,
                                                    std::span<const double> values,
                                                    const RunOptions& opts = {});

enum class Bias { beta, minority_aversion };

[[nodiscard]] std::vector<SweepPoint> bias_sweep(const ModelParams& base, const StateVector& x0,
                                                 Bias which, std::span<const double> values,
                                                 const RunOptions& opts = {});

[[nodiscard]] std::vector<SweepPoint> initial_fraction_sweep(const ModelParams& params,
                                                             const StateVector& x0_base,
                                                             std::size_t target,
                                                             std::span<const double> values,
                                                             const RunOptions& opts = {});

struct PhaseLabel {
    std::size_t most_popular = 0;
    OutcomeKind kind = OutcomeKind::coexistence;
    friend bool operator==(const PhaseLabel&, const PhaseLabel&) = default;
};

struct PhaseCell {
    double beta = 0.0;
    double minority_aversion = 0.0;
    std::optional<PhaseLabel> label;  ///< empty = unresolved (no convergence)
};

/// cells[i][j] is (beta_grid[i], ma_grid[j]).
using PhaseDiagram = std::vector<std::vector<PhaseCell>>;

[[nodiscard]] PhaseDiagram phase_diagram(const ModelParams& base, const StateVector& x0,
                                         std::span<const double> beta_grid,
                                         std::span<const double> ma_grid,
                                         const RunOptions& opts = {});

/// `count` evenly spaced values from lo to hi inclusive (count = 1 gives lo).
[[nodiscard]] std::vector<double> linear_grid(double lo, double hi, std::size_t count);

}  // namespace langcomp
