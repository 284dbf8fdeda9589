#pragma once

#include "langcomp/model.hpp"

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <vector>

namespace langcomp {

inline constexpr double kDefaultStep = 0.01;
inline constexpr double kDefaultTMax = 1e6;
inline constexpr double kDefaultDerivativeTolerance = 1e-9;
inline constexpr double kDefaultBandDelta = 1e-4;
/// Largest clamp-and-renormalize correction tolerated after one step.
inline constexpr double kRenormalizationBudget = 1e-9;

struct Trajectory {
    std::vector<double> times;
    std::vector<StateVector> states;
    ModelParams params;

    [[nodiscard]] std::size_t size() const noexcept { return times.size(); }
};

/// Called with (t, x) for each recorded point, on the integrating thread.
using ProgressCallback = std::function<void(double, std::span<const double>)>;

/// Fixed-step RK4 from t = 0 to t_end, recording (0, x0) and then every
/// `record_every`-th step. The final step is always recorded.
[[nodiscard]] Trajectory integrate(const ModelParams& params, const StateVector& x0, double t_end,
                                   double step = kDefaultStep, std::size_t record_every = 1,
                                   const ProgressCallback& progress = {});

/// States at the requested times (ascending, >= 0), integrating with fixed
/// steps of at most `step` and landing exactly on each sample time.
[[nodiscard]] std::vector<StateVector> sample_at(const ModelParams& params, const StateVector& x0,
                                                 std::span<const double> times,
                                                 double step = kDefaultStep);

/// Called after each sample with its index and state; returning false stops
/// the integration early.
using SampleVisitor = std::function<bool(std::size_t, std::span<const double>)>;

/// As sample_at, streaming. Returns the number of samples visited.
std::size_t visit_samples(const ModelParams& params, const StateVector& x0,
                          std::span<const double> times, double step, const SampleVisitor& visit);

struct SteadyStateOptions {
    double step = kDefaultStep;
    double t_max = kDefaultTMax;
    double derivative_tolerance = kDefaultDerivativeTolerance;
};

struct SteadyStateResult {
    StateVector final_state;
    bool converged = false;
    /// Time at which ||dx/dt||_inf first dropped below tolerance; empty when not converged.
    std::optional<double> convergence_time;
    std::size_t steps_taken = 0;
};

[[nodiscard]] SteadyStateResult find_steady_state(const ModelParams& params, const StateVector& x0,
                                                  const SteadyStateOptions& opts = {});

struct ConvergenceOptions {
    double step = kDefaultStep;
    double t_max = kDefaultTMax;
    double band_delta = kDefaultBandDelta;
    double derivative_tolerance = kDefaultDerivativeTolerance;
    /// Spacing of the recorded points used by the last-exit scan, in years.
    double record_interval = 1.0;
};

/// Steady state plus last-exit convergence time from one integration pass.
struct ConvergenceResult {
    SteadyStateResult steady;
    std::optional<double> tau;  ///< empty when the run did not converge
};

/// Runs to steady state and measures tau: the earliest recorded time after
/// which every recorded state stays within band_delta (sup norm) of the
/// final state. Non-convergence yields an empty tau.
[[nodiscard]] ConvergenceResult measure_convergence(const ModelParams& params, const StateVector& x0,
                                                    const ConvergenceOptions& opts = {});

/// As measure_convergence, but throws ConvergenceError when t_max is reached.
[[nodiscard]] double convergence_time(const ModelParams& params, const StateVector& x0,
                                      const ConvergenceOptions& opts = {});

}  // namespace langcomp
