#include "langcomp/analysis.hpp"

#include "langcomp/errors.hpp"
#include "langcomp/parallel.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <string>

namespace langcomp {
namespace {

void check_open_unit(double value, const char* what) {
    if (!(value > 0.0 && value < 1.0)) {
        throw DomainError(std::string(what) + " must lie in (0, 1), got " + std::to_string(value));
    }
}

// Shared proportional-rescale rule for utilities and fractions.
std::vector<double> rescale_others(std::vector<double> v, std::size_t target, double value,
                                   const char* what) {
    if (target >= v.size()) throw DomainError("target index out of range");
    check_open_unit(value, what);
    const double old = v[target];
    if (!(old < 1.0)) {
        throw DomainError(std::string(what) + ": target already holds the whole simplex");
    }
    const double scale = (1.0 - value) / (1.0 - old);
    for (std::size_t i = 0; i < v.size(); ++i) {
        v[i] = (i == target) ? value : v[i] * scale;
    }
    return v;
}

}  // namespace

std::string_view to_string(OutcomeKind kind) noexcept {
    return kind == OutcomeKind::dominance ? "dominance" : "coexistence";
}

Outcome classify(const StateVector& x_star, double extinction_threshold) {
    x_star.validate();
    const std::size_t n = x_star.size();
    if (!(extinction_threshold > 0.0 && extinction_threshold < 1.0 / static_cast<double>(n))) {
        throw DomainError("extinction_threshold must lie in (0, 1/n)");
    }
    Outcome out;
    out.final_state = x_star;
    for (std::size_t i = 0; i < n; ++i) {
        (x_star[i] < extinction_threshold ? out.extinct : out.survivors).push_back(i);
        if (x_star[i] > x_star[out.most_popular]) out.most_popular = i;
    }
    // Simplex membership and threshold < 1/n guarantee a survivor.
    assert(!out.survivors.empty());
    if (out.survivors.size() == 1) {
        out.kind = OutcomeKind::dominance;
        out.dominant = out.most_popular;
    } else {
        out.kind = OutcomeKind::coexistence;
    }
    return out;
}

ModelParams set_utility(const ModelParams& params, std::size_t target, double value) {
    params.validate();
    ModelParams out = params;
    out.utilities = rescale_others(params.utilities, target, value, "utility");
    return out;
}

StateVector set_fraction(const StateVector& x, std::size_t target, double value) {
    x.validate();
    return StateVector{rescale_others(x.fractions, target, value, "initial fraction")};
}

ConvergenceOptions RunOptions::convergence() const {
    return {step, t_max, band_delta, derivative_tolerance, record_interval};
}

SweepPoint evaluate_point(double swept_value, const ModelParams& params, const StateVector& x0,
                          const RunOptions& opts) {
    SweepPoint p;
    p.swept_value = swept_value;
    p.effective_params = params;
    p.x0 = x0;
    auto run = measure_convergence(params, x0, opts.convergence());
    p.converged = run.steady.converged;
    p.final_state = std::move(run.steady.final_state);
    p.convergence_time = run.tau;
    if (p.converged) p.outcome = classify(p.final_state, opts.extinction_threshold);
    return p;
}

std::vector<SweepPoint> utility_sweep(const ModelParams& base, const StateVector& x0,
                                      std::size_t target, std::span<const double> values,
                                      const RunOptions& opts) {
    base.validate();
    x0.validate_for(base);
    std::vector<ModelParams> variants;
    variants.reserve(values.size());
    for (double v : values) variants.push_back(set_utility(base, target, v));
    return parallel_map(values.size(), opts.jobs, [&](std::size_t i) {
        return evaluate_point(values[i], variants[i], x0, opts);
    });
}

std::vector<SweepPoint> bias_sweep(const ModelParams& base, const StateVector& x0, Bias which,
                                   std::span<const double> values, const RunOptions& opts) {
    base.validate();
    x0.validate_for(base);
    for (double v : values) {
        if (!(v >= 0.0) || !std::isfinite(v)) throw DomainError("bias values must be >= 0");
    }
    return parallel_map(values.size(), opts.jobs, [&](std::size_t i) {
        ModelParams p = base;
        (which == Bias::beta ? p.beta : p.minority_aversion) = values[i];
        return evaluate_point(values[i], p, x0, opts);
    });
}

std::vector<SweepPoint> initial_fraction_sweep(const ModelParams& params,
                                               const StateVector& x0_base, std::size_t target,
                                               std::span<const double> values,
                                               const RunOptions& opts) {
    params.validate();
    x0_base.validate_for(params);
    std::vector<StateVector> starts;
    starts.reserve(values.size());
    for (double v : values) starts.push_back(set_fraction(x0_base, target, v));
    return parallel_map(values.size(), opts.jobs, [&](std::size_t i) {
        return evaluate_point(values[i], params, starts[i], opts);
    });
}

PhaseDiagram phase_diagram(const ModelParams& base, const StateVector& x0,
                           std::span<const double> beta_grid, std::span<const double> ma_grid,
                           const RunOptions& opts) {
    base.validate();
    x0.validate_for(base);
    if (beta_grid.empty() || ma_grid.empty()) throw DomainError("phase grids must be nonempty");
    for (auto grid : {beta_grid, ma_grid}) {
        for (double v : grid) {
            if (!(v >= 0.0) || !std::isfinite(v)) throw DomainError("phase grid values must be >= 0");
        }
    }
    const std::size_t cols = ma_grid.size();
    const SteadyStateOptions steady{opts.step, opts.t_max, opts.derivative_tolerance};
    auto flat = parallel_map(beta_grid.size() * cols, opts.jobs, [&](std::size_t idx) {
        PhaseCell cell{beta_grid[idx / cols], ma_grid[idx % cols], std::nullopt};
        ModelParams p = base;
        p.beta = cell.beta;
        p.minority_aversion = cell.minority_aversion;
        const auto res = find_steady_state(p, x0, steady);
        if (res.converged) {
            const auto o = classify(res.final_state, opts.extinction_threshold);
            cell.label = PhaseLabel{o.most_popular, o.kind};
        }
        return cell;
    });
    PhaseDiagram out(beta_grid.size());
    for (std::size_t i = 0; i < beta_grid.size(); ++i) {
        out[i].assign(flat.begin() + static_cast<std::ptrdiff_t>(i * cols),
                      flat.begin() + static_cast<std::ptrdiff_t>((i + 1) * cols));
    }
    return out;
}

std::vector<double> linear_grid(double lo, double hi, std::size_t count) {
    if (count == 0) throw DomainError("grid count must be >= 1");
    if (count == 1) return {lo};
    std::vector<double> v(count);
    for (std::size_t i = 0; i < count; ++i) {
        v[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(count - 1);
    }
    v.back() = hi;
    return v;
}

}  // namespace langcomp
