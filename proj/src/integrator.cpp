#include "langcomp/integrator.hpp"

#include "langcomp/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace langcomp {
namespace {

std::size_t step_count(double span, double step) {
    return static_cast<std::size_t>(std::ceil(span / step - 1e-9));
}

// k * step, computed exactly when 1/step is an integer so that recorded times
// land on round values.
double step_time(std::size_t k, double step) {
    const double per_unit = std::round(1.0 / step);
    if (per_unit >= 1.0 && std::abs(per_unit * step - 1.0) < 1e-12) {
        return static_cast<double>(k) / per_unit;
    }
    return static_cast<double>(k) * step;
}

double sup_norm(std::span<const double> v) {
    double m = 0.0;
    for (double e : v) {
        m = std::max(m, std::abs(e));
    }
    return m;
}

double sup_distance(std::span<const double> a, std::span<const double> b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        m = std::max(m, std::abs(a[i] - b[i]));
    }
    return m;
}

// Classic RK4 with per-step clamp-and-renormalize. rate() must be called on
// the current state before advance(); it doubles as the steady-state probe.
class Rk4Stepper {
public:
    explicit Rk4Stepper(const ModelParams& params)
        : params_(params),
          k1_(params.size()),
          k2_(params.size()),
          k3_(params.size()),
          k4_(params.size()),
          stage_(params.size()) {}

    std::span<const double> rate(std::span<const double> x) {
        detail::derivative_into(params_, x, k1_, ws_);
        return k1_;
    }

    void advance(std::vector<double>& x, double h, double t) {
        const std::size_t n = x.size();
        for (std::size_t i = 0; i < n; ++i) stage_[i] = x[i] + 0.5 * h * k1_[i];
        detail::derivative_into(params_, stage_, k2_, ws_);
        for (std::size_t i = 0; i < n; ++i) stage_[i] = x[i] + 0.5 * h * k2_[i];
        detail::derivative_into(params_, stage_, k3_, ws_);
        for (std::size_t i = 0; i < n; ++i) stage_[i] = x[i] + h * k3_[i];
        detail::derivative_into(params_, stage_, k4_, ws_);
        for (std::size_t i = 0; i < n; ++i) {
            stage_[i] = x[i] + h / 6.0 * (k1_[i] + 2.0 * k2_[i] + 2.0 * k3_[i] + k4_[i]);
        }
        renormalize(x, t);
    }

private:
    void renormalize(std::vector<double>& x, double t) {
        double sum = 0.0;
        for (double v : stage_) {
            if (!std::isfinite(v)) {
                throw NumericError("non-finite state at t = " + std::to_string(t));
            }
            sum += std::clamp(v, 0.0, 1.0);
        }
        double correction = 0.0;
        for (std::size_t i = 0; i < x.size(); ++i) {
            const double fixed = std::clamp(stage_[i], 0.0, 1.0) / sum;
            correction = std::max(correction, std::abs(fixed - stage_[i]));
            x[i] = fixed;
        }
        if (correction > kRenormalizationBudget) {
            throw StabilityError("renormalization correction " + std::to_string(correction) +
                                 " exceeds budget at t = " + std::to_string(t) +
                                 "; reduce the step size");
        }
    }

    const ModelParams& params_;
    std::vector<double> k1_, k2_, k3_, k4_, stage_;
    detail::RateWorkspace ws_;
};

void check_inputs(const ModelParams& params, const StateVector& x0, double step, double span,
                  const char* span_name) {
    params.validate();
    x0.validate_for(params);
    if (!(step > 0.0) || !std::isfinite(step)) {
        throw DomainError("step must be > 0");
    }
    if (!(span > 0.0)) {
        throw DomainError(std::string(span_name) + " must be > 0");
    }
}

// Shared steady-state loop. `record` sees (step index, x) every `record_every`
// steps and at the final step.
template <typename Record>
SteadyStateResult run_to_steady(const ModelParams& params, const StateVector& x0, double step,
                                double t_max, double tolerance, std::size_t record_every,
                                Record&& record) {
    Rk4Stepper stepper(params);
    std::vector<double> x = x0.fractions;
    const std::size_t max_steps = step_count(t_max, step);
    SteadyStateResult out;
    std::size_t k = 0;
    for (;; ++k) {
        const auto dx = stepper.rate(x);
        const bool done = sup_norm(dx) < tolerance;
        if (done || k == max_steps) {
            record(k, x);
            out.converged = done;
            if (done) out.convergence_time = step_time(k, step);
            break;
        }
        if (k % record_every == 0) record(k, x);
        stepper.advance(x, step, step_time(k, step));
    }
    out.final_state = StateVector{std::move(x)};
    out.steps_taken = k;
    return out;
}

}  // namespace

Trajectory integrate(const ModelParams& params, const StateVector& x0, double t_end, double step,
                     std::size_t record_every, const ProgressCallback& progress) {
    check_inputs(params, x0, step, t_end, "t_end");
    if (record_every == 0) {
        throw DomainError("record_every must be >= 1");
    }
    Trajectory traj{{}, {}, params};
    std::vector<double> x = x0.fractions;
    auto emit = [&](double t) {
        traj.times.push_back(t);
        traj.states.push_back(StateVector{x});
        if (progress) progress(t, x);
    };
    emit(0.0);
    Rk4Stepper stepper(params);
    const std::size_t n_steps = step_count(t_end, step);
    for (std::size_t k = 0; k < n_steps; ++k) {
        const double t = step_time(k, step);
        const double h = (k + 1 == n_steps) ? t_end - t : step;
        (void)stepper.rate(x);
        stepper.advance(x, h, t);
        if ((k + 1) % record_every == 0 || k + 1 == n_steps) {
            emit(k + 1 == n_steps ? t_end : step_time(k + 1, step));
        }
    }
    return traj;
}

std::size_t visit_samples(const ModelParams& params, const StateVector& x0,
                          std::span<const double> times, double step, const SampleVisitor& visit) {
    params.validate();
    x0.validate_for(params);
    if (!(step > 0.0) || !std::isfinite(step)) {
        throw DomainError("step must be > 0");
    }
    Rk4Stepper stepper(params);
    std::vector<double> x = x0.fractions;
    double t = 0.0;
    for (std::size_t i = 0; i < times.size(); ++i) {
        const double target = times[i];
        if (!(target >= t)) {
            throw DomainError("sample times must be ascending and >= 0");
        }
        // Fixed steps measured from the segment start so that integer-year
        // segments divide evenly.
        const std::size_t n_steps = target > t ? step_count(target - t, step) : 0;
        for (std::size_t k = 0; k < n_steps; ++k) {
            const double ts = t + static_cast<double>(k) * step;
            const double h = (k + 1 == n_steps) ? target - ts : step;
            (void)stepper.rate(x);
            stepper.advance(x, h, ts);
        }
        t = target;
        if (!visit(i, x)) return i + 1;
    }
    return times.size();
}

std::vector<StateVector> sample_at(const ModelParams& params, const StateVector& x0,
                                   std::span<const double> times, double step) {
    std::vector<StateVector> out;
    out.reserve(times.size());
    (void)visit_samples(params, x0, times, step, [&](std::size_t, std::span<const double> x) {
        out.push_back(StateVector{{x.begin(), x.end()}});
        return true;
    });
    return out;
}

SteadyStateResult find_steady_state(const ModelParams& params, const StateVector& x0,
                                    const SteadyStateOptions& opts) {
    check_inputs(params, x0, opts.step, opts.t_max, "t_max");
    return run_to_steady(params, x0, opts.step, opts.t_max, opts.derivative_tolerance,
                         std::numeric_limits<std::size_t>::max(),
                         [](std::size_t, const std::vector<double>&) {});
}

ConvergenceResult measure_convergence(const ModelParams& params, const StateVector& x0,
                                      const ConvergenceOptions& opts) {
    check_inputs(params, x0, opts.step, opts.t_max, "t_max");
    if (!(opts.band_delta > 0.0)) {
        throw DomainError("band_delta must be > 0");
    }
    const std::size_t every = std::max<std::size_t>(
        1, static_cast<std::size_t>(std::llround(opts.record_interval / opts.step)));
    const std::size_t n = params.size();
    std::vector<std::size_t> steps;
    std::vector<double> flat;
    ConvergenceResult out;
    out.steady = run_to_steady(params, x0, opts.step, opts.t_max, opts.derivative_tolerance, every,
                               [&](std::size_t k, const std::vector<double>& x) {
                                   steps.push_back(k);
                                   flat.insert(flat.end(), x.begin(), x.end());
                               });
    if (!out.steady.converged) {
        return out;
    }
    // Backward scan for the last recorded exit from the band around x*.
    const auto& star = out.steady.final_state.fractions;
    std::size_t first_inside = steps.size() - 1;
    while (first_inside > 0) {
        std::span<const double> prev(flat.data() + (first_inside - 1) * n, n);
        if (sup_distance(prev, star) > opts.band_delta) break;
        --first_inside;
    }
    out.tau = step_time(steps[first_inside], opts.step);
    return out;
}

double convergence_time(const ModelParams& params, const StateVector& x0,
                        const ConvergenceOptions& opts) {
    auto res = measure_convergence(params, x0, opts);
    if (!res.tau) {
        throw ConvergenceError("did not converge within t_max = " + std::to_string(opts.t_max) +
                               " years");
    }
    return *res.tau;
}

}  // namespace langcomp
