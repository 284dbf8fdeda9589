#include "langcomp/model.hpp"

#include "langcomp/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace langcomp {
namespace {

double clamp_unit(double v) {
    if (v < -kClampTolerance || v > 1.0 + kClampTolerance) {
        throw DomainError("fraction " + std::to_string(v) + " lies outside [0, 1]");
    }
    return std::clamp(v, 0.0, 1.0);
}

void check_simplex(std::span<const double> v, const char* what, bool strictly_positive) {
    double sum = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) {
        const double e = v[i];
        if (!std::isfinite(e)) {
            throw DomainError(std::string(what) + "[" + std::to_string(i) + "] is not finite");
        }
        if (strictly_positive ? e <= 0.0 : (e < -kClampTolerance || e > 1.0 + kClampTolerance)) {
            throw DomainError(std::string(what) + "[" + std::to_string(i) + "] = " +
                              std::to_string(e) + " is out of range");
        }
        sum += e;
    }
    if (std::abs(sum - 1.0) > kSimplexTolerance) {
        throw DomainError(std::string(what) + " sum to " + std::to_string(sum) + ", expected 1");
    }
}

}  // namespace

void ModelParams::validate() const {
    if (utilities.size() < 2) {
        throw DomainError("model needs at least two languages");
    }
    if (language_names.size() != utilities.size()) {
        throw DomainError("language_names and utilities differ in length");
    }
    if (!(beta >= 0.0) || !std::isfinite(beta)) {
        throw DomainError("beta must be a finite value >= 0");
    }
    if (!(minority_aversion >= 0.0) || !std::isfinite(minority_aversion)) {
        throw DomainError("minority_aversion must be a finite value >= 0");
    }
    check_simplex(utilities, "utilities", true);
}

ModelParams ModelParams::make(double beta, double minority_aversion, std::vector<double> utilities,
                              std::vector<std::string> names) {
    if (names.empty()) {
        for (std::size_t i = 0; i < utilities.size(); ++i) {
            names.push_back("L" + std::to_string(i));
        }
    }
    ModelParams p{beta, minority_aversion, std::move(utilities), std::move(names)};
    p.validate();
    return p;
}

void StateVector::validate() const {
    if (fractions.empty()) {
        throw DomainError("state vector is empty");
    }
    check_simplex(fractions, "fractions", false);
}

void StateVector::validate_for(const ModelParams& params) const {
    if (fractions.size() != params.size()) {
        throw DomainError("state has " + std::to_string(fractions.size()) + " components, model has " +
                          std::to_string(params.size()) + " languages");
    }
    validate();
}

double transition_rate(const ModelParams& params, std::span<const double> x, std::size_t dest,
                       std::size_t src) {
    const std::size_t n = params.size();
    if (dest >= n || src >= n) {
        throw DomainError("language index out of range");
    }
    if (dest == src) {
        throw DomainError("transition rate needs distinct source and destination");
    }
    if (x.size() != n) {
        throw DomainError("state size does not match model");
    }
    const double xd = clamp_unit(x[dest]);
    const double rest = clamp_unit(1.0 - x[src]);
    // std::pow(0, 0) == 1, which is the convention we want for zero exponents.
    return params.utilities[dest] * std::pow(xd, params.beta) *
           std::pow(rest, params.minority_aversion);
}

std::vector<double> derivative(const ModelParams& params, std::span<const double> x) {
    params.validate();
    StateVector{std::vector<double>(x.begin(), x.end())}.validate_for(params);
    std::vector<double> out(x.size());
    detail::RateWorkspace ws;
    detail::derivative_into(params, x, out, ws);
    return out;
}

namespace detail {

void derivative_into(const ModelParams& params, std::span<const double> x, std::span<double> out,
                     RateWorkspace& ws) {
    const std::size_t n = x.size();
    ws.majority.resize(n);
    ws.aversion.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double xi = std::clamp(x[i], 0.0, 1.0);
        ws.majority[i] = std::pow(xi, params.beta);
        ws.aversion[i] = std::pow(std::clamp(1.0 - x[i], 0.0, 1.0), params.minority_aversion);
    }
    const auto& s = params.utilities;
    for (std::size_t i = 0; i < n; ++i) {
        double gain = 0.0;
        double loss = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            if (j == i) {
                continue;
            }
            gain += x[j] * (s[i] * ws.majority[i] * ws.aversion[j]);
            loss += s[j] * ws.majority[j] * ws.aversion[i];
        }
        out[i] = gain - x[i] * loss;
    }
}

}  // namespace detail
}  // namespace langcomp
