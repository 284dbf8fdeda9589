#pragma once

// Multi-language Abrams-Strogatz competition model.
//
// A speaker of language `src` adopts language `dest` at the per-capita rate
//
//     rate(src -> dest) = s_dest * x_dest^beta * (1 - x_src)^(alpha - beta)
//
// and the fractions evolve as
//
//     dx_i/dt = sum_{j != i} x_j * rate(j -> i) - x_i * sum_{j != i} rate(i -> j).
//
// Adoption of i is driven by i's own utility and size, which reduces to the
// classical two-language form s * x^alpha. alpha is never stored; callers
// always pass (beta, alpha - beta).

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace langcomp {

inline constexpr double kSimplexTolerance = 1e-9;
/// Roundoff excursions outside [0, 1] up to this size are clamped silently.
inline constexpr double kClampTolerance = 1e-12;

struct ModelParams {
    double beta = 0.0;               ///< majority preference
    double minority_aversion = 0.0;  ///< alpha - beta
    std::vector<double> utilities;
    std::vector<std::string> language_names;

    [[nodiscard]] std::size_t size() const noexcept { return utilities.size(); }
    [[nodiscard]] double alpha() const noexcept { return beta + minority_aversion; }

    /// Throws DomainError if any invariant is violated.
    void validate() const;

    /// Builds and validates. Names default to "L0", "L1", ... when omitted.
    static ModelParams make(double beta, double minority_aversion, std::vector<double> utilities,
                            std::vector<std::string> names = {});
};

struct StateVector {
    std::vector<double> fractions;

    [[nodiscard]] std::size_t size() const noexcept { return fractions.size(); }
    [[nodiscard]] double operator[](std::size_t i) const { return fractions[i]; }

    void validate() const;
    void validate_for(const ModelParams& params) const;
};

/// Per-capita rate at which a speaker of `src` adopts `dest`.
[[nodiscard]] double transition_rate(const ModelParams& params, std::span<const double> x,
                                     std::size_t dest, std::size_t src);

/// Right-hand side dx/dt. Validates inputs.
[[nodiscard]] std::vector<double> derivative(const ModelParams& params, std::span<const double> x);

namespace detail {

/// Reusable buffers for derivative evaluation inside integration loops.
struct RateWorkspace {
    std::vector<double> majority;  // x_i^beta
    std::vector<double> aversion;  // (1 - x_i)^(alpha - beta)
};

/// Unchecked evaluation of the right-hand side. Components are clamped to
/// [0, 1] before exponentiation; `out` must already have size n.
void derivative_into(const ModelParams& params, std::span<const double> x, std::span<double> out,
                     RateWorkspace& ws);

}  // namespace detail

}  // namespace langcomp
