#include "langcomp/fitting.hpp"

#include "langcomp/errors.hpp"
#include "langcomp/integrator.hpp"
#include "langcomp/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <tuple>

namespace langcomp {
namespace {

constexpr double kMinSimplexStep = 0.001;

std::size_t lattice_size(double step) {
    const double k = 1.0 / step;
    const double rounded = std::round(k);
    if (std::abs(k - rounded) > 1e-12 * std::max(1.0, k) || rounded < 1.0) {
        throw DomainError("simplex step " + std::to_string(step) + " does not divide 1");
    }
    return static_cast<std::size_t>(rounded);
}

// Compositions of `total` into counts.size() parts with lo[i] <= part i <= hi[i],
// emitted in ascending lexicographic order.
void compositions(std::size_t total, const std::vector<std::size_t>& lo,
                  const std::vector<std::size_t>& hi, std::vector<std::size_t>& parts,
                  std::size_t i, std::vector<std::vector<std::size_t>>& out) {
    const std::size_t n = lo.size();
    if (i + 1 == n) {
        if (total >= lo[i] && total <= hi[i]) {
            parts[i] = total;
            out.push_back(parts);
        }
        return;
    }
    for (std::size_t c = lo[i]; c <= std::min(hi[i], total); ++c) {
        parts[i] = c;
        compositions(total - c, lo, hi, parts, i + 1, out);
    }
}

std::vector<std::vector<double>> to_utilities(const std::vector<std::vector<std::size_t>>& counts,
                                              std::size_t k) {
    std::vector<std::vector<double>> out;
    out.reserve(counts.size());
    for (const auto& c : counts) {
        std::vector<double> s(c.size());
        for (std::size_t i = 0; i < c.size(); ++i) {
            s[i] = static_cast<double>(c[i]) / static_cast<double>(k);
        }
        out.push_back(std::move(s));
    }
    return out;
}

// Lattice points at spacing `step` within `radius` (sup norm) of `center`.
std::vector<std::vector<double>> simplex_window(const std::vector<double>& center, double step,
                                                double radius) {
    const std::size_t k = lattice_size(step);
    const std::size_t n = center.size();
    std::vector<std::size_t> lo(n), hi(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double c = center[i] * static_cast<double>(k);
        const double r = radius * static_cast<double>(k);
        lo[i] = static_cast<std::size_t>(std::max(1.0, std::ceil(c - r - 1e-9)));
        hi[i] = static_cast<std::size_t>(std::max(1.0, std::floor(c + r + 1e-9)));
    }
    std::vector<std::size_t> parts(n);
    std::vector<std::vector<std::size_t>> counts;
    compositions(k, lo, hi, parts, 0, counts);
    return to_utilities(counts, k);
}

std::vector<double> linspace(const Range& r, std::size_t count) {
    std::vector<double> v(count);
    for (std::size_t i = 0; i < count; ++i) {
        v[i] = r.lo + r.width() * static_cast<double>(i) / static_cast<double>(count - 1);
    }
    return v;
}

struct Candidate {
    double d = std::numeric_limits<double>::infinity();
    double beta = 0.0;
    double ma = 0.0;
    std::vector<double> utilities;
};

// Lower D wins; ties go to the lexicographically smallest (beta, ma, s).
bool better(const Candidate& a, const Candidate& b) {
    return std::tie(a.d, a.beta, a.ma, a.utilities) < std::tie(b.d, b.beta, b.ma, b.utilities);
}

bool same_point(const Candidate& a, const Candidate& b) {
    return a.beta == b.beta && a.ma == b.ma && a.utilities == b.utilities;
}

Range shrink_around(const Range& r, double center, double factor) {
    const double w = r.width() * factor;
    const double lo = std::max(0.0, center - 0.5 * w);
    return {lo, lo + w};
}

}  // namespace

void FitConfig::validate() const {
    for (const auto* r : {&beta_range, &ma_range}) {
        if (!(r->lo >= 0.0) || !(r->hi > r->lo) || !std::isfinite(r->hi)) {
            throw ConfigError("search ranges must satisfy 0 <= lo < hi");
        }
    }
    if (!(simplex_step > 0.0 && simplex_step <= 0.5)) {
        throw ConfigError("simplex_step must lie in (0, 0.5]");
    }
    try {
        (void)lattice_size(simplex_step);
    } catch (const DomainError& e) {
        throw ConfigError(e.what());
    }
    if (rounds < 1) throw ConfigError("rounds must be >= 1");
    if (!(shrink_factor > 0.0 && shrink_factor < 1.0)) {
        throw ConfigError("shrink_factor must lie in (0, 1)");
    }
    if (grid_points_per_axis < 2) throw ConfigError("grid_points_per_axis must be >= 2");
    if (starts < 1) throw ConfigError("starts must be >= 1");
    if (!(step > 0.0)) throw ConfigError("integration step must be > 0");
}

double objective_d(const Matrix& predicted, const Matrix& observed) {
    if (predicted.size() != observed.size()) {
        throw DomainError("objective_d: row counts differ");
    }
    double d = 0.0;
    for (std::size_t t = 0; t < observed.size(); ++t) {
        if (predicted[t].size() != observed[t].size()) {
            throw DomainError("objective_d: row " + std::to_string(t) + " widths differ");
        }
        double sq = 0.0;
        for (std::size_t i = 0; i < observed[t].size(); ++i) {
            const double r = predicted[t][i] - observed[t][i];
            sq += r * r;
        }
        d += std::sqrt(sq);
    }
    return d;
}

Matrix predict_at_observations(const ModelParams& params, const Dataset& dataset, double step) {
    dataset.validate();
    if (dataset.language_count() != params.size()) {
        throw DomainError("dataset has " + std::to_string(dataset.language_count()) +
                          " languages, model has " + std::to_string(params.size()));
    }
    std::vector<double> times;
    times.reserve(dataset.row_count());
    for (int y : dataset.years) times.push_back(static_cast<double>(y - dataset.years.front()));
    const auto states = sample_at(params, dataset.row(0), times, step);
    Matrix out;
    out.reserve(states.size());
    for (const auto& s : states) out.push_back(s.fractions);
    return out;
}

std::vector<std::vector<double>> simplex_grid(std::size_t n, double step) {
    if (n < 2) throw DomainError("simplex_grid needs n >= 2");
    const std::size_t k = lattice_size(step);
    if (k < n) return {};
    std::vector<std::size_t> lo(n, 1), hi(n, k - (n - 1));
    std::vector<std::size_t> parts(n);
    std::vector<std::vector<std::size_t>> counts;
    compositions(k, lo, hi, parts, 0, counts);
    return to_utilities(counts, k);
}

FitResult fit(const Dataset& dataset, const FitConfig& config) {
    config.validate();
    dataset.validate();
    const std::size_t n = dataset.language_count();

    std::vector<double> times;
    for (int y : dataset.years) times.push_back(static_cast<double>(y - dataset.years.front()));
    const StateVector x0 = dataset.row(0);

    // D of one candidate, or infinity as soon as the partial sum exceeds
    // `bound` (such a candidate cannot displace the incumbent).
    auto score = [&](double beta, double ma, const std::vector<double>& s, double bound) {
        try {
            const ModelParams p{beta, ma, s, dataset.language_names};
            double d = 0.0;
            const std::size_t seen = visit_samples(
                p, x0, times, config.step, [&](std::size_t t, std::span<const double> x) {
                    double sq = 0.0;
                    for (std::size_t i = 0; i < n; ++i) {
                        const double r = x[i] - dataset.fractions[t][i];
                        sq += r * r;
                    }
                    d += std::sqrt(sq);
                    return d <= bound;
                });
            return seen == times.size() && d <= bound ? d : std::numeric_limits<double>::infinity();
        } catch (const Error&) {
            return std::numeric_limits<double>::infinity();
        }
    };

    // Best candidate of every (beta, ma) cell. Each cell scans its utilities
    // in order, so pruning against the running cell minimum is deterministic.
    auto sweep_cells = [&](const std::vector<double>& beta_grid, const std::vector<double>& ma_grid,
                           const std::vector<std::vector<double>>& utilities, const Candidate& seed) {
        const std::size_t cols = ma_grid.size();
        return parallel_map(beta_grid.size() * cols, config.jobs, [&](std::size_t idx) {
            Candidate cell = seed;
            for (const auto& s : utilities) {
                Candidate c{0.0, beta_grid[idx / cols], ma_grid[idx % cols], s};
                c.d = score(c.beta, c.ma, s, cell.d);
                if (better(c, cell)) cell = std::move(c);
            }
            return cell;
        });
    };

    FitResult result;

    // Round 1: full grid, exact per-cell minima.
    const auto beta_grid = linspace(config.beta_range, config.grid_points_per_axis);
    const auto ma_grid = linspace(config.ma_range, config.grid_points_per_axis);
    const auto lattice = simplex_grid(n, config.simplex_step);
    if (lattice.empty()) {
        throw ConfigError("utility grid is empty for simplex_step " +
                          std::to_string(config.simplex_step));
    }
    const auto cells = sweep_cells(beta_grid, ma_grid, lattice, Candidate{});
    result.evaluations = cells.size() * lattice.size();

    // Refinement starts: the best local minima of the cell map.
    const std::size_t rows = beta_grid.size();
    const std::size_t cols = ma_grid.size();
    std::vector<Candidate> starts;
    for (std::size_t i = 0; i < rows; ++i) {
        for (std::size_t j = 0; j < cols; ++j) {
            const Candidate& c = cells[i * cols + j];
            if (!std::isfinite(c.d)) continue;
            bool minimal = true;
            for (std::size_t a = i > 0 ? i - 1 : 0; a <= std::min(i + 1, rows - 1); ++a) {
                for (std::size_t b = j > 0 ? j - 1 : 0; b <= std::min(j + 1, cols - 1); ++b) {
                    if ((a != i || b != j) && better(cells[a * cols + b], c)) minimal = false;
                }
            }
            if (minimal) starts.push_back(c);
        }
    }
    if (starts.empty()) {
        throw ConfigError("no grid point produced a finite fitting error");
    }
    std::sort(starts.begin(), starts.end(), better);
    if (starts.size() > config.starts) starts.resize(config.starts);
    result.round_errors.push_back(starts.front().d);

    struct Chain {
        Range betas;
        Range mas;
        Candidate best;
    };
    const auto chain_order = [](const Chain& a, const Chain& b) { return better(a.best, b.best); };
    std::vector<Chain> chains;
    for (auto& c : starts) {
        chains.push_back({shrink_around(config.beta_range, c.beta, config.shrink_factor),
                          shrink_around(config.ma_range, c.ma, config.shrink_factor), std::move(c)});
    }

    double previous_step = config.simplex_step;
    double step = std::max(previous_step / 2.0, kMinSimplexStep);
    for (std::size_t round = 1; round < config.rounds; ++round) {
        for (auto& chain : chains) {
            const auto utilities = simplex_window(chain.best.utilities, step, 2.0 * previous_step);
            const auto b_grid = linspace(chain.betas, config.grid_points_per_axis);
            const auto m_grid = linspace(chain.mas, config.grid_points_per_axis);
            for (auto& c : sweep_cells(b_grid, m_grid, utilities, chain.best)) {
                if (better(c, chain.best)) chain.best = std::move(c);
            }
            result.evaluations += b_grid.size() * m_grid.size() * utilities.size();
            chain.betas = shrink_around(chain.betas, chain.best.beta, config.shrink_factor);
            chain.mas = shrink_around(chain.mas, chain.best.ma, config.shrink_factor);
        }
        // Chains that reached the same incumbent would repeat each other's work.
        for (std::size_t i = chains.size(); i-- > 1;) {
            for (std::size_t j = 0; j < i; ++j) {
                if (same_point(chains[i].best, chains[j].best)) {
                    chains.erase(chains.begin() + static_cast<std::ptrdiff_t>(i));
                    break;
                }
            }
        }
        const auto leader = std::min_element(chains.begin(), chains.end(), chain_order);
        result.round_errors.push_back(leader->best.d);
        previous_step = step;
        step = std::max(step / 2.0, kMinSimplexStep);
    }

    const auto leader = std::min_element(chains.begin(), chains.end(), chain_order);
    const Candidate& best = leader->best;
    result.rounds_performed = config.rounds;
    result.params = ModelParams::make(best.beta, best.ma, best.utilities, dataset.language_names);
    result.error_d = best.d;
    return result;
}

}  // namespace langcomp
