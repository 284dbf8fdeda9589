#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "langcomp/errors.hpp"
#include "langcomp/fitting.hpp"
#include "langcomp/fixtures.hpp"
#include "langcomp/integrator.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

using namespace langcomp;

namespace {

// Observations every year for `years` years, generated by the model itself.
Dataset synthetic(const ModelParams& truth, const StateVector& x0, int years) {
    Dataset d;
    d.name = "synthetic";
    d.language_names = truth.language_names;
    std::vector<double> times;
    for (int y = 0; y <= years; ++y) {
        d.years.push_back(2000 + y);
        times.push_back(y);
    }
    for (const auto& s : sample_at(truth, x0, times, 0.01)) d.fractions.push_back(s.fractions);
    return d;
}

double final_spacing(const Range& r, const FitConfig& c) {
    return r.width() * std::pow(c.shrink_factor, static_cast<double>(c.rounds - 1)) /
           static_cast<double>(c.grid_points_per_axis - 1);
}

double final_simplex_step(const FitConfig& c) {
    return std::max(c.simplex_step / std::pow(2.0, static_cast<double>(c.rounds - 1)), 0.001);
}

}  // namespace

TEST_CASE("objective_d examples") {
    const Matrix a{{0.2, 0.8}, {0.5, 0.5}};
    CHECK(objective_d(a, a) == 0.0);
    CHECK(objective_d(Matrix{{0.5, 0.1}}, Matrix{{0.2, 0.5}}) == doctest::Approx(0.5).epsilon(1e-15));
    const Matrix b{{0.3, 0.7}, {0.1, 0.9}};
    CHECK(objective_d(a, b) == objective_d(b, a));
    // Sum of per-row Euclidean norms, not a pooled norm.
    CHECK(objective_d(a, b) == doctest::Approx(std::sqrt(0.02) + std::sqrt(0.32)).epsilon(1e-14));
    CHECK(objective_d(a, b) > 0.0);
    CHECK_THROWS_AS((void)objective_d(a, Matrix{{0.3, 0.7}}), DomainError);
    CHECK_THROWS_AS((void)objective_d(a, Matrix{{0.3, 0.7}, {1.0}}), DomainError);
}

TEST_CASE("predicted first row is the observed first row") {
    const auto& f = find_fixture("singapore-whole");
    const auto pred = predict_at_observations(f.fitted, f.dataset);
    REQUIRE(pred.size() == f.dataset.row_count());
    CHECK(pred.front() == f.dataset.fractions.front());
    for (const auto& row : pred) {
        CHECK(std::accumulate(row.begin(), row.end(), 0.0) == doctest::Approx(1.0).epsilon(1e-9));
    }
    const auto wrong = ModelParams::make(0.5, 0.5, {0.5, 0.5});
    CHECK_THROWS_AS((void)predict_at_observations(wrong, f.dataset), DomainError);
}

TEST_CASE("simplex_grid enumeration") {
    CHECK(simplex_grid(2, 0.5) == std::vector<std::vector<double>>{{0.5, 0.5}});
    CHECK(simplex_grid(2, 0.25) ==
          std::vector<std::vector<double>>{{0.25, 0.75}, {0.5, 0.5}, {0.75, 0.25}});
    const auto g = simplex_grid(3, 0.1);
    CHECK(g.size() == 36);
    CHECK(std::is_sorted(g.begin(), g.end()));
    for (const auto& s : g) {
        CHECK(std::accumulate(s.begin(), s.end(), 0.0) == doctest::Approx(1.0).epsilon(1e-12));
        for (double v : s) CHECK(v > 0.0);
    }
    CHECK(simplex_grid(4, 0.05).size() == 969);  // C(19, 3)
    CHECK(simplex_grid(5, 0.25).empty());
    CHECK_THROWS_AS((void)simplex_grid(3, 0.3), DomainError);
    CHECK_THROWS_AS((void)simplex_grid(1, 0.1), DomainError);
}

TEST_CASE("config validation") {
    FitConfig c;
    CHECK_NOTHROW(c.validate());
    c.beta_range = {1.0, 1.0};
    CHECK_THROWS_AS(c.validate(), ConfigError);
    c = {};
    c.ma_range = {-0.5, 1.0};
    CHECK_THROWS_AS(c.validate(), ConfigError);
    c = {};
    c.simplex_step = 0.3;
    CHECK_THROWS_AS(c.validate(), ConfigError);
    c = {};
    c.simplex_step = 0.75;
    CHECK_THROWS_AS(c.validate(), ConfigError);
    c = {};
    c.rounds = 0;
    CHECK_THROWS_AS(c.validate(), ConfigError);
    c = {};
    c.shrink_factor = 1.0;
    CHECK_THROWS_AS(c.validate(), ConfigError);
    c = {};
    c.grid_points_per_axis = 1;
    CHECK_THROWS_AS(c.validate(), ConfigError);

    const auto& f = find_fixture("singapore-whole");
    FitConfig bad;
    bad.simplex_step = 0.5;  // no interior composition of 2 into 3 parts
    CHECK_THROWS_AS((void)fit(f.dataset, bad), ConfigError);
}

TEST_CASE("synthetic recovery") {
    const std::vector<std::string> names{"A", "B", "C"};
    // Generator sits on the final search lattice so exact recovery is reachable.
    const auto truth = ModelParams::make(0.4, 0.8, {0.4, 0.35, 0.25}, names);
    const auto data = synthetic(truth, StateVector{{0.2, 0.5, 0.3}}, 10);
    FitConfig config;
    config.jobs = 1;
    const auto result = fit(data, config);

    CHECK(result.rounds_performed == 4);
    CHECK(result.round_errors.size() == 4);
    CHECK(std::is_sorted(result.round_errors.rbegin(), result.round_errors.rend()));
    CHECK(result.error_d >= 0.0);
    CHECK(result.error_d == result.round_errors.back());
    CHECK_NOTHROW(result.params.validate());
    CHECK(result.params.language_names == names);

    const double d_truth = objective_d(predict_at_observations(truth, data, config.step), data.fractions);
    CHECK(result.error_d <= d_truth + 1e-9);

    CHECK(std::abs(result.params.beta - 0.4) <= final_spacing(config.beta_range, config) + 1e-12);
    CHECK(std::abs(result.params.minority_aversion - 0.8) <=
          final_spacing(config.ma_range, config) + 1e-12);
    for (std::size_t i = 0; i < 3; ++i) {
        CHECK(std::abs(result.params.utilities[i] - truth.utilities[i]) <=
              final_simplex_step(config) + 1e-12);
    }
}

TEST_CASE("more starts never lose to fewer") {
    const std::vector<std::string> names{"A", "B", "C"};
    const auto truth = ModelParams::make(1.0, 0.15, {0.3, 0.3125, 0.3875}, names);
    const auto data = synthetic(truth, StateVector{{0.2, 0.5, 0.3}}, 10);
    FitConfig config;
    config.rounds = 3;
    config.starts = 1;
    const auto one = fit(data, config);
    config.starts = 4;
    const auto four = fit(data, config);
    CHECK(four.error_d <= one.error_d);
    CHECK(std::is_sorted(four.round_errors.rbegin(), four.round_errors.rend()));
    config.starts = 0;
    CHECK_THROWS_AS(config.validate(), ConfigError);
}

TEST_CASE("stationary data") {
    Dataset d;
    d.name = "flat";
    d.language_names = {"A", "B"};
    d.years = {2000, 2005, 2010};
    d.fractions = {{0.5, 0.5}, {0.5, 0.5}, {0.5, 0.5}};
    FitConfig config;
    config.rounds = 2;
    const auto result = fit(d, config);
    CHECK(result.error_d < 0.05);
}

TEST_CASE("result is independent of worker count") {
    const auto& f = find_fixture("chinese-community");
    FitConfig config;
    config.rounds = 2;
    config.grid_points_per_axis = 9;
    config.jobs = 1;
    const auto a = fit(f.dataset, config);
    config.jobs = 4;
    const auto b = fit(f.dataset, config);
    CHECK(a.params.beta == b.params.beta);
    CHECK(a.params.minority_aversion == b.params.minority_aversion);
    CHECK(a.params.utilities == b.params.utilities);
    CHECK(a.error_d == b.error_d);
    CHECK(a.evaluations == b.evaluations);
}
