#pragma once

#include "langcomp/dataset.hpp"
#include "langcomp/model.hpp"

#include <string>
#include <string_view>
#include <vector>

namespace langcomp {

/// A bundled census series together with its published model fit.
struct Fixture {
    std::string key;  ///< e.g. "singapore-whole"
    Dataset dataset;
    ModelParams fitted;
    double reported_d = 0.0;
};

/// The four bundled series: singapore-whole, chinese-community,
/// indian-community and hong-kong. The series are anchor-point
/// reconstructions; see the comment block of each embedded CSV.
[[nodiscard]] const std::vector<Fixture>& bundled_fixtures();

/// Throws DomainError for an unknown key.
[[nodiscard]] const Fixture& find_fixture(std::string_view key);

/// Raw embedded CSV text of a fixture's dataset.
[[nodiscard]] std::string_view fixture_csv(std::string_view key);

}  // namespace langcomp
