#include "langcomp/fixtures.hpp"

#include "langcomp/errors.hpp"

#include <array>

namespace langcomp {
namespace {

// The complete census tables are not public. Each series holds only rows
// backed by figures quoted for the dataset, plus "event rows" for stated
// crossing years when no later full row is known. In an event row the two
// crossing languages share equally whatever the other languages hold, and
// those other languages carry their values forward from the previous row.

constexpr std::string_view kSingaporeWhole = R"(# Singapore, whole country. Language mainly spoken at home.
# 1957: English 1.8%, Mandarin 0.1%, Dialect 0.975 of the three-language total.
#       The remaining 0.025 is split 1.8 : 0.1 between English and Mandarin.
# 2010: English 32.3%, Mandarin 35.6%; Dialect takes the remainder of the
#       three-language total.
year,English,Dialect,Mandarin
1957,0.02368,0.975,0.00132
2010,0.323,0.321,0.356
)";

constexpr std::string_view kChineseCommunity = R"(# Singapore, Chinese community.
# First row: Dialect 0.766, remainder split equally between English and Mandarin.
# The row is dated 1980; dated 1957 the fitted model cannot reach the stated
# crossing years from any English/Mandarin split.
# Event rows: Mandarin reaches Dialect in 1994, English reaches Dialect in 2001.
year,English,Dialect,Mandarin
1980,0.117,0.766,0.117
1994,0.117,0.4415,0.4415
2001,0.27925,0.27925,0.4415
)";

constexpr std::string_view kIndianCommunity = R"(# Singapore, Indian community.
# First row: Tamil 0.613, remainder split equally between English and Malay,
# dated 1980 for the same reason as the Chinese community series.
# Event row: English reaches Tamil in 2003.
year,English,Tamil,Malay
1980,0.1935,0.613,0.1935
2003,0.40325,0.40325,0.1935
)";

constexpr std::string_view kHongKong = R"(# Hong Kong, excluding Cantonese; fractions are relative to these four.
# 1949: Sze Yap 0.578, remainder split equally (no split is published).
# Event row: Sze Yap close to extinction in 1999 (set to 0.001); the others
# carry their 1949 proportions.
year,English,Hakka,Hoklo,Sze Yap
1949,0.1406666667,0.1406666667,0.1406666667,0.578
1999,0.333,0.333,0.333,0.001
)";

struct Entry {
    std::string_view key;
    std::string_view csv;
};

constexpr std::array<Entry, 4> kEntries{{
    {"singapore-whole", kSingaporeWhole},
    {"chinese-community", kChineseCommunity},
    {"indian-community", kIndianCommunity},
    {"hong-kong", kHongKong},
}};

Fixture make(std::string_view key, double beta, double minority_aversion,
             std::vector<double> utilities, double reported_d) {
    Fixture f;
    f.key = std::string(key);
    f.dataset = parse_dataset(std::string(fixture_csv(key)), f.key);
    f.fitted = ModelParams::make(beta, minority_aversion, std::move(utilities),
                                 f.dataset.language_names);
    f.reported_d = reported_d;
    return f;
}

}  // namespace

std::string_view fixture_csv(std::string_view key) {
    for (const auto& e : kEntries) {
        if (e.key == key) return e.csv;
    }
    throw DomainError("unknown fixture '" + std::string(key) + "'");
}

const std::vector<Fixture>& bundled_fixtures() {
    // Published fits: (beta, alpha - beta, utilities, D).
    static const std::vector<Fixture> fixtures{
        make("singapore-whole", 0.726, 0.283, {0.35, 0.29, 0.36}, 0.1388),
        make("chinese-community", 0.63, 0.36, {0.33, 0.30, 0.37}, 0.1199),
        make("indian-community", 0.21, 0.82, {0.40, 0.39, 0.21}, 0.1323),
        make("hong-kong", 0.987, 0.095, {0.307, 0.252, 0.263, 0.178}, 0.2663),
    };
    return fixtures;
}

const Fixture& find_fixture(std::string_view key) {
    for (const auto& f : bundled_fixtures()) {
        if (f.key == key) return f;
    }
    throw DomainError("unknown fixture '" + std::string(key) + "'");
}

}  // namespace langcomp
