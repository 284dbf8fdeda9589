#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "langcomp/cli.hpp"
#include "langcomp/export.hpp"

#include <json.hpp>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace fs = std::filesystem;
using langcomp::cli::run;

namespace {

struct Scratch {
    fs::path dir;
    Scratch() : dir(fs::temp_directory_path() / "langcomp_cli_test") {
        fs::remove_all(dir);
        fs::create_directories(dir);
    }
    ~Scratch() { fs::remove_all(dir); }
    [[nodiscard]] std::string path(const std::string& name) const { return (dir / name).string(); }
};

struct Result {
    int code;
    std::string out;
    std::string err;
};

Result call(std::vector<std::string> args) {
    std::ostringstream out, err;
    const int code = run(std::move(args), out, err);
    return {code, out.str(), err.str()};
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::size_t line_count(const std::string& text) {
    return static_cast<std::size_t>(std::count(text.begin(), text.end(), '\n'));
}

}  // namespace

TEST_CASE("simulate writes one row per year") {
    Scratch s;
    const auto r = call({"simulate", "--fixture", "singapore-whole", "--out", s.path("traj.csv")});
    CHECK(r.code == 0);
    const auto csv = slurp(s.path("traj.csv"));
    CHECK(line_count(csv) == 55);  // header + 1957..2010
    CHECK(csv.rfind("t,English,Dialect,Mandarin\n", 0) == 0);
    CHECK(r.out.find("Mandarin") != std::string::npos);

    const auto j = call({"simulate", "--fixture", "singapore-whole", "--t-end", "10", "--out", s.path("traj.json")});
    CHECK(j.code == 0);
    const auto doc = nlohmann::json::parse(slurp(s.path("traj.json")));
    CHECK(doc["points"].size() == 11);
}

TEST_CASE("usage errors exit with 2") {
    Scratch s;
    CHECK(call({"simulate", "--fixture", "singapore-whole", "--bogus"}).code == 2);
    CHECK(call({"simulate", "--data", s.path("missing.csv")}).code == 2);
    CHECK(call({"simulate", "--fixture", "singapore-whole", "--step", "abc"}).code == 2);
    CHECK(call({"simulate", "--fixture", "atlantis"}).code == 2);
    CHECK(call({"simulate"}).code == 2);
    CHECK(call({}).code == 2);
    CHECK(call({"sweep-utility", "--fixture", "singapore-whole", "--target", "Klingon", "--values", "0.1:0.5:3"})
              .code == 2);
    CHECK(call({"sweep-bias", "--fixture", "singapore-whole", "--target", "gamma", "--values", "0:1:3"}).code == 2);
    CHECK(call({"phase", "--fixture", "singapore-whole", "--beta", "0:1"}).code == 2);
    CHECK(call({"simulate", "--fixture", "singapore-whole", "--format", "xml"}).code == 2);

    const auto bad = s.path("bad.csv");
    std::ofstream(bad) << "year,A,B\n1990,1,x\n2000,1,1\n";
    const auto r = call({"simulate", "--data", bad, "--beta", "0.5", "--ma", "0.5", "--utilities", "0.5,0.5"});
    CHECK(r.code == 2);
    CHECK(r.err.find("line 2") != std::string::npos);

    CHECK(call({"--help"}).code == 0);
}

TEST_CASE("unconverged convergence run is a runtime failure") {
    const auto r = call({"convergence", "--fixture", "singapore-whole", "--t-max", "5"});
    CHECK(r.code == 1);
    CHECK(r.err.find("t_max") != std::string::npos);

    const auto ok = call({"convergence", "--fixture", "singapore-whole"});
    CHECK(ok.code == 0);
}

TEST_CASE("phase grid writes one row per cell") {
    Scratch s;
    const auto r = call({"phase", "--fixture", "singapore-whole", "--beta", "0:1:3", "--ma", "0:1:4", "--out",
                         s.path("phase.csv")});
    CHECK(r.code == 0);
    std::ifstream in(s.path("phase.csv"));
    const auto t = langcomp::read_csv_table(in);
    CHECK(t.rows.size() == 12);
    CHECK(t.header == std::vector<std::string>{"beta", "minority_aversion", "most_popular", "kind"});
}

TEST_CASE("fit on a user dataset emits a JSON result") {
    Scratch s;
    const auto data = s.path("my.csv");
    std::ofstream(data) << "year,A,B,C\n2000,20,50,30\n2005,25,45,30\n2010,30,40,30\n";
    const auto r = call({"fit", "--data", data, "--rounds", "2", "--out", s.path("fit.json")});
    REQUIRE(r.code == 0);
    const auto doc = nlohmann::json::parse(slurp(s.path("fit.json")));
    CHECK(doc["schema_version"] == 1);
    CHECK(doc["type"] == "fit");
    CHECK(doc["rounds_performed"] == 2);
    CHECK(doc["language_names"] == std::vector<std::string>{"A", "B", "C"});
    CHECK(doc["utilities"].size() == 3);
    CHECK(doc["error_d"].get<double>() >= 0.0);
}

TEST_CASE("identical invocations produce identical files") {
    Scratch s;
    const std::vector<std::string> base{"sweep-initial", "--fixture", "singapore-whole", "--target", "Dialect",
                                        "--values", "0.3:0.7:5"};
    auto a = base;
    a.insert(a.end(), {"--jobs", "1", "--out", s.path("a.csv")});
    auto b = base;
    b.insert(b.end(), {"--jobs", "3", "--out", s.path("b.csv")});
    REQUIRE(call(a).code == 0);
    REQUIRE(call(b).code == 0);
    CHECK(slurp(s.path("a.csv")) == slurp(s.path("b.csv")));
    CHECK(line_count(slurp(s.path("a.csv"))) == 6);
}
