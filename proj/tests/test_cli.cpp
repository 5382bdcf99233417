#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "csr/cli.hpp"
#include "csr/scenario.hpp"

using namespace csr;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct TempDir {
    fs::path path;
    explicit TempDir(const std::string& name) : path(fs::temp_directory_path() / name) {
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
    std::string file(const std::string& name) const { return (path / name).string(); }
};

std::string write_scenario(const TempDir& dir, const std::string& name,
                           const std::string& body) {
    const std::string p = dir.file(name);
    std::ofstream out(p);
    out << body;
    return p;
}

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("scenario parsing") {
    const Scenario sc = Scenario::from_text(
        "g11 = \"1 + x^2\"  # comment\n"
        "nx = 17\n"
        "tol = 1e-8\n"
        "\n"
        "u0 = \"0.5*x\"\n");
    CHECK(sc.get_int("nx", 0) == 17);
    CHECK(sc.get_double("tol", 0) == doctest::Approx(1e-8));
    CHECK(sc.get_field("g11", "1")(Point3{2, 0, 0}) == doctest::Approx(5.0));
    CHECK(sc.get_string("missing", "fallback") == "fallback");
    CHECK_THROWS_AS(Scenario::from_text("just a line\n"), ConfigError);
    CHECK_THROWS_AS(Scenario::from_text("nx = abc\n").get_int("nx", 0), ConfigError);
}

TEST_CASE("area command on the flat graph") {
    TempDir dir("csr_cli_area");
    const std::string sc = write_scenario(dir, "area.scn",
                                          "u0 = \"0\"\n"
                                          "nx = 17\nnt = 17\n");
    const std::string out = dir.file("out");
    CHECK(run("area", sc, out) == 0);
    const json summary = json::parse(slurp(out + "/summary.json"));
    CHECK(summary["status"] == "ok");
    CHECK(std::abs(summary["area"].get<double>() - 1.0) <= 1e-13);
    CHECK(fs::exists(out + "/grid.csv"));
}

TEST_CASE("trace command reproduces the closed form") {
    TempDir dir("csr_cli_trace");
    const std::string sc = write_scenario(dir, "trace.scn",
                                          "u0 = \"x\"\n"
                                          "nx = 33\nnt = 33\n"
                                          "trace_a = 0.5\ntrace_b = 0.5\n"
                                          "trace_r = 0.3\ntrace_step = 1e-3\n");
    const std::string out = dir.file("out");
    REQUIRE(run("trace", sc, out) == 0);
    std::ifstream csv(out + "/curve.csv");
    std::string line;
    std::getline(csv, line);  // header
    double max_err = 0.0;
    int rows = 0;
    while (std::getline(csv, line)) {
        if (line.empty()) continue;
        std::istringstream row(line);
        std::string cell;
        std::getline(row, cell, ',');
        const double s = std::stod(cell);
        std::getline(row, cell, ',');
        const double t = std::stod(cell);
        max_err = std::max(max_err, std::abs(t - (0.5 + s * s - 0.25)));
        ++rows;
    }
    CHECK(rows >= 100);
    CHECK(max_err <= 1e-8);
}

TEST_CASE("config errors exit with code 1") {
    TempDir dir("csr_cli_err");
    const std::string bad = write_scenario(dir, "bad.scn", "u0 = \"x +\"\n");
    CHECK(run("area", bad, dir.file("out1")) == 1);
    const std::string missing = dir.file("nonexistent.scn");
    CHECK(run("area", missing, dir.file("out2")) == 1);
    const std::string ok = write_scenario(dir, "ok.scn", "u0 = \"0\"\n");
    CHECK(run("frobnicate", ok, dir.file("out3")) == 1);
    // solve-constrained without a target volume is a config error.
    CHECK(run("solve-constrained", ok, dir.file("out4")) == 1);
}

TEST_CASE("degenerate metric exits with code 2") {
    TempDir dir("csr_cli_num");
    const std::string sc = write_scenario(dir, "deg.scn",
                                          "g11 = \"x\"\n"
                                          "x0 = -1\nx1 = 1\n"
                                          "u0 = \"0\"\n");
    CHECK(run("area", sc, dir.file("out")) == 2);
}

TEST_CASE("solve command and grid override") {
    TempDir dir("csr_cli_solve");
    const std::string sc = write_scenario(dir, "solve.scn",
                                          "f = \"1\"\nu0 = \"0\"\n"
                                          "nx = 9\nnt = 9\n");
    const std::string out = dir.file("out");
    CliOverrides ov;
    ov.nx = 17;
    ov.nt = 17;
    REQUIRE(run("solve", sc, out, ov) == 0);
    const json summary = json::parse(slurp(out + "/summary.json"));
    CHECK(summary["status"] == "ok");
    CHECK(summary["residual"].get<double>() <= 1e-10);
    // 17x17 grid -> 289 rows + header.
    std::ifstream csv(out + "/solution.csv");
    int lines = 0;
    std::string line;
    while (std::getline(csv, line))
        if (!line.empty()) ++lines;
    CHECK(lines == 290);
}

TEST_CASE("reproducibility: identical scenario and seed give identical bytes") {
    TempDir dir("csr_cli_repro");
    const std::string sc = write_scenario(dir, "vc.scn",
                                          "cases = 3\nnx = 17\nnt = 17\nseed = 5\n");
    const std::string out1 = dir.file("out1"), out2 = dir.file("out2");
    REQUIRE(run("variation-check", sc, out1) == 0);
    REQUIRE(run("variation-check", sc, out2) == 0);
    CHECK(slurp(out1 + "/summary.json") == slurp(out2 + "/summary.json"));
    CHECK(slurp(out1 + "/variation_check.json") == slurp(out2 + "/variation_check.json"));
}

TEST_CASE("geometry-check and surface-variation commands") {
    TempDir dir("csr_cli_checks");
    const std::string sc = write_scenario(dir, "chk.scn",
                                          "metrics = 2\npoints = 10\nseed = 3\n"
                                          "surfaces = 1\nfields = 1\nnx = 17\nnt = 17\n");
    CHECK(run("geometry-check", sc, dir.file("g")) == 0);
    CHECK(run("surface-variation", sc, dir.file("s")) == 0);
    const json summary = json::parse(slurp(dir.file("g") + "/summary.json"));
    CHECK(summary["status"] == "ok");
    CHECK(summary["max_bracket_identity"].get<double>() <= 1e-8);
}

}  // TEST_SUITE
