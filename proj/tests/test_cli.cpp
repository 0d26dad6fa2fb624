#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "qdrive/cli_io.hpp"
#include "qdrive/errors.hpp"

using namespace qdrive;

namespace {

constexpr double kPi = std::numbers::pi;
const double kSqrt5 = std::sqrt(5.0);

int run(std::vector<std::string> args) {
    std::vector<const char*> argv{"qdrive"};
    for (const auto& a : args) argv.push_back(a.c_str());
    return run_cli(static_cast<int>(argv.size()), argv.data());
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

std::vector<std::vector<std::string>> parse_csv(const std::string& text) {
    std::vector<std::vector<std::string>> rows;
    std::istringstream is(text);
    std::string line;
    while (std::getline(is, line)) {
        std::vector<std::string> cells;
        std::istringstream ls(line);
        std::string cell;
        while (std::getline(ls, cell, ',')) cells.push_back(cell);
        rows.push_back(cells);
    }
    return rows;
}

} // namespace

TEST_CASE("usage errors exit with status 2") {
    CHECK(run({"synth", "--family", "circular", "--g-re", "1", "--points", "1"}) == 2);
    CHECK(run({"synth", "--family", "nosuch"}) == 2);
    CHECK(run({"evolve", "--family", "oscillating", "--g-re", "1"}) == 2); // missing omega1
    CHECK(run({"synth", "--family", "circular", "--g-re", "1", "--t-max", "-3"}) == 2);
    CHECK(run({"badcommand"}) == 2);
}

TEST_CASE("evolve CSV: deterministic output and row invariants") {
    const std::string out = "test_cli_evolve.csv";
    const std::vector<std::string> args{"evolve", "--family", "oscillating",
                                        "--g-re",  "2.23606797749979",
                                        "--delta", "4",
                                        "--Delta", "1",
                                        "--kappa", "0.6",
                                        "--points", "200",
                                        "--out",   out};
    REQUIRE(run(args) == 0);
    const std::string first = slurp(out);
    REQUIRE(run(args) == 0);
    CHECK(first == slurp(out)); // byte-identical rerun

    const auto rows = parse_csv(first);
    REQUIRE(rows.size() == 201);
    CHECK(rows[0] == std::vector<std::string>{"t", "re_R", "im_R", "abs_R", "re_V", "im_V",
                                              "cp2", "cq2", "P", "unitarity_defect"});
    for (std::size_t i = 1; i < rows.size(); ++i) {
        const double cp2 = std::stod(rows[i][6]);
        const double cq2 = std::stod(rows[i][7]);
        const double p = std::stod(rows[i][8]);
        CHECK(std::abs(cp2 + cq2 - 1.0) < 1e-10);
        CHECK(p == cp2 - cq2); // emitted exactly as the difference
        CHECK(std::stod(rows[i][9]) < 1e-10);
    }
    std::remove(out.c_str());
}

TEST_CASE("evolve CSV: resonant circular P column is cos(2 g t)") {
    // grid chosen so no sample lands on a quarter period, where the delta = 0
    // factorization genuinely breaks down
    const std::string out = "test_cli_resonant.csv";
    REQUIRE(run({"evolve", "--family", "circular", "--g-re", "1", "--delta", "0", "--t-max",
                 "6.0", "--points", "101", "--out", out}) == 0);
    const auto rows = parse_csv(slurp(out));
    REQUIRE(rows.size() == 102);
    for (std::size_t i = 1; i < rows.size(); ++i) {
        const double t = std::stod(rows[i][0]);
        CHECK(std::abs(std::stod(rows[i][8]) - std::cos(2.0 * t)) < 1e-10);
    }
    std::remove(out.c_str());
}

TEST_CASE("synth CSV: the field trace closes after p = 3 mu-periods") {
    FamilyParams params{cplx(kSqrt5, 0.0), 4.0, 1.0, std::nullopt};
    const double omega1 = params.Omega0() / 0.6;
    const double tau_p = 3.0 * kPi / omega1;
    const std::string out = "test_cli_synth.csv";
    std::ostringstream tmax;
    tmax.precision(17);
    tmax << tau_p;
    REQUIRE(run({"synth", "--family", "oscillating", "--g-re", "2.23606797749979", "--delta",
                 "4", "--Delta", "1", "--kappa", "0.6", "--points", "301", "--t-max",
                 tmax.str(), "--out", out}) == 0);
    const auto rows = parse_csv(slurp(out));
    REQUIRE(rows.size() == 302);
    const double re0 = std::stod(rows[1][1]), im0 = std::stod(rows[1][2]);
    const double re1 = std::stod(rows[301][1]), im1 = std::stod(rows[301][2]);
    CHECK(std::hypot(re1 - re0, im1 - im0) < 1e-8);
    std::remove(out.c_str());
}

TEST_CASE("verify subcommand: exit status tracks the oracle comparison") {
    const std::vector<std::string> base{"verify", "--family", "circular", "--g-re", "1.5",
                                        "--delta", "2", "--Delta", "0.5", "--points", "200"};
    CHECK(run(base) == 0);
    std::vector<std::string> corrupted = base;
    corrupted.push_back("--corrupt-alpha");
    corrupted.push_back("1.01");
    CHECK(run(corrupted) == 1);
}

TEST_CASE("scan: kappa sweep reproduces the figure ratios") {
    const std::string out = "test_cli_scan.csv";
    REQUIRE(run({"scan", "--family", "oscillating", "--g-re", "2.23606797749979", "--delta",
                 "4", "--kappa-list", "0.6,1,3.1", "--out", out}) == 0);
    const auto rows = parse_csv(slurp(out));
    REQUIRE(rows.size() == 4);
    CHECK(rows[0] == std::vector<std::string>{"omega0", "kappa", "p", "P_min", "P_period"});
    const double p_min_expected = (16.0 - 20.0) / (16.0 + 20.0);
    const std::vector<double> kappas{0.6, 1.0, 3.1};
    for (std::size_t i = 1; i < rows.size(); ++i) {
        CHECK(std::stod(rows[i][0]) == doctest::Approx(3.0).epsilon(1e-12));
        CHECK(std::stod(rows[i][1]) ==
              doctest::Approx(kappas[i - 1]).epsilon(1e-12));
        CHECK(rows[i][2] == "3");
        // P_min is independent of kappa
        CHECK(std::stod(rows[i][3]) == doctest::Approx(p_min_expected).epsilon(1e-12));
    }
    std::remove(out.c_str());
}

TEST_CASE("scan: single cell equals a run summary and oversized grids are rejected") {
    const std::string out = "test_cli_scan_one.csv";
    REQUIRE(run({"scan", "--family", "circular", "--g-re", "1", "--delta", "2", "--out",
                 out}) == 0);
    const auto rows = parse_csv(slurp(out));
    REQUIRE(rows.size() == 2);
    CHECK(std::stod(rows[1][0]) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
    CHECK(rows[1][1] == format_number(1.0));
    std::remove(out.c_str());

    // 101 * 101 > 10^4 cells
    std::string deltas, gres;
    for (int i = 0; i < 101; ++i) {
        deltas += (i ? "," : "") + std::to_string(0.1 * i + 0.1);
        gres += (i ? "," : "") + std::to_string(0.1 * i + 0.1);
    }
    CHECK(run({"scan", "--family", "circular", "--delta-list", deltas, "--g-re-list", gres}) ==
          2);
}

TEST_CASE("scan: custom-pinney rows report the measured minimum") {
    const std::string out = "test_cli_scan_custom.csv";
    REQUIRE(run({"scan", "--family", "custom-pinney", "--omega1", "2", "--r0-re", "0.4",
                 "--r0-im", "-1.1", "--r0p-re", "3.07", "--r0p-im", "0.12", "--out", out}) ==
            0);
    const auto rows = parse_csv(slurp(out));
    REQUIRE(rows.size() == 2);
    const double omega0 = std::stod(rows[1][0]);
    const double kappa = std::stod(rows[1][1]);
    CHECK(omega0 == doctest::Approx(std::sqrt(0.16 + 1.21 + 0.25 * 2.5 * 2.5)).epsilon(1e-10));
    CHECK(kappa == doctest::Approx(omega0 / 2.0).epsilon(1e-12));
    const double p_min = std::stod(rows[1][3]);
    CHECK(p_min >= -1.0 - 1e-12);
    CHECK(p_min < 1.0);
    std::remove(out.c_str());
}

TEST_CASE("config file values are overridden by flags") {
    const std::string cfg_path = "test_cli_config.json";
    {
        std::ofstream cfg(cfg_path);
        cfg << R"({"family": "circular", "g": {"re": 1.0, "im": 0.0}, "delta": 2.0,)"
            << R"( "t_max": 1.0, "points": 11, "out": "test_cli_cfg_a.csv"})";
    }
    REQUIRE(run({"evolve", "--config", cfg_path}) == 0);
    auto rows = parse_csv(slurp("test_cli_cfg_a.csv"));
    REQUIRE(rows.size() == 12);
    CHECK(std::stod(rows[11][0]) == doctest::Approx(1.0).epsilon(1e-15));

    REQUIRE(run({"evolve", "--config", cfg_path, "--t-max", "2.0", "--out",
                 "test_cli_cfg_b.csv"}) == 0);
    rows = parse_csv(slurp("test_cli_cfg_b.csv"));
    REQUIRE(rows.size() == 12);
    CHECK(std::stod(rows[11][0]) == doctest::Approx(2.0).epsilon(1e-15));

    CHECK(run({"evolve", "--config", "no_such_file.json"}) == 2);
    std::remove(cfg_path.c_str());
    std::remove("test_cli_cfg_a.csv");
    std::remove("test_cli_cfg_b.csv");
}

TEST_CASE("the installed binary honours the exit-status contract") {
    const std::string bin = QDRIVE_CLI_BIN;
    auto shell = [&bin](const std::string& args) {
        const std::string cmd = bin + " " + args + " > /dev/null 2>&1";
        const int rc = std::system(cmd.c_str());
        return WEXITSTATUS(rc);
    };
    CHECK(shell("synth --family circular --g-re 1 --delta 0.5 --points 50 --out "
                "test_cli_bin.csv") == 0);
    CHECK(slurp("test_cli_bin.csv").substr(0, 2) == "t,");
    CHECK(shell("synth --family circular --g-re 1 --points 1") == 2);
    CHECK(shell("verify --family circular --g-re 1 --delta 2 --points 150 "
                "--corrupt-alpha 1.01") == 1);
    std::remove("test_cli_bin.csv");
}
