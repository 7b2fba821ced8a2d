#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <array>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace {

struct RunResult {
    int exit_code;
    std::string output;
};

RunResult run_cli(const std::string& args) {
    const std::string cmd = std::string(WGQED_CLI_PATH) + " " + args + " 2>/dev/null";
    std::array<char, 4096> buf{};
    std::string out;
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    size_t got;
    while ((got = fread(buf.data(), 1, buf.size(), pipe)) > 0) out.append(buf.data(), got);
    const int status = pclose(pipe);
    return {WEXITSTATUS(status), out};
}

std::vector<std::string> lines_of(const std::string& text) {
    std::vector<std::string> lines;
    std::istringstream is(text);
    std::string line;
    while (std::getline(is, line)) lines.push_back(line);
    return lines;
}

std::vector<double> parse_row(const std::string& line) {
    std::vector<double> row;
    std::istringstream is(line);
    std::string cell;
    while (std::getline(is, cell, ',')) row.push_back(std::strtod(cell.c_str(), nullptr));
    return row;
}

// First data row (after '#' metadata and the header).
std::vector<double> first_data_row(const std::string& csv) {
    bool header_seen = false;
    for (const auto& line : lines_of(csv)) {
        if (line.empty() || line[0] == '#') continue;
        if (!header_seen) {
            header_seen = true;
            continue;
        }
        return parse_row(line);
    }
    return {};
}

}  // namespace

TEST_CASE("single external emitter reports g2(0) = 0") {
    const auto r = run_cli("single --mode external --beta 0.01 --delta 0 --observable g2_trace");
    CHECK(r.exit_code == 0);
    // Find the tau = 0 row.
    bool found = false;
    bool header_seen = false;
    for (const auto& line : lines_of(r.output)) {
        if (line.empty() || line[0] == '#') continue;
        if (!header_seen) {
            header_seen = true;
            CHECK(line == "tau_gamma,g2");
            continue;
        }
        const auto row = parse_row(line);
        REQUIRE(row.size() == 2);
        if (row[0] == 0.0) {
            found = true;
            CHECK(row[1] < 1e-12);
        }
    }
    CHECK(found);
}

TEST_CASE("invalid field values exit with code 2 naming the field") {
    CHECK(run_cli("single --beta 1.5").exit_code == 2);
    CHECK(run_cli("ensemble --geometry bragg --beta 0.01 --delta 0.5 --n 2").exit_code == 2);
    CHECK(run_cli("sweep --n 5:1").exit_code == 2);
    CHECK(run_cli("mc --samples 10").exit_code == 2);
    CHECK(run_cli("figure --id fig99").exit_code == 2);
    CHECK(run_cli("nonsense").exit_code == 2);
}

TEST_CASE("numerical guard errors exit with code 3") {
    // A narrow grid that cannot hold the spectrum even after widening is a
    // guard error, surfaced with a remediation hint.
    const auto r =
        run_cli("ensemble --geometry waveguide --beta 0.01 --n 5 --observable g2_trace "
                "--grid-width 0.0006 --grid-points 1024");
    CHECK(r.exit_code == 3);
}

TEST_CASE("byte-identical reruns and config round-trip") {
    const std::string args =
        "sweep --geometry waveguide --beta 0.01 --delta 0 --n 1:40 --observable g2_zero";
    const auto a = run_cli(args);
    const auto b = run_cli(args);
    CHECK(a.exit_code == 0);
    CHECK(a.output == b.output);

    // Extract the emitted config block verbatim and rerun from it.
    std::string cfg_path = "/tmp/wgqed_test_roundtrip.cfg";
    {
        std::ofstream cfg(cfg_path);
        for (const auto& line : lines_of(a.output)) {
            if (line.rfind("# ", 0) == 0) cfg << line << "\n";
            if (line == "# config-end") break;
        }
    }
    const auto c = run_cli("sweep --config " + cfg_path);
    CHECK(c.exit_code == 0);
    CHECK(c.output == a.output);
    std::remove(cfg_path.c_str());
}

TEST_CASE("command-line flags override config-file values") {
    std::string cfg_path = "/tmp/wgqed_test_override.cfg";
    {
        std::ofstream cfg(cfg_path);
        cfg << "beta=0.02\nn=3\nobservable=g2_zero\ngeometry=bragg\n";
    }
    const auto base = run_cli("ensemble --config " + cfg_path);
    CHECK(base.exit_code == 0);
    const auto overridden = run_cli("ensemble --config " + cfg_path + " --n 1");
    CHECK(overridden.exit_code == 0);
    // N = 1 Bragg gives exact antibunching; N = 3 does not.
    const auto row1 = first_data_row(overridden.output);
    REQUIRE(row1.size() == 1);
    CHECK(row1[0] < 1e-12);
    const auto row3 = first_data_row(base.output);
    REQUIRE(row3.size() == 1);
    CHECK(row3[0] > 0.1);
    std::remove(cfg_path.c_str());
}

TEST_CASE("waveguide sweep locates the antibunching point at N = 146") {
    const auto r = run_cli(
        "sweep --geometry waveguide --beta 0.01 --delta 0 --n 120:170 --observable g2_zero");
    CHECK(r.exit_code == 0);
    double best_n = -1, best = 1e300, prev_n = -1;
    bool header_seen = false;
    for (const auto& line : lines_of(r.output)) {
        if (line.empty() || line[0] == '#') continue;
        if (!header_seen) {
            header_seen = true;
            continue;
        }
        const auto row = parse_row(line);
        REQUIRE(row.size() == 2);
        CHECK(row[0] > prev_n);  // sorted, no duplicates
        prev_n = row[0];
        if (row[1] < best) {
            best = row[1];
            best_n = row[0];
        }
    }
    CHECK(best_n == 146.0);
    CHECK(best < 1e-3);
}

TEST_CASE("antibragg spectrum exposes the plateau in the normalized column") {
    const auto r = run_cli(
        "ensemble --geometry antibragg --beta 0.01 --n 400 --observable psi_incoh_spectrum");
    CHECK(r.exit_code == 0);
    bool header_seen = false;
    double at_zero = -1.0;
    for (const auto& line : lines_of(r.output)) {
        if (line.empty() || line[0] == '#') continue;
        if (!header_seen) {
            header_seen = true;
            CHECK(line == "omega_over_gamma,re_psi,im_psi,abs_psi,abs_psi_norm");
            continue;
        }
        const auto row = parse_row(line);
        if (row[0] == 0.0) at_zero = row[4];
    }
    CHECK(at_zero == doctest::Approx(1.0 / (0.01 * 0.99)).epsilon(1e-4));
}

TEST_CASE("mc subcommand is reproducible for a fixed seed") {
    const auto a = run_cli("mc --n 4 --samples 20000 --seed 99");
    const auto b = run_cli("mc --n 4 --samples 20000 --seed 99");
    CHECK(a.exit_code == 0);
    CHECK(a.output == b.output);
    const auto row = first_data_row(a.output);
    REQUIRE(row.size() == 4);
    CHECK(std::abs(row[1] - 0.75) <= 4.0 * row[2]);
}

TEST_CASE("json output format") {
    const auto r = run_cli("ensemble --geometry waveguide --n 2 --observable g2_zero --format json");
    CHECK(r.exit_code == 0);
    CHECK(r.output.find("\"columns\"") != std::string::npos);
    CHECK(r.output.find("\"g2\"") != std::string::npos);
}

TEST_CASE("figure command writes one csv per panel") {
    const std::string dir = "/tmp/wgqed_test_figs";
    const auto r = run_cli("figure --id fig5 --out " + dir);
    CHECK(r.exit_code == 0);
    std::ifstream f(dir + "/fig5.csv");
    REQUIRE(f.good());
    std::stringstream ss;
    ss << f.rdbuf();
    // N = 2 row shows the quarter-level antibunching.
    bool header_seen = false;
    for (const auto& line : lines_of(ss.str())) {
        if (line.empty() || line[0] == '#') continue;
        if (!header_seen) {
            header_seen = true;
            continue;
        }
        const auto row = parse_row(line);
        if (row[0] == 2.0) CHECK(row[1] == doctest::Approx(0.25).epsilon(0.08));
    }
}
