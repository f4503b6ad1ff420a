// Black-box tests of the command-line front end.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <json.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace fs = std::filesystem;
using json = nlohmann::json;

namespace {

const std::string cli = FKDV_CLI_PATH;

struct TempDir {
    fs::path path;
    TempDir(const char* name) {
        path = fs::temp_directory_path() / (std::string("fkdv_cli_") + name);
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
    std::string str() const { return path.string(); }
};

int run(const std::string& args) {
    const std::string cmd = cli + " " + args + " > /dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WEXITSTATUS(status);
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string solve_args(const TempDir& dir) {
    return "solve --alpha 2 --p 1 --c 1 --l 64 --N 1024 --out " + dir.str();
}

} // namespace

TEST_CASE("solve writes profile, report and config echo") {
    TempDir dir("solve");
    CHECK(run(solve_args(dir)) == 0);
    CHECK(fs::exists(dir.path / "profile.csv"));
    CHECK(fs::exists(dir.path / "run.json"));

    const json report = json::parse(slurp(dir.path / "report.json"));
    CHECK(report["amplitude"].get<double>() == doctest::Approx(3.0).epsilon(1e-6));
    CHECK(report["converged_by"].get<std::string>() != "max_iter");
    CHECK(report["m_history"].size() == report["iterations"].get<std::size_t>() / 7);

    const json cfg = json::parse(slurp(dir.path / "run.json"));
    CHECK(cfg["alpha"].get<double>() == 2.0);
    CHECK(cfg["N"].get<int>() == 1024);
    CHECK(cfg["eps"].get<double>() == 2.0);
}

TEST_CASE("exit codes") {
    TempDir dir("codes");
    SUBCASE("invalid speed fails with a contract error") {
        CHECK(run("solve --alpha 2 --p 1 --c -1 --out " + dir.str()) == 1);
    }
    SUBCASE("non-power-of-two N is rejected") {
        CHECK(run("solve --N 1000 --out " + dir.str()) == 1);
    }
    SUBCASE("iteration cap exhaustion returns 2") {
        CHECK(run("solve --alpha 0.5 --l 64 --N 1024 --max-iter 3 --mw 1 --out " +
                  dir.str()) == 2);
    }
}

TEST_CASE("deterministic output") {
    TempDir a("det_a");
    TempDir b("det_b");
    REQUIRE(run(solve_args(a)) == 0);
    REQUIRE(run(solve_args(b)) == 0);
    CHECK(slurp(a.path / "profile.csv") == slurp(b.path / "profile.csv"));
    CHECK(slurp(a.path / "run.json") == slurp(b.path / "run.json"));
}

TEST_CASE("config file round trip through run.json") {
    TempDir first("cfg_first");
    TempDir second("cfg_second");
    REQUIRE(run("solve --alpha 1.5 --c 0.8 --l 64 --N 1024 --mw 3 --out " + first.str()) == 0);
    REQUIRE(run("solve --config " + (first.path / "run.json").string() + " --out " +
                second.str()) == 0);
    json a = json::parse(slurp(first.path / "run.json"));
    json b = json::parse(slurp(second.path / "run.json"));
    CHECK(a == b);
    CHECK(slurp(first.path / "profile.csv") == slurp(second.path / "profile.csv"));
}

TEST_CASE("key = value config file with flag override") {
    TempDir dir("kv");
    const fs::path cfg_path = dir.path / "run.cfg";
    std::ofstream(cfg_path) << "alpha = 2\nc = 0.5\nl = 64\nN = 1024\n";
    CHECK(run("solve --config " + cfg_path.string() + " --c 1 --out " + dir.str()) == 0);
    const json report = json::parse(slurp(dir.path / "report.json"));
    // flag --c 1 overrides the file's c = 0.5
    CHECK(report["amplitude"].get<double>() == doctest::Approx(3.0).epsilon(1e-6));
}

TEST_CASE("sweep with fit") {
    TempDir dir("sweep");
    CHECK(run("sweep --p 1 --l 64 --N 1024 --alpha-list 2 "
              "--c-list 0.5,0.75,1,1.25,1.5 --fit --out " + dir.str()) == 0);
    const std::string csv = slurp(dir.path / "sweep.csv");
    CHECK(csv.rfind("alpha,p,c,amplitude,iterations,converged\n", 0) == 0);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 6);

    const json fits = json::parse(slurp(dir.path / "fit.json"));
    REQUIRE(fits.size() == 1);
    CHECK(fits[0]["a"].get<double>() == doctest::Approx(3.0).epsilon(1e-4));
    CHECK(fits[0]["b"].get<double>() == doctest::Approx(1.0).epsilon(1e-4));
}

TEST_CASE("phase portrait output") {
    TempDir dir("phase");
    REQUIRE(run(solve_args(dir)) == 0);
    CHECK(run("phase " + (dir.path / "profile.csv").string() + " --out " + dir.str()) == 0);
    std::ifstream in(dir.path / "phase.csv");
    std::string line;
    std::getline(in, line);
    CHECK(line == "phi,dphi");
    bool peak_row = false;
    while (std::getline(in, line)) {
        const auto comma = line.find(',');
        const double phi = std::stod(line.substr(0, comma));
        const double dphi = std::stod(line.substr(comma + 1));
        if (std::fabs(phi - 3.0) < 1e-6 && std::fabs(dphi) < 1e-6) peak_row = true;
    }
    CHECK(peak_row);
}

TEST_CASE("fit subcommand") {
    TempDir dir("fit");
    const fs::path data = dir.path / "points.csv";

    SUBCASE("exact y = 3x data") {
        std::ofstream(data) << "x,y\n1,3\n2,6\n3,9\n4,12\n";
        CHECK(run("fit " + data.string() + " --out " + dir.str()) == 0);
        const json fit = json::parse(slurp(dir.path / "fit.json"));
        CHECK(fit["a"].get<double>() == doctest::Approx(3.0).epsilon(1e-10));
        CHECK(fit["b"].get<double>() == doctest::Approx(1.0).epsilon(1e-10));
    }
    SUBCASE("two points are not enough") {
        std::ofstream(data) << "x,y\n1,3\n2,6\n";
        CHECK(run("fit " + data.string() + " --out " + dir.str()) == 1);
    }
    SUBCASE("malformed CSV") {
        std::ofstream(data) << "x,y\n1,3\nnot-a-number\n";
        CHECK(run("fit " + data.string() + " --out " + dir.str()) == 1);
    }
}

TEST_CASE("evolve validates the grid against the config") {
    TempDir dir("evolve");
    REQUIRE(run(solve_args(dir)) == 0);
    // mismatched N must be rejected
    CHECK(run("evolve " + (dir.path / "profile.csv").string() +
              " --l 64 --N 2048 --out " + dir.str()) == 1);
    // matching grid runs a short integration
    CHECK(run("evolve " + (dir.path / "profile.csv").string() +
              " --l 64 --N 1024 --dt 0.01 --tfinal 0.1 --snapshot-stride 5 --out " +
              dir.str()) == 0);
    const std::string csv = slurp(dir.path / "evolve.csv");
    CHECK(csv.rfind("t,amplitude,peak_position,C,M,E\n", 0) == 0);
    CHECK(fs::exists(dir.path / "snapshot_000000.csv"));
}

TEST_CASE("FKDV_OUT environment override") {
    TempDir dir("env");
    const std::string cmd = "FKDV_OUT=" + dir.str() + " " + cli +
                            " solve --alpha 2 --l 64 --N 1024 > /dev/null 2>&1";
    CHECK(WEXITSTATUS(std::system(cmd.c_str())) == 0);
    CHECK(fs::exists(dir.path / "profile.csv"));
}
