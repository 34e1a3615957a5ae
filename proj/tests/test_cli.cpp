#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

int run_cli(const std::string& args) {
    const std::string cmd = std::string(RICCI_CLI_PATH) + " " + args + " > /dev/null 2>&1";
    const int rc = std::system(cmd.c_str());
    return WEXITSTATUS(rc);
}

json read_summary(const fs::path& dir) {
    std::ifstream f(dir / "summary.json");
    REQUIRE(f.good());
    json j;
    f >> j;
    return j;
}

std::string slurp(const fs::path& p) {
    std::ifstream f(p);
    std::stringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

struct TempDir {
    fs::path path;
    explicit TempDir(const std::string& tag)
        : path(fs::temp_directory_path() / ("ricci_cli_" + tag)) {
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

}  // namespace

TEST_CASE("predict subcommand emits schema-1 JSON with the config embedded") {
    TempDir tmp("predict");
    CHECK(run_cli("predict --t -1e6 --quiet --out " + tmp.path.string()) == 0);
    const json j = read_summary(tmp.path);
    CHECK(j["schema"] == 1);
    CHECK(j["command"] == "predict");
    CHECK(j["config"]["t"] == -1e6);
    CHECK(std::abs(j["results"]["k"].get<double>() - 1.38155e-5) < 1e-9);
    CHECK(std::abs(j["results"]["d"].get<double>() - 14867.7) < 0.1);
}

TEST_CASE("identical configs give byte-identical summaries") {
    TempDir a("det_a"), b("det_b");
    CHECK(run_cli("spectral --quiet --out " + a.path.string()) == 0);
    CHECK(run_cli("spectral --quiet --out " + b.path.string()) == 0);
    CHECK(slurp(a.path / "summary.json") == slurp(b.path / "summary.json"));
}

TEST_CASE("bryant subcommand passes its checks and writes the profile") {
    TempDir tmp("bryant");
    CHECK(run_cli("bryant --rho-max 40 --tol 1e-9 --quiet --out " + tmp.path.string()) == 0);
    const json j = read_summary(tmp.path);
    CHECK(std::abs(j["results"]["C0"].get<double>() + 1.0) < 1e-3);
    for (const auto& c : j["checks"]) CHECK(c["pass"].get<bool>());
    CHECK(fs::exists(tmp.path / "bryant.csv"));
    // CSV header
    std::ifstream f(tmp.path / "bryant.csv");
    std::string header;
    std::getline(f, header);
    CHECK(header == "rho,Z");
}

TEST_CASE("flow subcommand writes snapshots in the rescaled chart") {
    TempDir tmp("flow");
    CHECK(run_cli("flow --fixture sphere --r 1.5 --n 101 --dt-factor 0.05 --output-every 200 --quiet --out " +
                  tmp.path.string()) == 0);
    const json j = read_summary(tmp.path);
    CHECK(j["results"]["extinct"].get<bool>());
    CHECK(fs::exists(tmp.path / "snapshot_0000.csv"));
    std::ifstream f(tmp.path / "snapshot_0000.csv");
    std::string header;
    std::getline(f, header);
    CHECK(header == "sigma,u");
    // final unrescaled state in the canonical serializations
    std::ifstream fp(tmp.path / "final_profile.csv");
    std::getline(fp, header);
    CHECK(header == "s,psi");
    std::ifstream fc(tmp.path / "final_curvatures.csv");
    std::getline(fc, header);
    CHECK(header == "s,K0,K1,R,Q");
}

TEST_CASE("config file with section per subcommand; flags still override") {
    TempDir tmp("cfg");
    {
        std::ofstream f(tmp.path / "run.ini");
        f << "[predict]\nt=-1e6\n";
    }
    CHECK(run_cli("predict --config " + (tmp.path / "run.ini").string() + " --quiet --out " +
                  tmp.path.string()) == 0);
    CHECK(read_summary(tmp.path)["config"]["t"] == -1e6);
    // flag wins over the file
    CHECK(run_cli("predict --config " + (tmp.path / "run.ini").string() +
                  " --t -1e8 --quiet --out " + tmp.path.string()) == 0);
    CHECK(read_summary(tmp.path)["config"]["t"] == -1e8);
}

TEST_CASE("exit codes") {
    TempDir tmp("err");
    SUBCASE("unknown subcommand is a config error") {
        CHECK(run_cli("frobnicate") == 2);
    }
    SUBCASE("precondition violations are config errors") {
        CHECK(run_cli("bryant --rho-max 40 --tol 1 --quiet --out " + tmp.path.string()) == 2);
    }
    SUBCASE("a failing assertion exits 1") {
        // the leading-order comparison curve is not a strict supersolution,
        // so the barrier negativity check reports failure
        CHECK(run_cli("barrier --a 30 --quiet --out " + tmp.path.string()) == 1);
        const json j = read_summary(tmp.path);
        bool saw_negative_check = false;
        for (const auto& c : j["checks"])
            if (c["name"] == "barrier.negative_in_window") {
                saw_negative_check = true;
                CHECK_FALSE(c["pass"].get<bool>());
            }
        CHECK(saw_negative_check);
        CHECK(j["results"]["first_violation_u"].get<double>() > 0.0);
    }
}
