#include <catch2/catch_amalgamated.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <sys/wait.h>

namespace fs = std::filesystem;

namespace {

std::string cli_path() {
    const char* p = std::getenv("QJUMPS_CLI_PATH");
    REQUIRE(p != nullptr);
    return p;
}

int run_cli(const std::string& args) {
    const std::string cmd = cli_path() + " " + args + " > /dev/null 2>&1";
    int status = std::system(cmd.c_str());
    REQUIRE(status != -1);
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    REQUIRE(in.good());
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

fs::path temp_dir(const std::string& tag) {
    fs::path d = fs::temp_directory_path() / ("qjumps_cli_test_" + tag);
    fs::remove_all(d);
    fs::create_directories(d);
    return d;
}

void write_file(const fs::path& p, const std::string& text) {
    std::ofstream out(p);
    out << text;
}

}  // namespace

TEST_CASE("predict on the C=10 preset emits the closed-form table") {
    auto out = temp_dir("predict");
    REQUIRE(run_cli("predict --preset fig5a --out " + out.string()) == 0);
    const std::string table = slurp(out / "predictions.csv");
    REQUIRE(table.find("# config=") != std::string::npos);
    REQUIRE(table.find("# master_seed=") != std::string::npos);
    REQUIRE(table.find("t_dark,133333.3") != std::string::npos);
    REQUIRE(table.find("t_click,1900,") != std::string::npos);
    REQUIRE(table.find("cooperativity,10,") != std::string::npos);
    REQUIRE(table.find("asymptotic_fidelity,0.98600") != std::string::npos);
    REQUIRE(fs::exists(out / "fidelity_curve.csv"));
    const std::string curve = slurp(out / "fidelity_curve.csv");
    REQUIRE(curve.find("t,P0D,P0L,F") != std::string::npos);
}

TEST_CASE("validation failures exit with status 2") {
    auto out = temp_dir("validate");
    // out-of-range eta must be named in a validation error
    write_file(out / "bad_eta.json", R"({"model":"full","params":{"eta":1.5}})");
    REQUIRE(run_cli("predict --config " + (out / "bad_eta.json").string() + " --out " +
                    out.string()) == 2);
    // empty file is a parse error
    write_file(out / "empty.json", "");
    REQUIRE(run_cli("predict --config " + (out / "empty.json").string() + " --out " +
                    out.string()) == 2);
    // neither preset nor config
    REQUIRE(run_cli("predict --out " + out.string()) == 2);
    // unknown preset
    REQUIRE(run_cli("predict --preset nope --out " + out.string()) == 2);
}

TEST_CASE("simulate is reproducible bit-for-bit from the same seed") {
    auto out = temp_dir("repro");
    write_file(out / "cfg.json",
               R"({"preset":"toy","simulation":{"t_max":2000,"n_traj":3,"master_seed":42}})");
    const std::string base =
        "simulate --config " + (out / "cfg.json").string() + " --out ";
    REQUIRE(run_cli(base + (out / "a").string()) == 0);
    REQUIRE(run_cli(base + (out / "b").string()) == 0);
    for (const char* f : {"traj_0.txt", "traj_1.txt", "traj_2.txt", "summary.csv"})
        REQUIRE(slurp(out / "a" / f) == slurp(out / "b" / f));
    // a different seed changes the records
    REQUIRE(run_cli(base + (out / "c").string() + " --seed 43") == 0);
    REQUIRE(slurp(out / "a" / "traj_0.txt") != slurp(out / "c" / "traj_0.txt"));
}

TEST_CASE("analyze with no detected clicks exits with status 4") {
    auto out = temp_dir("insufficient");
    // 100 time units is far below the ~1900 mean interclick time
    write_file(out / "cfg.json",
               R"({"preset":"fig5a","simulation":{"t_max":100,"n_traj":2}})");
    REQUIRE(run_cli("analyze --config " + (out / "cfg.json").string() + " --out " +
                    out.string()) == 4);
}

TEST_CASE("compare on the toy preset passes its tolerances") {
    auto out = temp_dir("compare");
    write_file(out / "cfg.json",
               R"({"preset":"toy","simulation":{"n_traj":100,"master_seed":7},)"
               R"("analysis":{"tau_thresh":50}})");
    REQUIRE(run_cli("compare --config " + (out / "cfg.json").string() + " --workers 2 --out " +
                    out.string()) == 0);
    const std::string table = slurp(out / "compare.csv");
    REQUIRE(table.find("t_dark,") != std::string::npos);
    REQUIRE(table.find("t_click,") != std::string::npos);
    // every row ends with pass = 1
    REQUIRE(table.find(",0\n") == std::string::npos);
}
