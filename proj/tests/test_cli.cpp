#define DOCTEST_CONFIG_IMPLEMENT
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

#include "doctest.h"
#include "vblob/config.hpp"
#include "vblob/errors.hpp"

using namespace vblob;

static std::string g_binary;

int main(int argc, char** argv) {
    if (argc > 1 && argv[argc - 1][0] != '-') {
        g_binary = argv[argc - 1];
        --argc;
    }
    doctest::Context ctx(argc, argv);
    return ctx.run();
}

namespace {

int run_tool(const std::string& args) {
    const int status = std::system((g_binary + " " + args + " >/dev/null 2>&1").c_str());
    return WEXITSTATUS(status);
}

std::filesystem::path scratch() {
    auto dir = std::filesystem::temp_directory_path() / "vblob_cli_test";
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir;
}

}  // namespace

TEST_CASE("config parsing: minimal file, defaults, strict rejection") {
    const auto cfg = parse_config(
        R"({"command":"simulate","data":"rankine","omega0":1.0,"radius":1.0})");
    CHECK(cfg.command == "simulate");
    CHECK(cfg.dt > 0.0);
    CHECK(cfg.deterministic);

    auto key_of = [](const std::string& text) {
        try {
            parse_config(text);
        } catch (const ConfigError& e) {
            return e.key;
        }
        return std::string("no-throw");
    };
    CHECK(key_of(R"({"command":"simulate","dt":0})") == "dt");
    CHECK(key_of(R"({"command":"simulate","viscosity":0.001})") == "viscosity");
    CHECK(key_of(R"({"command":"warp"})") == "command");
    CHECK(key_of(R"({"command":"stability","mode":"chaotic"})") == "mode");
    CHECK(key_of(R"({"command":"simulate","eps":"small"})") == "eps");
    CHECK_THROWS_AS(parse_config("not json"), ConfigError);
}

TEST_CASE("effective config echo parses back to the same values") {
    RunConfig cfg;
    cfg.command = "existence";
    cfg.eps = 0.025;
    cfg.levels = 4;
    cfg.plots = true;
    const auto back = parse_config(effective_config_json(cfg));
    CHECK(back.command == cfg.command);
    CHECK(back.eps == cfg.eps);
    CHECK(back.levels == cfg.levels);
    CHECK(back.plots == cfg.plots);
}

TEST_CASE("binary: usage errors exit 2") {
    REQUIRE_FALSE(g_binary.empty());
    CHECK(run_tool("") == 2);
    CHECK(run_tool("simulate --dt 0") == 2);
    CHECK(run_tool("simulate --viscosity 0.1") == 2);
    CHECK(run_tool("simulate --config /nonexistent.json") == 2);
}

TEST_CASE("binary: simulate writes snapshots and the effective config") {
    const auto dir = scratch();
    const auto out = (dir / "sim").string();
    CHECK(run_tool("simulate --n 16 --eps 0.1 --dt 0.05 --T 0.1 --out " + out) == 0);
    CHECK(std::filesystem::exists(dir / "sim" / "effective_config.json"));
    bool found = false;
    for (const auto& e : std::filesystem::directory_iterator(dir / "sim" / "snapshots"))
        found |= e.path().extension() == ".csv";
    CHECK(found);
    std::filesystem::remove_all(dir);
}

TEST_CASE("binary: a violent step on a strong vortex aborts with exit 3") {
    const auto dir = scratch();
    CHECK(run_tool("simulate --omega0 1e6 --n 12 --eps 0.1 --dt 1 --T 1 --out " +
                   (dir / "blow").string()) == 3);
    std::filesystem::remove_all(dir);
}

TEST_CASE("binary: verify on the zero field exits 0 with zero residuals") {
    const auto dir = scratch();
    const auto out = (dir / "v0").string();
    CHECK(run_tool("verify --omega0 0 --n 12 --eps 0.1 --dt 0.05 --T 0.1 --out " + out) ==
          0);
    std::ifstream in(dir / "v0" / "residuals.csv");
    std::string line, all;
    while (std::getline(in, line)) all += line + "\n";
    CHECK(all.find("symmetrized_vorticity,0,") != std::string::npos);
    std::filesystem::remove_all(dir);
}

TEST_CASE("binary: verify on a small steady patch exits 0") {
    const auto dir = scratch();
    CHECK(run_tool("verify --n 24 --eps 0.08 --dt 0.02 --T 0.2 --out " +
                   (dir / "v1").string()) == 0);
    std::filesystem::remove_all(dir);
}

TEST_CASE("binary: stability with a single level reports and exits 0") {
    const auto dir = scratch();
    CHECK(run_tool("stability --levels 1 --T 0.1 --dt 0.05 --out " +
                   (dir / "s1").string()) == 0);
    CHECK(std::filesystem::exists(dir / "s1" / "levels.csv"));
    std::filesystem::remove_all(dir);
}

TEST_CASE("binary: config file plus flag override, deterministic reruns identical") {
    const auto dir = scratch();
    std::ofstream(dir / "cfg.json")
        << R"({"command":"simulate","n":16,"eps":0.1,"dt":0.05,"T":0.1,"out":")"
        << (dir / "a").string() << R"("})";
    CHECK(run_tool("simulate --config " + (dir / "cfg.json").string()) == 0);
    CHECK(run_tool("simulate --config " + (dir / "cfg.json").string() + " --out " +
                   (dir / "b").string()) == 0);

    auto slurp = [](const std::filesystem::path& p) {
        std::ifstream in(p);
        std::string s, line;
        while (std::getline(in, line)) s += line + "\n";
        return s;
    };
    bool compared = false;
    for (const auto& e : std::filesystem::directory_iterator(dir / "a" / "snapshots")) {
        const auto other = dir / "b" / "snapshots" / e.path().filename();
        REQUIRE(std::filesystem::exists(other));
        CHECK(slurp(e.path()) == slurp(other));
        compared = true;
    }
    CHECK(compared);
    std::filesystem::remove_all(dir);
}
