#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

#include <json.hpp>

namespace fs = std::filesystem;

namespace {
int run(const std::string& args) {
    const int rc = std::system((std::string(AHSCATTER_CLI) + " " + args + " > /dev/null 2>&1").c_str());
    return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}
fs::path scratch(const std::string& name) {
    const fs::path p = fs::temp_directory_path() / ("ahscatter_cli_" + name);
    fs::remove_all(p);
    return p;
}
}  // namespace

TEST_SUITE("cli") {
    TEST_CASE("example run writes a report") {
        const fs::path out = scratch("example");
        REQUIRE(run("example --config " AHSCATTER_CONFIG_DIR "/example_bronski_critical.json --out " + out.string()) == 0);
        std::ifstream f(out / "report.json");
        const auto j = nlohmann::json::parse(f);
        CHECK(j["status"] == "ok");
        CHECK(j["result"]["mu_star"].get<double>() == doctest::Approx(std::pow(2.0, -1.5)));
    }

    TEST_CASE("invalid config exits with 2") {
        const fs::path out = scratch("bad");
        fs::create_directories(out);
        std::ofstream(out / "bad.json") << R"({"family": {"name": "sech", "parameter": "abc"}})";
        CHECK(run("w-scan --config " + (out / "bad.json").string() + " --out " + out.string()) == 2);
        CHECK(run("no-such-command") == 2);
    }

    TEST_CASE("missing config file") { CHECK(run("validate --config /nonexistent.json") == 2); }
}
