#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sys/wait.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace fs = std::filesystem;

namespace {

struct Run {
    int code = -1;
    std::string out;
};

Run run(const std::string& args) {
    const std::string cmd = std::string(OPO_CLI_PATH) + " " + args + " 2>&1";
    Run r;
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    char buf[4096];
    while (std::fgets(buf, sizeof buf, pipe)) r.out += buf;
    const int status = pclose(pipe);
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string field(const std::string& out, const std::string& key) {
    const auto pos = out.find(key + ": ");
    REQUIRE(pos != std::string::npos);
    const auto start = pos + key.size() + 2;
    return out.substr(start, out.find('\n', start) - start);
}

fs::path scratch() {
    const auto dir = fs::temp_directory_path() / "opo_cli_test";
    fs::create_directories(dir);
    return dir;
}

}  // namespace

TEST_CASE("photons") {
    auto r = run("photons --G 1.01 --R 0.2 --t 1 --phi 0 --theta 0");
    CHECK(r.code == 0);
    CHECK(std::stod(field(r.out, "N_total")) == doctest::Approx(0.292400).epsilon(1e-5));
    CHECK(std::stod(field(r.out, "closed_form_deviation").substr(0, 20)) < 1e-10);
    CHECK(r.out.find("config: {") != std::string::npos);

    r = run("photons --G 1 --R 0.2 --t 0.5 --phi 0.3");
    CHECK(r.code == 0);
    CHECK(field(r.out, "N_total") == "0");

    r = run("photons --G 1.35 --R 0.2 --theta 0");
    CHECK(r.code == 3);
    CHECK(r.out.find("threshold") != std::string::npos);

    r = run("photons --G 1.01 --R 1.2");
    CHECK(r.code == 2);
    r = run("photons --bogus 3");
    CHECK(r.code == 2);
}

TEST_CASE("photons with degrees") {
    const auto rad = run("photons --G 1.01 --R 0.2 --t 0.5 --phi 0.39269908169872414");
    const auto deg = run("photons --G 1.01 --R 0.2 --t 0.5 --phi 22.5 --deg");
    CHECK(field(rad.out, "N_total") == field(deg.out, "N_total"));
}

TEST_CASE("kfactor") {
    auto r = run("kfactor --t 0.2 --phi 0.3926990817");
    CHECK(r.code == 0);
    CHECK(std::stod(field(r.out, "K")) == doctest::Approx(2.42017).epsilon(1e-5));
    CHECK(field(r.out, "regime") == "Locked");

    r = run("kfactor --t 1 --phi 0.7");
    CHECK(r.code == 0);
    CHECK(std::stod(field(r.out, "K")) == doctest::Approx(1.0).epsilon(1e-10));

    r = run("kfactor --t 0.414214 --phi 0.3926990817");
    CHECK(r.code == 0);
    CHECK(field(r.out, "regime") == "Critical");

    r = run("kfactor --t 0 --phi 0.7853981633974483");
    CHECK(r.code == 0);
    CHECK(field(r.out, "K") == "inf (Divergent)");
}

TEST_CASE("sweep presets and output") {
    const auto dir = scratch();
    const auto fig3 = dir / "fig3.csv";
    auto r = run("sweep --fig 3 --out " + fig3.string());
    CHECK(r.code == 0);
    const auto text = slurp(fig3);
    CHECK(std::count(text.begin(), text.end(), '\n') == 1001 + 2);

    // Byte-identical on a repeat run and when regenerated from metadata.
    const auto again = dir / "fig3_again.csv";
    CHECK(run("sweep --fig 3 --out " + again.string()).code == 0);
    CHECK(slurp(again) == text);
    const auto regen = dir / "fig3_regen.csv";
    CHECK(run("sweep --from-metadata " + fig3.string() + " --out " + regen.string()).code == 0);
    CHECK(slurp(regen) == text);

    const auto json = dir / "custom.json";
    r = run("sweep --G 1.01 --R 0.2 --axis t=0:1:3 --axis phi=0:90:3 --deg --format json --out " + json.string());
    CHECK(r.code == 0);
    const auto regen_json = dir / "custom_regen.json";
    CHECK(run("sweep --from-metadata " + json.string() + " --out " + regen_json.string()).code == 0);
    CHECK(slurp(regen_json) == slurp(json));
}

TEST_CASE("sweep default output directory from the environment") {
    const auto dir = scratch() / "envdir";
    fs::create_directories(dir);
    fs::remove(dir / "fig3.csv");
    const std::string cmd = "OPO_OUTPUT_DIR=" + dir.string() + " " + OPO_CLI_PATH + " sweep --fig 3 > /dev/null";
    CHECK(std::system(cmd.c_str()) == 0);
    CHECK(fs::exists(dir / "fig3.csv"));
}

TEST_CASE("sweep errors") {
    CHECK(run("sweep --G 1.01 --R 0.2").code == 2);
    CHECK(run("sweep --axis t=0:1:0").code == 2);
    CHECK(run("sweep --axis q=0:1:3").code == 2);
    CHECK(run("sweep --fig 4").code == 2);
    CHECK(run("sweep --fig 2 --G 1.1").code == 2);
    CHECK(run("sweep --axis t=0:1:3 --out /nonexistent-dir/x/y.csv").code == 4);
}

TEST_CASE("check") {
    auto r = run("check --samples 50 --seed 5");
    CHECK(r.code == 0);
    CHECK(r.out.find("FAIL") == std::string::npos);
    const auto again = run("check --samples 50 --seed 5");
    CHECK(again.out == r.out);

    r = run("check --samples 50 --inject-fault left-mirror-sign");
    CHECK(r.code == 1);
    CHECK(r.out.find("FAIL round trip matches closed form") != std::string::npos);
}
