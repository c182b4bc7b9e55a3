#include "doctest.h"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include "qimsim/csv_io.hpp"

// End-to-end checks of the installed CLI binary: exit codes, CSV headers,
// and byte-identical reruns for a fixed seed.

namespace {

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

int run_cli(const std::string& args) {
    std::string cmd = std::string(QIMSIM_CLI_PATH) + " " + args + " >/dev/null 2>&1";
    int status = std::system(cmd.c_str());
    return WEXITSTATUS(status);
}

std::string preset(const std::string& name) {
    return std::string(QIMSIM_PRESET_DIR) + "/" + name;
}

}  // namespace

TEST_CASE("cli: identical invocations produce byte-identical CSV artifacts") {
    REQUIRE(run_cli("run " + preset("klyshko.bench") +
                    " --realizations 50 --seed 9 --out /tmp/qimsim_a.csv") == 0);
    REQUIRE(run_cli("run " + preset("klyshko.bench") +
                    " --realizations 50 --seed 9 --out /tmp/qimsim_b.csv") == 0);
    std::string a = slurp("/tmp/qimsim_a.csv");
    std::string b = slurp("/tmp/qimsim_b.csv");
    REQUIRE(!a.empty());
    CHECK(a == b);
    CHECK(slurp("/tmp/qimsim_a.se.csv") == slurp("/tmp/qimsim_b.se.csv"));
    // a different seed changes the Monte-Carlo artifact
    REQUIRE(run_cli("run " + preset("klyshko.bench") +
                    " --realizations 50 --seed 10 --out /tmp/qimsim_c.csv") == 0);
    CHECK(slurp("/tmp/qimsim_c.csv") != a);
}

TEST_CASE("cli: CSV artifacts begin with the version header and echo config") {
    REQUIRE(run_cli("run " + preset("fig3_ghost_interference.bench") +
                    " --out /tmp/qimsim_fig3.csv") == 0);
    std::string body = slurp("/tmp/qimsim_fig3.csv");
    CHECK(body.rfind("# qimsim pattern v1\n", 0) == 0);
    CHECK(body.find("# bench ") != std::string::npos);
    CHECK(body.find("# grid_n 2048") != std::string::npos);
    CHECK(body.find("# seed 1") != std::string::npos);
    CHECK(body.find("x_m,value") != std::string::npos);
    std::string metrics = slurp("/tmp/qimsim_fig3.metrics.csv");
    CHECK(metrics.rfind("# qimsim metrics v1\n", 0) == 0);
    CHECK(metrics.find("fringe_spacing_m,") != std::string::npos);
    CHECK(metrics.find("visibility,") != std::string::npos);
}

TEST_CASE("cli: exit codes distinguish parse errors from sampling guards") {
    // parse error -> 1
    std::ofstream bad("/tmp/qimsim_bad.bench");
    bad << "pump wavelength_nm = 351\nsource spdc\n"
        << "arm A: free d=1.0\n"  // missing detector
        << "arm B: free d=0.5 detector array min=-0.001 max=0.001 n=64\n";
    bad.close();
    CHECK(run_cli("run /tmp/qimsim_bad.bench --out /tmp/qimsim_bad.csv") == 1);

    // sampling violation -> 2: an unapodized lens chirp on the full window
    std::ofstream guard("/tmp/qimsim_guard.bench");
    guard << "pump wavelength_nm = 351\nsource spdc pmax=30000 modes=64 "
             "grid_n=512 extent=0.04 seed=1\n"
          << "arm A: free d=0.3 lens f=0.05 free d=0.05 detector bucket\n"
          << "arm B: free d=0.5 detector array min=-0.001 max=0.001 n=64\n";
    guard.close();
    CHECK(run_cli("run /tmp/qimsim_guard.bench --out /tmp/qimsim_guard.csv") == 2);

    CHECK(run_cli("run /tmp/does_not_exist.bench") == 1);
}

TEST_CASE("cli: witness subcommands run and report the known values") {
    std::string cmd = std::string(QIMSIM_CLI_PATH) +
                      " witness expect > /tmp/qimsim_witness.txt 2>&1";
    REQUIRE(WEXITSTATUS(std::system(cmd.c_str())) == 0);
    std::string out = slurp("/tmp/qimsim_witness.txt");
    CHECK(out.find("-0.333333333333") != std::string::npos);
    CHECK(out.find("0.166666666667") != std::string::npos);

    cmd = std::string(QIMSIM_CLI_PATH) +
          " witness threshold > /tmp/qimsim_threshold.txt 2>&1";
    REQUIRE(WEXITSTATUS(std::system(cmd.c_str())) == 0);
    CHECK(slurp("/tmp/qimsim_threshold.txt").find("0.333333") != std::string::npos);

    REQUIRE(run_cli("witness sweep --n 64 --out /tmp/qimsim_sweep.csv") == 0);
    std::string sweep = slurp("/tmp/qimsim_sweep.csv");
    CHECK(sweep.rfind("# qimsim witness-sweep v1\n", 0) == 0);
    CHECK(sweep.find("# min ") != std::string::npos);
}

TEST_CASE("csv: coincidence map rows are x1_m,x2_m,value") {
    using namespace qimsim;
    CoincidenceMap map;
    map.axis1 = Axis(0.0, 2.0, 2);
    map.axis2 = Axis(0.0, 3.0, 3);
    map.values = {1.0, 2.0, 3.0, 4.0, 5.0, 6.0};
    std::ostringstream out;
    write_coincidence_csv(out, map, {{"bench", "synthetic"}});
    std::string body = out.str();
    CHECK(body.rfind("# qimsim coincidence v1\n", 0) == 0);
    CHECK(body.find("x1_m,x2_m,value\n") != std::string::npos);
    CHECK(body.find("0.5,2.5,3\n") != std::string::npos);
    CHECK(body.find("1.5,0.5,4\n") != std::string::npos);
}

TEST_CASE("cli: the bucket flag switches the reduction mode") {
    REQUIRE(run_cli("run " + preset("fig1_ghost_image.bench") +
                    " --out /tmp/qimsim_int.csv") == 0);
    REQUIRE(run_cli("run " + preset("fig1_ghost_image.bench") +
                    " --bucket amplitude --out /tmp/qimsim_amp.csv") == 0);
    std::string intensity = slurp("/tmp/qimsim_int.csv");
    std::string amplitude = slurp("/tmp/qimsim_amp.csv");
    REQUIRE(!intensity.empty());
    REQUIRE(!amplitude.empty());
    CHECK(intensity != amplitude);
}

TEST_CASE("cli: presets list names the shipped benches") {
    std::string cmd =
        std::string(QIMSIM_CLI_PATH) + " presets list > /tmp/qimsim_presets.txt 2>&1";
    REQUIRE(WEXITSTATUS(std::system(cmd.c_str())) == 0);
    std::string out = slurp("/tmp/qimsim_presets.txt");
    for (const char* name :
         {"fig1_ghost_image.bench", "fig2_classical_image.bench",
          "fig3_ghost_interference.bench", "classical_interference.bench",
          "klyshko.bench"})
        CHECK(out.find(name) != std::string::npos);
}
