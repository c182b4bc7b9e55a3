#include "doctest.h"

#include <filesystem>
#include <fstream>
#include <sstream>

#include "qimsim/bench_dsl.hpp"
#include "qimsim/run.hpp"

using namespace qimsim;

namespace {

const char* kGhostText = R"(# ghost interference layout
pump wavelength_nm = 351
source spdc pmax=50000 modes=512 grid_n=2048 extent=0.04 seed=1

arm A: free d=1.0 mask double_slit d=0.0005 a=0.0001 detector farfield_point
arm B: free d=0.5 detector array min=-0.004 max=0.004 n=512
)";

BenchModel parse_ok(const std::string& text, const ParseOptions& opts = {}) {
    ParseResult r = parse_bench(text, opts);
    if (const auto* err = std::get_if<ParseError>(&r)) {
        INFO("line ", err->line, " col ", err->column, ": ", err->message);
        REQUIRE(false);
    }
    return std::get<BenchModel>(r);
}

ParseError parse_err(const std::string& text, const ParseOptions& opts = {}) {
    ParseResult r = parse_bench(text, opts);
    REQUIRE(std::holds_alternative<ParseError>(r));
    return std::get<ParseError>(r);
}

std::string preset_path(const std::string& name) {
    return std::string(QIMSIM_PRESET_DIR) + "/" + name;
}

}  // namespace

TEST_CASE("parse: the ghost preset text produces the expected model") {
    BenchModel m = parse_ok(kGhostText);
    CHECK(m.pump_wavelength_nm == 351.0);
    CHECK(m.source == SourceKind::spdc);
    CHECK(m.grid.p_max == 50000.0);
    CHECK(m.grid.modes == 512);
    CHECK(m.grid.n == 2048);
    CHECK(m.seed == 1);
    REQUIRE(m.arm_a.elements.size() == 2);
    CHECK(m.arm_a.elements[0].kind == DslElement::Kind::free);
    CHECK(m.arm_a.elements[0].value == 1.0);
    CHECK(m.arm_a.elements[1].kind == DslElement::Kind::mask);
    CHECK(m.arm_a.elements[1].mask.kind == DslMask::Kind::double_slit);
    CHECK(m.arm_a.elements[1].mask.d == 0.0005);
    CHECK(m.arm_a.detector.kind == DslDetector::Kind::farfield_point);
    CHECK(m.arm_b.detector.kind == DslDetector::Kind::array);
    CHECK(m.arm_b.detector.n == 512);
}

TEST_CASE("parse: missing detector names the arm and the rule") {
    ParseError err = parse_err(
        "pump wavelength_nm = 351\n"
        "source spdc\n"
        "arm A: free d=1.0 mask double_slit d=0.0005 a=0.0001\n"
        "arm B: free d=0.5 detector array min=-0.004 max=0.004 n=128\n");
    CHECK(err.message.find("arm A") != std::string::npos);
    CHECK(err.message.find("detector") != std::string::npos);
    CHECK(err.line == 3);
}

TEST_CASE("parse: diverging lens is gated behind a flag") {
    std::string text =
        "pump wavelength_nm = 351\n"
        "source spdc\n"
        "arm A: lens f=-0.1 detector bucket\n"
        "arm B: free d=0.5 detector array min=-0.001 max=0.001 n=64\n";
    ParseError err = parse_err(text);
    CHECK(err.message ==
          "focal length must be nonzero; negative allowed only with flag "
          "--allow-diverging");
    CHECK(err.token == "-0.1");
    ParseOptions opts;
    opts.allow_diverging_lens = true;
    BenchModel m = parse_ok(text, opts);
    CHECK(m.arm_a.elements[0].value == -0.1);
}

TEST_CASE("parse: error location slices to the offending token") {
    const std::string bad_inputs[] = {
        "pump wavelength_nm = banana\n",
        "pump wavelength_nm = 351\nsource tachyon\n",
        "pump wavelength_nm = 351\nsource spdc\narm C: free d=1 detector bucket\n",
        "pump wavelength_nm = 351\nsource spdc\narm A: free d=-2 detector bucket\n",
        "pump wavelength_nm = 351\nsource spdc pmax=0\n",
    };
    for (const std::string& text : bad_inputs) {
        ParseError err = parse_err(text);
        REQUIRE(err.line >= 1);
        REQUIRE(err.column >= 1);
        std::istringstream lines(text);
        std::string line;
        for (int i = 0; i < err.line; ++i) std::getline(lines, line);
        REQUIRE(static_cast<size_t>(err.column - 1 + err.token.size()) <=
                line.size());
        CHECK(line.substr(err.column - 1, err.token.size()) == err.token);
    }
}

TEST_CASE("parse: comments and blank lines never change the model") {
    BenchModel base = parse_ok(kGhostText);
    std::string noisy =
        "# leading banner\n\n"
        "pump wavelength_nm = 351   # inline comment\n"
        "\n# another\n"
        "source spdc pmax=50000 modes=512 grid_n=2048 extent=0.04 seed=1\n"
        "arm A: free d=1.0 mask double_slit d=0.0005 a=0.0001 detector "
        "farfield_point  # trailing\n\n"
        "arm B: free d=0.5 detector array min=-0.004 max=0.004 n=512\n#tail\n";
    CHECK(parse_ok(noisy) == base);
}

TEST_CASE("parse: duplicate statements and unknown options are rejected") {
    ParseError dup = parse_err(
        "pump wavelength_nm = 351\nsource spdc\nsource spdc\n"
        "arm A: free d=1 detector bucket\n"
        "arm B: free d=1 detector bucket\n");
    CHECK(dup.message.find("duplicate") != std::string::npos);
    ParseError opt = parse_err("pump wavelength_nm = 351\nsource spdc banana=3\n");
    CHECK(opt.token == "banana");
}

TEST_CASE("parse: classical epsilon is mandatory and nonzero") {
    ParseError err = parse_err(
        "pump wavelength_nm=351\nsource classical\n"
        "arm A: free d=1 detector bucket\narm B: free d=1 detector bucket\n");
    CHECK(err.message.find("epsilon") != std::string::npos);
    BenchModel m = parse_ok(
        "pump wavelength_nm=351\nsource classical epsilon=-1\n"
        "arm A: free d=1 detector bucket\narm B: free d=1 detector bucket\n");
    CHECK(m.epsilon == -1.0);
}

TEST_CASE("round trip: parse(print(model)) == model for every preset") {
    const char* names[] = {
        "fig1_ghost_image.bench", "fig2_classical_image.bench",
        "fig3_ghost_interference.bench", "classical_interference.bench",
        "klyshko.bench"};
    for (const char* name : names) {
        ParseResult r = parse_bench_file(preset_path(name));
        REQUIRE(std::holds_alternative<BenchModel>(r));
        BenchModel model = std::get<BenchModel>(r);
        std::string printed = print_bench(model);
        ParseResult r2 = parse_bench(printed);
        REQUIRE(std::holds_alternative<BenchModel>(r2));
        CHECK(std::get<BenchModel>(r2) == model);
        // printing is a fixpoint
        CHECK(print_bench(std::get<BenchModel>(r2)) == printed);
    }
}

TEST_CASE("compile: presets build into runnable benches") {
    for (const char* name :
         {"fig3_ghost_interference.bench", "fig2_classical_image.bench"}) {
        ParseResult r = parse_bench_file(preset_path(name));
        REQUIRE(std::holds_alternative<BenchModel>(r));
        CompiledBench bench =
            compile_bench(std::get<BenchModel>(r), QIMSIM_PRESET_DIR);
        CHECK(bench.ctx.omega == doctest::Approx(0.5 * bench.omega_p));
        CHECK(bench.grid.n == bench.grid_spec.n);
        CHECK(bench.mode_axis.n == bench.grid_spec.modes);
    }
}

TEST_CASE("compile: mask files resolve relative to the bench directory") {
    ParseResult r = parse_bench_file(preset_path("fig1_ghost_image.bench"));
    REQUIRE(std::holds_alternative<BenchModel>(r));
    CompiledBench bench = compile_bench(std::get<BenchModel>(r), QIMSIM_PRESET_DIR);
    const Mask* mask = nullptr;
    for (const Element& e : bench.arm_a.elements)
        if (const auto* m = std::get_if<Mask>(&e)) mask = m;
    REQUIRE(mask != nullptr);
    const auto* sampled = std::get_if<SampledMask>(&mask->profile);
    REQUIRE(sampled != nullptr);
    CHECK(sampled->x.size() > 100);
    CHECK(mask_amplitude(mask->profile, 0.0) == doctest::Approx(1.0).epsilon(1e-4));
}
