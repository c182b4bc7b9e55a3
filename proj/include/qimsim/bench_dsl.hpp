#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "qimsim/elements.hpp"

namespace qimsim {

// DSL-level bench description. This mirrors the text form (mask file paths
// stay paths) so that parse/print round-trip exactly; compile_bench() in
// run.hpp resolves it into propagating objects.

enum class SourceKind { spdc, classical, randomphase };

struct GridSpec {
    int n = 2048;           // transverse samples of the computation grid
    double extent = 0.04;   // grid width, m (centred on the axis)
    double p_max = 5.0e4;   // source mode support half-width, rad/m
    int modes = 512;        // source mode count

    bool operator==(const GridSpec&) const = default;
};

struct DslMask {
    enum class Kind { double_slit, single_slit, file };
    Kind kind = Kind::double_slit;
    double d = 0.0;    // slit separation
    double a = 0.0;    // slit width
    std::string path;  // for Kind::file

    bool operator==(const DslMask&) const = default;
};

struct DslElement {
    enum class Kind { free, lens, mask, pupil };
    Kind kind = Kind::free;
    double value = 0.0;  // d / f / A depending on kind
    DslMask mask;

    bool operator==(const DslElement&) const = default;
};

struct DslDetector {
    enum class Kind { bucket, array, farfield_point };
    Kind kind = Kind::bucket;
    bool amplitude = false;  // bucket integrates amplitudes instead of counts
    double min = 0.0, max = 0.0;
    int n = 0;

    bool operator==(const DslDetector&) const = default;
};

struct DslArm {
    std::vector<DslElement> elements;
    DslDetector detector;

    bool operator==(const DslArm&) const = default;
};

struct BenchModel {
    double pump_wavelength_nm = 0.0;
    SourceKind source = SourceKind::spdc;
    double epsilon = 1.0;  // classical pairing scale
    GridSpec grid;
    std::uint64_t seed = 1;
    DslArm arm_a, arm_b;

    bool operator==(const BenchModel&) const = default;
};

struct ParseError {
    int line = 0;    // 1-based
    int column = 0;  // 1-based
    std::string message;
    std::string token;
};

struct ParseOptions {
    bool allow_diverging_lens = false;
};

using ParseResult = std::variant<BenchModel, ParseError>;

/// Parses a bench description. Grammar (one statement per line, '#' starts
/// a comment, lengths in meters unless the key ends in _nm):
///
///   bench  := header stmt*
///   header := "pump" "wavelength_nm" "=" NUM
///   stmt   := source | arm
///   source := "source" ("spdc" | "classical" "epsilon" "=" NUM |
///             "randomphase") opt*
///   opt    := ("pmax"|"modes"|"grid_n"|"extent"|"seed") "=" NUM
///   arm    := "arm" ("A"|"B") ":" elem+ det
///   elem   := "free" "d" "=" NUM | "lens" "f" "=" NUM | "mask" mask_kind |
///             "pupil" "A" "=" NUM
///   mask   := "double_slit" "d" "=" NUM "a" "=" NUM |
///             "single_slit" "a" "=" NUM | "file" "=" PATH
///   det    := "detector" ("bucket" ["amplitude"] |
///             "array" "min" "=" NUM "max" "=" NUM "n" "=" INT |
///             "farfield_point")
///
/// Semantic violations (missing detector, nonpositive length, diverging lens
/// without the flag) are reported through the same ParseError structure.
ParseResult parse_bench(std::string_view text, const ParseOptions& opts = {});

/// Canonical text form; parse_bench(print_bench(m)) == m.
std::string print_bench(const BenchModel& model);

/// Reads and parses a bench file.
ParseResult parse_bench_file(const std::string& path, const ParseOptions& opts = {});

}  // namespace qimsim
