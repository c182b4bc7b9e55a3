#pragma once

#include <optional>

#include "qimsim/bench_dsl.hpp"
#include "qimsim/csv_io.hpp"
#include "qimsim/detection.hpp"

namespace qimsim {

struct RunOverrides {
    std::optional<int> grid_n;
    std::optional<double> p_max;
    std::optional<std::uint64_t> seed;
    std::optional<BucketMode> bucket;
    std::optional<int> realizations;
    bool raw = false;
};

/// A bench description resolved into propagating objects: wave context at
/// the degenerate frequency, sampling grid, source mode axis and both arms
/// (mask files loaded relative to `base_dir`).
struct CompiledBench {
    WaveContext ctx;  // omega = omega_p / 2
    double omega_p = 0.0;
    Axis grid;
    Axis mode_axis;
    ArmSpec arm_a, arm_b;
    SourceKind source = SourceKind::spdc;
    double epsilon = 1.0;
    GridSpec grid_spec;
    std::uint64_t seed = 1;
    BucketMode bucket_mode = BucketMode::intensity_sum;

    BiphotonSource biphoton() const;
    ClassicalEnsemble classical() const;
    RandomPhaseEnsemble random_phase() const;
};

CompiledBench compile_bench(const BenchModel& model, const std::string& base_dir,
                            const RunOverrides& overrides = {});

struct RunResult {
    Pattern pattern;  // headline coincidence pattern over the arm-B detector
    std::optional<CoincidenceMap> map;          // when both arms are arrays
    std::optional<Pattern> singles_b;           // SPDC runs with an arm-B array
    std::optional<std::vector<double>> std_error;  // Monte-Carlo band
    int realizations = 0;
    CsvMeta metrics;  // fringe_spacing_m / visibility when defined
};

RunResult run_bench(const CompiledBench& bench, const RunOverrides& overrides = {});

}  // namespace qimsim
