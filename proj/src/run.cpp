#include "qimsim/run.hpp"

#include <cmath>
#include <numbers>

namespace qimsim {

namespace {

std::string resolve_path(const std::string& base_dir, const std::string& path) {
    if (path.empty() || path.front() == '/' || base_dir.empty()) return path;
    return base_dir + "/" + path;
}

ArmSpec compile_arm(const DslArm& arm, const Axis& grid, BucketMode bucket_mode,
                    const std::string& base_dir) {
    ArmSpec out;
    for (const DslElement& e : arm.elements) {
        switch (e.kind) {
            case DslElement::Kind::free:
                out.elements.push_back(FreeSpace{e.value});
                break;
            case DslElement::Kind::lens:
                out.elements.push_back(ThinLens{e.value});
                break;
            case DslElement::Kind::pupil:
                out.elements.push_back(GaussianPupil{e.value});
                break;
            case DslElement::Kind::mask:
                switch (e.mask.kind) {
                    case DslMask::Kind::double_slit:
                        out.elements.push_back(
                            Mask{DoubleSlit{e.mask.d, e.mask.a}});
                        break;
                    case DslMask::Kind::single_slit:
                        out.elements.push_back(Mask{SingleSlit{e.mask.a}});
                        break;
                    case DslMask::Kind::file:
                        out.elements.push_back(Mask{
                            load_mask_file(resolve_path(base_dir, e.mask.path))});
                        break;
                }
                break;
        }
    }
    switch (arm.detector.kind) {
        case DslDetector::Kind::bucket:
            out.detector = BucketDetector{
                grid, arm.detector.amplitude ? BucketMode::amplitude_integrated
                                             : bucket_mode};
            break;
        case DslDetector::Kind::array:
            out.detector = PointArray{
                Axis(arm.detector.min, arm.detector.max, arm.detector.n)};
            break;
        case DslDetector::Kind::farfield_point:
            out.detector = FarFieldPoint{};
            break;
    }
    return out;
}

}  // namespace

BiphotonSource CompiledBench::biphoton() const {
    BiphotonSource src;
    src.omega_p = omega_p;
    src.f = ModeProfile{ModeProfile::Kind::flat, grid_spec.p_max, 0.0};
    return src;
}

ClassicalEnsemble CompiledBench::classical() const {
    ClassicalEnsemble ens;
    ens.epsilon = epsilon;
    ens.weights = ModeProfile{ModeProfile::Kind::flat, grid_spec.p_max, 0.0};
    return ens;
}

RandomPhaseEnsemble CompiledBench::random_phase() const {
    RandomPhaseEnsemble ens;
    ens.weights = ModeProfile{ModeProfile::Kind::flat, grid_spec.p_max, 0.0};
    ens.seed = seed;
    return ens;
}

CompiledBench compile_bench(const BenchModel& model, const std::string& base_dir,
                            const RunOverrides& overrides) {
    GridSpec gs = model.grid;
    if (overrides.grid_n) gs.n = *overrides.grid_n;
    if (overrides.p_max) gs.p_max = *overrides.p_max;
    if (gs.n < 64) throw ValidationError("grid n must be at least 64");

    const double lambda_pump = model.pump_wavelength_nm * 1e-9;
    const double omega_p = 2.0 * std::numbers::pi * WaveContext::c / lambda_pump;

    CompiledBench bench{
        WaveContext(0.5 * omega_p),
        omega_p,
        Axis(-0.5 * gs.extent, 0.5 * gs.extent, gs.n),
        Axis(-gs.p_max, gs.p_max, gs.modes),
        {},
        {},
        model.source,
        model.epsilon,
        gs,
        overrides.seed ? *overrides.seed : model.seed,
        overrides.bucket ? *overrides.bucket : BucketMode::intensity_sum,
    };
    bench.arm_a = compile_arm(model.arm_a, bench.grid, bench.bucket_mode, base_dir);
    bench.arm_b = compile_arm(model.arm_b, bench.grid, bench.bucket_mode, base_dir);
    return bench;
}

RunResult run_bench(const CompiledBench& bench, const RunOverrides& overrides) {
    const bool raw = overrides.raw;
    TransferMatrix ga = arm_transfer(bench.arm_a, bench.ctx, bench.mode_axis,
                                     bench.grid);
    TransferMatrix gb = arm_transfer(bench.arm_b, bench.ctx, bench.mode_axis,
                                     bench.grid);

    RunResult result;
    if (bench.source == SourceKind::spdc) {
        AmplitudeMap ampl = biphoton_amplitude(ga, gb, bench.biphoton());
        BucketMode mode = bench.bucket_mode;
        if (const auto* bucket = std::get_if<BucketDetector>(&bench.arm_a.detector))
            mode = bucket->mode;
        result.pattern = coincidence_pattern(ampl, mode, !raw);
        if (!ga.far_field && ga.n_out() > 1 &&
            std::holds_alternative<PointArray>(bench.arm_a.detector))
            result.map = coincidence_map(ampl);
        if (gb.out_axis)
            result.singles_b = singles_pattern(gb, bench.biphoton(), true, !raw);
    } else if (bench.source == SourceKind::classical) {
        ClassicalEnsemble ens = bench.classical();
        result.pattern = classical_coincidence(ens, ga, gb, !raw);
        if (ga.out_axis && gb.out_axis &&
            std::holds_alternative<PointArray>(bench.arm_a.detector))
            result.map = classical_coincidence_map(ens, ga, gb);
    } else {
        int n = overrides.realizations ? *overrides.realizations : 10000;
        KlyshkoResult mc = klyshko_mc(bench.random_phase(), ga, gb, n, !raw);
        result.pattern = std::move(mc.pattern);
        result.std_error = std::move(mc.std_error);
        result.realizations = mc.realizations;
    }

    result.metrics.emplace_back("visibility", format_double(visibility(result.pattern)));
    try {
        result.metrics.emplace_back("fringe_spacing_m",
                                    format_double(fringe_spacing(result.pattern)));
    } catch (const NoFringes&) {
        // patterns without three interior maxima simply have no spacing metric
    }
    return result;
}

}  // namespace qimsim
