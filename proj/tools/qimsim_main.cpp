#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <sstream>

#include "qimsim/qudit.hpp"
#include "qimsim/run.hpp"

namespace fs = std::filesystem;
using namespace qimsim;

namespace {

#ifndef QIMSIM_PRESET_DIR
#define QIMSIM_PRESET_DIR "presets"
#endif

std::string resolve_bench_path(const std::string& given) {
    if (fs::exists(given)) return given;
    fs::path fallback = fs::path(QIMSIM_PRESET_DIR) / given;
    if (fs::exists(fallback)) return fallback.string();
    return given;  // let the parser report the missing file
}

std::string replace_extension(const std::string& path, const std::string& tag) {
    fs::path p(path);
    fs::path stem = p.parent_path() / p.stem();
    return stem.string() + tag;
}

struct RunArgs {
    std::string bench;
    std::string out;
    int grid_n = 0;
    double p_max = 0.0;
    long long seed = -1;
    std::string bucket;
    int realizations = 0;
    bool raw = false;
    bool allow_diverging = false;
};

int cmd_run(const RunArgs& args) {
    const std::string path = resolve_bench_path(args.bench);
    ParseOptions popts;
    popts.allow_diverging_lens = args.allow_diverging;
    ParseResult parsed = parse_bench_file(path, popts);
    if (const auto* err = std::get_if<ParseError>(&parsed)) {
        std::cerr << path << ":" << err->line << ":" << err->column << ": "
                  << err->message;
        if (!err->token.empty()) std::cerr << " (at '" << err->token << "')";
        std::cerr << "\n";
        return 1;
    }
    const BenchModel& model = std::get<BenchModel>(parsed);

    RunOverrides ov;
    if (args.grid_n > 0) ov.grid_n = args.grid_n;
    if (args.p_max > 0.0) ov.p_max = args.p_max;
    if (args.seed >= 0) ov.seed = static_cast<std::uint64_t>(args.seed);
    if (args.bucket == "intensity") ov.bucket = BucketMode::intensity_sum;
    if (args.bucket == "amplitude") ov.bucket = BucketMode::amplitude_integrated;
    if (args.realizations > 0) ov.realizations = args.realizations;
    ov.raw = args.raw;

    try {
        CompiledBench bench =
            compile_bench(model, fs::path(path).parent_path().string(), ov);
        RunResult result = run_bench(bench, ov);

        std::string out = args.out.empty()
                              ? fs::path(path).stem().string() + ".csv"
                              : args.out;
        CsvMeta meta;
        meta.emplace_back("bench", path);
        meta.emplace_back("source", model.source == SourceKind::spdc ? "spdc"
                          : model.source == SourceKind::classical
                              ? "classical"
                              : "randomphase");
        if (model.source == SourceKind::classical)
            meta.emplace_back("epsilon", format_double(bench.epsilon));
        meta.emplace_back("grid_n", std::to_string(bench.grid_spec.n));
        meta.emplace_back("extent_m", format_double(bench.grid_spec.extent));
        meta.emplace_back("p_max", format_double(bench.grid_spec.p_max));
        meta.emplace_back("modes", std::to_string(bench.grid_spec.modes));
        meta.emplace_back("seed", std::to_string(bench.seed));
        if (result.realizations > 0)
            meta.emplace_back("realizations", std::to_string(result.realizations));
        meta.emplace_back("normalization", ov.raw ? "raw" : "peak");

        std::ostringstream body;
        write_pattern_csv(body, result.pattern, meta);
        write_file(out, body.str());
        std::cout << "pattern: " << out << "\n";

        std::ostringstream metrics;
        write_metrics_csv(metrics, meta, result.metrics);
        write_file(replace_extension(out, ".metrics.csv"), metrics.str());
        std::cout << "metrics: " << replace_extension(out, ".metrics.csv") << "\n";

        if (result.singles_b) {
            std::ostringstream singles;
            write_pattern_csv(singles, *result.singles_b, meta);
            write_file(replace_extension(out, ".singles.csv"), singles.str());
            std::cout << "singles: " << replace_extension(out, ".singles.csv")
                      << "\n";
        }
        if (result.std_error) {
            std::ostringstream band;
            write_band_csv(band, result.pattern.axis, *result.std_error, meta);
            write_file(replace_extension(out, ".se.csv"), band.str());
            std::cout << "std-error: " << replace_extension(out, ".se.csv") << "\n";
        }
        if (result.map) {
            std::ostringstream map;
            write_coincidence_csv(map, *result.map, meta);
            write_file(replace_extension(out, ".map.csv"), map.str());
            std::cout << "map: " << replace_extension(out, ".map.csv") << "\n";
        }
        return 0;
    } catch (const SamplingViolation& e) {
        std::cerr << "sampling guard: " << e.what() << "\n";
        return 2;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}

int cmd_witness_expect() {
    using namespace qimsim::qudit;
    WitnessSuite suite = witness_suite();
    DensityMatrix rho = DensityMatrix::pure(suite.phi_plus);
    DensityMatrix mixed = DensityMatrix::maximally_mixed({2, 2});
    std::printf("tr(W rho_phi+)   = %.12f\n", expectation(rho, suite.w));
    std::printf("tr(W I/4)        = %.12f\n", expectation(mixed, suite.w));
    return 0;
}

int cmd_witness_threshold() {
    using namespace qimsim::qudit;
    WitnessSuite suite = witness_suite();
    double s0 = ppt_threshold(DensityMatrix::pure(suite.phi_plus));
    std::printf("ppt threshold s0 = %.6f\n", s0);
    return 0;
}

int cmd_witness_sweep(int n, long long seed, const std::string& out) {
    using namespace qimsim::qudit;
    WitnessSuite suite = witness_suite();
    std::ostringstream csv;
    csv << "# qimsim witness-sweep v1\n";
    csv << "# states " << n << "\n";
    csv << "# seed " << seed << "\n";
    csv << "index,tr_W_tau\n";
    double lo = 1e300, hi = -1e300;
    for (int i = 0; i < n; ++i) {
        ProductEnsemble e = random_separable_ensemble(
            {2, 2}, 8, static_cast<std::uint64_t>(seed) + i);
        double value = expectation(ensemble_state(e, {2, 2}), suite.w);
        lo = std::min(lo, value);
        hi = std::max(hi, value);
        csv << i << "," << format_double(value) << "\n";
    }
    csv << "# min " << format_double(lo) << "\n";
    csv << "# max " << format_double(hi) << "\n";
    if (!out.empty()) {
        write_file(out, csv.str());
        std::cout << "sweep: " << out << "\n";
    } else {
        std::cout << csv.str();
    }
    std::printf("min tr(W tau) = %.3e over %d separable states\n", lo, n);
    return 0;
}

int cmd_presets_list() {
    fs::path dir(QIMSIM_PRESET_DIR);
    if (!fs::is_directory(dir)) {
        std::cerr << "preset directory not found: " << dir << "\n";
        return 1;
    }
    std::vector<std::string> names;
    for (const auto& entry : fs::directory_iterator(dir))
        if (entry.path().extension() == ".bench")
            names.push_back(entry.path().filename().string());
    std::sort(names.begin(), names.end());
    for (const std::string& name : names)
        std::cout << name << "  (" << (dir / name).string() << ")\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"qimsim: correlated-photon imaging simulator"};
    app.require_subcommand(1);

    RunArgs run_args;
    auto* run = app.add_subcommand("run", "run a bench file and write CSV patterns");
    run->add_option("bench", run_args.bench, "bench file or preset name")->required();
    run->add_option("--out", run_args.out, "output CSV path");
    run->add_option("--grid-n", run_args.grid_n, "override grid sample count");
    run->add_option("--p-max", run_args.p_max, "override source mode half-width");
    run->add_option("--seed", run_args.seed, "override the seed");
    run->add_option("--bucket", run_args.bucket, "bucket mode")
        ->check(CLI::IsMember({"intensity", "amplitude"}));
    run->add_option("--realizations", run_args.realizations,
                    "Monte-Carlo realizations (randomphase sources)");
    run->add_flag("--raw", run_args.raw, "keep unnormalized pattern values");
    run->add_flag("--allow-diverging", run_args.allow_diverging,
                  "permit negative focal lengths");

    auto* witness = app.add_subcommand("witness", "two-qubit witness toolbox");
    witness->require_subcommand(1);
    auto* expect = witness->add_subcommand("expect", "print witness expectations");
    auto* threshold =
        witness->add_subcommand("threshold", "print the PPT noise threshold");
    int sweep_n = 1000;
    long long sweep_seed = 1;
    std::string sweep_out;
    auto* sweep =
        witness->add_subcommand("sweep", "witness values over random separable states");
    sweep->add_option("--n", sweep_n, "number of states");
    sweep->add_option("--seed", sweep_seed, "seed");
    sweep->add_option("--out", sweep_out, "CSV output path");

    auto* presets = app.add_subcommand("presets", "preset management");
    presets->require_subcommand(1);
    auto* list = presets->add_subcommand("list", "list shipped bench presets");

    CLI11_PARSE(app, argc, argv);

    if (run->parsed()) return cmd_run(run_args);
    if (expect->parsed()) return cmd_witness_expect();
    if (threshold->parsed()) return cmd_witness_threshold();
    if (sweep->parsed()) return cmd_witness_sweep(sweep_n, sweep_seed, sweep_out);
    if (list->parsed()) return cmd_presets_list();
    return 0;
}
