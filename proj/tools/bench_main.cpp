// Timing harness comparing the OpenMP kernels against the serial reference
// implementations they are tested against.

#include <omp.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>

#include "qimsim/reference.hpp"

using namespace qimsim;

namespace {

double time_ms(const std::function<void()>& fn) {
    auto t0 = std::chrono::steady_clock::now();
    fn();
    return std::chrono::duration<double, std::milli>(
               std::chrono::steady_clock::now() - t0)
        .count();
}

void row(const char* name, double serial_ms, double parallel_ms, double maxdiff) {
    std::printf("%-22s %10.1f ms %10.1f ms %8.2fx   max|diff| %.2e\n", name,
                serial_ms, parallel_ms, serial_ms / parallel_ms, maxdiff);
}

}  // namespace

int main() {
    const WaveContext ctx = WaveContext::from_wavelength(702e-9);
    std::printf("threads: %d\n", omp_get_max_threads());
    std::printf("%-22s %13s %13s %9s\n", "kernel", "serial", "openmp", "speedup");

    Axis grid(-0.02, 0.02, 2048);
    Axis modes(-5e4, 5e4, 256);
    Axis det(-0.003, 0.003, 256);
    BiphotonSource src{2.0 * ctx.omega,
                       ModeProfile{ModeProfile::Kind::flat, 5e4, 0.0},
                       SpectralAmplitude{}};
    ArmSpec armA{{FreeSpace{0.4}, Mask{DoubleSlit{5e-4, 1e-4}}, FreeSpace{0.4}},
                 PointArray{det}};
    ArmSpec armB{{FreeSpace{0.8}, Mask{GaussianMask{1.5e-3}}, FreeSpace{0.2}},
                 PointArray{det}};

    TransferMatrix ga, gb, ga_ref;
    {
        double par = time_ms([&] { ga = arm_transfer(armA, ctx, modes, grid); });
        double ser = time_ms([&] { ga_ref = ref::arm_transfer(armA, ctx, modes, grid); });
        double diff = 0.0;
        for (size_t i = 0; i < ga.g.size(); ++i)
            diff = std::max(diff, std::abs(ga.g[i] - ga_ref.g[i]));
        row("arm_transfer", ser, par, diff);
        gb = arm_transfer(armB, ctx, modes, grid);
    }
    {
        AmplitudeMap par_map, ser_map;
        double par = time_ms([&] { par_map = biphoton_amplitude(ga, gb, src); });
        double ser = time_ms([&] { ser_map = ref::biphoton_amplitude(ga, gb, src); });
        double diff = 0.0;
        for (size_t i = 0; i < par_map.a.size(); ++i)
            diff = std::max(diff, std::abs(par_map.a[i] - ser_map.a[i]));
        row("biphoton_amplitude", ser, par, diff);
    }
    {
        ClassicalEnsemble ens{1.0, src.f};
        Pattern par_p, ser_p;
        double par =
            time_ms([&] { par_p = classical_coincidence(ens, ga, gb, false); });
        double ser =
            time_ms([&] { ser_p = ref::classical_coincidence(ens, ga, gb, false); });
        double diff = 0.0;
        for (int i = 0; i < par_p.axis.n; ++i)
            diff = std::max(diff, std::abs(par_p.values[i] - ser_p.values[i]));
        row("classical_coincidence", ser, par, diff);
    }
    {
        RandomPhaseEnsemble ens{src.f, 7, false};
        Axis small_det(-0.0015, 0.0015, 64);
        ArmSpec smallA{{FreeSpace{0.25}, Mask{DoubleSlit{4e-4, 1e-4}}, FreeSpace{0.25}},
                       PointArray{small_det}};
        ArmSpec smallB{{FreeSpace{0.5}}, PointArray{small_det}};
        Axis small_modes(-3e4, 3e4, 128);
        TransferMatrix sa = arm_transfer(smallA, ctx, small_modes, grid);
        TransferMatrix sb = arm_transfer(smallB, ctx, small_modes, grid);
        const int realizations = 400;
        KlyshkoResult par_r, ser_r;
        double par = time_ms(
            [&] { par_r = klyshko_mc(ens, sa, sb, realizations, false); });
        double ser = time_ms(
            [&] { ser_r = ref::klyshko_mc(ens, sa, sb, realizations, false); });
        double diff = 0.0;
        for (int i = 0; i < small_det.n; ++i)
            diff = std::max(diff, std::abs(par_r.pattern.values[i] -
                                           ser_r.pattern.values[i]) /
                                      par_r.pattern.values[i]);
        row("klyshko_mc", ser, par, diff);
    }
    return 0;
}
