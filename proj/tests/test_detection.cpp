#include "doctest.h"

#include <omp.h>

#include <cmath>
#include <cstring>
#include <numbers>

#include "qimsim/detection.hpp"
#include "qimsim/reference.hpp"
#include "qimsim/rng.hpp"

using namespace qimsim;

namespace {
constexpr double kPi = std::numbers::pi;
const WaveContext kCtx = WaveContext::from_wavelength(702e-9);
const double kOmegaP = 2.0 * kCtx.omega;

BiphotonSource spdc(double p_max) {
    BiphotonSource src;
    src.omega_p = kOmegaP;
    src.f = ModeProfile{ModeProfile::Kind::flat, p_max, 0.0};
    return src;
}

double rel_linf(const Pattern& a, const Pattern& b) {
    double err = 0.0;
    for (int i = 0; i < a.axis.n; ++i)
        err = std::max(err, std::abs(a.values[i] - b.values[i]));
    return err;
}

double centroid(const Pattern& p) {
    double w0 = 0.0, w1 = 0.0;
    for (int i = 0; i < p.axis.n; ++i) {
        w0 += p.values[i];
        w1 += p.values[i] * p.axis.at(i);
    }
    return w1 / w0;
}
}  // namespace

TEST_CASE("biphoton amplitude with empty arms depends only on x1 - x2") {
    Axis grid(-0.01, 0.01, 256);
    Axis modes(-2e4, 2e4, 64);
    Axis det(-0.002, 0.002, 48);
    ArmSpec arm{{}, PointArray{det}};
    TransferMatrix g = arm_transfer(arm, kCtx, modes, grid);
    AmplitudeMap map = biphoton_amplitude(g, g, spdc(2e4));
    // equal index shifts keep x1 - x2 fixed
    for (int i = 0; i + 5 < det.n; ++i)
        for (int s = 1; s < 5; ++s)
            CHECK(std::abs(map.at(i + s, i + s) - map.at(i, i)) <= 1e-12);
    // and the value is the mode-sum kernel at the difference
    for (int i = 0; i < det.n; ++i)
        for (int j = 0; j < det.n; j += 7) {
            cplx expected(0.0, 0.0);
            auto f = spdc_mode_weights(spdc(2e4), modes);
            for (int m = 0; m < modes.n; ++m)
                expected += f[m] * std::polar(1.0, modes.at(m) * (det.at(i) - det.at(j)));
            expected *= modes.dx();
            CHECK(std::abs(map.at(i, j) - expected) <= 1e-10);
        }
}

TEST_CASE("single-mode source factorizes the biphoton amplitude") {
    Axis grid(-0.01, 0.01, 512);
    Axis modes(-2e4, 2e4, 65);  // odd count: one bin straddles p = 0
    Axis det(-0.002, 0.002, 32);
    BiphotonSource src = spdc(modes.dx() * 0.4);  // only the central bin survives
    ArmSpec armA{{FreeSpace{0.2}, Mask{DoubleSlit{6e-4, 1.5e-4}}, FreeSpace{0.1}},
                 PointArray{det}};
    ArmSpec armB{{FreeSpace{0.4}}, PointArray{det}};
    TransferMatrix ga = arm_transfer(armA, kCtx, modes, grid);
    TransferMatrix gb = arm_transfer(armB, kCtx, modes, grid);
    AmplitudeMap map = biphoton_amplitude(ga, gb, src);
    const int c = modes.n / 2;
    auto f = spdc_mode_weights(src, modes);
    for (int i = 0; i < det.n; i += 3)
        for (int j = 0; j < det.n; j += 3) {
            double expected = f[c] * std::abs(ga.at(i, c)) *
                              std::abs(gb.at(j, modes.n - 1 - c)) * modes.dx();
            CHECK(std::abs(map.at(i, j)) == doctest::Approx(expected).epsilon(1e-10));
        }
}

TEST_CASE("mode axis mismatch is rejected") {
    Axis grid(-0.01, 0.01, 128);
    Axis det(-0.002, 0.002, 16);
    ArmSpec arm{{}, PointArray{det}};
    TransferMatrix ga = arm_transfer(arm, kCtx, Axis(-2e4, 2e4, 32), grid);
    TransferMatrix gb = arm_transfer(arm, kCtx, Axis(-2e4, 2e4, 16), grid);
    CHECK_THROWS_AS(biphoton_amplitude(ga, gb, spdc(2e4)), ModeAxisMismatch);
    // asymmetric axis: the p -> -p pairing is not an index flip
    TransferMatrix gc = arm_transfer(arm, kCtx, Axis(-1e4, 2e4, 32), grid);
    CHECK_THROWS_AS(biphoton_amplitude(gc, gc, spdc(1e4)), ModeAxisMismatch);
}

TEST_CASE("open mask gives a flat bucket coincidence pattern") {
    Axis grid(-0.02, 0.02, 1024);
    Axis modes(-5e4, 5e4, 128);
    Axis det(-0.002, 0.002, 64);
    ArmSpec armA{{FreeSpace{0.3}, Mask{SingleSlit{1.0}}},
                 BucketDetector{grid, BucketMode::intensity_sum}};
    ArmSpec armB{{FreeSpace{0.3}}, PointArray{det}};
    TransferMatrix ga = arm_transfer(armA, kCtx, modes, grid);
    TransferMatrix gb = arm_transfer(armB, kCtx, modes, grid);
    Pattern p = coincidence_pattern(biphoton_amplitude(ga, gb, spdc(5e4)));
    CHECK(visibility(p) <= 0.02);
}

TEST_CASE("parallel biphoton amplitude agrees with the serial reference") {
    Axis grid(-0.01, 0.01, 512);
    Axis modes(-3e4, 3e4, 48);
    Axis det(-0.0015, 0.0015, 40);
    ArmSpec armA{{FreeSpace{0.25}, Mask{DoubleSlit{5e-4, 1e-4}}, FreeSpace{0.2}},
                 PointArray{det}};
    ArmSpec armB{{FreeSpace{0.45}}, PointArray{det}};
    TransferMatrix ga = arm_transfer(armA, kCtx, modes, grid);
    TransferMatrix gb = arm_transfer(armB, kCtx, modes, grid);
    AmplitudeMap par = biphoton_amplitude(ga, gb, spdc(3e4));
    AmplitudeMap ser = ref::biphoton_amplitude(ga, gb, spdc(3e4));
    double num = 0.0, den = 0.0;
    for (size_t i = 0; i < par.a.size(); ++i) {
        num += std::norm(par.a[i] - ser.a[i]);
        den += std::norm(ser.a[i]);
    }
    CHECK(std::sqrt(num / den) <= 1e-13);
}

TEST_CASE("singles: single-mode source reduces to one coherent column") {
    Axis grid(-0.01, 0.01, 512);
    Axis modes(-2e4, 2e4, 65);
    Axis det(-0.003, 0.003, 64);
    BiphotonSource src = spdc(modes.dx() * 0.4);
    ArmSpec arm{{FreeSpace{0.2}, Mask{DoubleSlit{6e-4, 1.5e-4}}, FreeSpace{0.2}},
                PointArray{det}};
    TransferMatrix g = arm_transfer(arm, kCtx, modes, grid);
    Pattern r = singles_pattern(g, src, /*paired=*/false);
    const int c = modes.n / 2;
    std::vector<double> expected(det.n);
    double peak = 0.0;
    for (int i = 0; i < det.n; ++i) {
        expected[i] = std::norm(g.at(i, c));
        peak = std::max(peak, expected[i]);
    }
    for (int i = 0; i < det.n; ++i)
        CHECK(r.values[i] == doctest::Approx(expected[i] / peak).epsilon(1e-9));
}

TEST_CASE("singles via the mode-overlap formula equals the bucket identity") {
    Axis grid(-0.01, 0.01, 512);
    Axis modes(-3e4, 3e4, 40);
    Axis detA(-0.0015, 0.0015, 48);
    Axis detB(-0.002, 0.002, 56);
    BiphotonSource src = spdc(3e4);
    ArmSpec armA{{FreeSpace{0.25}, Mask{DoubleSlit{5e-4, 1e-4}}, FreeSpace{0.15}},
                 PointArray{detA}};
    ArmSpec armB{{FreeSpace{0.4}}, PointArray{detB}};
    TransferMatrix ga = arm_transfer(armA, kCtx, modes, grid);
    TransferMatrix gb = arm_transfer(armB, kCtx, modes, grid);
    Pattern via_fjk = singles_pattern(gb, src, ga);
    Pattern via_bucket =
        coincidence_pattern(biphoton_amplitude(ga, gb, src), BucketMode::intensity_sum);
    CHECK(rel_linf(via_fjk, via_bucket) <= 1e-10);
}

TEST_CASE("classical coincidence with open arm B is structureless in x1") {
    // the walk-off span p_max * d / k must cover the slit diffraction
    // envelope for the smearing to flatten the D1-plane profile
    Axis grid(-0.02, 0.02, 1024);
    Axis modes(-7e4, 7e4, 256);
    Axis detA(-0.0006, 0.0006, 64);
    Axis detB(-0.002, 0.002, 8);
    ClassicalEnsemble ens{1.0, ModeProfile{ModeProfile::Kind::flat, 7e4, 0.0}};
    ArmSpec armA{{FreeSpace{0.3}, Mask{DoubleSlit{5e-4, 1e-4}}, FreeSpace{0.25}},
                 PointArray{detA}};
    ArmSpec armB{{}, PointArray{detB}};  // g_B = e^{ipx}: |g_B|^2 = 1
    TransferMatrix ga = arm_transfer(armA, kCtx, modes, grid);
    TransferMatrix gb = arm_transfer(armB, kCtx, modes, grid);
    CoincidenceMap map = classical_coincidence_map(ens, ga, gb);
    // profile over x1 (any x2 column: they are identical)
    std::vector<double> profile(map.axis1.n);
    for (int i1 = 0; i1 < map.axis1.n; ++i1) profile[i1] = map.at(i1, 0);
    Pattern p = make_pattern(map.axis1, std::move(profile));
    CHECK(visibility(p) <= 0.05);
    // and the x2 dependence is exactly flat
    for (int i1 = 0; i1 < map.axis1.n; ++i1)
        for (int i2 = 1; i2 < map.axis2.n; ++i2)
            CHECK(map.at(i1, i2) == doctest::Approx(map.at(i1, 0)).epsilon(1e-12));
}

TEST_CASE("classical pairing: off-grid partners contribute zero, all off throws") {
    Axis grid(-0.01, 0.01, 256);
    Axis modes(-4e4, 4e4, 64);
    Axis det(-0.002, 0.002, 16);
    ArmSpec arm{{FreeSpace{0.2}}, PointArray{det}};
    TransferMatrix g = arm_transfer(arm, kCtx, modes, grid);
    // epsilon tiny: p / eps leaves the grid for every weighted mode
    ClassicalEnsemble bad{1e-6, ModeProfile{ModeProfile::Kind::flat, 4e4, 0.0}};
    CHECK_THROWS_AS(classical_coincidence(bad, g, g), PairingOutOfRange);
}

TEST_CASE("phase blindness: quarter-turn mode phases leave classical untouched") {
    Axis grid(-0.02, 0.02, 1024);
    Axis modes(-5e4, 5e4, 128);
    Axis det(-0.003, 0.003, 96);
    ClassicalEnsemble ens{1.0, ModeProfile{ModeProfile::Kind::flat, 5e4, 0.0}};
    ArmSpec armA{{FreeSpace{0.5}, Mask{DoubleSlit{5e-4, 1e-4}}}, FarFieldPoint{}};
    ArmSpec armB{{FreeSpace{0.5}}, PointArray{det}};
    TransferMatrix ga = arm_transfer(armA, kCtx, modes, grid);
    TransferMatrix gb = arm_transfer(armB, kCtx, modes, grid);

    Pattern before = classical_coincidence(ens, ga, gb);
    Pattern spdc_before =
        coincidence_pattern(biphoton_amplitude(ga, gb, spdc(5e4)));

    // exact unit phases (powers of i): |g|^2 is bitwise invariant
    TransferMatrix ga2 = ga;
    SplitMix64 gen(17);
    std::vector<cplx> phase(modes.n);
    for (int j = 0; j < modes.n; ++j) {
        switch (gen.next() & 3) {
            case 0: phase[j] = {1.0, 0.0}; break;
            case 1: phase[j] = {0.0, 1.0}; break;
            case 2: phase[j] = {-1.0, 0.0}; break;
            default: phase[j] = {0.0, -1.0}; break;
        }
    }
    for (int i = 0; i < ga2.n_out(); ++i)
        for (int j = 0; j < modes.n; ++j) ga2.at(i, j) *= phase[j];

    Pattern after = classical_coincidence(ens, ga2, gb);
    CHECK(std::memcmp(before.values.data(), after.values.data(),
                      before.values.size() * sizeof(double)) == 0);

    Pattern spdc_after = coincidence_pattern(biphoton_amplitude(ga2, gb, spdc(5e4)));
    CHECK(rel_linf(spdc_before, spdc_after) >= 0.1);
}

TEST_CASE("klyshko: one realization is that realization's |A|^2") {
    Axis grid(-0.01, 0.01, 256);
    Axis modes(-2e4, 2e4, 32);
    Axis det(-0.002, 0.002, 24);
    RandomPhaseEnsemble ens;
    ens.weights = ModeProfile{ModeProfile::Kind::flat, 2e4, 0.0};
    ens.seed = 5;
    ArmSpec armA{{FreeSpace{0.2}, Mask{DoubleSlit{5e-4, 1e-4}}, FreeSpace{0.1}},
                 PointArray{det}};
    ArmSpec armB{{FreeSpace{0.3}}, PointArray{det}};
    TransferMatrix ga = arm_transfer(armA, kCtx, modes, grid);
    TransferMatrix gb = arm_transfer(armB, kCtx, modes, grid);
    KlyshkoResult mc = klyshko_mc(ens, ga, gb, 1, /*normalized=*/false);

    ClassicalEnsemble proxy{1.0, ens.weights};
    auto w = classical_mode_weights(proxy, modes);
    auto ph = draw_realization(ens, modes.n, 0);
    const int m = modes.n;
    for (int i2 = 0; i2 < det.n; ++i2) {
        double value = 0.0;
        for (int i1 = 0; i1 < det.n; ++i1) {
            cplx acc(0.0, 0.0);
            for (int j = 0; j < m; ++j)
                acc += std::sqrt(w[j]) *
                       std::polar(1.0, ph.theta_a[j] + ph.theta_b[m - 1 - j]) *
                       ga.at(i1, j) * gb.at(i2, m - 1 - j);
            value += std::norm(acc * modes.dx()) * det.dx();
        }
        CHECK(mc.pattern.values[i2] == doctest::Approx(value).epsilon(1e-12));
        CHECK(mc.std_error[i2] == 0.0);
    }
}

TEST_CASE("klyshko: frozen phases reproduce the coherent biphoton pattern") {
    Axis grid(-0.02, 0.02, 1024);
    Axis modes(-5e4, 5e4, 128);
    Axis det(-0.003, 0.003, 96);
    RandomPhaseEnsemble ens;
    ens.weights = ModeProfile{ModeProfile::Kind::flat, 5e4, 0.0};
    ens.freeze_phases = true;
    ArmSpec armA{{FreeSpace{0.5}, Mask{DoubleSlit{5e-4, 1e-4}}}, FarFieldPoint{}};
    ArmSpec armB{{FreeSpace{0.5}}, PointArray{det}};
    TransferMatrix ga = arm_transfer(armA, kCtx, modes, grid);
    TransferMatrix gb = arm_transfer(armB, kCtx, modes, grid);
    KlyshkoResult mc = klyshko_mc(ens, ga, gb, 3);
    Pattern coherent = coincidence_pattern(biphoton_amplitude(ga, gb, spdc(5e4)));
    CHECK(rel_linf(mc.pattern, coherent) <= 1e-12);
    // the coherent pattern carries interference fringes
    CHECK(visibility(mc.pattern) >= 0.5);
}

TEST_CASE("klyshko: parallel kernel is bitwise equal to the serial reference") {
    Axis grid(-0.01, 0.01, 256);
    Axis modes(-2e4, 2e4, 32);
    Axis det(-0.0015, 0.0015, 20);
    RandomPhaseEnsemble ens;
    ens.weights = ModeProfile{ModeProfile::Kind::flat, 2e4, 0.0};
    ens.seed = 11;
    ArmSpec armA{{FreeSpace{0.2}, Mask{DoubleSlit{5e-4, 1e-4}}, FreeSpace{0.1}},
                 PointArray{det}};
    ArmSpec armB{{FreeSpace{0.3}}, PointArray{det}};
    TransferMatrix ga = arm_transfer(armA, kCtx, modes, grid);
    TransferMatrix gb = arm_transfer(armB, kCtx, modes, grid);
    KlyshkoResult par = klyshko_mc(ens, ga, gb, 97, false);
    KlyshkoResult ser = ref::klyshko_mc(ens, ga, gb, 97, false);
    for (int i = 0; i < det.n; ++i)
        CHECK(par.pattern.values[i] ==
              doctest::Approx(ser.pattern.values[i]).epsilon(1e-12));
}

TEST_CASE("classical: parallel kernel agrees with the serial reference") {
    Axis grid(-0.01, 0.01, 512);
    Axis modes(-3e4, 3e4, 64);
    Axis det(-0.002, 0.002, 48);
    ClassicalEnsemble ens{2.0, ModeProfile{ModeProfile::Kind::flat, 3e4, 0.0}};
    ArmSpec armA{{FreeSpace{0.25}, Mask{DoubleSlit{5e-4, 1e-4}}, FreeSpace{0.2}},
                 PointArray{det}};
    ArmSpec armB{{FreeSpace{0.45}}, PointArray{det}};
    TransferMatrix ga = arm_transfer(armA, kCtx, modes, grid);
    TransferMatrix gb = arm_transfer(armB, kCtx, modes, grid);
    Pattern par = classical_coincidence(ens, ga, gb, false);
    Pattern ser = ref::classical_coincidence(ens, ga, gb, false);
    for (int i = 0; i < det.n; ++i)
        CHECK(par.values[i] == doctest::Approx(ser.values[i]).epsilon(1e-13));
}

TEST_CASE("translation covariance: shifting the mask shifts the ghost image") {
    // two-photon imaging at K = 0 with magnification -d1'/(d1+d2) = -1
    const double d1 = 0.4, d2 = 0.4, d1p = 0.8, f = 0.4, pupilA = 1e-6;
    Axis grid(-0.02, 0.02, 2048);
    Axis modes(-3e4, 3e4, 96);
    Axis det(-0.004, 0.004, 128);
    BiphotonSource src = spdc(3e4);
    auto image_centroid = [&](double shift) {
        ArmSpec armA{{FreeSpace{d1}, GaussianPupil{pupilA}, ThinLens{f},
                      FreeSpace{d1p}, Mask{GaussianMask{8e-4, shift}}},
                     BucketDetector{grid, BucketMode::intensity_sum}};
        ArmSpec armB{{FreeSpace{d2}}, PointArray{det}};
        TransferMatrix ga = arm_transfer(armA, kCtx, modes, grid);
        TransferMatrix gb = arm_transfer(armB, kCtx, modes, grid);
        return centroid(coincidence_pattern(biphoton_amplitude(ga, gb, src)));
    };
    double base = image_centroid(0.0);
    double moved = image_centroid(5e-4);
    CHECK(std::abs(base) <= 5e-5);
    CHECK(moved - base == doctest::Approx(-5e-4).epsilon(0.05));
}

TEST_CASE("results are bitwise independent of the thread count") {
    Axis grid(-0.01, 0.01, 512);
    Axis modes(-3e4, 3e4, 64);
    Axis det(-0.002, 0.002, 48);
    ClassicalEnsemble ens{1.0, ModeProfile{ModeProfile::Kind::flat, 3e4, 0.0}};
    RandomPhaseEnsemble rnd{ens.weights, 3, false};
    ArmSpec armA{{FreeSpace{0.25}, Mask{DoubleSlit{5e-4, 1e-4}}, FreeSpace{0.2}},
                 PointArray{det}};
    ArmSpec armB{{FreeSpace{0.45}}, PointArray{det}};

    int saved = omp_get_max_threads();
    omp_set_num_threads(1);
    TransferMatrix ga1 = arm_transfer(armA, kCtx, modes, grid);
    TransferMatrix gb1 = arm_transfer(armB, kCtx, modes, grid);
    Pattern c1 = classical_coincidence(ens, ga1, gb1, false);
    KlyshkoResult k1 = klyshko_mc(rnd, ga1, gb1, 70, false);
    omp_set_num_threads(saved > 1 ? saved : 2);
    TransferMatrix ga2 = arm_transfer(armA, kCtx, modes, grid);
    TransferMatrix gb2 = arm_transfer(armB, kCtx, modes, grid);
    Pattern c2 = classical_coincidence(ens, ga2, gb2, false);
    KlyshkoResult k2 = klyshko_mc(rnd, ga2, gb2, 70, false);
    omp_set_num_threads(saved);

    CHECK(std::memcmp(ga1.g.data(), ga2.g.data(), ga1.g.size() * sizeof(cplx)) == 0);
    CHECK(std::memcmp(c1.values.data(), c2.values.data(),
                      c1.values.size() * sizeof(double)) == 0);
    CHECK(std::memcmp(k1.pattern.values.data(), k2.pattern.values.data(),
                      k1.pattern.values.size() * sizeof(double)) == 0);
}

TEST_CASE("metric: fringe spacing of a synthetic cos^2 pattern") {
    Axis ax(-0.005, 0.005, 400);
    const double spacing = 13.7e-4;  // irrational vs the grid step
    std::vector<double> v(ax.n);
    for (int i = 0; i < ax.n; ++i)
        v[i] = std::pow(std::cos(kPi * ax.at(i) / spacing), 2);
    Pattern p = make_pattern(ax, std::move(v));
    CHECK(std::abs(fringe_spacing(p) - spacing) <= 0.5 * ax.dx());
}

TEST_CASE("metric: visibility and image error basics") {
    Axis ax(-1.0, 1.0, 64);
    Pattern flat = make_pattern(ax, std::vector<double>(ax.n, 3.0));
    CHECK(visibility(flat) == 0.0);
    CHECK(image_error(flat, flat) == 0.0);
    CHECK_THROWS_AS(fringe_spacing(flat), NoFringes);

    std::vector<double> ramp(ax.n);
    for (int i = 0; i < ax.n; ++i) ramp[i] = 1.0 + 0.5 * ax.at(i);
    Pattern sloped = make_pattern(ax, std::move(ramp));
    CHECK(image_error(sloped, sloped) == 0.0);
    CHECK(visibility(sloped) > 0.0);

    CHECK_THROWS_AS(make_pattern(ax, std::vector<double>(ax.n, 0.0)), EmptyPattern);
}
