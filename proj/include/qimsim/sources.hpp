#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "qimsim/axis.hpp"

namespace qimsim {

/// Transverse mode-weight profile shared by the source models.
struct ModeProfile {
    enum class Kind { flat, gaussian };
    Kind kind = Kind::flat;
    double p_max = 0.0;    // flat support half-width, rad/m
    double sigma_p = 0.0;  // gaussian width, rad/m
};

/// Spectral amplitude over the detuning nu. Only the degenerate
/// monochromatic case (nu = 0) is ever computed; the descriptor is kept so
/// source definitions stay faithful to the physical model.
struct SpectralAmplitude {
    double nu = 0.0;
};

/// SPDC biphoton: plane-wave pump of angular frequency omega_p, signal and
/// idler at the degenerate omega_p/2 with anti-correlated transverse
/// wavenumbers (p, -p).
struct BiphotonSource {
    double omega_p;  // rad/s
    ModeProfile f;
    SpectralAmplitude u;

    static double paired_mode(double p) { return -p; }
    double degenerate_omega() const { return 0.5 * omega_p; }
};

/// Mode amplitudes f(p_k) sampled on the grid and renormalized so that
/// sum |f|^2 dp = 1. Throws ParaxialViolation when the profile support or
/// the mode axis reaches omega_p / (2c).
std::vector<double> spdc_mode_weights(const BiphotonSource& src,
                                      const Axis& mode_axis);

/// Stochastic ensemble that pairs wavenumber p in arm A with p' = p / epsilon
/// in arm B, with classical (intensity-level) correlations only.
struct ClassicalEnsemble {
    double epsilon = 1.0;  // pairing scale, nonzero
    ModeProfile weights;
};

/// Probability weights w(p_k) >= 0 with sum w dp = 1.
std::vector<double> classical_mode_weights(const ClassicalEnsemble& ens,
                                           const Axis& mode_axis);

/// Nearest mode bin holding p / epsilon, or -1 when it falls off the grid.
int paired_mode_index(const Axis& mode_axis, int j, double epsilon);

/// Ensemble of beams with independent uniform random phases per transverse
/// mode in each arm; the generalized advanced-wave (time-reversal) picture.
struct RandomPhaseEnsemble {
    ModeProfile weights;
    std::uint64_t seed = 0;
    bool freeze_phases = false;  // test hook: degenerate generator, theta = 0
};

struct PhaseRealization {
    std::vector<double> theta_a;
    std::vector<double> theta_b;
};

/// Phases for one realization, derived deterministically from
/// (seed, realization index); all entries i.i.d. uniform on [0, 2pi).
PhaseRealization draw_realization(const RandomPhaseEnsemble& ens, int mode_count,
                                  std::uint64_t realization_index);

}  // namespace qimsim
