#pragma once

#include <limits>

#include "qimsim/elements.hpp"

namespace qimsim {

/// Closed forms for the transfer functions of the standard arm geometries,
/// kept as independent oracles for the generic numeric arm_transfer path.
/// All of them use the exact 1-D Fresnel kernel
///   h(x, d) = sqrt(k / (2 pi d)) e^{-i pi/4} e^{ikd} e^{i k x^2 / (2d)},
/// the normalization that makes a plane wave propagate to
///   e^{ikd} e^{ipx} psi(|p|, -(c/w) d)
/// with no leftover constant.

/// Mode e^{ipx} after free space d, evaluated at x.
cplx analytic_gb_free(const WaveContext& ctx, double d, double x, double p);

/// Point response at x1 of [free d1, mask, free d1p]: the single remaining
/// mask-plane integral is evaluated by midpoint quadrature over `mask_axis`.
/// With omit_pure_phases the global unit-modulus prefactors are dropped.
cplx analytic_ga_ghost(const WaveContext& ctx, double d1, double d1p,
                       const MaskProfile& mask, double p, double x1,
                       const Axis& mask_axis, bool omit_pure_phases = false);

struct GaImageOptions {
    // Gaussian pupil area scale at the lens plane; infinity = open lens.
    double pupil_area = std::numeric_limits<double>::infinity();
    // Transverse displacement of the mask/detector assembly.
    double mask_shift = 0.0;
    bool omit_pure_phases = false;
};

/// Amplitude-integrated bucket response of [free d1, (pupil), lens f,
/// free d1p, mask, bucket]: the lens-plane Gaussian integral is closed-form,
/// the mask integral is midpoint quadrature over `mask_axis`. Throws
/// DegenerateGeometry when f == d1p with an open lens.
cplx analytic_ga_image(const WaveContext& ctx, double d1, double f, double d1p,
                       const MaskProfile& mask, double p, const Axis& mask_axis,
                       const GaImageOptions& opts = {});

/// |g_B|^2 for [free d2, pupil A, lens f2, free f2, point at x2] as a
/// function of the input mode p: a Gaussian of width 1/sqrt(2A) in p centred
/// on (w/c) x2 / f2, peak (w/c) A / f2.
double analytic_gb_focal(const WaveContext& ctx, double f2, double A, double x2,
                         double p);

/// RMS width in p of the focal-plane response; the delta-function regime
/// applies when this is small against the mode grid spacing.
double gb_focal_mode_width(double A);
bool gb_focal_delta_regime(double A, double mode_dp);

/// Same axis refined by an integer factor (for oracle-side quadrature).
Axis oversampled(const Axis& axis, int factor);

}  // namespace qimsim
