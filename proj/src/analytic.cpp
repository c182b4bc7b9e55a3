#include "qimsim/analytic.hpp"

#include <cmath>
#include <numbers>

namespace qimsim {

namespace {
constexpr double kPi = std::numbers::pi;

cplx fresnel_prefactor(double k, double d, bool omit_pure_phases) {
    double mag = std::sqrt(k / (2.0 * kPi * d));
    return omit_pure_phases ? cplx(mag, 0.0) : std::polar(mag, -kPi / 4.0);
}
}  // namespace

cplx analytic_gb_free(const WaveContext& ctx, double d, double x, double p) {
    const double k = ctx.wavenumber();
    return std::polar(1.0, k * d + p * x) * quadratic_phase(p, -d / k);
}

cplx analytic_ga_ghost(const WaveContext& ctx, double d1, double d1p,
                       const MaskProfile& mask, double p, double x1,
                       const Axis& mask_axis, bool omit_pure_phases) {
    if (!(d1 > 0.0) || !(d1p > 0.0))
        throw ValidationError("analytic_ga_ghost: distances must be positive");
    const double k = ctx.wavenumber();
    cplx pref = fresnel_prefactor(k, d1p, omit_pure_phases);
    if (!omit_pure_phases)
        pref *= std::polar(1.0, k * (d1 + d1p)) * quadratic_phase(p, -d1 / k);

    cplx acc(0.0, 0.0);
    const double dxa = mask_axis.dx();
    for (int i = 0; i < mask_axis.n; ++i) {
        double xa = mask_axis.at(i);
        double t = mask_amplitude(mask, xa);
        if (t == 0.0) continue;
        acc += t * quadratic_phase(x1 - xa, k / d1p) * std::polar(1.0, p * xa);
    }
    return pref * acc * dxa;
}

cplx analytic_ga_image(const WaveContext& ctx, double d1, double f, double d1p,
                       const MaskProfile& mask, double p, const Axis& mask_axis,
                       const GaImageOptions& opts) {
    if (!(d1 > 0.0) || !(d1p > 0.0))
        throw ValidationError("analytic_ga_image: distances must be positive");
    if (f == 0.0) throw ValidationError("analytic_ga_image: focal length is zero");
    const double k = ctx.wavenumber();

    // Lens-plane Gaussian: a = 1/(2A) + i (k/2)(1/f - 1/d1p); the open-lens
    // f == d1p case makes it vanish and the closed form blows up.
    const bool open_lens = std::isinf(opts.pupil_area);
    cplx a(open_lens ? 0.0 : 1.0 / (2.0 * opts.pupil_area),
           0.5 * k * (1.0 / f - 1.0 / d1p));
    if (std::abs(a) == 0.0)
        throw DegenerateGeometry(
            "analytic_ga_image: f == d1' with an open lens diverges");

    cplx pref = fresnel_prefactor(k, d1p, opts.omit_pure_phases);
    if (!opts.omit_pure_phases)
        pref *= std::polar(1.0, k * (d1 + d1p)) * quadratic_phase(p, -d1 / k);

    cplx acc(0.0, 0.0);
    const double dxa = mask_axis.dx();
    for (int i = 0; i < mask_axis.n; ++i) {
        double xa = mask_axis.at(i);
        double t = mask_amplitude(mask, xa - opts.mask_shift);
        if (t == 0.0) continue;
        cplx u(p - k * xa / d1p, 0.0);
        acc += t * quadratic_phase(xa, k / d1p) * std::sqrt(kPi / a) *
               std::exp(-u * u / (4.0 * a));
    }
    return pref * acc * dxa;
}

double analytic_gb_focal(const WaveContext& ctx, double f2, double A, double x2,
                         double p) {
    if (!(f2 > 0.0) || !(A > 0.0))
        throw ValidationError("analytic_gb_focal: f2 and A must be positive");
    const double k = ctx.wavenumber();
    double u = p - k * x2 / f2;
    return (k / f2) * A * std::exp(-A * u * u);
}

double gb_focal_mode_width(double A) { return 1.0 / std::sqrt(2.0 * A); }

bool gb_focal_delta_regime(double A, double mode_dp) {
    return gb_focal_mode_width(A) < 0.5 * mode_dp;
}

Axis oversampled(const Axis& axis, int factor) {
    if (factor < 1) throw ValidationError("oversampled: factor must be >= 1");
    return Axis(axis.x_min, axis.x_max, axis.n * factor);
}

}  // namespace qimsim
