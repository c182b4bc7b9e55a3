#pragma once

#include <complex>
#include <vector>

#include "qimsim/errors.hpp"

namespace qimsim {

using cplx = std::complex<double>;

/// Uniform 1-D sampling grid with midpoint convention: sample k sits at
/// x_min + (k + 1/2) * dx, so no sample ever lands exactly on a mask edge
/// or on the axis origin.
struct Axis {
    double x_min = 0.0;
    double x_max = 0.0;
    int n = 0;

    Axis() = default;
    Axis(double lo, double hi, int count);

    double dx() const { return (x_max - x_min) / n; }
    double at(int k) const { return x_min + (k + 0.5) * dx(); }
    double span() const { return x_max - x_min; }

    std::vector<double> samples() const;

    bool operator==(const Axis& other) const = default;
};

/// Sampled complex amplitude over an Axis; the carrier of every optical mode.
struct ComplexField {
    Axis axis;
    std::vector<cplx> samples;

    ComplexField() = default;
    ComplexField(Axis ax, std::vector<cplx> values);
    static ComplexField zeros(const Axis& ax);

    void validate() const;  // throws ValidationError on size mismatch / non-finite
};

/// Monochromatic wave parameters. c is fixed; omega is the angular frequency
/// actually propagated (the degenerate omega_p / 2 in coincidence runs).
struct WaveContext {
    double omega;                              // rad/s
    static constexpr double c = 2.99792458e8;  // m/s

    explicit WaveContext(double omega_rad_s);

    static WaveContext from_wavelength(double lambda_m);
    double wavenumber() const { return omega / c; }  // omega/c, rad/m
    double wavelength() const;
};

/// Midpoint-rule quadrature: sum(samples) * dx. Exact for band-limited
/// integrands sampled above Nyquist.
cplx integrate(const ComplexField& field);

double l2_norm(const ComplexField& field);  // sqrt(sum |f|^2 dx)

}  // namespace qimsim
