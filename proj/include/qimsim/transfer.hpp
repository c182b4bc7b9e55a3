#pragma once

#include <optional>

#include "qimsim/elements.hpp"

namespace qimsim {

/// Sampled optical transfer function g(x_out; omega, p): column p holds the
/// detector-plane response to the source-plane mode e^{ipx}.
struct TransferMatrix {
    Axis mode_axis;                // input transverse wavenumber p, rad/m
    std::optional<Axis> out_axis;  // set when the arm ends in an array/bucket
    std::vector<double> out_x;     // detector sample positions ({0} for far field)
    double out_dx = 0.0;           // quadrature weight for bucket sums
    bool far_field = false;
    std::vector<cplx> g;           // row-major [i_out * n_modes + j_mode]

    int n_out() const { return static_cast<int>(out_x.size()); }
    int n_modes() const { return mode_axis.n; }
    cplx at(int i_out, int j_mode) const {
        return g[static_cast<size_t>(i_out) * mode_axis.n + j_mode];
    }
    cplx& at(int i_out, int j_mode) {
        return g[static_cast<size_t>(i_out) * mode_axis.n + j_mode];
    }
};

/// True when p_j + p_{n-1-j} == 0 for every j, so the SPDC pairing p -> -p
/// is an exact index flip.
bool mode_axis_is_symmetric(const Axis& mode_axis, double tol = 1e-9);

/// Linear interpolation of a sampled complex field at position x. x must lie
/// within the sampled span [first sample, last sample].
cplx interpolate(const ComplexField& field, double x);

/// Builds the transfer matrix of an arm by launching each mode of `mode_axis`
/// at the source plane and propagating it through the elements in order on
/// the sampling grid `grid`. Leading free-space elements act on the still
/// pure plane wave analytically (a diagonal phase in p), which keeps the
/// finite window out of the result until a lens, pupil or mask forces the
/// field onto the grid. Columns are independent and computed in parallel;
/// the result does not depend on the schedule.
TransferMatrix arm_transfer(const ArmSpec& arm, const WaveContext& ctx,
                            const Axis& mode_axis, const Axis& grid);

}  // namespace qimsim
