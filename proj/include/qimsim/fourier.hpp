#pragma once

#include "qimsim/axis.hpp"

namespace qimsim {

/// Wavenumber axis conjugate to a spatial axis: spans +-pi/dx with the same
/// sample count and the same midpoint convention. The resulting discrete
/// modes e^{i p_m x_k} are exactly orthogonal under the sampled inner
/// product, so analysis/synthesis below are mutually inverse to round-off.
Axis mode_axis_for(const Axis& spatial);

/// Analysis: c(p_m) = sum_k f(x_k) e^{-i p_m x_k} dx.
/// Synthesis convention is e^{+i p x} with the 1/(2pi) measure, i.e.
/// f(x) ~ sum_m c(p_m) e^{i p_m x} dp / (2pi).
ComplexField fourier_modes(const ComplexField& field);

/// Synthesis: reconstruct the spatial field from mode coefficients.
ComplexField synthesize(const ComplexField& modes, const Axis& spatial);

}  // namespace qimsim
