#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "qimsim/axis.hpp"

namespace qimsim {

// ---------------------------------------------------------------------------
// Mask transmission profiles. Builtin slits are indicator functions on open
// intervals; midpoint sampling keeps grid points off the edges.

struct DoubleSlit {
    double separation;    // centre-to-centre, m
    double width;         // each slit, m
    double center = 0.0;  // transverse offset of the pair, m
};

struct SingleSlit {
    double width;
    double center = 0.0;
};

struct GaussianMask {
    double width;  // amplitude profile exp(-x^2 / (2 w^2))
    double center = 0.0;
};

// Two-column (x_meters, amplitude) samples, linearly interpolated; zero
// outside the sampled range.
struct SampledMask {
    std::vector<double> x;
    std::vector<double> amplitude;
};

using MaskProfile = std::variant<DoubleSlit, SingleSlit, GaussianMask, SampledMask>;

double mask_amplitude(const MaskProfile& mask, double x);

// Loads a sampled mask from text: one "x amplitude" pair per line, '#'
// comments allowed. Throws ValidationError on malformed input or |t| > 1.
SampledMask load_mask_file(const std::string& path);

// ---------------------------------------------------------------------------
// Optical elements.

struct FreeSpace {
    double distance;  // m, > 0
};

struct ThinLens {
    double focal_length;  // m, nonzero
};

struct Mask {
    MaskProfile profile;
};

struct GaussianPupil {
    double area_scale;  // A in m^2; amplitude factor exp(-x^2 / (2 A))
};

using Element = std::variant<FreeSpace, ThinLens, Mask, GaussianPupil>;

void validate_element(const Element& elem);

// ---------------------------------------------------------------------------
// Detectors and arms.

enum class BucketMode { intensity_sum, amplitude_integrated };

struct PointArray {
    Axis axis;
};

// Integrates everything in its plane; `axis` is the sampled integration
// window (the computation grid when driven from a bench file).
struct BucketDetector {
    Axis axis;
    BucketMode mode = BucketMode::intensity_sum;
};

// Collects only the p = 0 transverse mode (a point detector at the origin of
// the far field).
struct FarFieldPoint {};

using DetectorSpec = std::variant<PointArray, BucketDetector, FarFieldPoint>;

struct ArmSpec {
    std::vector<Element> elements;
    DetectorSpec detector;
};

// ---------------------------------------------------------------------------
// Propagation.

/// Unit-modulus quadratic phase exp(i q x^2 / 2).
cplx quadratic_phase(double x, double q);

/// Applies one element to a sampled field. FreeSpace works in the wavenumber
/// domain (each mode e^{ipx} is multiplied by e^{i(w/c)d} e^{-i d c p^2/(2w)});
/// the other elements multiply pointwise. Throws SamplingViolation when more
/// than a 1e-6 energy fraction of the field sits where the applied quadratic
/// phase advances by more than pi per sample.
ComplexField propagate(const ComplexField& field, const Element& elem,
                       const WaveContext& ctx);

/// Fraction of |field|^2 energy carried by samples flagged `aliased`.
double aliased_energy_fraction(const std::vector<cplx>& samples,
                               const std::vector<bool>& aliased);

}  // namespace qimsim
