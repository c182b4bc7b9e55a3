#include "qimsim/elements.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

#include "qimsim/fourier.hpp"

namespace qimsim {

namespace {
constexpr double kPi = std::numbers::pi;
constexpr double kAliasEnergyTol = 1e-6;

bool in_open_slit(double x, double center, double width) {
    return std::abs(x - center) < 0.5 * width;
}
}  // namespace

double mask_amplitude(const MaskProfile& mask, double x) {
    return std::visit(
        [x](const auto& m) -> double {
            using T = std::decay_t<decltype(m)>;
            if constexpr (std::is_same_v<T, DoubleSlit>) {
                return (in_open_slit(x, m.center - 0.5 * m.separation, m.width) ||
                        in_open_slit(x, m.center + 0.5 * m.separation, m.width))
                           ? 1.0
                           : 0.0;
            } else if constexpr (std::is_same_v<T, SingleSlit>) {
                return in_open_slit(x, m.center, m.width) ? 1.0 : 0.0;
            } else if constexpr (std::is_same_v<T, GaussianMask>) {
                double u = (x - m.center) / m.width;
                return std::exp(-0.5 * u * u);
            } else {
                const SampledMask& s = m;
                if (s.x.empty() || x < s.x.front() || x > s.x.back()) return 0.0;
                auto it = std::upper_bound(s.x.begin(), s.x.end(), x);
                if (it == s.x.begin()) return s.amplitude.front();
                if (it == s.x.end()) return s.amplitude.back();
                size_t hi = static_cast<size_t>(it - s.x.begin());
                size_t lo = hi - 1;
                double t = (x - s.x[lo]) / (s.x[hi] - s.x[lo]);
                return s.amplitude[lo] + t * (s.amplitude[hi] - s.amplitude[lo]);
            }
        },
        mask);
}

SampledMask load_mask_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("mask file not readable: " + path);
    SampledMask mask;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::istringstream ss(line);
        double x, a;
        if (!(ss >> x)) continue;  // blank / comment-only line
        if (!(ss >> a))
            throw ValidationError("mask file " + path + ": line " +
                                  std::to_string(lineno) + " needs two columns");
        if (std::abs(a) > 1.0 + 1e-9)
            throw ValidationError("mask file " + path + ": |amplitude| > 1 at line " +
                                  std::to_string(lineno));
        mask.x.push_back(x);
        mask.amplitude.push_back(std::clamp(a, -1.0, 1.0));
    }
    if (mask.x.size() < 2)
        throw ValidationError("mask file " + path + ": need at least 2 samples");
    if (!std::is_sorted(mask.x.begin(), mask.x.end()))
        throw ValidationError("mask file " + path + ": x column must be ascending");
    return mask;
}

void validate_element(const Element& elem) {
    std::visit(
        [](const auto& e) {
            using T = std::decay_t<decltype(e)>;
            if constexpr (std::is_same_v<T, FreeSpace>) {
                if (!(e.distance > 0.0))
                    throw ValidationError("free-space distance must be positive");
            } else if constexpr (std::is_same_v<T, ThinLens>) {
                if (e.focal_length == 0.0 || !std::isfinite(e.focal_length))
                    throw ValidationError("focal length must be nonzero and finite");
            } else if constexpr (std::is_same_v<T, GaussianPupil>) {
                if (!(e.area_scale > 0.0))
                    throw ValidationError("pupil area scale must be positive");
            } else {
                (void)e;  // masks validated at construction / load time
            }
        },
        elem);
}

cplx quadratic_phase(double x, double q) {
    return std::polar(1.0, 0.5 * q * x * x);
}

double aliased_energy_fraction(const std::vector<cplx>& samples,
                               const std::vector<bool>& aliased) {
    double bad = 0.0, total = 0.0;
    for (size_t i = 0; i < samples.size(); ++i) {
        double e = std::norm(samples[i]);
        total += e;
        if (aliased[i]) bad += e;
    }
    return total > 0.0 ? bad / total : 0.0;
}

namespace {

// Quadratic phase exp(i q u^2 / 2) sampled with step du aliases where the
// local phase advance |q u| du exceeds pi. Raises only if the field actually
// carries energy there.
void guard_quadratic_phase(const std::vector<cplx>& samples,
                           const std::vector<double>& u, double q, double du,
                           const char* what) {
    std::vector<bool> aliased(u.size());
    bool any = false;
    for (size_t i = 0; i < u.size(); ++i) {
        aliased[i] = std::abs(q * u[i]) * du > kPi;
        any = any || aliased[i];
    }
    if (!any) return;
    double frac = aliased_energy_fraction(samples, aliased);
    if (frac > kAliasEnergyTol)
        throw SamplingViolation(std::string(what) +
                                ": quadratic phase aliases on the grid (" +
                                std::to_string(frac * 100.0) +
                                "% of field energy in the aliased region)");
}

ComplexField apply_free_space(const ComplexField& field, double d,
                              const WaveContext& ctx) {
    ComplexField modes = fourier_modes(field);
    const double k = ctx.wavenumber();
    const double curvature = -d / k;  // psi(|p|, -(c/w) d) in the p variable
    guard_quadratic_phase(modes.samples, modes.axis.samples(), curvature,
                          modes.axis.dx(), "free space");
    const cplx carrier = std::polar(1.0, k * d);
    for (int m = 0; m < modes.axis.n; ++m) {
        double p = modes.axis.at(m);
        modes.samples[m] *= carrier * quadratic_phase(p, curvature);
    }
    return synthesize(modes, field.axis);
}

}  // namespace

ComplexField propagate(const ComplexField& field, const Element& elem,
                       const WaveContext& ctx) {
    field.validate();
    validate_element(elem);
    return std::visit(
        [&](const auto& e) -> ComplexField {
            using T = std::decay_t<decltype(e)>;
            if constexpr (std::is_same_v<T, FreeSpace>) {
                return apply_free_space(field, e.distance, ctx);
            } else if constexpr (std::is_same_v<T, ThinLens>) {
                const double q = -ctx.wavenumber() / e.focal_length;
                guard_quadratic_phase(field.samples, field.axis.samples(), q,
                                      field.axis.dx(), "thin lens");
                ComplexField out = field;
                for (int i = 0; i < out.axis.n; ++i)
                    out.samples[i] *= quadratic_phase(out.axis.at(i), q);
                return out;
            } else if constexpr (std::is_same_v<T, Mask>) {
                ComplexField out = field;
                for (int i = 0; i < out.axis.n; ++i)
                    out.samples[i] *= mask_amplitude(e.profile, out.axis.at(i));
                return out;
            } else {
                ComplexField out = field;
                for (int i = 0; i < out.axis.n; ++i) {
                    double x = out.axis.at(i);
                    out.samples[i] *= std::exp(-x * x / (2.0 * e.area_scale));
                }
                return out;
            }
        },
        elem);
}

}  // namespace qimsim
