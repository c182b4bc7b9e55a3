#include "qimsim/axis.hpp"

#include <cmath>
#include <numbers>

namespace qimsim {

Axis::Axis(double lo, double hi, int count) : x_min(lo), x_max(hi), n(count) {
    if (n < 2) throw ValidationError("Axis: need at least 2 samples");
    if (!(x_max > x_min)) throw ValidationError("Axis: x_max must exceed x_min");
    if (!std::isfinite(x_min) || !std::isfinite(x_max))
        throw ValidationError("Axis: bounds must be finite");
}

std::vector<double> Axis::samples() const {
    std::vector<double> xs(n);
    for (int k = 0; k < n; ++k) xs[k] = at(k);
    return xs;
}

ComplexField::ComplexField(Axis ax, std::vector<cplx> values)
    : axis(ax), samples(std::move(values)) {
    validate();
}

ComplexField ComplexField::zeros(const Axis& ax) {
    ComplexField f;
    f.axis = ax;
    f.samples.assign(ax.n, cplx(0.0, 0.0));
    return f;
}

void ComplexField::validate() const {
    if (static_cast<int>(samples.size()) != axis.n)
        throw ValidationError("ComplexField: sample count does not match axis");
    for (const cplx& v : samples)
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
            throw ValidationError("ComplexField: non-finite sample");
}

WaveContext::WaveContext(double omega_rad_s) : omega(omega_rad_s) {
    if (!(omega > 0.0)) throw ValidationError("WaveContext: omega must be positive");
}

WaveContext WaveContext::from_wavelength(double lambda_m) {
    if (!(lambda_m > 0.0)) throw ValidationError("WaveContext: wavelength must be positive");
    return WaveContext(2.0 * std::numbers::pi * c / lambda_m);
}

double WaveContext::wavelength() const {
    return 2.0 * std::numbers::pi * c / omega;
}

cplx integrate(const ComplexField& field) {
    cplx acc(0.0, 0.0);
    for (const cplx& v : field.samples) acc += v;
    return acc * field.axis.dx();
}

double l2_norm(const ComplexField& field) {
    double acc = 0.0;
    for (const cplx& v : field.samples) acc += std::norm(v);
    return std::sqrt(acc * field.axis.dx());
}

}  // namespace qimsim
