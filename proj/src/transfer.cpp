#include "qimsim/transfer.hpp"

#include <cmath>
#include <numbers>

namespace qimsim {

namespace {
constexpr double kPi = std::numbers::pi;

struct DetectorPlan {
    std::vector<double> out_x;
    std::optional<Axis> out_axis;
    double out_dx = 0.0;
    bool far_field = false;
};

DetectorPlan plan_detector(const DetectorSpec& det, const Axis& grid) {
    DetectorPlan plan;
    std::visit(
        [&](const auto& d) {
            using T = std::decay_t<decltype(d)>;
            if constexpr (std::is_same_v<T, FarFieldPoint>) {
                plan.out_x = {0.0};
                plan.far_field = true;
            } else {
                plan.out_axis = d.axis;
                plan.out_x = d.axis.samples();
                plan.out_dx = d.axis.dx();
            }
        },
        det);
    if (!plan.far_field) {
        // interpolation needs the detector inside the sampled span
        if (plan.out_x.front() < grid.at(0) - 1e-12 ||
            plan.out_x.back() > grid.at(grid.n - 1) + 1e-12)
            throw ValidationError(
                "detector axis extends beyond the computation grid");
    }
    return plan;
}

}  // namespace

bool mode_axis_is_symmetric(const Axis& mode_axis, double tol) {
    double scale = std::max(std::abs(mode_axis.x_min), std::abs(mode_axis.x_max));
    for (int j = 0; j < mode_axis.n / 2 + 1; ++j) {
        double sum = mode_axis.at(j) + mode_axis.at(mode_axis.n - 1 - j);
        if (std::abs(sum) > tol * std::max(scale, 1.0)) return false;
    }
    return true;
}

cplx interpolate(const ComplexField& field, double x) {
    const Axis& ax = field.axis;
    double u = (x - ax.at(0)) / ax.dx();
    if (u < -1e-9 || u > ax.n - 1 + 1e-9)
        throw ValidationError("interpolate: position outside sampled span");
    int k0 = static_cast<int>(std::floor(u));
    if (k0 < 0) k0 = 0;
    if (k0 > ax.n - 2) k0 = ax.n - 2;
    double t = u - k0;
    return field.samples[k0] * (1.0 - t) + field.samples[k0 + 1] * t;
}

TransferMatrix arm_transfer(const ArmSpec& arm, const WaveContext& ctx,
                            const Axis& mode_axis, const Axis& grid) {
    for (const Element& e : arm.elements) validate_element(e);
    DetectorPlan det = plan_detector(arm.detector, grid);

    const double k = ctx.wavenumber();
    const double p_nyq = kPi / grid.dx();

    TransferMatrix tm;
    tm.mode_axis = mode_axis;
    tm.out_axis = det.out_axis;
    tm.out_x = det.out_x;
    tm.out_dx = det.out_dx;
    tm.far_field = det.far_field;
    const int n_out = static_cast<int>(det.out_x.size());
    tm.g.assign(static_cast<size_t>(n_out) * mode_axis.n, cplx(0.0, 0.0));

    // Column errors cannot propagate out of a parallel region; stash the
    // first one and rethrow after the loop.
    std::exception_ptr failure;

#pragma omp parallel for schedule(static)
    for (int j = 0; j < mode_axis.n; ++j) {
        try {
            const double p = mode_axis.at(j);
            cplx amp(1.0, 0.0);
            bool symbolic = true;  // field is still amp * e^{ipx}
            ComplexField field;

            for (const Element& elem : arm.elements) {
                if (symbolic) {
                    if (const auto* fs = std::get_if<FreeSpace>(&elem)) {
                        // exact mode-domain free space: e^{ikd} psi(|p|, -(c/w)d)
                        amp *= std::polar(1.0, k * fs->distance) *
                               quadratic_phase(p, -fs->distance / k);
                        continue;
                    }
                    if (std::abs(p) > p_nyq)
                        throw SamplingViolation(
                            "mode wavenumber exceeds the grid Nyquist limit");
                    field = ComplexField::zeros(grid);
                    for (int i = 0; i < grid.n; ++i)
                        field.samples[i] = amp * std::polar(1.0, p * grid.at(i));
                    symbolic = false;
                }
                field = propagate(field, elem, ctx);
            }

            if (det.far_field) {
                cplx v;
                if (symbolic) {
                    cplx acc(0.0, 0.0);
                    for (int i = 0; i < grid.n; ++i)
                        acc += std::polar(1.0, p * grid.at(i));
                    v = amp * acc * grid.dx();
                } else {
                    v = integrate(field);
                }
                tm.at(0, j) = v;
            } else if (symbolic) {
                for (int i = 0; i < n_out; ++i)
                    tm.at(i, j) = amp * std::polar(1.0, p * det.out_x[i]);
            } else {
                for (int i = 0; i < n_out; ++i)
                    tm.at(i, j) = interpolate(field, det.out_x[i]);
            }
        } catch (...) {
#pragma omp critical
            if (!failure) failure = std::current_exception();
        }
    }

    if (failure) std::rethrow_exception(failure);
    return tm;
}

}  // namespace qimsim
