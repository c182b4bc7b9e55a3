#include "qimsim/reference.hpp"

#include <algorithm>
#include <cmath>

namespace qimsim::ref {

TransferMatrix arm_transfer(const ArmSpec& arm, const WaveContext& ctx,
                            const Axis& mode_axis, const Axis& grid) {
    const double k = ctx.wavenumber();

    TransferMatrix tm;
    tm.mode_axis = mode_axis;
    std::visit(
        [&](const auto& d) {
            using T = std::decay_t<decltype(d)>;
            if constexpr (std::is_same_v<T, FarFieldPoint>) {
                tm.out_x = {0.0};
                tm.far_field = true;
            } else {
                tm.out_axis = d.axis;
                tm.out_x = d.axis.samples();
                tm.out_dx = d.axis.dx();
            }
        },
        arm.detector);
    const int n_out = static_cast<int>(tm.out_x.size());
    tm.g.assign(static_cast<size_t>(n_out) * mode_axis.n, cplx(0.0, 0.0));

    for (int j = 0; j < mode_axis.n; ++j) {
        const double p = mode_axis.at(j);
        cplx amp(1.0, 0.0);
        bool symbolic = true;
        ComplexField field;
        for (const Element& elem : arm.elements) {
            if (symbolic) {
                if (const auto* fs = std::get_if<FreeSpace>(&elem)) {
                    amp *= std::polar(1.0, k * fs->distance) *
                           quadratic_phase(p, -fs->distance / k);
                    continue;
                }
                field = ComplexField::zeros(grid);
                for (int i = 0; i < grid.n; ++i)
                    field.samples[i] = amp * std::polar(1.0, p * grid.at(i));
                symbolic = false;
            }
            field = propagate(field, elem, ctx);
        }
        if (tm.far_field) {
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
                tm.at(i, j) = amp * std::polar(1.0, p * tm.out_x[i]);
        } else {
            for (int i = 0; i < n_out; ++i) tm.at(i, j) = interpolate(field, tm.out_x[i]);
        }
    }
    return tm;
}

AmplitudeMap biphoton_amplitude(const TransferMatrix& ga, const TransferMatrix& gb,
                                const BiphotonSource& src) {
    const std::vector<double> f = spdc_mode_weights(src, ga.mode_axis);
    const int m = ga.n_modes();
    const int n1 = ga.n_out();
    const int n2 = gb.n_out();
    const double dp = ga.mode_axis.dx();

    AmplitudeMap map;
    map.x1 = ga.out_x;
    map.dx1 = ga.out_dx;
    map.x1_far_field = ga.far_field;
    map.axis2 = *gb.out_axis;
    map.a.assign(static_cast<size_t>(n1) * n2, cplx(0.0, 0.0));
    for (int i1 = 0; i1 < n1; ++i1)
        for (int i2 = 0; i2 < n2; ++i2) {
            cplx acc(0.0, 0.0);
            for (int j = 0; j < m; ++j)
                acc += f[j] * ga.at(i1, j) * gb.at(i2, m - 1 - j);
            map.a[static_cast<size_t>(i1) * n2 + i2] = acc * dp;
        }
    return map;
}

Pattern classical_coincidence(const ClassicalEnsemble& ens,
                              const TransferMatrix& ga, const TransferMatrix& gb,
                              bool normalized) {
    const std::vector<double> w = classical_mode_weights(ens, ga.mode_axis);
    const int m = ga.n_modes();
    const int n1 = ga.n_out();
    const int n2 = gb.n_out();
    const double dp = ga.mode_axis.dx();

    std::vector<double> values(n2, 0.0);
    for (int i2 = 0; i2 < n2; ++i2) {
        double acc = 0.0;
        for (int j = 0; j < m; ++j) {
            int jp = paired_mode_index(ga.mode_axis, j, ens.epsilon);
            if (jp < 0 || w[j] == 0.0) continue;
            double asum = 0.0;
            for (int i1 = 0; i1 < n1; ++i1) asum += std::norm(ga.at(i1, j));
            if (!ga.far_field) asum *= ga.out_dx;
            acc += w[j] * asum * std::norm(gb.at(i2, jp));
        }
        values[i2] = acc * dp;
    }
    return make_pattern(*gb.out_axis, std::move(values), normalized);
}

KlyshkoResult klyshko_mc(const RandomPhaseEnsemble& ens, const TransferMatrix& ga,
                         const TransferMatrix& gb, int n_realizations,
                         bool normalized) {
    ClassicalEnsemble proxy{1.0, ens.weights};
    const std::vector<double> w = classical_mode_weights(proxy, ga.mode_axis);
    const int m = ga.n_modes();
    const int n1 = ga.n_out();
    const int n2 = gb.n_out();
    const double dp = ga.mode_axis.dx();

    std::vector<double> sum(n2, 0.0), sumsq(n2, 0.0), value(n2, 0.0);
    for (int r = 0; r < n_realizations; ++r) {
        PhaseRealization ph = draw_realization(ens, m, r);
        std::fill(value.begin(), value.end(), 0.0);
        for (int i1 = 0; i1 < n1; ++i1)
            for (int i2 = 0; i2 < n2; ++i2) {
                cplx acc(0.0, 0.0);
                for (int j = 0; j < m; ++j)
                    acc += std::sqrt(w[j]) *
                           std::polar(1.0, ph.theta_a[j] + ph.theta_b[m - 1 - j]) *
                           ga.at(i1, j) * gb.at(i2, m - 1 - j);
                double intensity = std::norm(acc * dp);
                if (ga.far_field)
                    value[i2] = intensity;
                else
                    value[i2] += intensity * ga.out_dx;
            }
        for (int i2 = 0; i2 < n2; ++i2) {
            sum[i2] += value[i2];
            sumsq[i2] += value[i2] * value[i2];
        }
    }

    const double inv_n = 1.0 / n_realizations;
    std::vector<double> mean(n2), se(n2, 0.0);
    for (int i2 = 0; i2 < n2; ++i2) {
        mean[i2] = sum[i2] * inv_n;
        double v = std::max(0.0, sumsq[i2] * inv_n - mean[i2] * mean[i2]);
        se[i2] = n_realizations > 1 ? std::sqrt(v / (n_realizations - 1)) : 0.0;
    }
    double scale = 1.0;
    if (normalized) {
        double m0 = *std::max_element(mean.begin(), mean.end());
        scale = 1.0 / m0;
    }
    for (int i2 = 0; i2 < n2; ++i2) {
        mean[i2] *= scale;
        se[i2] *= scale;
    }
    KlyshkoResult result;
    result.realizations = n_realizations;
    result.pattern = make_pattern(*gb.out_axis, std::move(mean), false);
    result.pattern.normalized = normalized;
    result.std_error = std::move(se);
    return result;
}

}  // namespace qimsim::ref
