#include "qimsim/detection.hpp"

#include <algorithm>
#include <cmath>

namespace qimsim {

namespace {

void check_pairing_axes(const TransferMatrix& ga, const TransferMatrix& gb) {
    if (!(ga.mode_axis == gb.mode_axis))
        throw ModeAxisMismatch("arms must share one mode axis");
    if (!mode_axis_is_symmetric(ga.mode_axis))
        throw ModeAxisMismatch("mode axis must be symmetric for the p -> -p pairing");
}

Axis require_array_axis(const TransferMatrix& g, const char* what) {
    if (!g.out_axis)
        throw ValidationError(std::string(what) +
                              ": the scanned arm must end in a point array");
    return *g.out_axis;
}

double peak(const std::vector<double>& v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, x);
    return m;
}

}  // namespace

Pattern make_pattern(const Axis& axis, std::vector<double> values, bool normalized) {
    if (static_cast<int>(values.size()) != axis.n)
        throw ValidationError("make_pattern: value count does not match axis");
    for (double v : values)
        if (!std::isfinite(v) || v < 0.0)
            throw ValidationError("make_pattern: values must be finite and >= 0");
    Pattern p;
    p.axis = axis;
    p.normalized = normalized;
    if (normalized) {
        double m = peak(values);
        if (!(m > 0.0)) throw EmptyPattern("pattern is identically zero");
        for (double& v : values) v /= m;
    }
    p.values = std::move(values);
    return p;
}

AmplitudeMap biphoton_amplitude(const TransferMatrix& ga, const TransferMatrix& gb,
                                const BiphotonSource& src) {
    check_pairing_axes(ga, gb);
    const Axis axis2 = require_array_axis(gb, "biphoton_amplitude");
    const std::vector<double> f = spdc_mode_weights(src, ga.mode_axis);
    const int m = ga.n_modes();
    const int n1 = ga.n_out();
    const int n2 = gb.n_out();
    const double dp = ga.mode_axis.dx();

    // idler columns reversed once: gbf[i2][j] = gb(x2, -p_j)
    std::vector<cplx> gbf(static_cast<size_t>(n2) * m);
    for (int i2 = 0; i2 < n2; ++i2)
        for (int j = 0; j < m; ++j)
            gbf[static_cast<size_t>(i2) * m + j] = gb.at(i2, m - 1 - j);

    AmplitudeMap map;
    map.x1 = ga.out_x;
    map.dx1 = ga.out_dx;
    map.x1_far_field = ga.far_field;
    map.axis2 = axis2;
    map.a.resize(static_cast<size_t>(n1) * n2);

#pragma omp parallel for schedule(static)
    for (int i1 = 0; i1 < n1; ++i1) {
        std::vector<cplx> row(m);
        for (int j = 0; j < m; ++j) row[j] = f[j] * ga.at(i1, j);
        for (int i2 = 0; i2 < n2; ++i2) {
            const cplx* b = &gbf[static_cast<size_t>(i2) * m];
            cplx acc(0.0, 0.0);
            for (int j = 0; j < m; ++j) acc += row[j] * b[j];
            map.a[static_cast<size_t>(i1) * n2 + i2] = acc * dp;
        }
    }
    return map;
}

Pattern coincidence_pattern(const AmplitudeMap& ampl, BucketMode mode,
                            bool normalized) {
    const int n1 = ampl.n1();
    const int n2 = ampl.n2();
    std::vector<double> values(n2, 0.0);
    if (ampl.x1_far_field) {
        for (int i2 = 0; i2 < n2; ++i2) values[i2] = std::norm(ampl.at(0, i2));
    } else if (mode == BucketMode::intensity_sum) {
        for (int i2 = 0; i2 < n2; ++i2) {
            double acc = 0.0;
            for (int i1 = 0; i1 < n1; ++i1) acc += std::norm(ampl.at(i1, i2));
            values[i2] = acc * ampl.dx1;
        }
    } else {
        for (int i2 = 0; i2 < n2; ++i2) {
            cplx acc(0.0, 0.0);
            for (int i1 = 0; i1 < n1; ++i1) acc += ampl.at(i1, i2);
            values[i2] = std::norm(acc * ampl.dx1);
        }
    }
    return make_pattern(ampl.axis2, std::move(values), normalized);
}

CoincidenceMap coincidence_map(const AmplitudeMap& ampl) {
    if (ampl.x1_far_field || ampl.n1() < 2)
        throw ValidationError("coincidence_map: needs arrays in both arms");
    CoincidenceMap map;
    map.axis1 = Axis(ampl.x1.front() - 0.5 * ampl.dx1,
                     ampl.x1.back() + 0.5 * ampl.dx1, ampl.n1());
    map.axis2 = ampl.axis2;
    map.values.resize(ampl.a.size());
    for (size_t i = 0; i < ampl.a.size(); ++i) map.values[i] = std::norm(ampl.a[i]);
    return map;
}

Pattern singles_pattern(const TransferMatrix& g, const BiphotonSource& src,
                        bool paired, bool normalized) {
    const Axis axis = require_array_axis(g, "singles_pattern");
    const std::vector<double> f = spdc_mode_weights(src, g.mode_axis);
    const int m = g.n_modes();
    const int n = g.n_out();
    if (paired && !mode_axis_is_symmetric(g.mode_axis))
        throw ModeAxisMismatch("mode axis must be symmetric for the p -> -p pairing");
    const double dp = g.mode_axis.dx();

    std::vector<double> values(n, 0.0);
#pragma omp parallel for schedule(static)
    for (int i = 0; i < n; ++i) {
        double acc = 0.0;
        for (int j = 0; j < m; ++j) {
            int col = paired ? m - 1 - j : j;
            acc += f[j] * f[j] * std::norm(g.at(i, col));
        }
        values[i] = acc * dp;
    }
    return make_pattern(axis, std::move(values), normalized);
}

Pattern singles_pattern(const TransferMatrix& g, const BiphotonSource& src,
                        const TransferMatrix& other, bool paired, bool normalized) {
    if (!(g.mode_axis == other.mode_axis))
        throw ModeAxisMismatch("arms must share one mode axis");
    const Axis axis = require_array_axis(g, "singles_pattern");
    const std::vector<double> f = spdc_mode_weights(src, g.mode_axis);
    const int m = g.n_modes();
    const int n = g.n_out();
    if (paired && !mode_axis_is_symmetric(g.mode_axis))
        throw ModeAxisMismatch("mode axis must be symmetric for the p -> -p pairing");
    const double dp = g.mode_axis.dx();

    // f_jk = f_j f_k^* sum_x other(x, p_j) other*(x, p_k) dx
    std::vector<cplx> fjk(static_cast<size_t>(m) * m, cplx(0.0, 0.0));
#pragma omp parallel for schedule(static)
    for (int j = 0; j < m; ++j) {
        for (int k = 0; k < m; ++k) {
            cplx acc(0.0, 0.0);
            for (int i = 0; i < other.n_out(); ++i)
                acc += other.at(i, j) * std::conj(other.at(i, k));
            fjk[static_cast<size_t>(j) * m + k] = f[j] * f[k] * acc * other.out_dx;
        }
    }

    std::vector<double> values(n, 0.0);
#pragma omp parallel for schedule(static)
    for (int i = 0; i < n; ++i) {
        cplx acc(0.0, 0.0);
        for (int j = 0; j < m; ++j) {
            cplx gj = g.at(i, paired ? m - 1 - j : j);
            for (int k = 0; k < m; ++k) {
                cplx gk = g.at(i, paired ? m - 1 - k : k);
                acc += fjk[static_cast<size_t>(j) * m + k] * gj * std::conj(gk);
            }
        }
        values[i] = std::max(0.0, acc.real()) * dp;
    }
    return make_pattern(axis, std::move(values), normalized);
}

namespace {

// w(p_j) |gA(x1, p_j)|^2 |gB(x2, p_j / eps)|^2 with the partner snapped to
// the nearest bin; modes whose partner leaves the grid contribute zero.
std::vector<double> classical_values(const ClassicalEnsemble& ens,
                                     const TransferMatrix& ga,
                                     const TransferMatrix& gb, bool reduce_x1) {
    if (!(ga.mode_axis == gb.mode_axis))
        throw ModeAxisMismatch("arms must share one mode axis");
    const std::vector<double> w = classical_mode_weights(ens, ga.mode_axis);
    const int m = ga.n_modes();
    const int n1 = ga.n_out();
    const int n2 = gb.n_out();
    const double dp = ga.mode_axis.dx();

    std::vector<int> partner(m);
    bool any = false;
    for (int j = 0; j < m; ++j) {
        partner[j] = paired_mode_index(ga.mode_axis, j, ens.epsilon);
        any = any || (partner[j] >= 0 && w[j] > 0.0);
    }
    if (!any)
        throw PairingOutOfRange(
            "no weighted mode has an on-grid partner p / epsilon");

    const bool far_field = ga.far_field;
    std::vector<double> values(static_cast<size_t>(reduce_x1 ? n2 : n1 * n2), 0.0);

    if (reduce_x1) {
        // bucket over x1 once per mode, then scan x2
        std::vector<double> bucket_a(m, 0.0);
#pragma omp parallel for schedule(static)
        for (int j = 0; j < m; ++j) {
            double asum = 0.0;
            for (int i1 = 0; i1 < n1; ++i1) asum += std::norm(ga.at(i1, j));
            bucket_a[j] = far_field ? asum : asum * ga.out_dx;
        }
#pragma omp parallel for schedule(static)
        for (int i2 = 0; i2 < n2; ++i2) {
            double acc = 0.0;
            for (int j = 0; j < m; ++j) {
                if (partner[j] < 0 || w[j] == 0.0) continue;
                acc += w[j] * bucket_a[j] * std::norm(gb.at(i2, partner[j]));
            }
            values[i2] = acc * dp;
        }
    } else {
#pragma omp parallel for schedule(static)
        for (int i2 = 0; i2 < n2; ++i2) {
            for (int i1 = 0; i1 < n1; ++i1) {
                double acc = 0.0;
                for (int j = 0; j < m; ++j) {
                    if (partner[j] < 0 || w[j] == 0.0) continue;
                    acc += w[j] * std::norm(ga.at(i1, j)) *
                           std::norm(gb.at(i2, partner[j]));
                }
                values[static_cast<size_t>(i1) * n2 + i2] = acc * dp;
            }
        }
    }
    return values;
}

}  // namespace

CoincidenceMap classical_coincidence_map(const ClassicalEnsemble& ens,
                                         const TransferMatrix& ga,
                                         const TransferMatrix& gb) {
    Axis axis1 = require_array_axis(ga, "classical_coincidence_map");
    Axis axis2 = require_array_axis(gb, "classical_coincidence_map");
    CoincidenceMap map;
    map.axis1 = axis1;
    map.axis2 = axis2;
    map.values = classical_values(ens, ga, gb, /*reduce_x1=*/false);
    return map;
}

Pattern classical_coincidence(const ClassicalEnsemble& ens,
                              const TransferMatrix& ga, const TransferMatrix& gb,
                              bool normalized) {
    Axis axis2 = require_array_axis(gb, "classical_coincidence");
    return make_pattern(axis2, classical_values(ens, ga, gb, /*reduce_x1=*/true),
                        normalized);
}

KlyshkoResult klyshko_mc(const RandomPhaseEnsemble& ens, const TransferMatrix& ga,
                         const TransferMatrix& gb, int n_realizations,
                         bool normalized) {
    if (n_realizations < 1)
        throw ValidationError("klyshko_mc: need at least one realization");
    check_pairing_axes(ga, gb);
    const Axis axis2 = require_array_axis(gb, "klyshko_mc");
    ClassicalEnsemble proxy{1.0, ens.weights};
    const std::vector<double> w = classical_mode_weights(proxy, ga.mode_axis);
    const int m = ga.n_modes();
    const int n1 = ga.n_out();
    const int n2 = gb.n_out();
    const double dp = ga.mode_axis.dx();

    std::vector<double> amp(m);
    for (int j = 0; j < m; ++j) amp[j] = std::sqrt(w[j]);

    std::vector<cplx> gbf(static_cast<size_t>(n2) * m);
    for (int i2 = 0; i2 < n2; ++i2)
        for (int j = 0; j < m; ++j)
            gbf[static_cast<size_t>(i2) * m + j] = gb.at(i2, m - 1 - j);

    // Fixed-size realization chunks keep the accumulation tree independent
    // of the thread count, so results are bitwise reproducible.
    constexpr int kChunk = 32;
    const int n_chunks = (n_realizations + kChunk - 1) / kChunk;
    std::vector<std::vector<double>> chunk_sum(n_chunks), chunk_sumsq(n_chunks);

#pragma omp parallel for schedule(static)
    for (int c = 0; c < n_chunks; ++c) {
        std::vector<double> sum(n2, 0.0), sumsq(n2, 0.0);
        std::vector<cplx> coeff(m), row(m);
        std::vector<double> value(n2);
        const int r_lo = c * kChunk;
        const int r_hi = std::min(n_realizations, r_lo + kChunk);
        for (int r = r_lo; r < r_hi; ++r) {
            PhaseRealization ph = draw_realization(ens, m, r);
            for (int j = 0; j < m; ++j)
                coeff[j] =
                    amp[j] * std::polar(1.0, ph.theta_a[j] + ph.theta_b[m - 1 - j]);
            std::fill(value.begin(), value.end(), 0.0);
            for (int i1 = 0; i1 < n1; ++i1) {
                for (int j = 0; j < m; ++j) row[j] = coeff[j] * ga.at(i1, j);
                for (int i2 = 0; i2 < n2; ++i2) {
                    const cplx* b = &gbf[static_cast<size_t>(i2) * m];
                    cplx acc(0.0, 0.0);
                    for (int j = 0; j < m; ++j) acc += row[j] * b[j];
                    double intensity = std::norm(acc * dp);
                    if (ga.far_field)
                        value[i2] = intensity;
                    else
                        value[i2] += intensity * ga.out_dx;
                }
            }
            for (int i2 = 0; i2 < n2; ++i2) {
                sum[i2] += value[i2];
                sumsq[i2] += value[i2] * value[i2];
            }
        }
        chunk_sum[c] = std::move(sum);
        chunk_sumsq[c] = std::move(sumsq);
    }

    std::vector<double> mean(n2, 0.0), var(n2, 0.0);
    for (int c = 0; c < n_chunks; ++c)
        for (int i2 = 0; i2 < n2; ++i2) {
            mean[i2] += chunk_sum[c][i2];
            var[i2] += chunk_sumsq[c][i2];
        }
    const double inv_n = 1.0 / n_realizations;
    std::vector<double> se(n2, 0.0);
    for (int i2 = 0; i2 < n2; ++i2) {
        mean[i2] *= inv_n;
        double v = std::max(0.0, var[i2] * inv_n - mean[i2] * mean[i2]);
        se[i2] = n_realizations > 1 ? std::sqrt(v / (n_realizations - 1)) : 0.0;
    }

    KlyshkoResult result;
    result.realizations = n_realizations;
    double scale = 1.0;
    if (normalized) {
        double m0 = peak(mean);
        if (!(m0 > 0.0)) throw EmptyPattern("klyshko_mc: mean pattern is zero");
        scale = 1.0 / m0;
    }
    std::vector<double> values(n2);
    for (int i2 = 0; i2 < n2; ++i2) {
        values[i2] = mean[i2] * scale;
        se[i2] *= scale;
    }
    result.pattern = make_pattern(axis2, std::move(values), /*normalized=*/false);
    result.pattern.normalized = normalized;
    result.std_error = std::move(se);
    return result;
}

double fringe_spacing(const Pattern& pattern) {
    const int n = pattern.axis.n;
    const double dx = pattern.axis.dx();
    const std::vector<double>& v = pattern.values;

    struct Peak {
        double x;
        double value;
        int index;
    };
    std::vector<Peak> peaks;
    double vmax = 0.0;
    for (double y : v) vmax = std::max(vmax, y);

    // a maximum may sit on a run of exactly equal samples (e.g. a fringe
    // crest centred between two midpoint samples)
    int i = 1;
    while (i + 1 < n) {
        if (!(v[i] > v[i - 1])) {
            ++i;
            continue;
        }
        int j = i;
        while (j + 1 < n && v[j + 1] == v[i]) ++j;
        if (j + 1 < n && v[j + 1] < v[i]) {
            if (i == j) {
                double denom = v[i - 1] - 2.0 * v[i] + v[i + 1];
                double delta = denom != 0.0 ? 0.5 * (v[i - 1] - v[i + 1]) / denom : 0.0;
                peaks.push_back({pattern.axis.at(i) + delta * dx, v[i], i});
            } else {
                peaks.push_back(
                    {0.5 * (pattern.axis.at(i) + pattern.axis.at(j)), v[i], i});
            }
        }
        i = j + 1;
    }

    // prune low-prominence maxima: sampling ripple and hard-spectrum-edge
    // ringing put percent-level dips on fringe crests, while genuine fringes
    // have near-full contrast
    const double prominence = 0.06 * vmax;
    bool merged = true;
    while (merged && peaks.size() > 1) {
        merged = false;
        for (size_t a = 0; a + 1 < peaks.size(); ++a) {
            double valley = peaks[a].value;
            for (int k = peaks[a].index; k <= peaks[a + 1].index; ++k)
                valley = std::min(valley, v[k]);
            if (std::min(peaks[a].value, peaks[a + 1].value) - valley < prominence) {
                peaks.erase(peaks.begin() +
                            (peaks[a].value < peaks[a + 1].value ? a : a + 1));
                merged = true;
                break;
            }
        }
    }

    if (peaks.size() < 3)
        throw NoFringes("fringe_spacing: fewer than 3 interior maxima");
    double acc = 0.0;
    for (size_t a = 1; a < peaks.size(); ++a) acc += peaks[a].x - peaks[a - 1].x;
    return acc / (static_cast<double>(peaks.size()) - 1.0);
}

double visibility(const Pattern& pattern) {
    const int n = pattern.axis.n;
    int lo = n / 4;
    int hi = n - n / 4;
    double vmin = pattern.values[lo], vmax = pattern.values[lo];
    for (int i = lo; i < hi; ++i) {
        vmin = std::min(vmin, pattern.values[i]);
        vmax = std::max(vmax, pattern.values[i]);
    }
    double denom = vmax + vmin;
    return denom > 0.0 ? (vmax - vmin) / denom : 0.0;
}

double image_error(const Pattern& pattern, const Pattern& reference) {
    if (!(pattern.axis == reference.axis))
        throw ValidationError("image_error: patterns live on different axes");
    double pa = peak(pattern.values);
    double pb = peak(reference.values);
    if (!(pa > 0.0) || !(pb > 0.0))
        throw EmptyPattern("image_error: cannot normalize a zero pattern");
    double err = 0.0;
    for (int i = 0; i < pattern.axis.n; ++i)
        err = std::max(err,
                       std::abs(pattern.values[i] / pa - reference.values[i] / pb));
    return err;
}

}  // namespace qimsim
