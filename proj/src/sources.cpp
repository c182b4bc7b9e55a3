#include "qimsim/sources.hpp"

#include <cmath>

#include "qimsim/rng.hpp"

namespace qimsim {

namespace {

std::vector<double> profile_samples(const ModeProfile& prof, const Axis& mode_axis) {
    std::vector<double> f(mode_axis.n, 0.0);
    for (int j = 0; j < mode_axis.n; ++j) {
        double p = mode_axis.at(j);
        if (prof.kind == ModeProfile::Kind::flat) {
            f[j] = std::abs(p) <= prof.p_max ? 1.0 : 0.0;
        } else {
            double u = p / prof.sigma_p;
            f[j] = std::exp(-0.5 * u * u);
        }
    }
    return f;
}

void normalize_sq(std::vector<double>& f, double dp, const char* what) {
    double total = 0.0;
    for (double v : f) total += v * v;
    total *= dp;
    if (!(total > 0.0))
        throw ValidationError(std::string(what) + ": no weight on the mode grid");
    double scale = 1.0 / std::sqrt(total);
    for (double& v : f) v *= scale;
}

void validate_profile(const ModeProfile& prof) {
    if (prof.kind == ModeProfile::Kind::flat) {
        if (!(prof.p_max > 0.0))
            throw ValidationError("mode profile: p_max must be positive");
    } else if (!(prof.sigma_p > 0.0)) {
        throw ValidationError("mode profile: sigma_p must be positive");
    }
}

}  // namespace

std::vector<double> spdc_mode_weights(const BiphotonSource& src,
                                      const Axis& mode_axis) {
    validate_profile(src.f);
    if (!(src.omega_p > 0.0))
        throw ValidationError("BiphotonSource: omega_p must be positive");
    const double paraxial_bound = src.omega_p / (2.0 * WaveContext::c);
    if (src.f.kind == ModeProfile::Kind::flat && src.f.p_max >= paraxial_bound)
        throw ParaxialViolation("SPDC profile support reaches omega_p / (2c)");
    double p_edge = std::max(std::abs(mode_axis.at(0)),
                             std::abs(mode_axis.at(mode_axis.n - 1)));
    if (p_edge >= paraxial_bound)
        throw ParaxialViolation("mode axis reaches omega_p / (2c)");

    std::vector<double> f = profile_samples(src.f, mode_axis);
    normalize_sq(f, mode_axis.dx(), "spdc_mode_weights");
    return f;
}

std::vector<double> classical_mode_weights(const ClassicalEnsemble& ens,
                                           const Axis& mode_axis) {
    validate_profile(ens.weights);
    if (ens.epsilon == 0.0)
        throw ValidationError("ClassicalEnsemble: epsilon must be nonzero");
    std::vector<double> w = profile_samples(ens.weights, mode_axis);
    // probability weights: normalize sum w dp = 1
    double total = 0.0;
    for (double& v : w) {
        v = std::abs(v) > 0.0 ? v * v : 0.0;
        total += v;
    }
    total *= mode_axis.dx();
    if (!(total > 0.0))
        throw ValidationError("classical_mode_weights: no weight on the mode grid");
    for (double& v : w) v /= total;
    return w;
}

int paired_mode_index(const Axis& mode_axis, int j, double epsilon) {
    double p_partner = mode_axis.at(j) / epsilon;
    double u = (p_partner - mode_axis.x_min) / mode_axis.dx() - 0.5;
    long idx = std::lround(u);
    if (idx < 0 || idx >= mode_axis.n) return -1;
    if (std::abs(p_partner - mode_axis.at(static_cast<int>(idx))) >
        0.5 * mode_axis.dx() * (1.0 + 1e-9))
        return -1;
    return static_cast<int>(idx);
}

PhaseRealization draw_realization(const RandomPhaseEnsemble& ens, int mode_count,
                                  std::uint64_t realization_index) {
    PhaseRealization r;
    r.theta_a.assign(mode_count, 0.0);
    r.theta_b.assign(mode_count, 0.0);
    if (ens.freeze_phases) return r;
    SplitMix64 gen(sub_seed(ens.seed, realization_index));
    for (int j = 0; j < mode_count; ++j) r.theta_a[j] = gen.uniform_angle();
    for (int j = 0; j < mode_count; ++j) r.theta_b[j] = gen.uniform_angle();
    return r;
}

}  // namespace qimsim
