#pragma once

#include "qimsim/sources.hpp"
#include "qimsim/transfer.hpp"

namespace qimsim {

/// Nonnegative detection rates over a detector axis, peak-normalized unless
/// raw mode was requested at creation.
struct Pattern {
    Axis axis;
    std::vector<double> values;
    bool normalized = true;
};

Pattern make_pattern(const Axis& axis, std::vector<double> values,
                     bool normalized = true);

struct CoincidenceMap {
    Axis axis1;
    Axis axis2;
    std::vector<double> values;  // row-major [i1 * n2 + i2]

    double at(int i1, int i2) const {
        return values[static_cast<size_t>(i1) * axis2.n + i2];
    }
};

/// Joint two-detector amplitude A12[x1][x2] (x1 may be the single far-field
/// point of a FarFieldPoint arm).
struct AmplitudeMap {
    std::vector<double> x1;
    double dx1 = 0.0;
    bool x1_far_field = false;
    Axis axis2;
    std::vector<cplx> a;  // row-major [i1 * n2 + i2]

    int n1() const { return static_cast<int>(x1.size()); }
    int n2() const { return axis2.n; }
    cplx at(int i1, int i2) const {
        return a[static_cast<size_t>(i1) * axis2.n + i2];
    }
};

/// A12(x1, x2) = sum_p f(p) gA(x1, p) gB(x2, -p) dp at the degenerate
/// frequency. Both transfers must share one symmetric mode axis so the
/// idler pairing -p is an exact index flip.
AmplitudeMap biphoton_amplitude(const TransferMatrix& ga, const TransferMatrix& gb,
                                const BiphotonSource& src);

/// Reduces A12 over the x1 detector: intensity-sum bucket
/// sum_x1 |A|^2 dx1, amplitude-integrated bucket |sum_x1 A dx1|^2, or the
/// far-field row |A(0, x2)|^2 when arm A collected only p = 0.
Pattern coincidence_pattern(const AmplitudeMap& ampl,
                            BucketMode mode = BucketMode::intensity_sum,
                            bool normalized = true);

CoincidenceMap coincidence_map(const AmplitudeMap& ampl);

/// Singles rate at the detector of `g` with the other arm traced out.
/// The two-argument form assumes a lossless (unitary) other arm, for which
/// the mode overlap is exactly diagonal and the rate is the incoherent mode
/// sum. `paired` selects whether this arm sees the idler (-p) or the signal
/// (+p) side of each pair.
Pattern singles_pattern(const TransferMatrix& g, const BiphotonSource& src,
                        bool paired = true, bool normalized = true);

/// General form: f_jk = f_j f_k^* sum_x other(x, p_j) other*(x, p_k) dx.
Pattern singles_pattern(const TransferMatrix& g, const BiphotonSource& src,
                        const TransferMatrix& other, bool paired = true,
                        bool normalized = true);

/// Incoherent coincidence rate of the classically correlated ensemble:
/// C(x1, x2) = sum_p w(p) |gA(x1, p)|^2 |gB(x2, p/eps)|^2, the partner
/// snapped to the nearest mode bin (off-grid partners contribute zero).
/// Consumes only |g|^2, so it is blind to any phase applied to the arms.
CoincidenceMap classical_coincidence_map(const ClassicalEnsemble& ens,
                                         const TransferMatrix& ga,
                                         const TransferMatrix& gb);

/// Same, reduced over x1 (intensity-sum bucket, or the far-field row when
/// arm A collected only p = 0).
Pattern classical_coincidence(const ClassicalEnsemble& ens,
                              const TransferMatrix& ga, const TransferMatrix& gb,
                              bool normalized = true);

struct KlyshkoResult {
    Pattern pattern;
    std::vector<double> std_error;  // per bin, same scale as pattern values
    int realizations = 0;
};

/// Monte-Carlo mean of |A|^2 over random-phase realizations,
/// A = sum_p sqrt(w_p) gA(x1,p) e^{i theta_A(p)} gB(x2,-p) e^{i theta_B(-p)} dp,
/// reduced over x1 like coincidence_pattern. Realizations are accumulated in
/// fixed-size chunks so the result is bitwise independent of the thread count.
KlyshkoResult klyshko_mc(const RandomPhaseEnsemble& ens, const TransferMatrix& ga,
                         const TransferMatrix& gb, int n_realizations,
                         bool normalized = true);

/// Mean peak-to-peak distance of interior local maxima (parabolic sub-bin
/// refinement). Throws NoFringes with fewer than 3 interior maxima.
double fringe_spacing(const Pattern& pattern);

/// (max - min) / (max + min) over the central half of the axis.
double visibility(const Pattern& pattern);

/// Largest pointwise difference after peak-normalizing both patterns.
double image_error(const Pattern& pattern, const Pattern& reference);

}  // namespace qimsim
