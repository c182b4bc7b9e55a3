#pragma once

#include <Eigen/Dense>

#include <array>
#include <cstdint>
#include <utility>
#include <vector>

#include "qimsim/errors.hpp"

namespace qimsim::qudit {

using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

struct Dims {
    int a = 0;
    int b = 0;
    int total() const { return a * b; }
    bool operator==(const Dims&) const = default;
};

/// Bipartite pure state; amplitude of |j>_A |k>_B sits at index j*b + k.
struct PureState {
    Dims dims;
    Vector amplitudes;

    PureState(Dims d, Vector amp);  // validates unit norm within 1e-12
};

/// Bipartite density matrix in the same product index convention.
struct DensityMatrix {
    Dims dims;
    Matrix rho;

    static DensityMatrix from_matrix(Dims d, Matrix m);  // validates
    static DensityMatrix maximally_mixed(Dims d);
    static DensityMatrix pure(const PureState& psi);
};

Matrix kron(const Matrix& a, const Matrix& b);
Matrix pauli(int mu);  // sigma_0 .. sigma_3
void require_hermitian(const Matrix& m, double tol, const char* what);

// ---------------------------------------------------------------------------
// Schmidt machinery.

struct SchmidtDecomposition {
    Eigen::VectorXd coefficients;  // nonnegative, descending, squares sum to 1
    Matrix basis_a;                // columns phi_k
    Matrix basis_b;                // columns chi_k
};

SchmidtDecomposition schmidt(const PureState& psi);

/// |phi_plus> generalized to d x d: sum_k |kk> / sqrt(d).
PureState max_entangled(int d);

// ---------------------------------------------------------------------------
// Separable simulation of commuting measurement families.

struct SeparableDecomposition {
    std::vector<double> weights;
    std::vector<Matrix> factors_a;  // pure density factors |phi_j><phi_j|
    std::vector<Matrix> factors_b;  // |omega_j><omega_j|

    DensityMatrix assemble(Dims dims) const;
};

/// Explicit product decomposition of the separable state that reproduces
/// every expectation tr((O_A x O_B) rho_psi) for O_A in the commuting family
/// (and arbitrary O_B). The common eigenbasis is fixed deterministically by
/// sorting on the eigenvalue tuples. Throws NonCommutingFamily when two
/// members fail to commute within 1e-10.
SeparableDecomposition separable_simulation(const PureState& psi,
                                            const std::vector<Matrix>& family_a);

DensityMatrix separable_simulator(const PureState& psi,
                                  const std::vector<Matrix>& family_a);

// ---------------------------------------------------------------------------
// Expectations and channels.

double expectation(const DensityMatrix& state, const Matrix& obs);
double expectation(const PureState& state, const Matrix& obs);

/// Kraus channel with every operator a local product V_k = A_k x B_k.
struct LocalChannel {
    Dims dims;
    std::vector<std::pair<Matrix, Matrix>> kraus;

    Matrix kraus_joint(size_t k) const;
};

/// sum_k V_k rho V_k^dagger. Throws NotTracePreserving unless
/// sum_k V_k^dagger V_k = 1 within 1e-10.
DensityMatrix apply_channel(const LocalChannel& ch, const DensityMatrix& rho);

/// (1 x A^T) psi for a maximally entangled psi, with A^T taken in the
/// Schmidt bases, so that (A x 1) psi = (1 x A^T) psi. The result is the
/// raw (generally unnormalized) vector. Throws NotMaximallyEntangled unless
/// all Schmidt coefficients are 1/sqrt(N) within 1e-10.
Vector transfer_to_b(const Matrix& a_op, const PureState& psi_max);

/// (A x 1) psi, the other side of the identity above.
Vector apply_on_a(const Matrix& a_op, const PureState& psi);

// ---------------------------------------------------------------------------
// Two-qubit witness constructions.

struct WitnessSuite {
    Matrix w;             // 2/3 (1x1 - 3 tau0)
    DensityMatrix tau0;   // nearest separable state to phi_plus
    PureState phi_plus;
    // projections[j-1][s]: P_j^+ (s=0) and P_j^- (s=1), j = 1..3
    std::array<std::array<Matrix, 2>, 3> projections;

    /// P_j^{ab} = P_j^a x P_j^b with a, b in {+1, -1}, j in {1, 2, 3}.
    Matrix projection_pair(int j, int a, int b) const {
        return kron(projections[j - 1][a > 0 ? 0 : 1],
                    projections[j - 1][b > 0 ? 0 : 1]);
    }
};

WitnessSuite witness_suite();

// ---------------------------------------------------------------------------
// Noise mixing, PPT, Hilbert-Schmidt geometry.

/// (1-s) I/N + s rho.
DensityMatrix mix_with_noise(const DensityMatrix& rho, double s);

Matrix partial_transpose_b(const DensityMatrix& rho);

/// Largest s in [0,1] for which mix_with_noise(rho, s) has a nonnegative
/// partial transpose, found by bisection to 1e-6. Restricted to 2x2 and 2x3
/// where PPT is equivalent to separability.
double ppt_threshold(const DensityMatrix& rho);

double hs_distance(const DensityMatrix& a, const DensityMatrix& b);

/// tr[(rho - tau0)(tau - tau0)], reported raw (signed).
double hyperplane_residual(const DensityMatrix& rho, const DensityMatrix& tau0,
                           const DensityMatrix& tau);

// ---------------------------------------------------------------------------
// Classical (separable-ensemble) predictions.

struct ProductEnsemble {
    std::vector<double> weights;
    std::vector<Matrix> sigma_a;
    std::vector<Matrix> sigma_b;
};

/// sum_u p_u tr(O_A sigma_A^u) tr(O_B sigma_B^u). Throws
/// InvalidDistribution when the weights are not a probability distribution.
double classical_prediction(const ProductEnsemble& ensemble, const Matrix& o_a,
                            const Matrix& o_b);

/// Per-term values tr(O_A sigma_A^u) tr(O_B sigma_B^u) (each nonnegative
/// when both observables are PSD).
std::vector<double> classical_prediction_terms(const ProductEnsemble& ensemble,
                                               const Matrix& o_a, const Matrix& o_b);

// ---------------------------------------------------------------------------
// Deterministic random constructions for sweeps and property tests.

Matrix random_unitary(int d, std::uint64_t seed);
Matrix random_hermitian(int d, std::uint64_t seed);
PureState random_pure_state(Dims dims, std::uint64_t seed);
PureState random_max_entangled(int d, std::uint64_t seed);

/// Commuting family: common random eigenbasis, independent random spectra.
std::vector<Matrix> random_commuting_family(int d, int count, std::uint64_t seed);

/// Dirichlet-weighted mixture of Haar-random product pure states (at most
/// max_terms terms) -- separable by construction.
ProductEnsemble random_separable_ensemble(Dims dims, int max_terms,
                                          std::uint64_t seed);

DensityMatrix ensemble_state(const ProductEnsemble& ensemble, Dims dims);

}  // namespace qimsim::qudit
