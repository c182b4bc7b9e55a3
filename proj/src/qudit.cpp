#include "qimsim/qudit.hpp"

#include <algorithm>
#include <cmath>

#include "qimsim/rng.hpp"

namespace qimsim::qudit {

namespace {

using cd = std::complex<double>;

void check_dims(const Dims& x, const Dims& y, const char* what) {
    if (!(x == y)) throw DimMismatch(std::string(what) + ": dimension mismatch");
}

Matrix reshape_to_matrix(const PureState& psi) {
    Matrix m(psi.dims.a, psi.dims.b);
    for (int j = 0; j < psi.dims.a; ++j)
        for (int k = 0; k < psi.dims.b; ++k)
            m(j, k) = psi.amplitudes(j * psi.dims.b + k);
    return m;
}

}  // namespace

PureState::PureState(Dims d, Vector amp) : dims(d), amplitudes(std::move(amp)) {
    if (dims.a < 1 || dims.b < 1 || amplitudes.size() != dims.total())
        throw ValidationError("PureState: amplitude length must equal d_A * d_B");
    if (std::abs(amplitudes.norm() - 1.0) > 1e-12)
        throw ValidationError("PureState: not unit norm");
}

DensityMatrix DensityMatrix::from_matrix(Dims d, Matrix m) {
    if (m.rows() != d.total() || m.cols() != d.total())
        throw ValidationError("DensityMatrix: wrong shape");
    require_hermitian(m, 1e-12, "DensityMatrix");
    if (std::abs(m.trace().real() - 1.0) > 1e-12 ||
        std::abs(m.trace().imag()) > 1e-12)
        throw ValidationError("DensityMatrix: trace must be 1");
    Eigen::SelfAdjointEigenSolver<Matrix> es(m, Eigen::EigenvaluesOnly);
    if (es.eigenvalues().minCoeff() < -1e-10)
        throw ValidationError("DensityMatrix: negative eigenvalue");
    DensityMatrix out;
    out.dims = d;
    out.rho = std::move(m);
    return out;
}

DensityMatrix DensityMatrix::maximally_mixed(Dims d) {
    DensityMatrix out;
    out.dims = d;
    out.rho = Matrix::Identity(d.total(), d.total()) / double(d.total());
    return out;
}

DensityMatrix DensityMatrix::pure(const PureState& psi) {
    DensityMatrix out;
    out.dims = psi.dims;
    out.rho = psi.amplitudes * psi.amplitudes.adjoint();
    return out;
}

Matrix kron(const Matrix& a, const Matrix& b) {
    Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (int i = 0; i < a.rows(); ++i)
        for (int j = 0; j < a.cols(); ++j)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

Matrix pauli(int mu) {
    Matrix m(2, 2);
    switch (mu) {
        case 0: m << 1, 0, 0, 1; break;
        case 1: m << 0, 1, 1, 0; break;
        case 2: m << 0, cd(0, -1), cd(0, 1), 0; break;
        case 3: m << 1, 0, 0, -1; break;
        default: throw ValidationError("pauli: mu must be 0..3");
    }
    return m;
}

void require_hermitian(const Matrix& m, double tol, const char* what) {
    double scale = std::max(1.0, m.norm());
    if ((m - m.adjoint()).norm() > tol * scale)
        throw ValidationError(std::string(what) + ": matrix is not Hermitian");
}

SchmidtDecomposition schmidt(const PureState& psi) {
    Matrix m = reshape_to_matrix(psi);
    Eigen::JacobiSVD<Matrix> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
    SchmidtDecomposition out;
    out.coefficients = svd.singularValues();  // descending by construction
    out.basis_a = svd.matrixU();
    out.basis_b = svd.matrixV().conjugate();
    return out;
}

PureState max_entangled(int d) {
    Vector amp = Vector::Zero(d * d);
    for (int k = 0; k < d; ++k) amp(k * d + k) = 1.0 / std::sqrt(double(d));
    return PureState({d, d}, amp);
}

DensityMatrix SeparableDecomposition::assemble(Dims dims) const {
    Matrix rho = Matrix::Zero(dims.total(), dims.total());
    for (size_t u = 0; u < weights.size(); ++u)
        rho += weights[u] * kron(factors_a[u], factors_b[u]);
    return DensityMatrix::from_matrix(dims, rho);
}

namespace {

// Simultaneous diagonalization of a commuting Hermitian family by block
// refinement. Returns the common eigenbasis columns and, per column, the
// tuple of eigenvalues across the family.
std::pair<Matrix, std::vector<std::vector<double>>> common_eigenbasis(
    int d, const std::vector<Matrix>& family) {
    Matrix basis = Matrix::Identity(d, d);
    std::vector<std::vector<double>> tuples(d);
    std::vector<std::pair<int, int>> blocks{{0, d}};  // [begin, end)

    for (const Matrix& op : family) {
        double group_tol = 1e-8 * std::max(1.0, op.norm());
        std::vector<std::pair<int, int>> next_blocks;
        for (auto [lo, hi] : blocks) {
            int w = hi - lo;
            if (w == 1) {
                cd lambda = (basis.col(lo).adjoint() * op * basis.col(lo))(0);
                tuples[lo].push_back(lambda.real());
                next_blocks.emplace_back(lo, hi);
                continue;
            }
            Matrix sub = basis.middleCols(lo, w).adjoint() * op * basis.middleCols(lo, w);
            Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (sub + sub.adjoint()));
            Matrix rotated = basis.middleCols(lo, w) * es.eigenvectors();
            basis.middleCols(lo, w) = rotated;
            const auto& vals = es.eigenvalues();
            int start = lo;
            for (int i = 0; i < w; ++i) {
                tuples[lo + i].push_back(vals(i));
                bool boundary = (i + 1 == w) || (vals(i + 1) - vals(i) > group_tol);
                if (boundary) {
                    next_blocks.emplace_back(start, lo + i + 1);
                    start = lo + i + 1;
                }
            }
        }
        blocks = std::move(next_blocks);
    }

    // deterministic order: lexicographically descending eigenvalue tuples
    std::vector<int> order(d);
    for (int i = 0; i < d; ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(), [&](int i, int j) {
        return tuples[i] > tuples[j];
    });
    Matrix sorted(d, d);
    std::vector<std::vector<double>> sorted_tuples(d);
    for (int i = 0; i < d; ++i) {
        sorted.col(i) = basis.col(order[i]);
        sorted_tuples[i] = tuples[order[i]];
    }
    return {sorted, sorted_tuples};
}

}  // namespace

SeparableDecomposition separable_simulation(const PureState& psi,
                                            const std::vector<Matrix>& family_a) {
    const int da = psi.dims.a;
    if (family_a.empty())
        throw ValidationError("separable_simulation: family must be non-empty");
    for (const Matrix& op : family_a) {
        if (op.rows() != da || op.cols() != da)
            throw DimMismatch("separable_simulation: family must act on H_A");
        require_hermitian(op, 1e-10, "separable_simulation");
    }
    for (size_t i = 0; i < family_a.size(); ++i)
        for (size_t j = i + 1; j < family_a.size(); ++j) {
            Matrix comm = family_a[i] * family_a[j] - family_a[j] * family_a[i];
            double scale = std::max(1.0, family_a[i].norm() * family_a[j].norm());
            if (comm.norm() > 1e-10 * scale)
                throw NonCommutingFamily(
                    "separable_simulation: observables do not commute");
        }

    auto [phi, tuples] = common_eigenbasis(da, family_a);
    (void)tuples;
    Matrix c = phi.adjoint() * reshape_to_matrix(psi);  // c_{jk} in the phi basis

    SeparableDecomposition dec;
    for (int j = 0; j < da; ++j) {
        Vector omega = c.row(j).transpose();
        double pj = omega.squaredNorm();
        if (pj <= 1e-30) continue;
        omega /= std::sqrt(pj);
        dec.weights.push_back(pj);
        dec.factors_a.push_back(phi.col(j) * phi.col(j).adjoint());
        dec.factors_b.push_back(omega * omega.adjoint());
    }
    return dec;
}

DensityMatrix separable_simulator(const PureState& psi,
                                  const std::vector<Matrix>& family_a) {
    return separable_simulation(psi, family_a).assemble(psi.dims);
}

namespace {
double real_expectation(const cd& value, const char* what) {
    if (std::abs(value.imag()) > 1e-10 * std::max(1.0, std::abs(value.real())))
        throw ValidationError(std::string(what) + ": expectation has imaginary residue");
    return value.real();
}
}  // namespace

double expectation(const DensityMatrix& state, const Matrix& obs) {
    if (obs.rows() != state.rho.rows() || obs.cols() != state.rho.cols())
        throw DimMismatch("expectation: observable dimension mismatch");
    return real_expectation((obs * state.rho).trace(), "expectation");
}

double expectation(const PureState& state, const Matrix& obs) {
    if (obs.rows() != state.amplitudes.size())
        throw DimMismatch("expectation: observable dimension mismatch");
    cd v = (state.amplitudes.adjoint() * obs * state.amplitudes)(0);
    return real_expectation(v, "expectation");
}

Matrix LocalChannel::kraus_joint(size_t k) const {
    return kron(kraus[k].first, kraus[k].second);
}

DensityMatrix apply_channel(const LocalChannel& ch, const DensityMatrix& rho) {
    check_dims(ch.dims, rho.dims, "apply_channel");
    const int n = rho.dims.total();
    Matrix norm_sum = Matrix::Zero(n, n);
    for (size_t k = 0; k < ch.kraus.size(); ++k) {
        Matrix v = ch.kraus_joint(k);
        norm_sum += v.adjoint() * v;
    }
    if ((norm_sum - Matrix::Identity(n, n)).norm() > 1e-10 * std::sqrt(double(n)))
        throw NotTracePreserving("apply_channel: sum V^dag V != 1");
    Matrix out = Matrix::Zero(n, n);
    for (size_t k = 0; k < ch.kraus.size(); ++k) {
        Matrix v = ch.kraus_joint(k);
        out += v * rho.rho * v.adjoint();
    }
    return DensityMatrix::from_matrix(rho.dims, 0.5 * (out + out.adjoint()));
}

Vector transfer_to_b(const Matrix& a_op, const PureState& psi_max) {
    const int da = psi_max.dims.a;
    const int db = psi_max.dims.b;
    if (a_op.rows() != da || a_op.cols() != da)
        throw DimMismatch("transfer_to_b: operator must act on H_A");
    SchmidtDecomposition sd = schmidt(psi_max);
    const int n = static_cast<int>(sd.coefficients.size());
    const double target = 1.0 / std::sqrt(double(n));
    for (int k = 0; k < n; ++k)
        if (std::abs(sd.coefficients(k) - target) > 1e-10)
            throw NotMaximallyEntangled(
                "transfer_to_b: Schmidt coefficients are not all 1/sqrt(N)");

    // A in the Schmidt A-basis, transposed, expressed back on H_B
    Matrix a_schmidt = sd.basis_a.adjoint() * a_op * sd.basis_a;
    Matrix b_op = sd.basis_b * a_schmidt.transpose() * sd.basis_b.adjoint();

    Vector out = Vector::Zero(da * db);
    for (int j = 0; j < da; ++j)
        out.segment(j * db, db) = b_op * psi_max.amplitudes.segment(j * db, db);
    return out;
}

Vector apply_on_a(const Matrix& a_op, const PureState& psi) {
    const int da = psi.dims.a;
    const int db = psi.dims.b;
    if (a_op.rows() != da || a_op.cols() != da)
        throw DimMismatch("apply_on_a: operator must act on H_A");
    Vector out = Vector::Zero(da * db);
    for (int j = 0; j < da; ++j)
        for (int jp = 0; jp < da; ++jp)
            out.segment(j * db, db) +=
                a_op(j, jp) * psi.amplitudes.segment(jp * db, db);
    return out;
}

WitnessSuite witness_suite() {
    WitnessSuite suite{Matrix(), DensityMatrix(), max_entangled(2), {}};
    for (int j = 1; j <= 3; ++j) {
        suite.projections[j - 1][0] = 0.5 * (pauli(0) + pauli(j));
        suite.projections[j - 1][1] = 0.5 * (pauli(0) - pauli(j));
    }
    auto p = [&](int j, int s) { return suite.projections[j - 1][s]; };
    Matrix tau0 = (kron(p(3, 0), p(3, 0)) + kron(p(3, 1), p(3, 1)) +
                   kron(p(1, 0), p(1, 0)) + kron(p(1, 1), p(1, 1)) +
                   kron(p(2, 0), p(2, 1)) + kron(p(2, 1), p(2, 0))) /
                  6.0;
    suite.tau0 = DensityMatrix::from_matrix({2, 2}, tau0);
    suite.w = (2.0 / 3.0) * (kron(pauli(0), pauli(0)) - 3.0 * tau0);
    return suite;
}

DensityMatrix mix_with_noise(const DensityMatrix& rho, double s) {
    if (!(s >= 0.0 && s <= 1.0))
        throw ValidationError("mix_with_noise: s must lie in [0, 1]");
    const int n = rho.dims.total();
    Matrix out = (1.0 - s) * Matrix::Identity(n, n) / double(n) + s * rho.rho;
    DensityMatrix mixed;
    mixed.dims = rho.dims;
    mixed.rho = std::move(out);
    return mixed;
}

Matrix partial_transpose_b(const DensityMatrix& rho) {
    const int da = rho.dims.a;
    const int db = rho.dims.b;
    Matrix out(da * db, da * db);
    for (int a1 = 0; a1 < da; ++a1)
        for (int b1 = 0; b1 < db; ++b1)
            for (int a2 = 0; a2 < da; ++a2)
                for (int b2 = 0; b2 < db; ++b2)
                    out(a1 * db + b1, a2 * db + b2) =
                        rho.rho(a1 * db + b2, a2 * db + b1);
    return out;
}

double ppt_threshold(const DensityMatrix& rho) {
    const Dims d = rho.dims;
    const bool supported = (d.a == 2 && d.b == 2) || (d.a == 2 && d.b == 3) ||
                           (d.a == 3 && d.b == 2);
    if (!supported)
        throw DimUnsupported("ppt_threshold: PPT decides separability only for 2x2 and 2x3");

    auto min_pt_eig = [&](double s) {
        Matrix pt = partial_transpose_b(mix_with_noise(rho, s));
        Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (pt + pt.adjoint()),
                                                 Eigen::EigenvaluesOnly);
        return es.eigenvalues().minCoeff();
    };

    if (min_pt_eig(1.0) >= -1e-12) return 1.0;
    double lo = 0.0, hi = 1.0;
    while (hi - lo > 1e-7) {
        double mid = 0.5 * (lo + hi);
        if (min_pt_eig(mid) >= -1e-12)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

double hs_distance(const DensityMatrix& a, const DensityMatrix& b) {
    check_dims(a.dims, b.dims, "hs_distance");
    return (a.rho - b.rho).norm();
}

double hyperplane_residual(const DensityMatrix& rho, const DensityMatrix& tau0,
                           const DensityMatrix& tau) {
    check_dims(rho.dims, tau0.dims, "hyperplane_residual");
    check_dims(rho.dims, tau.dims, "hyperplane_residual");
    cd v = ((rho.rho - tau0.rho) * (tau.rho - tau0.rho)).trace();
    return v.real();
}

namespace {
void check_ensemble(const ProductEnsemble& e) {
    if (e.weights.empty() || e.weights.size() != e.sigma_a.size() ||
        e.weights.size() != e.sigma_b.size())
        throw InvalidDistribution("ensemble: inconsistent term counts");
    double total = 0.0;
    for (double w : e.weights) {
        if (w < -1e-15) throw InvalidDistribution("ensemble: negative weight");
        total += w;
    }
    if (std::abs(total - 1.0) > 1e-9)
        throw InvalidDistribution("ensemble: weights must sum to 1");
}
}  // namespace

std::vector<double> classical_prediction_terms(const ProductEnsemble& ensemble,
                                               const Matrix& o_a, const Matrix& o_b) {
    check_ensemble(ensemble);
    std::vector<double> terms(ensemble.weights.size());
    for (size_t u = 0; u < ensemble.weights.size(); ++u) {
        double ta = real_expectation((o_a * ensemble.sigma_a[u]).trace(),
                                     "classical_prediction");
        double tb = real_expectation((o_b * ensemble.sigma_b[u]).trace(),
                                     "classical_prediction");
        terms[u] = ensemble.weights[u] * ta * tb;
    }
    return terms;
}

double classical_prediction(const ProductEnsemble& ensemble, const Matrix& o_a,
                            const Matrix& o_b) {
    std::vector<double> terms = classical_prediction_terms(ensemble, o_a, o_b);
    double acc = 0.0;
    for (double t : terms) acc += t;
    return acc;
}

// ---------------------------------------------------------------------------

namespace {
Matrix ginibre(int rows, int cols, SplitMix64& gen) {
    Matrix m(rows, cols);
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j) m(i, j) = cd(gen.normal(), gen.normal());
    return m;
}
}  // namespace

Matrix random_unitary(int d, std::uint64_t seed) {
    SplitMix64 gen(sub_seed(seed, 0x5eed));
    Matrix g = ginibre(d, d, gen);
    Eigen::HouseholderQR<Matrix> qr(g);
    Matrix q = qr.householderQ() * Matrix::Identity(d, d);
    Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (int i = 0; i < d; ++i) {
        cd diag = r(i, i);
        q.col(i) *= std::abs(diag) > 0 ? diag / std::abs(diag) : cd(1, 0);
    }
    return q;
}

Matrix random_hermitian(int d, std::uint64_t seed) {
    SplitMix64 gen(sub_seed(seed, 0x4e));
    Matrix g = ginibre(d, d, gen);
    return 0.5 * (g + g.adjoint());
}

PureState random_pure_state(Dims dims, std::uint64_t seed) {
    SplitMix64 gen(sub_seed(seed, 0x57a7e));
    Matrix g = ginibre(dims.total(), 1, gen);
    Vector v = g.col(0);
    v /= v.norm();
    return PureState(dims, v);
}

PureState random_max_entangled(int d, std::uint64_t seed) {
    PureState base = max_entangled(d);
    Matrix ua = random_unitary(d, sub_seed(seed, 1));
    Matrix ub = random_unitary(d, sub_seed(seed, 2));
    Matrix u = kron(ua, ub);
    return PureState({d, d}, u * base.amplitudes);
}

std::vector<Matrix> random_commuting_family(int d, int count, std::uint64_t seed) {
    Matrix u = random_unitary(d, sub_seed(seed, 3));
    SplitMix64 gen(sub_seed(seed, 4));
    std::vector<Matrix> family;
    family.reserve(count);
    for (int i = 0; i < count; ++i) {
        Eigen::VectorXd diag(d);
        for (int j = 0; j < d; ++j) diag(j) = 2.0 * gen.uniform01() - 1.0;
        family.push_back(u * diag.cast<cd>().asDiagonal() * u.adjoint());
    }
    return family;
}

ProductEnsemble random_separable_ensemble(Dims dims, int max_terms,
                                          std::uint64_t seed) {
    SplitMix64 gen(sub_seed(seed, 5));
    int terms = 1 + static_cast<int>(gen.next() % static_cast<unsigned>(max_terms));
    ProductEnsemble e;
    double total = 0.0;
    for (int u = 0; u < terms; ++u) {
        double w = -std::log(std::max(gen.uniform01(), 1e-300));  // Dirichlet(1)
        e.weights.push_back(w);
        total += w;
        PureState a = random_pure_state({dims.a, 1}, sub_seed(seed, 100 + 2 * u));
        PureState b = random_pure_state({dims.b, 1}, sub_seed(seed, 101 + 2 * u));
        e.sigma_a.push_back(a.amplitudes * a.amplitudes.adjoint());
        e.sigma_b.push_back(b.amplitudes * b.amplitudes.adjoint());
    }
    for (double& w : e.weights) w /= total;
    return e;
}

DensityMatrix ensemble_state(const ProductEnsemble& ensemble, Dims dims) {
    check_ensemble(ensemble);
    Matrix rho = Matrix::Zero(dims.total(), dims.total());
    for (size_t u = 0; u < ensemble.weights.size(); ++u)
        rho += ensemble.weights[u] * kron(ensemble.sigma_a[u], ensemble.sigma_b[u]);
    return DensityMatrix::from_matrix(dims, rho);
}

}  // namespace qimsim::qudit
