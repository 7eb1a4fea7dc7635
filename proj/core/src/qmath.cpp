#include "dqnnfin/qmath.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

namespace dqnnfin::qmath {

namespace {

using Index = Eigen::Index;

// Offsets of every basis index of a sub-register placed at `positions`
// inside an n-qubit register. offsets[a] has the bits of `a` scattered to
// the global qubit positions (qubit 0 = most significant).
std::vector<Index> scatter_offsets(int n, std::span<const int> positions) {
    const auto k = static_cast<int>(positions.size());
    std::vector<Index> offsets(Index{1} << k, 0);
    for (Index a = 0; a < static_cast<Index>(offsets.size()); ++a) {
        Index off = 0;
        for (int b = 0; b < k; ++b) {
            // bit b of the local index counts from the most significant end
            if ((a >> (k - 1 - b)) & 1) {
                off |= Index{1} << (n - 1 - positions[b]);
            }
        }
        offsets[a] = off;
    }
    return offsets;
}

std::vector<int> complement(int n, std::span<const int> positions) {
    std::vector<int> rest;
    for (int q = 0; q < n; ++q) {
        if (std::find(positions.begin(), positions.end(), q) == positions.end()) {
            rest.push_back(q);
        }
    }
    return rest;
}

void validate_positions(int n, std::span<const int> positions, const char* what) {
    for (std::size_t i = 0; i < positions.size(); ++i) {
        if (positions[i] < 0 || positions[i] >= n) {
            std::ostringstream msg;
            msg << what << ": qubit index " << positions[i] << " out of range for " << n << " qubits";
            throw std::out_of_range(msg.str());
        }
        if (i > 0 && positions[i] <= positions[i - 1]) {
            throw std::invalid_argument(std::string(what) + ": qubit indices must be strictly increasing");
        }
    }
}

}  // namespace

bool is_power_of_two(Index dim) { return dim > 0 && (dim & (dim - 1)) == 0; }

int qubit_count(Index dim) {
    if (!is_power_of_two(dim)) {
        throw std::invalid_argument("dimension " + std::to_string(dim) + " is not a power of two");
    }
    int n = 0;
    while ((Index{1} << n) < dim) ++n;
    return n;
}

double hermitian_deviation(const ComplexMatrix& m) {
    if (m.rows() != m.cols()) return INFINITY;
    return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

double unitarity_deviation(const ComplexMatrix& u) {
    if (u.rows() != u.cols()) return INFINITY;
    return (u.adjoint() * u - ComplexMatrix::Identity(u.rows(), u.cols())).cwiseAbs().maxCoeff();
}

double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) {
        throw std::invalid_argument("max_abs_diff: shape mismatch");
    }
    if (a.size() == 0) return 0.0;
    return (a - b).cwiseAbs().maxCoeff();
}

ComplexMatrix hermitian_part(const ComplexMatrix& m) { return 0.5 * (m + m.adjoint()); }

DensityCheck check_density(const ComplexMatrix& m) {
    DensityCheck c;
    if (m.rows() != m.cols() || m.rows() == 0) {
        c.hermitian_deviation = INFINITY;
        return c;
    }
    c.hermitian_deviation = hermitian_deviation(m);
    c.trace_deviation = std::abs(m.trace() - Complex(1.0, 0.0));
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(hermitian_part(m), Eigen::EigenvaluesOnly);
    c.min_eigenvalue = es.eigenvalues().minCoeff();
    return c;
}

void require_density(const ComplexMatrix& m, const char* what, double tol) {
    const auto c = check_density(m);
    if (!c.ok(tol)) {
        std::ostringstream msg;
        msg << what << " is not a density matrix (hermitian dev " << c.hermitian_deviation << ", trace dev "
            << c.trace_deviation << ", min eigenvalue " << c.min_eigenvalue << ")";
        throw std::invalid_argument(msg.str());
    }
}

ComplexMatrix outer(const PureState& phi) { return phi * phi.adjoint(); }

ComplexMatrix zero_projector(int qubits) {
    const Index dim = Index{1} << qubits;
    ComplexMatrix p = ComplexMatrix::Zero(dim, dim);
    p(0, 0) = 1.0;
    return p;
}

ComplexMatrix identity(Index dim) { return ComplexMatrix::Identity(dim, dim); }

ComplexMatrix pauli_x() {
    ComplexMatrix m(2, 2);
    m << 0.0, 1.0, 1.0, 0.0;
    return m;
}

ComplexMatrix pauli_y() {
    ComplexMatrix m(2, 2);
    m << 0.0, Complex(0.0, -1.0), Complex(0.0, 1.0), 0.0;
    return m;
}

ComplexMatrix pauli_z() {
    ComplexMatrix m(2, 2);
    m << 1.0, 0.0, 0.0, -1.0;
    return m;
}

ComplexMatrix tensor_product(const ComplexMatrix& a, const ComplexMatrix& b) {
    ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Index i = 0; i < a.rows(); ++i) {
        for (Index j = 0; j < a.cols(); ++j) {
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
        }
    }
    return out;
}

ComplexMatrix partial_trace(const ComplexMatrix& m, int qubit_count, std::span<const int> keep) {
    if (qubit_count < 1 || m.rows() != m.cols() || m.rows() != (Index{1} << qubit_count)) {
        throw std::invalid_argument("partial_trace: matrix dimension does not match qubit count");
    }
    if (keep.empty()) {
        throw std::invalid_argument("partial_trace: keep set must be nonempty");
    }
    validate_positions(qubit_count, keep, "partial_trace");

    const auto traced = complement(qubit_count, keep);
    const auto keep_off = scatter_offsets(qubit_count, keep);
    const auto trace_off = scatter_offsets(qubit_count, traced);

    const auto dk = static_cast<Index>(keep_off.size());
    ComplexMatrix out = ComplexMatrix::Zero(dk, dk);
    for (Index a = 0; a < dk; ++a) {
        for (Index b = 0; b < dk; ++b) {
            Complex acc = 0.0;
            for (const Index t : trace_off) {
                acc += m(keep_off[a] | t, keep_off[b] | t);
            }
            out(a, b) = acc;
        }
    }
    return out;
}

ComplexMatrix embed_operator(const ComplexMatrix& op, int qubit_count, std::span<const int> targets) {
    if (targets.empty() || op.rows() != op.cols() || op.rows() != (Index{1} << targets.size())) {
        throw std::invalid_argument("embed_operator: operator dimension does not match target count");
    }
    validate_positions(qubit_count, targets, "embed_operator");

    const auto rest = complement(qubit_count, targets);
    const auto tgt_off = scatter_offsets(qubit_count, targets);
    const auto rest_off = scatter_offsets(qubit_count, rest);

    const Index dim = Index{1} << qubit_count;
    ComplexMatrix out = ComplexMatrix::Zero(dim, dim);
    for (const Index r : rest_off) {
        for (Index a = 0; a < op.rows(); ++a) {
            for (Index b = 0; b < op.cols(); ++b) {
                out(r | tgt_off[a], r | tgt_off[b]) = op(a, b);
            }
        }
    }
    return out;
}

ComplexMatrix herm_exp_unitary(const ComplexMatrix& k, double s) {
    if (k.rows() != k.cols() || k.rows() == 0) {
        throw std::invalid_argument("herm_exp_unitary: generator must be square");
    }
    const double dev = hermitian_deviation(k);
    if (dev > kHermitianTolerance) {
        throw std::invalid_argument("herm_exp_unitary: generator is not Hermitian (deviation " +
                                    std::to_string(dev) + ")");
    }
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(hermitian_part(k));
    const auto& v = es.eigenvectors();
    ComplexVector phases(es.eigenvalues().size());
    for (Index i = 0; i < phases.size(); ++i) {
        phases(i) = std::polar(1.0, s * es.eigenvalues()(i));
    }
    return v * phases.asDiagonal() * v.adjoint();
}

ComplexMatrix random_unitary(Index dim, Rng& rng) {
    if (dim < 1) throw std::invalid_argument("random_unitary: dim must be >= 1");
    std::normal_distribution<double> gauss(0.0, 1.0);
    ComplexMatrix g(dim, dim);
    // Fixed draw order: row-major, real before imaginary.
    for (Index i = 0; i < dim; ++i) {
        for (Index j = 0; j < dim; ++j) {
            const double re = gauss(rng);
            const double im = gauss(rng);
            g(i, j) = Complex(re, im);
        }
    }
    return herm_exp_unitary(hermitian_part(g), 1.0);
}

ComplexMatrix polar_unitary(const ComplexMatrix& m) {
    Eigen::JacobiSVD<ComplexMatrix> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
    return svd.matrixU() * svd.matrixV().adjoint();
}

ComplexMatrix psd_sqrt(const ComplexMatrix& m) {
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(hermitian_part(m));
    Eigen::VectorXd roots = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
    const auto& v = es.eigenvectors();
    return v * roots.cast<Complex>().asDiagonal() * v.adjoint();
}

double pure_fidelity(const PureState& phi, const ComplexMatrix& rho) {
    if (rho.rows() != rho.cols() || phi.size() != rho.rows()) {
        throw std::invalid_argument("pure_fidelity: dimension mismatch");
    }
    const Complex f = phi.adjoint() * rho * phi;
    if (std::abs(f.imag()) >= 1e-10) {
        throw std::domain_error("pure_fidelity: overlap has imaginary part " + std::to_string(f.imag()));
    }
    return std::clamp(f.real(), 0.0, 1.0);
}

double mixed_fidelity(const ComplexMatrix& s, const ComplexMatrix& t) {
    if (s.rows() != s.cols() || t.rows() != t.cols() || s.rows() != t.rows()) {
        throw std::invalid_argument("mixed_fidelity: dimension mismatch");
    }
    for (const ComplexMatrix* m : {&s, &t}) {
        if (hermitian_deviation(*m) > kDensityTolerance) {
            throw std::invalid_argument("mixed_fidelity: argument is not Hermitian");
        }
        Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(hermitian_part(*m), Eigen::EigenvaluesOnly);
        if (es.eigenvalues().minCoeff() < -kDensityTolerance) {
            throw std::invalid_argument("mixed_fidelity: argument is not positive semidefinite");
        }
    }
    const ComplexMatrix rs = psd_sqrt(s);
    const ComplexMatrix inner = hermitian_part(rs * t * rs);
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(inner, Eigen::EigenvaluesOnly);
    const double root_trace = es.eigenvalues().cwiseMax(0.0).cwiseSqrt().sum();
    return std::clamp(root_trace * root_trace, 0.0, 1.0);
}

double trace_product(const ComplexMatrix& a, const ComplexMatrix& b) {
    if (a.cols() != b.rows() || a.rows() != b.cols()) {
        throw std::invalid_argument("trace_product: shape mismatch");
    }
    // tr(ab) = sum_ij a_ij b_ji
    return a.cwiseProduct(b.transpose()).sum().real();
}

}  // namespace dqnnfin::qmath
