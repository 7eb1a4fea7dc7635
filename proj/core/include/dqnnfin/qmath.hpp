// Dense complex linear algebra for small qubit registers.
//
// Conventions used throughout the library:
//   * qubit 0 is the most significant bit of a basis-state index;
//   * in a Kronecker product a ⊗ b, the indices of `a` are the slow factor;
//   * the "(1,1) element" of a one-qubit density matrix is the |0⟩⟨0|
//     coefficient, i.e. m(0, 0).
#pragma once

#include <complex>
#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace dqnnfin::qmath {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;

/// A ket. Expected to have unit Euclidean norm.
using PureState = ComplexVector;

/// Seeded generator driving every random draw in the library.
using Rng = std::mt19937_64;

inline constexpr double kDensityTolerance = 1e-10;
inline constexpr double kPureNormTolerance = 1e-12;
inline constexpr double kHermitianTolerance = 1e-8;

/// Number of qubits n with 2^n == dim. Throws if dim is not a power of two.
int qubit_count(Eigen::Index dim);

bool is_power_of_two(Eigen::Index dim);

/// Largest absolute entry of m - m†.
double hermitian_deviation(const ComplexMatrix& m);

/// Largest absolute entry of u†u - I.
double unitarity_deviation(const ComplexMatrix& u);

/// Largest absolute entry of a - b. Shapes must match.
double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b);

/// (m + m†) / 2
ComplexMatrix hermitian_part(const ComplexMatrix& m);

struct DensityCheck {
    double hermitian_deviation = 0.0;
    double trace_deviation = 0.0;  // |tr(m) - 1|
    double min_eigenvalue = 0.0;

    bool ok(double tol = kDensityTolerance) const {
        return hermitian_deviation <= tol && trace_deviation <= tol && min_eigenvalue >= -tol;
    }
};

DensityCheck check_density(const ComplexMatrix& m);

/// Throws std::invalid_argument naming `what` when m is not a density matrix.
void require_density(const ComplexMatrix& m, const char* what, double tol = kDensityTolerance);

/// |phi⟩⟨phi|
ComplexMatrix outer(const PureState& phi);

/// |0...0⟩⟨0...0| on `qubits` qubits.
ComplexMatrix zero_projector(int qubits);

ComplexMatrix identity(Eigen::Index dim);

ComplexMatrix pauli_x();
ComplexMatrix pauli_y();
ComplexMatrix pauli_z();

/// Kronecker product with `a` as the high-order factor.
ComplexMatrix tensor_product(const ComplexMatrix& a, const ComplexMatrix& b);

/// Reduced operator on the qubits listed in `keep` (strictly increasing,
/// each in [0, qubit_count)). The result orders the kept qubits as listed.
ComplexMatrix partial_trace(const ComplexMatrix& m, int qubit_count, std::span<const int> keep);

/// Lifts `op`, acting on `targets` (op's qubit k is global qubit targets[k]),
/// to the full `qubit_count`-qubit space with identity elsewhere.
ComplexMatrix embed_operator(const ComplexMatrix& op, int qubit_count, std::span<const int> targets);

/// e^{i s k} for Hermitian k, via eigendecomposition.
ComplexMatrix herm_exp_unitary(const ComplexMatrix& k, double s);

/// Seeded random unitary e^{iH}, H Hermitian with Gaussian entries.
ComplexMatrix random_unitary(Eigen::Index dim, Rng& rng);

/// Nearest unitary in Frobenius norm (polar factor).
ComplexMatrix polar_unitary(const ComplexMatrix& m);

/// Principal square root of a positive semidefinite matrix. Negative
/// eigenvalues (round-off) are clamped to zero.
ComplexMatrix psd_sqrt(const ComplexMatrix& m);

/// ⟨phi|rho|phi⟩ clamped to [0, 1].
double pure_fidelity(const PureState& phi, const ComplexMatrix& rho);

/// Uhlmann fidelity (tr sqrt(sqrt(s) t sqrt(s)))^2, clamped to [0, 1].
double mixed_fidelity(const ComplexMatrix& s, const ComplexMatrix& t);

/// Real part of tr(a b).
double trace_product(const ComplexMatrix& a, const ComplexMatrix& b);

}  // namespace dqnnfin::qmath
