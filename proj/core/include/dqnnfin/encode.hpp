// Conversions between financial scalars and one-qubit states.
//
// A non-negative value s is mapped to the angle
//     P(s) = (π/2) / (1 + exp(-(s/t)^u))       in [π/4, π/2)
// and encoded as cos P |0⟩ + sin P |1⟩. Derivative information is carried
// by trace-one "modified" density matrices (μ/2)·dρ + I/2.
#pragma once

#include <utility>

#include "dqnnfin/qmath.hpp"

namespace dqnnfin::encode {

using qmath::ComplexMatrix;
using qmath::PureState;

struct EncodeParams {
    double scale = 1.0;     // t
    double exponent = 1.0;  // u

    void validate() const;
};

struct DiffEncodeParams {
    EncodeParams base;
    double mu = 2.0;

    void validate() const;
};

/// Values of x11 within this margin above 1/2 are clamped before decoding.
inline constexpr double kDecodeClampMargin = 1e-9;

double squash(double s, const EncodeParams& p);

PureState encode_pure(double value, const EncodeParams& p);

/// Inverse of value -> cos^2(squash(value)). Throws std::domain_error when
/// x11 is outside (0, 1/2] beyond the clamp margin, or so small that the
/// angle rounds to π/2.
double decode_value(double x11, const EncodeParams& p);

/// d squash / d value.
double k_factor(double value, const EncodeParams& p);

/// d^2 squash / d value^2.
double k_factor_derivative(double value, const EncodeParams& p);

/// dρ/dP = [[-sin 2P, cos 2P], [cos 2P, sin 2P]]
ComplexMatrix rotation_generator(double angle);

/// (1/2) d^2ρ/dP^2 = [[-cos 2P, -sin 2P], [-sin 2P, cos 2P]]
ComplexMatrix curvature_generator(double angle);

/// Unmodified (traceless) dρ/dx and d^2ρ/dx^2 of the encoded state of a
/// value V(x), given V, dV/dx and d^2V/dx^2.
struct DensityDerivatives {
    ComplexMatrix first;
    ComplexMatrix second;
};

DensityDerivatives density_derivatives(double value, double dvalue_dx, double d2value_dx2, const EncodeParams& p);

/// A modified derivative state and its Bloch length r; eigenvalues (1 ± r)/2.
struct DiffState {
    ComplexMatrix state;
    double r = 0.0;
    /// |r| > 1/2 or r < 0: outside the conservative bound,
    /// still a valid state while |r| <= 1.
    bool outside_strict_bound = false;
};

/// (1/2)(r M + I), r = μ · dvalue_dx · k_factor(value). Throws
/// std::domain_error when |r| > 1.
DiffState diff_density_first(double value, double dvalue_dx, const DiffEncodeParams& p);

/// (μ/2) d^2ρ/dx^2 + I/2 with r = μ · ‖d^2ρ/dx^2‖. Throws std::domain_error
/// when r > 1.
DiffState diff_density_second(double value, double dvalue_dx, double d2value_dx2, const DiffEncodeParams& p);

/// (tr(ρX), tr(ρZ))
std::pair<double, double> bloch_xz(const ComplexMatrix& state);

/// dV/dx from the shift y - z of the |0⟩⟨0| element of a propagated
/// first-derivative state relative to the propagated I/2.
double decode_delta(double y_minus_z, double value, const DiffEncodeParams& out);

/// d^2V/dx^2 from the shift w - z of a propagated second-derivative state,
/// given V and the already decoded dV/dx.
double decode_gamma(double w_minus_z, double value, double delta, const DiffEncodeParams& out);

}  // namespace dqnnfin::encode
