#include "dqnnfin/encode.hpp"

#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace dqnnfin::encode {

namespace {

constexpr double kHalfPi = std::numbers::pi / 2.0;

double logistic(double z) { return 1.0 / (1.0 + std::exp(-z)); }

// (s/t)^u and its first two derivatives in s.
struct Power {
    double g, dg, d2g;
};

Power power_terms(double s, const EncodeParams& p) {
    const double ratio = s / p.scale;
    const double u = p.exponent;
    const double d2g = u == 1.0 ? 0.0 : (u * (u - 1.0) / (p.scale * p.scale)) * std::pow(ratio, u - 2.0);
    return {std::pow(ratio, u), (u / p.scale) * std::pow(ratio, u - 1.0), d2g};
}

void require_differentiable(double value, const EncodeParams& p, double min_exponent, const char* what) {
    if (value < 0.0 || !std::isfinite(value)) {
        throw std::domain_error(std::string(what) + ": value must be finite and >= 0");
    }
    if (value == 0.0 && p.exponent < min_exponent && p.exponent != 1.0) {
        throw std::domain_error(std::string(what) + ": derivative is singular at value 0 for exponent " +
                                std::to_string(p.exponent));
    }
}

}  // namespace

void EncodeParams::validate() const {
    if (!(scale > 0.0) || !std::isfinite(scale)) throw std::invalid_argument("encode scale must be > 0");
    if (!(exponent > 0.0) || !std::isfinite(exponent)) throw std::invalid_argument("encode exponent must be > 0");
}

void DiffEncodeParams::validate() const {
    base.validate();
    if (!(mu > 0.0) || !std::isfinite(mu)) throw std::invalid_argument("mu must be > 0");
}

double squash(double s, const EncodeParams& p) {
    if (s < 0.0 || std::isnan(s)) throw std::domain_error("squash: value must be >= 0");
    return kHalfPi * logistic(std::pow(s / p.scale, p.exponent));
}

PureState encode_pure(double value, const EncodeParams& p) {
    const double angle = squash(value, p);
    PureState phi(2);
    phi << std::cos(angle), std::sin(angle);
    return phi;
}

double decode_value(double x11, const EncodeParams& p) {
    if (std::isnan(x11) || x11 <= 0.0 || x11 > 0.5 + kDecodeClampMargin) {
        std::ostringstream msg;
        msg.precision(17);
        msg << "decode_value: x11 = " << x11 << " is outside the invertible range (0, 1/2]";
        throw std::domain_error(msg.str());
    }
    const double x = std::min(x11, 0.5);
    const double angle = std::acos(std::sqrt(x));
    // angle in [π/4, π/2) so the ratio is in (1, 2]
    const double inner = std::max(0.0, -std::log(kHalfPi / angle - 1.0));
    const double value = p.scale * std::pow(inner, 1.0 / p.exponent);
    if (!std::isfinite(value)) {
        throw std::domain_error("decode_value: encoding is saturated at x11 = " + std::to_string(x11));
    }
    return value;
}

double k_factor(double value, const EncodeParams& p) {
    require_differentiable(value, p, 1.0, "k_factor");
    const auto pw = power_terms(value, p);
    const double sig = logistic(pw.g);
    return kHalfPi * pw.dg * sig * (1.0 - sig);
}

double k_factor_derivative(double value, const EncodeParams& p) {
    require_differentiable(value, p, 2.0, "k_factor_derivative");
    const auto pw = power_terms(value, p);
    const double sig = logistic(pw.g);
    const double s1 = sig * (1.0 - sig);
    // d/dv [σ(1-σ) g'] = σ(1-σ)(1-2σ) g'^2 + σ(1-σ) g''
    return kHalfPi * (s1 * (1.0 - 2.0 * sig) * pw.dg * pw.dg + s1 * pw.d2g);
}

ComplexMatrix rotation_generator(double angle) {
    const double s = std::sin(2.0 * angle);
    const double c = std::cos(2.0 * angle);
    ComplexMatrix m(2, 2);
    m << -s, c, c, s;
    return m;
}

ComplexMatrix curvature_generator(double angle) {
    const double s = std::sin(2.0 * angle);
    const double c = std::cos(2.0 * angle);
    ComplexMatrix m(2, 2);
    m << -c, -s, -s, c;
    return m;
}

DensityDerivatives density_derivatives(double value, double dvalue_dx, double d2value_dx2, const EncodeParams& p) {
    const double angle = squash(value, p);
    const double k = k_factor(value, p);
    const double dp = k * dvalue_dx;
    // second derivative of the angle only needs k' when V' != 0
    const double kp = dvalue_dx == 0.0 ? 0.0 : k_factor_derivative(value, p);
    const double d2p = kp * dvalue_dx * dvalue_dx + k * d2value_dx2;
    const ComplexMatrix m = rotation_generator(angle);
    return {dp * m, 2.0 * dp * dp * curvature_generator(angle) + d2p * m};
}

DiffState diff_density_first(double value, double dvalue_dx, const DiffEncodeParams& p) {
    const double r = p.mu * dvalue_dx * k_factor(value, p.base);
    if (!(std::abs(r) <= 1.0)) {
        std::ostringstream msg;
        msg << "first-derivative state is not a quantum state: |r| = " << std::abs(r) << " > 1";
        throw std::domain_error(msg.str());
    }
    const ComplexMatrix state =
        0.5 * (r * rotation_generator(squash(value, p.base)) + qmath::identity(2));
    return {state, r, r < 0.0 || r > 0.5};
}

DiffState diff_density_second(double value, double dvalue_dx, double d2value_dx2, const DiffEncodeParams& p) {
    const auto d = density_derivatives(value, dvalue_dx, d2value_dx2, p.base);
    // a·N + b·M with orthogonal Bloch directions has eigenvalues ±sqrt(a² + b²)
    const double spectral = std::sqrt(std::max(0.0, -d.second.determinant().real()));
    const double r = p.mu * spectral;
    if (!(r <= 1.0)) {
        std::ostringstream msg;
        msg << "second-derivative state is not a quantum state: (mu/2)·|d2rho| = " << 0.5 * r << " > 1/2";
        throw std::domain_error(msg.str());
    }
    ComplexMatrix state = 0.5 * p.mu * d.second + 0.5 * qmath::identity(2);
    return {std::move(state), r, r > 0.5};
}

std::pair<double, double> bloch_xz(const ComplexMatrix& state) {
    if (state.rows() != 2 || state.cols() != 2) throw std::invalid_argument("bloch_xz: expected a 2x2 matrix");
    return {2.0 * state(0, 1).real(), (state(0, 0) - state(1, 1)).real()};
}

double decode_delta(double y_minus_z, double value, const DiffEncodeParams& out) {
    const double angle = squash(value, out.base);
    const double denom = 0.5 * out.mu * k_factor(value, out.base) * std::sin(2.0 * angle);
    if (!(std::abs(denom) >= 1e-12)) {
        throw std::domain_error("decode_delta: denominator vanishes at predicted value " + std::to_string(value));
    }
    return -y_minus_z / denom;
}

double decode_gamma(double w_minus_z, double value, double delta, const DiffEncodeParams& out) {
    const double angle = squash(value, out.base);
    const double k = k_factor(value, out.base);
    const double s2 = std::sin(2.0 * angle);
    const double c2 = std::cos(2.0 * angle);
    if (!(std::abs(0.5 * out.mu * k * s2) >= 1e-12)) {
        throw std::domain_error("decode_gamma: denominator vanishes at predicted value " + std::to_string(value));
    }
    // w - z = (μ/2)·(-2 P'^2 cos 2P - P'' sin 2P), P' = k V', P'' = k' V'^2 + k V''
    const double dp = k * delta;
    const double d2p = (-2.0 * w_minus_z / out.mu - 2.0 * dp * dp * c2) / s2;
    const double kp = delta == 0.0 ? 0.0 : k_factor_derivative(value, out.base);
    return (d2p - kp * delta * delta) / k;
}

}  // namespace dqnnfin::encode
