// Differential training: derivative density states are pushed through the
// same network channel as the value states, and the update generator gains
// first- and second-derivative fidelity terms weighted by nu_d and nu_g.
#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "dqnnfin/encode.hpp"
#include "dqnnfin/network.hpp"

namespace dqnnfin::diff {

using dqnn::CompiledNetwork;
using dqnn::Network;
using qmath::ComplexMatrix;

struct DiffTrainingPair {
    dqnn::TrainingPair base;
    ComplexMatrix d_in_1;   // modified dρ^in/dx
    ComplexMatrix d_out_1;  // modified dρ^out/dx
    ComplexMatrix d_in_2;   // modified d²ρ^in/dx²
    ComplexMatrix d_out_2;  // modified d²ρ^out/dx²
    double x = 0.0;
    double v = 0.0;
    double dv_dx = 0.0;
    double d2v_dx2 = 0.0;
    /// Bloch lengths of the four derivative states, in the order above.
    double r_in_1 = 0.0, r_out_1 = 0.0, r_in_2 = 0.0, r_out_2 = 0.0;
};

/// Fidelity between a derivative target and its propagated prediction.
enum class DerivativeFidelity {
    uhlmann,  // (tr sqrt(sqrt(S) T sqrt(S)))^2
    overlap,  // tr(S T); the quantity the update generator ascends exactly
};

struct DiffHyperparameters {
    dqnn::Hyperparameters base;
    double nu_d = 0.0;
    double nu_g = 0.0;
    double mu_in = 2.0;
    double mu_out = 2.0;
    DerivativeFidelity fidelity = DerivativeFidelity::uhlmann;

    void validate() const;
};

/// Price-side encoding: input P(x, K, β), output P(V, K, γ).
struct PriceEncoding {
    double strike = 100.0;
    double beta = 5.0;
    double gamma = 0.5;

    encode::DiffEncodeParams input(double mu_in) const { return {{strike, beta}, mu_in}; }
    encode::DiffEncodeParams output(double mu_out) const { return {{strike, gamma}, mu_out}; }
};

/// Final-layer image of a (derivative) input state under the network.
ComplexMatrix propagate_diff_state(const CompiledNetwork& net, const ComplexMatrix& d_in);
ComplexMatrix propagate_diff_state(const Network& net, const ComplexMatrix& d_in);

double derivative_fidelity(const ComplexMatrix& target, const ComplexMatrix& predicted, DerivativeFidelity kind);

double diff_cost(const CompiledNetwork& net, std::span<const DiffTrainingPair> pairs, const DiffHyperparameters& hp);
double diff_cost(const Network& net, std::span<const DiffTrainingPair> pairs, const DiffHyperparameters& hp);

/// Unscaled Σ_n (tr_rest iM + ν_d tr_rest iM_d + ν_g tr_rest iM_g).
dqnn::LayerMatrices diff_traced_commutators(const CompiledNetwork& net, std::span<const DiffTrainingPair> pairs,
                                            const DiffHyperparameters& hp);

dqnn::LayerMatrices diff_gradient_k(const Network& net, std::span<const DiffTrainingPair> pairs,
                                    const DiffHyperparameters& hp);

dqnn::TrainResult train_diff(Network net, std::span<const DiffTrainingPair> pairs, const DiffHyperparameters& hp);

/// Network image of I/2 (the reference state for derivative decoding).
ComplexMatrix mixed_reference(const CompiledNetwork& net);

/// Predicted dV/dx at x from the propagated modified first-derivative input.
/// `z11` is the |0⟩⟨0| element of mixed_reference.
double predict_delta(const CompiledNetwork& net, double x, const PriceEncoding& enc, const DiffHyperparameters& hp,
                     double v_predicted, double z11);
double predict_delta(const Network& net, double x, const PriceEncoding& enc, const DiffHyperparameters& hp,
                     double v_predicted);

/// Predicted d²V/dx² at x; `delta_predicted` comes from predict_delta.
double predict_gamma(const CompiledNetwork& net, double x, const PriceEncoding& enc, const DiffHyperparameters& hp,
                     double v_predicted, double delta_predicted, double z11);
double predict_gamma(const Network& net, double x, const PriceEncoding& enc, const DiffHyperparameters& hp,
                     double v_predicted, double delta_predicted);

/// Decoded value, delta and gamma at one point. A field is empty when the
/// corresponding decode failed; `error` then says why.
struct GreekPrediction {
    double x = 0.0;
    std::optional<double> price;
    std::optional<double> delta;
    std::optional<double> gamma;
    std::string error;
};

std::vector<GreekPrediction> predict_greeks(const Network& net, std::span<const double> xs, const PriceEncoding& enc,
                                            const DiffHyperparameters& hp);

}  // namespace dqnnfin::diff
