// Deep quantum neural network: layered perceptron unitaries, the layer
// channel and its adjoint, the fidelity cost and the commutator update.
//
// Layers are numbered 1..L+1 (layer l maps the m_{l-1} qubits of layer
// l-1 to the m_l qubits of layer l). Perceptron j of layer l (1-based)
// acts on all qubits of layer l-1 plus qubit j of layer l. Within the
// (m_{l-1} + m_l)-qubit register of a layer transition the previous layer
// occupies qubits 0..m_{l-1}-1 and the new layer follows.
#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "dqnnfin/qmath.hpp"

namespace dqnnfin::dqnn {

using qmath::ComplexMatrix;
using qmath::PureState;

class NetworkArchitecture {
public:
    NetworkArchitecture() = default;
    explicit NetworkArchitecture(std::vector<int> widths);

    const std::vector<int>& widths() const { return widths_; }
    /// L + 1
    int layer_count() const { return static_cast<int>(widths_.size()) - 1; }
    int width(int index) const { return widths_.at(static_cast<std::size_t>(index)); }
    int input_qubits() const { return widths_.front(); }
    int output_qubits() const { return widths_.back(); }

    bool operator==(const NetworkArchitecture&) const = default;

private:
    std::vector<int> widths_;
};

class Network {
public:
    /// Validates list lengths, matrix dimensions and unitarity (1e-10).
    Network(NetworkArchitecture arch, std::vector<std::vector<ComplexMatrix>> unitaries);

    /// Every U_j^l drawn from random_unitary on a stream keyed by (seed, l, j).
    static Network random(const NetworkArchitecture& arch, std::uint64_t seed);

    /// Every U_j^l = I.
    static Network identity(const NetworkArchitecture& arch);

    const NetworkArchitecture& architecture() const { return arch_; }
    int layer_count() const { return arch_.layer_count(); }

    /// U_j^l with 1-based layer and perceptron indices.
    const ComplexMatrix& unitary(int layer, int j) const;
    void set_unitary(int layer, int j, ComplexMatrix u);

    /// unitaries()[l-1][j-1] == unitary(l, j)
    const std::vector<std::vector<ComplexMatrix>>& unitaries() const { return unitaries_; }

    double max_unitarity_deviation() const;

private:
    NetworkArchitecture arch_;
    std::vector<std::vector<ComplexMatrix>> unitaries_;
};

/// Full-register operators for one layer transition.
struct LayerOperators {
    int in_qubits = 0;
    int out_qubits = 0;
    /// Each U_j^l lifted to the (in + out)-qubit register.
    std::vector<ComplexMatrix> embedded;
    /// U_{m_l} ... U_1
    ComplexMatrix total;
};

LayerOperators layer_operators(const Network& net, int layer);

/// Layer operators for every layer, built once per network state.
class CompiledNetwork {
public:
    explicit CompiledNetwork(const Network& net);

    const NetworkArchitecture& architecture() const { return arch_; }
    int layer_count() const { return arch_.layer_count(); }
    const LayerOperators& layer(int l) const;

private:
    NetworkArchitecture arch_;
    std::vector<LayerOperators> layers_;
};

/// Kraus family A_α = (⟨α| ⊗ I) U (I ⊗ |0...0⟩) of a layer, one per
/// basis state α of the previous layer.
std::vector<ComplexMatrix> kraus_operators(const LayerOperators& ops);

ComplexMatrix layer_channel(const LayerOperators& ops, const ComplexMatrix& x);
ComplexMatrix layer_channel(const Network& net, int layer, const ComplexMatrix& x);

ComplexMatrix kraus_apply(const LayerOperators& ops, const ComplexMatrix& x);
ComplexMatrix kraus_apply(const Network& net, int layer, const ComplexMatrix& x);

/// Σ_α A_α† y A_α
ComplexMatrix adjoint_channel(const LayerOperators& ops, const ComplexMatrix& y);
ComplexMatrix adjoint_channel(const Network& net, int layer, const ComplexMatrix& y);

/// [ρ^0 = rho_in, ρ^1, ..., ρ^{L+1}]. Inputs need not be states; the
/// channel is applied linearly.
std::vector<ComplexMatrix> feedforward(const CompiledNetwork& net, const ComplexMatrix& rho_in);
std::vector<ComplexMatrix> feedforward(const Network& net, const ComplexMatrix& rho_in);

/// [σ^0, ..., σ^{L+1}] with σ^{L+1} = target_state, σ^{l-1} = F^l(σ^l).
std::vector<ComplexMatrix> backward_states(const CompiledNetwork& net, const ComplexMatrix& target_state);
std::vector<ComplexMatrix> backward_states(const Network& net, const PureState& target);

struct TrainingPair {
    PureState input;
    PureState target;
};

struct Hyperparameters {
    double eta = 1.0;
    double epsilon = 0.1;
    int iterations = 0;

    void validate() const;
};

struct CostTrajectory {
    std::vector<double> values;
};

/// Per-layer list of per-perceptron matrices: [l-1][j-1].
using LayerMatrices = std::vector<std::vector<ComplexMatrix>>;

double cost(const CompiledNetwork& net, std::span<const TrainingPair> pairs);
double cost(const Network& net, std::span<const TrainingPair> pairs);

/// One contribution to the update generator: forward states ρ^l and
/// backward states σ^l of a single sample, with a weight.
struct GradientTerm {
    std::vector<ComplexMatrix> forward;
    std::vector<ComplexMatrix> backward;
    double weight = 1.0;
};

/// Σ_terms weight · tr_rest(i · M_j^l), unscaled. Summed in term order.
LayerMatrices traced_commutators(const CompiledNetwork& net, std::span<const GradientTerm> terms);

/// K_j^l = η · 2^{m_{l-1}} / N · traced[l-1][j-1]
LayerMatrices scale_generators(const NetworkArchitecture& arch, LayerMatrices traced, double eta,
                               std::size_t sample_count);

LayerMatrices gradient_k(const Network& net, std::span<const TrainingPair> pairs, const Hyperparameters& hp);

/// First-order change of the cost per unit step along generators `k`,
/// given the generators' unscaled traced commutators averaged over the
/// samples: Σ_{l,j} tr(K_j^l · G_j^l).
double first_order_gain(const LayerMatrices& k, const LayerMatrices& mean_traced);

/// U_j^l ← e^{iεK_j^l} U_j^l for every perceptron.
void apply_update(Network& net, const LayerMatrices& k, double epsilon);

/// Replaces every unitary by its polar factor.
void reorthonormalize(Network& net);

inline constexpr int kReorthonormalizeInterval = 100;

struct TrainResult {
    Network network;
    CostTrajectory trajectory;
};

TrainResult train(Network net, std::span<const TrainingPair> pairs, const Hyperparameters& hp);

}  // namespace dqnnfin::dqnn
