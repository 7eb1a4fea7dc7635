#include "dqnnfin/network.hpp"

#include <numeric>
#include <sstream>
#include <stdexcept>

namespace dqnnfin::dqnn {

namespace {

using Index = Eigen::Index;

Index dim_of(int qubits) { return Index{1} << qubits; }

// Register positions touched by perceptron j (1-based) of a layer.
std::vector<int> perceptron_targets(int in_qubits, int j) {
    std::vector<int> t(static_cast<std::size_t>(in_qubits));
    std::iota(t.begin(), t.end(), 0);
    t.push_back(in_qubits + j - 1);
    return t;
}

std::vector<int> output_register(int in_qubits, int out_qubits) {
    std::vector<int> keep(static_cast<std::size_t>(out_qubits));
    std::iota(keep.begin(), keep.end(), in_qubits);
    return keep;
}

void check_layer(const NetworkArchitecture& arch, int layer) {
    if (layer < 1 || layer > arch.layer_count()) {
        throw std::out_of_range("layer index " + std::to_string(layer) + " out of range [1, " +
                                std::to_string(arch.layer_count()) + "]");
    }
}

void check_square(const ComplexMatrix& m, Index dim, const char* what) {
    if (m.rows() != dim || m.cols() != dim) {
        std::ostringstream msg;
        msg << what << ": expected " << dim << "x" << dim << " matrix, got " << m.rows() << "x" << m.cols();
        throw std::invalid_argument(msg.str());
    }
}

}  // namespace

NetworkArchitecture::NetworkArchitecture(std::vector<int> widths) : widths_(std::move(widths)) {
    if (widths_.size() < 2) {
        throw std::invalid_argument("architecture needs at least an input and an output layer");
    }
    for (const int w : widths_) {
        if (w < 1) throw std::invalid_argument("every layer width must be >= 1");
    }
    // Largest transition register must stay within the dense-matrix budget.
    for (std::size_t l = 1; l < widths_.size(); ++l) {
        if (widths_[l - 1] + widths_[l] > 10) {
            throw std::invalid_argument("layer transition exceeds 10 qubits");
        }
    }
}

Network::Network(NetworkArchitecture arch, std::vector<std::vector<ComplexMatrix>> unitaries)
    : arch_(std::move(arch)), unitaries_(std::move(unitaries)) {
    if (static_cast<int>(unitaries_.size()) != arch_.layer_count()) {
        throw std::invalid_argument("network has " + std::to_string(unitaries_.size()) +
                                    " layers of unitaries, architecture expects " +
                                    std::to_string(arch_.layer_count()));
    }
    for (int l = 1; l <= arch_.layer_count(); ++l) {
        const auto& layer = unitaries_[static_cast<std::size_t>(l - 1)];
        if (static_cast<int>(layer.size()) != arch_.width(l)) {
            throw std::invalid_argument("layer " + std::to_string(l) + " has " + std::to_string(layer.size()) +
                                        " unitaries, expected " + std::to_string(arch_.width(l)));
        }
        const Index dim = dim_of(arch_.width(l - 1) + 1);
        for (std::size_t j = 0; j < layer.size(); ++j) {
            const auto& u = layer[j];
            if (u.rows() != dim || u.cols() != dim) {
                throw std::invalid_argument("unitary (" + std::to_string(l) + ", " + std::to_string(j + 1) +
                                            ") has wrong dimension");
            }
            if (qmath::unitarity_deviation(u) > 1e-10) {
                throw std::invalid_argument("unitary (" + std::to_string(l) + ", " + std::to_string(j + 1) +
                                            ") is not unitary");
            }
        }
    }
}

Network Network::random(const NetworkArchitecture& arch, std::uint64_t seed) {
    std::vector<std::vector<ComplexMatrix>> us;
    for (int l = 1; l <= arch.layer_count(); ++l) {
        std::vector<ComplexMatrix> layer;
        for (int j = 1; j <= arch.width(l); ++j) {
            std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                              static_cast<std::uint32_t>(l), static_cast<std::uint32_t>(j)};
            qmath::Rng rng(seq);
            layer.push_back(qmath::random_unitary(dim_of(arch.width(l - 1) + 1), rng));
        }
        us.push_back(std::move(layer));
    }
    return Network(arch, std::move(us));
}

Network Network::identity(const NetworkArchitecture& arch) {
    std::vector<std::vector<ComplexMatrix>> us;
    for (int l = 1; l <= arch.layer_count(); ++l) {
        us.emplace_back(static_cast<std::size_t>(arch.width(l)), qmath::identity(dim_of(arch.width(l - 1) + 1)));
    }
    return Network(arch, std::move(us));
}

const ComplexMatrix& Network::unitary(int layer, int j) const {
    check_layer(arch_, layer);
    return unitaries_[static_cast<std::size_t>(layer - 1)].at(static_cast<std::size_t>(j - 1));
}

void Network::set_unitary(int layer, int j, ComplexMatrix u) {
    check_layer(arch_, layer);
    auto& slot = unitaries_[static_cast<std::size_t>(layer - 1)].at(static_cast<std::size_t>(j - 1));
    check_square(u, slot.rows(), "set_unitary");
    if (qmath::unitarity_deviation(u) > 1e-10) {
        throw std::invalid_argument("set_unitary: matrix is not unitary");
    }
    slot = std::move(u);
}

double Network::max_unitarity_deviation() const {
    double worst = 0.0;
    for (const auto& layer : unitaries_) {
        for (const auto& u : layer) worst = std::max(worst, qmath::unitarity_deviation(u));
    }
    return worst;
}

LayerOperators layer_operators(const Network& net, int layer) {
    const auto& arch = net.architecture();
    check_layer(arch, layer);
    LayerOperators ops;
    ops.in_qubits = arch.width(layer - 1);
    ops.out_qubits = arch.width(layer);
    const int n = ops.in_qubits + ops.out_qubits;
    ops.total = qmath::identity(dim_of(n));
    for (int j = 1; j <= ops.out_qubits; ++j) {
        const auto targets = perceptron_targets(ops.in_qubits, j);
        ops.embedded.push_back(qmath::embed_operator(net.unitary(layer, j), n, targets));
        // later perceptrons multiply from the left
        ops.total = ops.embedded.back() * ops.total;
    }
    return ops;
}

CompiledNetwork::CompiledNetwork(const Network& net) : arch_(net.architecture()) {
    for (int l = 1; l <= arch_.layer_count(); ++l) layers_.push_back(layer_operators(net, l));
}

const LayerOperators& CompiledNetwork::layer(int l) const {
    check_layer(arch_, l);
    return layers_[static_cast<std::size_t>(l - 1)];
}

std::vector<ComplexMatrix> kraus_operators(const LayerOperators& ops) {
    const Index d_in = dim_of(ops.in_qubits);
    const Index d_out = dim_of(ops.out_qubits);
    std::vector<ComplexMatrix> kraus;
    kraus.reserve(static_cast<std::size_t>(d_in));
    for (Index alpha = 0; alpha < d_in; ++alpha) {
        ComplexMatrix a(d_out, d_in);
        for (Index o = 0; o < d_out; ++o) {
            for (Index i = 0; i < d_in; ++i) {
                // row (α, o), column (i, ancilla 0)
                a(o, i) = ops.total(alpha * d_out + o, i * d_out);
            }
        }
        kraus.push_back(std::move(a));
    }
    return kraus;
}

ComplexMatrix layer_channel(const LayerOperators& ops, const ComplexMatrix& x) {
    check_square(x, dim_of(ops.in_qubits), "layer_channel input");
    const ComplexMatrix joint = qmath::tensor_product(x, qmath::zero_projector(ops.out_qubits));
    const ComplexMatrix evolved = ops.total * joint * ops.total.adjoint();
    const auto keep = output_register(ops.in_qubits, ops.out_qubits);
    return qmath::partial_trace(evolved, ops.in_qubits + ops.out_qubits, keep);
}

ComplexMatrix layer_channel(const Network& net, int layer, const ComplexMatrix& x) {
    return layer_channel(layer_operators(net, layer), x);
}

ComplexMatrix kraus_apply(const LayerOperators& ops, const ComplexMatrix& x) {
    check_square(x, dim_of(ops.in_qubits), "kraus_apply input");
    const Index d_out = dim_of(ops.out_qubits);
    ComplexMatrix out = ComplexMatrix::Zero(d_out, d_out);
    for (const auto& a : kraus_operators(ops)) out += a * x * a.adjoint();
    return out;
}

ComplexMatrix kraus_apply(const Network& net, int layer, const ComplexMatrix& x) {
    return kraus_apply(layer_operators(net, layer), x);
}

ComplexMatrix adjoint_channel(const LayerOperators& ops, const ComplexMatrix& y) {
    check_square(y, dim_of(ops.out_qubits), "adjoint_channel input");
    const Index d_in = dim_of(ops.in_qubits);
    ComplexMatrix out = ComplexMatrix::Zero(d_in, d_in);
    for (const auto& a : kraus_operators(ops)) out += a.adjoint() * y * a;
    return out;
}

ComplexMatrix adjoint_channel(const Network& net, int layer, const ComplexMatrix& y) {
    return adjoint_channel(layer_operators(net, layer), y);
}

std::vector<ComplexMatrix> feedforward(const CompiledNetwork& net, const ComplexMatrix& rho_in) {
    std::vector<ComplexMatrix> states;
    states.reserve(static_cast<std::size_t>(net.layer_count() + 1));
    states.push_back(rho_in);
    for (int l = 1; l <= net.layer_count(); ++l) {
        states.push_back(layer_channel(net.layer(l), states.back()));
    }
    return states;
}

std::vector<ComplexMatrix> feedforward(const Network& net, const ComplexMatrix& rho_in) {
    return feedforward(CompiledNetwork(net), rho_in);
}

std::vector<ComplexMatrix> backward_states(const CompiledNetwork& net, const ComplexMatrix& target_state) {
    const int layers = net.layer_count();
    std::vector<ComplexMatrix> sigma(static_cast<std::size_t>(layers + 1));
    sigma[static_cast<std::size_t>(layers)] = target_state;
    for (int l = layers; l >= 1; --l) {
        sigma[static_cast<std::size_t>(l - 1)] = adjoint_channel(net.layer(l), sigma[static_cast<std::size_t>(l)]);
    }
    return sigma;
}

std::vector<ComplexMatrix> backward_states(const Network& net, const PureState& target) {
    if (target.size() != dim_of(net.architecture().output_qubits())) {
        throw std::invalid_argument("backward_states: target dimension does not match output layer");
    }
    return backward_states(CompiledNetwork(net), qmath::outer(target));
}

void Hyperparameters::validate() const {
    if (!(eta > 0.0)) throw std::invalid_argument("eta must be > 0");
    if (!(epsilon > 0.0)) throw std::invalid_argument("epsilon must be > 0");
    if (iterations < 0) throw std::invalid_argument("iterations must be >= 0");
}

double cost(const CompiledNetwork& net, std::span<const TrainingPair> pairs) {
    if (pairs.empty()) throw std::invalid_argument("cost: empty training set");
    const auto& arch = net.architecture();
    double total = 0.0;
    for (const auto& p : pairs) {
        if (p.input.size() != dim_of(arch.input_qubits()) || p.target.size() != dim_of(arch.output_qubits())) {
            throw std::invalid_argument("cost: training pair dimension mismatch");
        }
        const auto states = feedforward(net, qmath::outer(p.input));
        total += qmath::pure_fidelity(p.target, states.back());
    }
    return total / static_cast<double>(pairs.size());
}

double cost(const Network& net, std::span<const TrainingPair> pairs) { return cost(CompiledNetwork(net), pairs); }

LayerMatrices traced_commutators(const CompiledNetwork& net, std::span<const GradientTerm> terms) {
    const int layers = net.layer_count();
    LayerMatrices out(static_cast<std::size_t>(layers));
    for (int l = 1; l <= layers; ++l) {
        const auto& ops = net.layer(l);
        const int n = ops.in_qubits + ops.out_qubits;
        const Index local = dim_of(ops.in_qubits + 1);
        auto& layer_out = out[static_cast<std::size_t>(l - 1)];
        layer_out.assign(static_cast<std::size_t>(ops.out_qubits), ComplexMatrix::Zero(local, local));

        const ComplexMatrix ancilla = qmath::zero_projector(ops.out_qubits);
        const ComplexMatrix id_in = qmath::identity(dim_of(ops.in_qubits));
        const auto m = static_cast<std::size_t>(ops.out_qubits);

        for (const auto& term : terms) {
            const auto& rho_prev = term.forward.at(static_cast<std::size_t>(l - 1));
            const auto& sigma = term.backward.at(static_cast<std::size_t>(l));

            // backward[j] = U_{j+1}† ... U_m† (I ⊗ σ) U_m ... U_{j+1}, j = 0..m
            std::vector<ComplexMatrix> backward(m + 1);
            backward[m] = qmath::tensor_product(id_in, sigma);
            for (std::size_t j = m; j >= 1; --j) {
                const auto& u = ops.embedded[j - 1];
                backward[j - 1] = u.adjoint() * backward[j] * u;
            }

            ComplexMatrix forward = qmath::tensor_product(rho_prev, ancilla);
            for (std::size_t j = 1; j <= m; ++j) {
                const auto& u = ops.embedded[j - 1];
                forward = u * forward * u.adjoint();
                const ComplexMatrix comm = forward * backward[j] - backward[j] * forward;
                const auto keep = perceptron_targets(ops.in_qubits, static_cast<int>(j));
                layer_out[j - 1] += term.weight * qmath::partial_trace(qmath::Complex(0.0, 1.0) * comm, n, keep);
            }
        }
    }
    return out;
}

LayerMatrices scale_generators(const NetworkArchitecture& arch, LayerMatrices traced, double eta,
                               std::size_t sample_count) {
    if (sample_count == 0) throw std::invalid_argument("scale_generators: empty training set");
    for (int l = 1; l <= arch.layer_count(); ++l) {
        const double scale =
            eta * static_cast<double>(dim_of(arch.width(l - 1))) / static_cast<double>(sample_count);
        for (auto& k : traced[static_cast<std::size_t>(l - 1)]) k *= scale;
    }
    return traced;
}

LayerMatrices gradient_k(const Network& net, std::span<const TrainingPair> pairs, const Hyperparameters& hp) {
    if (pairs.empty()) throw std::invalid_argument("gradient_k: empty training set");
    const CompiledNetwork compiled(net);
    std::vector<GradientTerm> terms;
    terms.reserve(pairs.size());
    for (const auto& p : pairs) {
        terms.push_back({feedforward(compiled, qmath::outer(p.input)),
                         backward_states(compiled, qmath::outer(p.target)), 1.0});
    }
    return scale_generators(net.architecture(), traced_commutators(compiled, terms), hp.eta, pairs.size());
}

double first_order_gain(const LayerMatrices& k, const LayerMatrices& mean_traced) {
    double gain = 0.0;
    for (std::size_t l = 0; l < k.size(); ++l) {
        for (std::size_t j = 0; j < k[l].size(); ++j) {
            gain += qmath::trace_product(k[l][j], mean_traced.at(l).at(j));
        }
    }
    return gain;
}

void apply_update(Network& net, const LayerMatrices& k, double epsilon) {
    for (int l = 1; l <= net.layer_count(); ++l) {
        for (int j = 1; j <= net.architecture().width(l); ++j) {
            const auto& gen = k.at(static_cast<std::size_t>(l - 1)).at(static_cast<std::size_t>(j - 1));
            ComplexMatrix updated = qmath::herm_exp_unitary(gen, epsilon) * net.unitary(l, j);
            net.set_unitary(l, j, std::move(updated));
        }
    }
}

void reorthonormalize(Network& net) {
    for (int l = 1; l <= net.layer_count(); ++l) {
        for (int j = 1; j <= net.architecture().width(l); ++j) {
            net.set_unitary(l, j, qmath::polar_unitary(net.unitary(l, j)));
        }
    }
}

TrainResult train(Network net, std::span<const TrainingPair> pairs, const Hyperparameters& hp) {
    hp.validate();
    if (pairs.empty()) throw std::invalid_argument("train: empty training set");
    CostTrajectory traj;
    traj.values.reserve(static_cast<std::size_t>(hp.iterations) + 1);
    traj.values.push_back(cost(net, pairs));
    for (int it = 1; it <= hp.iterations; ++it) {
        const auto k = gradient_k(net, pairs, hp);
        apply_update(net, k, hp.epsilon);
        if (it % kReorthonormalizeInterval == 0) reorthonormalize(net);
        traj.values.push_back(cost(net, pairs));
    }
    return {std::move(net), std::move(traj)};
}

}  // namespace dqnnfin::dqnn
