#include "dqnnfin/diff.hpp"

#include <stdexcept>

namespace dqnnfin::diff {

void DiffHyperparameters::validate() const {
    base.validate();
    if (!(nu_d >= 0.0)) throw std::invalid_argument("nu_d must be >= 0");
    if (!(nu_g >= 0.0)) throw std::invalid_argument("nu_g must be >= 0");
    if (!(mu_in > 0.0)) throw std::invalid_argument("mu_in must be > 0");
    if (!(mu_out > 0.0)) throw std::invalid_argument("mu_out must be > 0");
}

ComplexMatrix propagate_diff_state(const CompiledNetwork& net, const ComplexMatrix& d_in) {
    return dqnn::feedforward(net, d_in).back();
}

ComplexMatrix propagate_diff_state(const Network& net, const ComplexMatrix& d_in) {
    return propagate_diff_state(CompiledNetwork(net), d_in);
}

double derivative_fidelity(const ComplexMatrix& target, const ComplexMatrix& predicted, DerivativeFidelity kind) {
    switch (kind) {
        case DerivativeFidelity::uhlmann:
            return qmath::mixed_fidelity(target, predicted);
        case DerivativeFidelity::overlap:
            return qmath::trace_product(target, predicted);
    }
    throw std::invalid_argument("unknown derivative fidelity");
}

namespace {

std::vector<dqnn::TrainingPair> base_pairs(std::span<const DiffTrainingPair> pairs) {
    std::vector<dqnn::TrainingPair> out;
    out.reserve(pairs.size());
    for (const auto& p : pairs) out.push_back(p.base);
    return out;
}

}  // namespace

double diff_cost(const CompiledNetwork& net, std::span<const DiffTrainingPair> pairs, const DiffHyperparameters& hp) {
    if (pairs.empty()) throw std::invalid_argument("diff_cost: empty training set");
    const auto bases = base_pairs(pairs);
    double total = dqnn::cost(net, bases);
    const auto n = static_cast<double>(pairs.size());
    if (hp.nu_d != 0.0) {
        double acc = 0.0;
        for (const auto& p : pairs) {
            acc += derivative_fidelity(p.d_out_1, propagate_diff_state(net, p.d_in_1), hp.fidelity);
        }
        total += hp.nu_d * acc / n;
    }
    if (hp.nu_g != 0.0) {
        double acc = 0.0;
        for (const auto& p : pairs) {
            acc += derivative_fidelity(p.d_out_2, propagate_diff_state(net, p.d_in_2), hp.fidelity);
        }
        total += hp.nu_g * acc / n;
    }
    return total;
}

double diff_cost(const Network& net, std::span<const DiffTrainingPair> pairs, const DiffHyperparameters& hp) {
    return diff_cost(CompiledNetwork(net), pairs, hp);
}

dqnn::LayerMatrices diff_traced_commutators(const CompiledNetwork& net, std::span<const DiffTrainingPair> pairs,
                                            const DiffHyperparameters& hp) {
    std::vector<dqnn::GradientTerm> terms;
    terms.reserve(3 * pairs.size());
    for (const auto& p : pairs) {
        terms.push_back({dqnn::feedforward(net, qmath::outer(p.base.input)),
                         dqnn::backward_states(net, qmath::outer(p.base.target)), 1.0});
        if (hp.nu_d != 0.0) {
            terms.push_back({dqnn::feedforward(net, p.d_in_1), dqnn::backward_states(net, p.d_out_1), hp.nu_d});
        }
        if (hp.nu_g != 0.0) {
            terms.push_back({dqnn::feedforward(net, p.d_in_2), dqnn::backward_states(net, p.d_out_2), hp.nu_g});
        }
    }
    return dqnn::traced_commutators(net, terms);
}

dqnn::LayerMatrices diff_gradient_k(const Network& net, std::span<const DiffTrainingPair> pairs,
                                    const DiffHyperparameters& hp) {
    if (pairs.empty()) throw std::invalid_argument("diff_gradient_k: empty training set");
    const CompiledNetwork compiled(net);
    return dqnn::scale_generators(net.architecture(), diff_traced_commutators(compiled, pairs, hp), hp.base.eta,
                                  pairs.size());
}

dqnn::TrainResult train_diff(Network net, std::span<const DiffTrainingPair> pairs, const DiffHyperparameters& hp) {
    hp.validate();
    if (pairs.empty()) throw std::invalid_argument("train_diff: empty training set");
    dqnn::CostTrajectory traj;
    traj.values.reserve(static_cast<std::size_t>(hp.base.iterations) + 1);
    traj.values.push_back(diff_cost(net, pairs, hp));
    for (int it = 1; it <= hp.base.iterations; ++it) {
        const auto k = diff_gradient_k(net, pairs, hp);
        dqnn::apply_update(net, k, hp.base.epsilon);
        if (it % dqnn::kReorthonormalizeInterval == 0) dqnn::reorthonormalize(net);
        traj.values.push_back(diff_cost(net, pairs, hp));
    }
    return {std::move(net), std::move(traj)};
}

ComplexMatrix mixed_reference(const CompiledNetwork& net) {
    const auto dim = Eigen::Index{1} << net.architecture().input_qubits();
    return propagate_diff_state(net, qmath::identity(dim) / static_cast<double>(dim));
}

double predict_delta(const CompiledNetwork& net, double x, const PriceEncoding& enc, const DiffHyperparameters& hp,
                     double v_predicted, double z11) {
    const auto d_in = encode::diff_density_first(x, 1.0, enc.input(hp.mu_in));
    const double y11 = propagate_diff_state(net, d_in.state)(0, 0).real();
    return encode::decode_delta(y11 - z11, v_predicted, enc.output(hp.mu_out));
}

double predict_delta(const Network& net, double x, const PriceEncoding& enc, const DiffHyperparameters& hp,
                     double v_predicted) {
    const CompiledNetwork compiled(net);
    return predict_delta(compiled, x, enc, hp, v_predicted, mixed_reference(compiled)(0, 0).real());
}

double predict_gamma(const CompiledNetwork& net, double x, const PriceEncoding& enc, const DiffHyperparameters& hp,
                     double v_predicted, double delta_predicted, double z11) {
    const auto d_in = encode::diff_density_second(x, 1.0, 0.0, enc.input(hp.mu_in));
    const double w11 = propagate_diff_state(net, d_in.state)(0, 0).real();
    return encode::decode_gamma(w11 - z11, v_predicted, delta_predicted, enc.output(hp.mu_out));
}

double predict_gamma(const Network& net, double x, const PriceEncoding& enc, const DiffHyperparameters& hp,
                     double v_predicted, double delta_predicted) {
    const CompiledNetwork compiled(net);
    return predict_gamma(compiled, x, enc, hp, v_predicted, delta_predicted, mixed_reference(compiled)(0, 0).real());
}

std::vector<GreekPrediction> predict_greeks(const Network& net, std::span<const double> xs, const PriceEncoding& enc,
                                            const DiffHyperparameters& hp) {
    const CompiledNetwork compiled(net);
    const double z11 = mixed_reference(compiled)(0, 0).real();
    const auto out_params = enc.output(hp.mu_out).base;
    const auto in_params = enc.input(hp.mu_in).base;

    std::vector<GreekPrediction> rows;
    rows.reserve(xs.size());
    for (const double x : xs) {
        GreekPrediction row;
        row.x = x;
        try {
            const auto rho_out = propagate_diff_state(compiled, qmath::outer(encode::encode_pure(x, in_params)));
            row.price = encode::decode_value(rho_out(0, 0).real(), out_params);
            row.delta = predict_delta(compiled, x, enc, hp, *row.price, z11);
            row.gamma = predict_gamma(compiled, x, enc, hp, *row.price, *row.delta, z11);
        } catch (const std::domain_error& e) {
            row.error = e.what();
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

}  // namespace dqnnfin::diff
