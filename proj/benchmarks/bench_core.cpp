#include <random>
#include <vector>

#include <benchmark/benchmark.h>

#include "dqnnfin/diff.hpp"
#include "dqnnfin/finance.hpp"
#include "dqnnfin/network.hpp"

using namespace dqnnfin;

namespace {

qmath::ComplexMatrix random_density(Eigen::Index dim, qmath::Rng& rng) {
    const auto u = qmath::random_unitary(dim, rng);
    qmath::ComplexMatrix d = qmath::ComplexMatrix::Zero(dim, dim);
    for (Eigen::Index i = 0; i < dim; ++i) d(i, i) = 1.0 / static_cast<double>(dim);
    d(0, 0) *= 1.5;
    d(1, 1) *= 0.5;
    return u * d * u.adjoint();
}

void BM_PartialTrace(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    qmath::Rng rng(1);
    const auto m = random_density(Eigen::Index{1} << n, rng);
    std::vector<int> keep;
    for (int q = 0; q < n / 2; ++q) keep.push_back(q);
    for (auto _ : state) benchmark::DoNotOptimize(qmath::partial_trace(m, n, keep));
}
BENCHMARK(BM_PartialTrace)->DenseRange(2, 8, 2);

void BM_HermExp(benchmark::State& state) {
    qmath::Rng rng(2);
    const auto u = qmath::random_unitary(state.range(0), rng);
    const qmath::ComplexMatrix k = qmath::hermitian_part(u);
    for (auto _ : state) benchmark::DoNotOptimize(qmath::herm_exp_unitary(k, 0.1));
}
BENCHMARK(BM_HermExp)->RangeMultiplier(2)->Range(4, 32);

void BM_MixedFidelity(benchmark::State& state) {
    qmath::Rng rng(3);
    const auto a = random_density(state.range(0), rng);
    const auto b = random_density(state.range(0), rng);
    for (auto _ : state) benchmark::DoNotOptimize(qmath::mixed_fidelity(a, b));
}
BENCHMARK(BM_MixedFidelity)->RangeMultiplier(2)->Range(2, 16);

void BM_Feedforward(benchmark::State& state) {
    const int hidden = static_cast<int>(state.range(0));
    const auto net = dqnn::Network::random(dqnn::NetworkArchitecture({1, hidden, 1}), 4);
    const dqnn::CompiledNetwork compiled(net);
    qmath::Rng rng(5);
    const auto rho = random_density(2, rng);
    for (auto _ : state) benchmark::DoNotOptimize(dqnn::feedforward(compiled, rho));
}
BENCHMARK(BM_Feedforward)->DenseRange(1, 4);

void BM_VolTrainingStep(benchmark::State& state) {
    const auto pairs = finance::build_vol_pairs(finance::bundled_vol_smile(), 0.56, 0.5, 0.5);
    auto net = dqnn::Network::random(dqnn::NetworkArchitecture({1, static_cast<int>(state.range(0)), 1}), 6);
    const dqnn::Hyperparameters hp{1.0, 0.1, 1};
    for (auto _ : state) {
        const auto k = dqnn::gradient_k(net, pairs, hp);
        dqnn::apply_update(net, k, hp.epsilon);
    }
}
BENCHMARK(BM_VolTrainingStep)->Arg(2)->Arg(3);

void BM_GreekTrainingStep(benchmark::State& state) {
    const auto pairs =
        finance::build_greek_pairs({93, 95, 97, 100, 103, 105, 107}, finance::BsParams{}, 5.0, 0.5, 2.0, 2.0);
    auto net = dqnn::Network::random(dqnn::NetworkArchitecture({1, 3, 1}), 7);
    diff::DiffHyperparameters hp;
    hp.nu_d = hp.nu_g = 0.01;
    for (auto _ : state) {
        const auto k = diff::diff_gradient_k(net, pairs, hp);
        dqnn::apply_update(net, k, hp.base.epsilon);
    }
}
BENCHMARK(BM_GreekTrainingStep);

}  // namespace
