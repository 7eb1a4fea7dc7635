#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "dqnnfin/diff.hpp"
#include "dqnnfin/finance.hpp"
#include "oracles.hpp"

using namespace dqnnfin;
using dqnn::Network;
using dqnn::NetworkArchitecture;
using qmath::ComplexMatrix;
using qmath::max_abs_diff;

namespace {

const std::vector<double> kSpots{93, 95, 97, 100, 103, 105, 107};

std::vector<diff::DiffTrainingPair> greek_pairs() {
    return finance::build_greek_pairs(kSpots, finance::BsParams{}, 5.0, 0.5, 2.0, 2.0);
}

diff::DiffHyperparameters hyper(double nu_d, double nu_g, int iterations = 0) {
    diff::DiffHyperparameters hp;
    hp.base = {1.0, 0.1, iterations};
    hp.nu_d = nu_d;
    hp.nu_g = nu_g;
    return hp;
}

std::vector<dqnn::TrainingPair> bases(const std::vector<diff::DiffTrainingPair>& pairs) {
    std::vector<dqnn::TrainingPair> out;
    for (const auto& p : pairs) out.push_back(p.base);
    return out;
}

}  // namespace

TEST(DiffReduction, CostEqualsBaseCostWhenWeightsVanish) {
    const auto pairs = greek_pairs();
    const auto net = Network::random(NetworkArchitecture({1, 3, 1}), 2);
    EXPECT_EQ(diff::diff_cost(net, pairs, hyper(0, 0)), dqnn::cost(net, bases(pairs)));
}

TEST(DiffReduction, GradientEqualsBaseGradientWhenWeightsVanish) {
    const auto pairs = greek_pairs();
    const auto net = Network::random(NetworkArchitecture({1, 3, 1}), 3);
    const auto kd = diff::diff_gradient_k(net, pairs, hyper(0, 0));
    const auto k = dqnn::gradient_k(net, bases(pairs), {1.0, 0.1, 0});
    for (std::size_t l = 0; l < k.size(); ++l)
        for (std::size_t j = 0; j < k[l].size(); ++j) EXPECT_EQ(max_abs_diff(kd[l][j], k[l][j]), 0.0);
}

TEST(DiffReduction, TrainingEqualsBaseTrainingWhenWeightsVanish) {
    const auto pairs = greek_pairs();
    const auto net = Network::random(NetworkArchitecture({1, 2, 1}), 4);
    const auto a = diff::train_diff(net, pairs, hyper(0, 0, 30));
    const auto b = dqnn::train(net, bases(pairs), {1.0, 0.1, 30});
    EXPECT_EQ(a.trajectory.values, b.trajectory.values);
}

TEST(DiffGradient, OverlapDirectionalDerivative) {
    const auto pairs = greek_pairs();
    auto hp = hyper(0.3, 0.2);
    hp.fidelity = diff::DerivativeFidelity::overlap;
    for (std::uint64_t seed = 10; seed < 14; ++seed) {
        const auto net = Network::random(NetworkArchitecture({1, 2, 1}), seed);
        const dqnn::CompiledNetwork compiled(net);
        auto mean = diff::diff_traced_commutators(compiled, pairs, hp);
        for (auto& layer : mean)
            for (auto& m : layer) m /= static_cast<double>(pairs.size());
        const auto k = diff::diff_gradient_k(net, pairs, hp);
        const double h = 1e-4;
        auto at = [&](double eps) {
            auto moved = net;
            dqnn::apply_update(moved, k, eps);
            return diff::diff_cost(moved, pairs, hp);
        };
        const double fd = (at(h) - at(-h)) / (2 * h);
        const double analytic = dqnn::first_order_gain(k, mean);
        EXPECT_LT(std::abs(fd - analytic), 0.05 * std::abs(analytic)) << "seed " << seed;
    }
}

TEST(DiffTraining, ImprovesCombinedCost) {
    const auto pairs = greek_pairs();
    const auto res = diff::train_diff(Network::random(NetworkArchitecture({1, 2, 1}), 5), pairs, hyper(0.01, 0.01, 100));
    EXPECT_GT(res.trajectory.values.back(), res.trajectory.values.front());
    EXPECT_LT(res.network.max_unitarity_deviation(), 1e-10);
}

TEST(Propagation, PureStateMatchesFeedforward) {
    std::mt19937_64 rng(1);
    const auto net = Network::random(NetworkArchitecture({1, 3, 1}), 6);
    const auto rho = oracles::random_density(2, rng);
    EXPECT_LT(max_abs_diff(diff::propagate_diff_state(net, rho), dqnn::feedforward(net, rho).back()), 1e-14);
}

TEST(Propagation, DerivativeStatesStayValid) {
    const auto pairs = greek_pairs();
    const auto net = Network::random(NetworkArchitecture({1, 3, 1}), 7);
    for (const auto& p : pairs) {
        EXPECT_TRUE(qmath::check_density(diff::propagate_diff_state(net, p.d_in_1)).ok());
        EXPECT_TRUE(qmath::check_density(diff::propagate_diff_state(net, p.d_in_2)).ok());
    }
}

TEST(Propagation, FirstDerivativeIsLinearImageOfEncodedPath) {
    const diff::PriceEncoding enc;
    const auto in = enc.input(2.0);
    const auto net = Network::random(NetworkArchitecture({1, 3, 1}), 8);
    const dqnn::CompiledNetwork compiled(net);
    const ComplexMatrix z = diff::mixed_reference(compiled);
    const auto path = [&](double x) {
        return diff::propagate_diff_state(compiled, qmath::outer(encode::encode_pure(x, in.base)));
    };
    for (const double x : kSpots) {
        const auto d_in = encode::diff_density_first(x, 1.0, in);
        const ComplexMatrix rescaled = (2.0 / in.mu) * (diff::propagate_diff_state(compiled, d_in.state) - z);
        EXPECT_LT(max_abs_diff(rescaled, oracles::central_diff(path, x, 1e-3)), 1e-6) << "x=" << x;
    }
}

TEST(Encoding, TargetBlochVector) {
    const diff::PriceEncoding enc;
    for (const auto& p : greek_pairs()) {
        const double angle = encode::squash(p.v, enc.output(2.0).base);
        const auto [bx, bz] = encode::bloch_xz(p.d_out_1);
        EXPECT_NEAR(bx, p.r_out_1 * std::cos(2 * angle), 1e-14);
        EXPECT_NEAR(bz, -p.r_out_1 * std::sin(2 * angle), 1e-14);
    }
}

TEST(Prediction, SwapNetworkReproducesIdentityFunction) {
    // input and output encodings coincide, so the network computes V(x) = x
    auto net = Network::identity(NetworkArchitecture({1, 1}));
    net.set_unitary(1, 1, oracles::swap_gate());
    const diff::PriceEncoding enc{100.0, 0.5, 0.5};
    const auto hp = hyper(0.01, 0.01);
    const auto rows = diff::predict_greeks(net, kSpots, enc, hp);
    ASSERT_EQ(rows.size(), kSpots.size());
    for (const auto& r : rows) {
        ASSERT_TRUE(r.error.empty()) << r.error;
        EXPECT_NEAR(*r.price, r.x, 1e-9);
        EXPECT_NEAR(*r.delta, 1.0, 1e-9);
        EXPECT_NEAR(*r.gamma, 0.0, 1e-7);
    }
}

TEST(Prediction, ConstantOutputHasZeroDelta) {
    // every input maps to |0⟩⟨0|, so Y = Z
    const auto net = Network::identity(NetworkArchitecture({1, 2, 1}));
    const diff::PriceEncoding enc;
    EXPECT_EQ(diff::predict_delta(net, 100.0, enc, hyper(0, 0), 3.0), 0.0);
}

TEST(Prediction, DecodeFailuresAreReportedPerRow) {
    const auto net = Network::identity(NetworkArchitecture({1, 1}));
    const auto rows = diff::predict_greeks(net, kSpots, {}, hyper(0, 0));
    for (const auto& r : rows) {
        EXPECT_FALSE(r.price.has_value());
        EXPECT_FALSE(r.error.empty());
    }
}

TEST(DerivativeFidelity, KindsAgreeOnIdenticalPureStates) {
    const auto rho = qmath::zero_projector(1);
    EXPECT_NEAR(diff::derivative_fidelity(rho, rho, diff::DerivativeFidelity::uhlmann), 1.0, 1e-12);
    EXPECT_NEAR(diff::derivative_fidelity(rho, rho, diff::DerivativeFidelity::overlap), 1.0, 1e-12);
    const ComplexMatrix half = qmath::identity(2) / 2.0;
    EXPECT_NEAR(diff::derivative_fidelity(half, half, diff::DerivativeFidelity::uhlmann), 1.0, 1e-12);
    EXPECT_NEAR(diff::derivative_fidelity(half, half, diff::DerivativeFidelity::overlap), 0.5, 1e-12);
}
