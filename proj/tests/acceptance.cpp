// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "dqnnfin/diff.hpp"
#include "dqnnfin/experiment.hpp"
#include "dqnnfin/finance.hpp"
#include "dqnnfin/network_io.hpp"
#include "oracles.hpp"
#include "reference_data.hpp"

using namespace dqnnfin;
using dqnn::Network;
using dqnn::NetworkArchitecture;
using qmath::ComplexMatrix;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

std::string fmt(const char* f, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

cli::ExperimentConfig config(const char* name) {
    return cli::load_config(std::string(DQNNFIN_CONFIG_DIR) + "/" + name);
}

std::vector<dqnn::TrainingPair> random_pairs(int in_q, int out_q, int n, std::mt19937_64& rng) {
    std::vector<dqnn::TrainingPair> pairs;
    for (int i = 0; i < n; ++i)
        pairs.push_back({oracles::random_ket(1 << in_q, rng), oracles::random_ket(1 << out_q, rng)});
    return pairs;
}

double max_diff(const cli::ReportTable& t) {
    double worst = 0.0;
    for (const auto& r : t.rows) worst = std::max(worst, r.diff ? std::abs(*r.diff) : INFINITY);
    return worst;
}

Outcome black_scholes() {
    int ok = 0;
    for (std::size_t i = 0; i < reference::kSpots.size(); ++i) {
        const auto r = finance::bs_call_eval(reference::kSpots[i], {});
        ok += std::abs(r.price - reference::kPrice[i]) < 5e-4 && std::abs(r.delta - reference::kDelta[i]) < 5e-4 &&
              std::abs(r.gamma - reference::kGamma[i]) < 5e-5;
    }
    return {ok == 7, fmt("%d/7 spots match reference price/delta/gamma", ok)};
}

Outcome channel() {
    const std::vector<std::vector<int>> shapes{{1, 1}, {1, 2, 1}, {1, 3, 1}, {2, 2, 2}};
    std::mt19937_64 rng(2024);
    double worst_state = 0.0, worst_kraus = 0.0;
    for (int inst = 0; inst < 200; ++inst) {
        const auto& w = shapes[inst % shapes.size()];
        const auto net = Network::random(NetworkArchitecture(w), rng());
        ComplexMatrix x = oracles::random_density(1 << w[0], rng);
        for (int l = 1; l <= net.layer_count(); ++l) {
            const auto y = dqnn::layer_channel(net, l, x);
            const auto check = qmath::check_density(y);
            worst_state = std::max({worst_state, check.trace_deviation, check.hermitian_deviation,
                                    std::max(0.0, -check.min_eigenvalue)});
            worst_kraus = std::max(worst_kraus, qmath::max_abs_diff(y, dqnn::kraus_apply(net, l, x)));
            x = y;
        }
    }
    return {worst_state <= 1e-10 && worst_kraus <= 1e-10,
            fmt("200 instances, worst state deviation %.1e, worst channel/Kraus gap %.1e", worst_state, worst_kraus)};
}

Outcome gradient() {
    const NetworkArchitecture arch({1, 2, 1});
    std::mt19937_64 rng(77);
    int fd_ok = 0;
    double worst_rel = 0.0;
    for (int trial = 0; trial < 50; ++trial) {
        const auto net = Network::random(arch, rng());
        const auto pairs = random_pairs(1, 1, 5, rng);
        const dqnn::CompiledNetwork compiled(net);
        std::vector<dqnn::GradientTerm> terms;
        for (const auto& p : pairs)
            terms.push_back({dqnn::feedforward(compiled, qmath::outer(p.input)),
                             dqnn::backward_states(compiled, qmath::outer(p.target)), 1.0});
        auto mean = dqnn::traced_commutators(compiled, terms);
        for (auto& layer : mean)
            for (auto& m : layer) m /= static_cast<double>(pairs.size());
        const auto k = dqnn::gradient_k(net, pairs, {1.0, 0.1, 0});
        const double eps = 1e-4;
        auto moved = net;
        dqnn::apply_update(moved, k, eps);
        const double actual = dqnn::cost(moved, pairs) - dqnn::cost(compiled, pairs);
        const double predicted = eps * dqnn::first_order_gain(k, mean);
        const double rel = std::abs(actual - predicted) / std::abs(predicted);
        worst_rel = std::max(worst_rel, rel);
        fd_ok += rel <= 0.05;
    }

    int monotone = 0;
    const int trials = 40;
    for (int seed = 0; seed < trials; ++seed) {
        std::mt19937_64 prng(1000 + seed);
        const auto pairs = random_pairs(1, 1, 5, prng);
        const auto res = dqnn::train(Network::random(arch, seed), pairs, {1.0, 0.1, 50});
        const auto& v = res.trajectory.values;
        bool ok = true;
        for (std::size_t i = 1; i < v.size(); ++i) ok = ok && v[i] >= v[i - 1] - 1e-12;
        monotone += ok;
    }
    return {fd_ok == 50 && monotone >= 0.95 * trials,
            fmt("%d/50 one-step checks within 5%% (worst %.3f%%); non-decreasing over 50 steps in %d/%d trials",
                fd_ok, 100 * worst_rel, monotone, trials)};
}

Outcome unitary_learning() {
    int ok = 0;
    double worst = 1.0;
    for (int seed = 0; seed < 10; ++seed) {
        qmath::Rng urng(500 + seed);
        const auto v = qmath::random_unitary(2, urng);
        std::mt19937_64 rng(600 + seed);
        std::vector<dqnn::TrainingPair> pairs;
        for (int i = 0; i < 10; ++i) {
            const auto psi = oracles::random_ket(2, rng);
            pairs.push_back({psi, v * psi});
        }
        const auto res = dqnn::train(Network::random(NetworkArchitecture({1, 1}), seed), pairs, {1.0, 0.1, 1000});
        const double best = *std::max_element(res.trajectory.values.begin(), res.trajectory.values.end());
        worst = std::min(worst, best);
        ok += best >= 0.999;
    }
    return {ok >= 9, fmt("%d/10 seeds reach C >= 0.999 (lowest %.6f)", ok, worst)};
}

Outcome vol_band() {
    const auto t0 = std::chrono::steady_clock::now();
    const auto res = cli::run_experiment(config("smile_vol.json"));
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const double c = res.report.final_cost;
    const double md = max_diff(res.report.tables[0]);
    return {c >= 0.995 && md <= 10.0 && secs < 120.0,
            fmt("C = %.4f, max |diff| = %.1f bps, %.1f s", c, md, secs)};
}

Outcome width_trend() {
    int ok = 0;
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        auto cfg = config("smile_vol.json");
        cfg.beta = cfg.gamma = 0.25;
        cfg.seed = seed;
        cfg.widths = {1, 2, 1};
        const double narrow = cli::run_experiment(cfg).report.final_cost;
        cfg.widths = {1, 3, 1};
        const double wide = cli::run_experiment(cfg).report.final_cost;
        ok += wide >= narrow;
    }
    return {ok >= 7, fmt("[1,3,1] >= [1,2,1] in %d/10 seeds", ok)};
}

cli::ExperimentResult* greek_result = nullptr;

Outcome greek_band() {
    const auto t0 = std::chrono::steady_clock::now();
    static auto res = cli::run_experiment(config("bs_greeks.json"));
    greek_result = &res;
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const double p = max_diff(res.report.tables[0]);
    const double d = max_diff(res.report.tables[1]);
    const double g = max_diff(res.report.tables[2]);
    return {p <= 0.4 && d <= 0.06 && g <= 0.012 && secs < 300.0,
            fmt("max |diff| price %.3f, delta %.3f, gamma %.4f, %.1f s", p, d, g, secs)};
}

Outcome derivative_propagation() {
    if (!greek_result) return {false, "no trained network"};
    const auto cfg = config("bs_greeks.json");
    const diff::PriceEncoding enc{cfg.bs.strike, cfg.beta, cfg.gamma};
    const auto in = enc.input(cfg.mu_in);
    const dqnn::CompiledNetwork net(greek_result->network);
    const ComplexMatrix z = diff::mixed_reference(net);
    const auto path = [&](double x) {
        return diff::propagate_diff_state(net, qmath::outer(encode::encode_pure(x, in.base)));
    };
    double worst = 0.0;
    for (const double x : cfg.spots) {
        const auto d_in = encode::diff_density_first(x, 1.0, in);
        const ComplexMatrix rescaled = (2.0 / in.mu) * (diff::propagate_diff_state(net, d_in.state) - z);
        worst = std::max(worst, qmath::max_abs_diff(rescaled, oracles::central_diff(path, x, 1e-3)));
    }
    return {worst <= 1e-4, fmt("%zu spots, worst elementwise gap %.1e", cfg.spots.size(), worst)};
}

Outcome encode_suite() {
    double round_trip = 0.0, kfd = 0.0, eig = 0.0;
    // each encoding over the values it carries in the experiments
    const std::vector<std::pair<encode::EncodeParams, std::vector<double>>> cases{
        {{0.06, 0.5}, {0.1, 0.235, 0.5}},          {{0.56, 0.5}, {0.3, 0.56, 0.593, 1.0}},
        {{2.56, 0.5}, {0.5, 1.405, 3.0}},          {{0.56, 0.25}, {0.56, 0.593}},
        {{100.0, 0.5}, {0.64, 2.991, 7.776}},      {{100.0, 5.0}, {93.0, 100.0, 107.0}},
    };
    for (const auto& [p, values] : cases) {
        for (const double v : values) {
            const double x11 = std::norm(encode::encode_pure(v, p)(0));
            round_trip = std::max(round_trip, std::abs(encode::decode_value(x11, p) - v) / std::max(1.0, v));
            const auto sq = [&](double s) { return encode::squash(s, p); };
            kfd = std::max(kfd, std::abs(encode::k_factor(v, p) - oracles::central_diff(sq, v, 1e-4 * std::max(1.0, v))));
        }
    }
    for (const auto& pair : finance::build_greek_pairs(std::vector<double>(reference::kSpots.begin(),
                                                                           reference::kSpots.end()),
                                                       {}, 5.0, 0.5, 2.0, 2.0)) {
        const std::pair<const ComplexMatrix*, double> states[] = {
            {&pair.d_in_1, pair.r_in_1}, {&pair.d_out_1, pair.r_out_1},
            {&pair.d_in_2, pair.r_in_2}, {&pair.d_out_2, pair.r_out_2}};
        for (const auto& [m, r] : states) {
            Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(*m);
            eig = std::max({eig, std::abs(es.eigenvalues()(0) - (1 - std::abs(r)) / 2),
                            std::abs(es.eigenvalues()(1) - (1 + std::abs(r)) / 2)});
        }
    }
    // r_out at spot 100 from a finite-difference slope of the squash
    const auto bs = finance::bs_call_eval(100.0, {});
    const encode::EncodeParams out{100.0, 0.5};
    const auto sq = [&](double s) { return encode::squash(s, out); };
    const double r_oracle = 2.0 * bs.delta * oracles::central_diff(sq, bs.price, 1e-5);
    const double r_lib = encode::diff_density_first(bs.price, bs.delta, {out, 2.0}).r;
    const bool ok = round_trip <= 1e-10 && kfd <= 1e-6 && eig <= 1e-12 && std::abs(r_lib - r_oracle) <= 1e-4 &&
                    std::abs(r_lib - 0.0116) <= 1e-4;
    return {ok, fmt("round trip %.1e, k_factor vs FD %.1e, eigenvalues %.1e, r_out(100) = %.5f (oracle %.5f)",
                    round_trip, kfd, eig, r_lib, r_oracle)};
}

Outcome determinism() {
    const auto cfg = config("smile_vol.json");
    const auto a = cli::run_experiment(cfg);
    const auto b = cli::run_experiment(cfg);
    bool same = true;
    for (const auto f : {cli::ReportFormat::csv, cli::ReportFormat::markdown})
        same = same && cli::emit_report(a.report, f) == cli::emit_report(b.report, f);
    same = same && cli::emit_trajectory(a.report.trajectory) == cli::emit_trajectory(b.report.trajectory);
    same = same && dqnn::network_to_json(a.network) == dqnn::network_to_json(b.network);
    return {same, same ? "reports, trajectory and network identical across reruns" : "outputs differ"};
}

}  // namespace

int main() {
    const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
        {"black-scholes reference values", black_scholes},
        {"layer channel is CPTP and matches Kraus form", channel},
        {"update generator matches first-order cost change", gradient},
        {"single-qubit unitary learning", unitary_learning},
        {"implied-vol smile band", vol_band},
        {"wider hidden layer does not hurt", width_trend},
        {"price/delta/gamma band", greek_band},
        {"derivative propagation vs finite difference", derivative_propagation},
        {"encode/decode invariants", encode_suite},
        {"report determinism", determinism},
    };
    int failures = 0;
    int index = 0;
    for (const auto& [name, check] : criteria) {
        ++index;
        Outcome o;
        try {
            o = check();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        failures += !o.pass;
        std::printf("%s %2d %-48s %s\n", o.pass ? "PASS" : "FAIL", index, name, o.detail.c_str());
        std::fflush(stdout);
    }
    std::printf("%d/%zu criteria passed\n", index - failures, criteria.size());
    return failures == 0 ? 0 : 1;
}
