// dqnnfin: train quantum networks on implied vols or option prices and
// emit comparison tables.
//
//   dqnnfin run-vol <config> [--out DIR] [--format csv|markdown] [--seed N]
//   dqnnfin run-greeks <config> [--out DIR] [--format csv|markdown] [--seed N]
//   dqnnfin inspect <network.json>
//   dqnnfin export-data vol|greeks <path> [--config FILE]

#include <cstdint>
#include <exception>
#include <iomanip>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "dqnnfin/experiment.hpp"
#include "dqnnfin/finance.hpp"
#include "dqnnfin/network_io.hpp"

namespace {

using namespace dqnnfin;

struct RunOptions {
    std::string config;
    std::string out;
    std::string format = "csv";
    std::optional<std::uint64_t> seed;
};

int run(const RunOptions& opts, cli::Mode expected) {
    auto cfg = cli::load_config(opts.config);
    if (cfg.mode != expected) {
        std::cerr << "error: config mode is " << cli::to_string(cfg.mode) << ", this subcommand runs "
                  << cli::to_string(expected) << "\n";
        return 2;
    }
    if (opts.seed) cfg.seed = *opts.seed;
    if (!opts.out.empty()) cfg.output_dir = opts.out;
    const auto format = cli::parse_report_format(opts.format);

    const auto result = cli::run_experiment(cfg);
    cli::write_outputs(result, cfg.output_dir, format);

    for (const auto& w : result.report.warnings) std::cerr << "warning: " << w << "\n";
    std::cout << cli::emit_report(result.report, cli::ReportFormat::markdown);
    std::cerr << "final cost " << std::setprecision(6) << result.report.final_cost << ", "
              << result.report.trajectory.values.size() - 1 << " iterations, " << std::setprecision(3)
              << result.report.wall_seconds << " s; outputs in " << cfg.output_dir << "\n";
    return 0;
}

int inspect(const std::string& path) {
    const auto net = dqnn::load_network(path);
    const auto& w = net.architecture().widths();
    std::cout << "widths:";
    for (const int x : w) std::cout << ' ' << x;
    std::cout << "\nlayers: " << net.layer_count() << "\n";
    for (int l = 1; l <= net.layer_count(); ++l) {
        for (int j = 1; j <= net.architecture().width(l); ++j) {
            const auto& u = net.unitary(l, j);
            std::cout << "  U(" << l << "," << j << ") " << u.rows() << "x" << u.cols()
                      << "  max|U^dag U - I| = " << std::scientific << std::setprecision(2)
                      << qmath::unitarity_deviation(u) << std::defaultfloat << "\n";
        }
    }
    return 0;
}

int export_data(const std::string& kind, const std::string& path, const std::string& config) {
    if (kind == "vol") {
        finance::write_vol_csv(finance::bundled_vol_smile(), path);
        return 0;
    }
    if (kind == "greeks") {
        cli::ExperimentConfig cfg;
        cfg.mode = cli::Mode::price_greeks;
        if (!config.empty()) cfg = cli::load_config(config);
        finance::write_greek_csv(finance::bs_greek_points(cfg.spots, cfg.bs), path);
        return 0;
    }
    std::cerr << "error: export-data expects 'vol' or 'greeks'\n";
    return 2;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Deep quantum neural network experiments on implied volatilities and option Greeks"};
    app.require_subcommand(1);

    RunOptions vol_opts;
    auto* run_vol = app.add_subcommand("run-vol", "Train on the implied-volatility smile");
    RunOptions greek_opts;
    auto* run_greeks = app.add_subcommand("run-greeks", "Train on option prices with delta/gamma terms");
    for (auto [sub, opts] : {std::pair{run_vol, &vol_opts}, std::pair{run_greeks, &greek_opts}}) {
        sub->add_option("config", opts->config, "Experiment config (JSON)")->required()->check(CLI::ExistingFile);
        sub->add_option("--out", opts->out, "Output directory (overrides output_dir)");
        sub->add_option("--format", opts->format, "Report format")->check(CLI::IsMember({"csv", "markdown"}));
        sub->add_option("--seed", opts->seed, "Seed (overrides the config)");
    }

    std::string network_path;
    auto* inspect_cmd = app.add_subcommand("inspect", "Summarize a saved network");
    inspect_cmd->add_option("network", network_path, "network.json")->required()->check(CLI::ExistingFile);

    std::string export_kind, export_path, export_config;
    auto* export_cmd = app.add_subcommand("export-data", "Write a bundled dataset as delimited text");
    export_cmd->add_option("kind", export_kind, "vol or greeks")->required();
    export_cmd->add_option("path", export_path, "Destination file")->required();
    export_cmd->add_option("--config", export_config, "price_greeks config supplying spots and model")
        ->check(CLI::ExistingFile);

    CLI11_PARSE(app, argc, argv);

    try {
        if (*run_vol) return run(vol_opts, cli::Mode::implied_vol);
        if (*run_greeks) return run(greek_opts, cli::Mode::price_greeks);
        if (*inspect_cmd) return inspect(network_path);
        if (*export_cmd) return export_data(export_kind, export_path, export_config);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
