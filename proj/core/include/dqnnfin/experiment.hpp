// Config-driven experiment runner: builds a dataset, trains a seeded
// network, decodes its outputs and produces comparison tables.
#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "dqnnfin/diff.hpp"
#include "dqnnfin/finance.hpp"
#include "dqnnfin/network.hpp"
#include "dqnnfin/report.hpp"

namespace dqnnfin::cli {

enum class Mode { implied_vol, price_greeks };

std::string to_string(Mode m);

struct ExperimentConfig {
    Mode mode = Mode::implied_vol;
    std::vector<int> widths{1, 2, 1};
    double beta = 1.0;
    double gamma = 1.0;
    double eta = 1.0;
    double epsilon = 0.1;
    int iterations = 800;
    std::uint64_t seed = 0;
    /// "bundled" or a path to a delimited dataset file.
    std::string dataset = "bundled";
    std::string output_dir = "out";

    // implied_vol
    double forward_pct = finance::kBundledForwardPct;

    // price_greeks
    double nu_d = 0.0;
    double nu_g = 0.0;
    double mu_in = 2.0;
    double mu_out = 2.0;
    finance::BsParams bs{};
    std::vector<double> spots{93, 95, 97, 100, 103, 105, 107};
    diff::DerivativeFidelity fidelity = diff::DerivativeFidelity::uhlmann;
    bool strict_bounds = false;

    void validate() const;
};

/// Parses a JSON object. `mode`, `widths`, `beta` and `gamma` are required;
/// unknown keys, and keys that belong to the other mode, are errors.
ExperimentConfig parse_config(const std::string& json_text);
ExperimentConfig load_config(const std::filesystem::path& path);

/// Every field of the resolved config for the active mode, as JSON.
std::string config_to_json(const ExperimentConfig& cfg);

struct ExperimentResult {
    ExperimentReport report;
    dqnn::Network network;
};

ExperimentResult run_implied_vol(const ExperimentConfig& cfg);
ExperimentResult run_price_greeks(const ExperimentConfig& cfg);
ExperimentResult run_experiment(const ExperimentConfig& cfg);

/// Writes report.{csv,md}, trajectory.csv, network.json and config.json.
void write_outputs(const ExperimentResult& result, const std::filesystem::path& dir, ReportFormat format);

}  // namespace dqnnfin::cli
