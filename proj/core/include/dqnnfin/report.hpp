#pragma once

#include <optional>
#include <string>
#include <vector>

#include "dqnnfin/network.hpp"

namespace dqnnfin::cli {

struct ReportRow {
    double input = 0.0;
    double training = 0.0;
    std::optional<double> output;
    /// training - output, at full precision.
    std::optional<double> diff;
    /// Why `output` is missing, if it is.
    std::string note;
};

struct ReportTable {
    std::string key;          // csv discriminator: "implied_vol", "price", "delta", "gamma"
    std::string title;        // markdown caption
    std::string input_label;  // e.g. "Strike (%)"
    std::string training_label;
    int decimals = 1;
    std::vector<ReportRow> rows;
};

enum class ReportFormat { csv, markdown };

ReportFormat parse_report_format(const std::string& name);
std::string report_extension(ReportFormat f);

struct ExperimentReport {
    std::string mode;
    std::vector<ReportTable> tables;
    double final_cost = 0.0;
    dqnn::CostTrajectory trajectory;
    /// JSON text of the fully resolved configuration.
    std::string config_echo;
    /// Extra caption text, e.g. "F=0.56%, β=0.5, γ=0.5".
    std::string caption;
    std::vector<std::string> warnings;
    double wall_seconds = 0.0;  // not part of emitted text
};

ReportRow make_row(double input, double training, std::optional<double> output, std::string note = {});

/// Implied-vol reports: one csv table with a header and one line per row.
/// Greek reports: one csv with a leading table column and 3 x N rows.
/// Markdown renders every table with its caption, the final cost and the
/// config echo.
std::string emit_report(const ExperimentReport& report, ReportFormat format);

/// "iteration,cost" with round-trip precision.
std::string emit_trajectory(const dqnn::CostTrajectory& trajectory);

}  // namespace dqnnfin::cli
