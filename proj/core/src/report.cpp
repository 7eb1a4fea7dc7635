#include "dqnnfin/report.hpp"

#include <iomanip>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace dqnnfin::cli {

namespace {

std::string fixed(double v, int decimals) {
    std::ostringstream os;
    os << std::fixed << std::setprecision(decimals) << v;
    return os.str();
}

std::string plain(double v) {
    std::ostringstream os;
    os << std::setprecision(10) << v;
    return os.str();
}

std::string fixed_or(const std::optional<double>& v, int decimals, const char* missing) {
    return v ? fixed(*v, decimals) : std::string(missing);
}

// Vol tables hold bps and are printed with one decimal; inputs are printed
// as given.
void csv_single(std::ostringstream& os, const ReportTable& t) {
    os << "strike_pct,training_bps,output_bps,diff_bps\n";
    for (const auto& r : t.rows) {
        os << plain(r.input) << ',' << fixed(r.training, t.decimals) << ',' << fixed_or(r.output, t.decimals, "nan")
           << ',' << fixed_or(r.diff, t.decimals, "nan") << '\n';
    }
}

void csv_multi(std::ostringstream& os, const std::vector<ReportTable>& tables) {
    os << "table,x,training,output,diff\n";
    for (const auto& t : tables) {
        for (const auto& r : t.rows) {
            os << t.key << ',' << plain(r.input) << ',' << fixed(r.training, t.decimals) << ','
               << fixed_or(r.output, t.decimals, "nan") << ',' << fixed_or(r.diff, t.decimals, "nan") << '\n';
        }
    }
}

void markdown_table(std::ostringstream& os, const ReportTable& t) {
    os << "### " << t.title << "\n\n";
    os << "| " << t.input_label << " | " << t.training_label << " | Output | Diff |\n";
    os << "|---|---|---|---|\n";
    for (const auto& r : t.rows) {
        os << "| " << plain(r.input) << " | " << fixed(r.training, t.decimals) << " | "
           << fixed_or(r.output, t.decimals, "n/a") << " | " << fixed_or(r.diff, t.decimals, "n/a") << " |\n";
    }
    bool any_note = false;
    for (const auto& r : t.rows) any_note = any_note || !r.note.empty();
    if (any_note) {
        os << '\n';
        for (const auto& r : t.rows) {
            if (!r.note.empty()) os << "- " << plain(r.input) << ": " << r.note << '\n';
        }
    }
    os << '\n';
}

}  // namespace

ReportFormat parse_report_format(const std::string& name) {
    if (name == "csv") return ReportFormat::csv;
    if (name == "markdown" || name == "md") return ReportFormat::markdown;
    throw std::invalid_argument("unknown report format '" + name + "' (expected csv or markdown)");
}

std::string report_extension(ReportFormat f) { return f == ReportFormat::csv ? "csv" : "md"; }

ReportRow make_row(double input, double training, std::optional<double> output, std::string note) {
    ReportRow r;
    r.input = input;
    r.training = training;
    r.output = output;
    if (output) r.diff = training - *output;
    r.note = std::move(note);
    return r;
}

std::string emit_report(const ExperimentReport& report, ReportFormat format) {
    std::ostringstream os;
    if (format == ReportFormat::csv) {
        if (report.tables.size() == 1 && report.tables.front().key == "implied_vol") {
            csv_single(os, report.tables.front());
        } else {
            csv_multi(os, report.tables);
        }
        return os.str();
    }

    os << "# Experiment report (" << report.mode << ")\n\n";
    if (!report.caption.empty()) os << report.caption << ", ";
    os << "C=" << fixed(report.final_cost, 4) << "\n\n";
    for (const auto& t : report.tables) markdown_table(os, t);
    if (!report.warnings.empty()) {
        os << "### Warnings\n\n";
        for (const auto& w : report.warnings) os << "- " << w << '\n';
        os << '\n';
    }
    os << "### Configuration\n\n```json\n" << report.config_echo << "\n```\n";
    return os.str();
}

std::string emit_trajectory(const dqnn::CostTrajectory& trajectory) {
    std::ostringstream os;
    os << std::setprecision(std::numeric_limits<double>::max_digits10);
    os << "iteration,cost\n";
    for (std::size_t i = 0; i < trajectory.values.size(); ++i) os << i << ',' << trajectory.values[i] << '\n';
    return os.str();
}

}  // namespace dqnnfin::cli
