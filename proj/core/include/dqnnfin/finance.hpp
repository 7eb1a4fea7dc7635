// Ground-truth market data: Black-Scholes call price and Greeks, the
// bundled implied-volatility smile, and training-set builders.
#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "dqnnfin/diff.hpp"
#include "dqnnfin/encode.hpp"
#include "dqnnfin/network.hpp"

namespace dqnnfin::finance {

struct BsParams {
    double strike = 100.0;
    double rate = 0.0;
    double maturity = 0.25;
    double vol = 0.15;

    void validate() const;
};

struct BsResult {
    double price = 0.0;
    double delta = 0.0;
    double gamma = 0.0;
};

double normal_cdf(double x);
double normal_pdf(double x);

/// European call under Black-Scholes with continuous rate, no dividends.
BsResult bs_call_eval(double spot, const BsParams& p);

struct VolPoint {
    double strike_pct = 0.0;
    double vol_bps = 0.0;
};

/// Forward level (percent) of the bundled smile.
inline constexpr double kBundledForwardPct = 0.56;

/// Seven-point implied volatility smile, strikes in percent, vols in bps.
std::vector<VolPoint> bundled_vol_smile();

inline constexpr double bps_to_pct(double bps) { return bps / 100.0; }
inline constexpr double pct_to_bps(double pct) { return pct * 100.0; }

/// Input encodes the forward with scale = strike_n, exponent β; the target
/// encodes the vol (converted to percent) with scale = strike_n, exponent γ.
std::vector<dqnn::TrainingPair> build_vol_pairs(const std::vector<VolPoint>& data, double forward_pct, double beta,
                                                double gamma);

/// One spot of the differential training set.
struct GreekPoint {
    double spot = 0.0;
    double price = 0.0;
    double delta = 0.0;
    double gamma = 0.0;
};

std::vector<GreekPoint> bs_greek_points(const std::vector<double>& spots, const BsParams& p);

struct GreekPairsResult {
    std::vector<diff::DiffTrainingPair> pairs;
    /// One line per state outside the conservative 0 <= r <= 1/2 bound.
    std::vector<std::string> warnings;
};

/// Builds derivative training states. Inputs use chain factor 1 (the input
/// encodes x itself); outputs use the point's delta and gamma. Throws
/// std::domain_error naming the spot when a state is invalid, or when
/// `strict_bounds` is set and some r falls outside [0, 1/2].
GreekPairsResult build_greek_pairs(const std::vector<GreekPoint>& points, const diff::PriceEncoding& enc,
                                   double mu_in, double mu_out, bool strict_bounds = false);

std::vector<diff::DiffTrainingPair> build_greek_pairs(const std::vector<double>& spots, const BsParams& p, double beta,
                                                double gamma, double mu_in, double mu_out);

/// Delimited text, header row, round-trip precision.
void write_vol_csv(const std::vector<VolPoint>& data, const std::filesystem::path& path);
std::vector<VolPoint> read_vol_csv(const std::filesystem::path& path);
void write_greek_csv(const std::vector<GreekPoint>& data, const std::filesystem::path& path);
std::vector<GreekPoint> read_greek_csv(const std::filesystem::path& path);

}  // namespace dqnnfin::finance
