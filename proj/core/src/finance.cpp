#include "dqnnfin/finance.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace dqnnfin::finance {

void BsParams::validate() const {
    if (!(strike > 0.0)) throw std::invalid_argument("strike must be > 0");
    if (!(maturity > 0.0)) throw std::invalid_argument("maturity must be > 0");
    if (!(vol > 0.0)) throw std::invalid_argument("vol must be > 0");
    if (!std::isfinite(rate)) throw std::invalid_argument("rate must be finite");
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

double normal_pdf(double x) { return std::exp(-0.5 * x * x) / std::sqrt(2.0 * std::numbers::pi); }

BsResult bs_call_eval(double spot, const BsParams& p) {
    if (!(spot > 0.0)) throw std::invalid_argument("spot must be > 0");
    p.validate();
    const double sqrt_t = std::sqrt(p.maturity);
    const double vol_t = p.vol * sqrt_t;
    const double d1 = (std::log(spot / p.strike) + (p.rate + 0.5 * p.vol * p.vol) * p.maturity) / vol_t;
    const double d2 = d1 - vol_t;
    const double discount = std::exp(-p.rate * p.maturity);
    BsResult r;
    r.price = spot * normal_cdf(d1) - p.strike * discount * normal_cdf(d2);
    r.delta = normal_cdf(d1);
    r.gamma = normal_pdf(d1) / (spot * vol_t);
    return r;
}

std::vector<VolPoint> bundled_vol_smile() {
    return {{0.06, 23.5}, {0.31, 44.7}, {0.56, 59.3}, {0.81, 71.7}, {1.06, 83.0}, {1.56, 103.5}, {2.56, 140.5}};
}

std::vector<dqnn::TrainingPair> build_vol_pairs(const std::vector<VolPoint>& data, double forward_pct, double beta,
                                                double gamma) {
    if (!(forward_pct > 0.0)) throw std::invalid_argument("forward must be > 0");
    std::vector<dqnn::TrainingPair> pairs;
    pairs.reserve(data.size());
    for (const auto& pt : data) {
        if (!(pt.strike_pct > 0.0) || !(pt.vol_bps > 0.0)) {
            throw std::invalid_argument("vol points need positive strike and vol");
        }
        const encode::EncodeParams in{pt.strike_pct, beta};
        const encode::EncodeParams out{pt.strike_pct, gamma};
        in.validate();
        out.validate();
        pairs.push_back({encode::encode_pure(forward_pct, in), encode::encode_pure(bps_to_pct(pt.vol_bps), out)});
    }
    return pairs;
}

std::vector<GreekPoint> bs_greek_points(const std::vector<double>& spots, const BsParams& p) {
    std::vector<GreekPoint> pts;
    pts.reserve(spots.size());
    for (const double s : spots) {
        const auto r = bs_call_eval(s, p);
        pts.push_back({s, r.price, r.delta, r.gamma});
    }
    return pts;
}

GreekPairsResult build_greek_pairs(const std::vector<GreekPoint>& points, const diff::PriceEncoding& enc,
                                   double mu_in, double mu_out, bool strict_bounds) {
    const auto in = enc.input(mu_in);
    const auto out = enc.output(mu_out);
    in.validate();
    out.validate();

    GreekPairsResult result;
    for (const auto& pt : points) {
        if (!(pt.spot > 0.0) || !(pt.price > 0.0)) {
            throw std::domain_error("greek point at spot " + std::to_string(pt.spot) +
                                    " needs positive spot and price");
        }
        diff::DiffTrainingPair pair;
        pair.x = pt.spot;
        pair.v = pt.price;
        pair.dv_dx = pt.delta;
        pair.d2v_dx2 = pt.gamma;
        pair.base = {encode::encode_pure(pt.spot, in.base), encode::encode_pure(pt.price, out.base)};

        encode::DiffState states[4];
        try {
            states[0] = encode::diff_density_first(pt.spot, 1.0, in);
            states[1] = encode::diff_density_first(pt.price, pt.delta, out);
            states[2] = encode::diff_density_second(pt.spot, 1.0, 0.0, in);
            states[3] = encode::diff_density_second(pt.price, pt.delta, pt.gamma, out);
        } catch (const std::domain_error& e) {
            throw std::domain_error("spot " + std::to_string(pt.spot) + ": " + e.what());
        }

        static constexpr const char* kNames[4] = {"d_in_1", "d_out_1", "d_in_2", "d_out_2"};
        for (int i = 0; i < 4; ++i) {
            if (!states[i].outside_strict_bound) continue;
            std::ostringstream msg;
            msg << "spot " << pt.spot << ": " << kNames[i] << " has r = " << states[i].r
                << " outside the conservative bound [0, 1/2]";
            if (strict_bounds) throw std::domain_error(msg.str());
            result.warnings.push_back(msg.str());
        }

        pair.d_in_1 = std::move(states[0].state);
        pair.d_out_1 = std::move(states[1].state);
        pair.d_in_2 = std::move(states[2].state);
        pair.d_out_2 = std::move(states[3].state);
        pair.r_in_1 = states[0].r;
        pair.r_out_1 = states[1].r;
        pair.r_in_2 = states[2].r;
        pair.r_out_2 = states[3].r;
        result.pairs.push_back(std::move(pair));
    }
    return result;
}

std::vector<diff::DiffTrainingPair> build_greek_pairs(const std::vector<double>& spots, const BsParams& p, double beta,
                                                      double gamma, double mu_in, double mu_out) {
    return build_greek_pairs(bs_greek_points(spots, p), diff::PriceEncoding{p.strike, beta, gamma}, mu_in, mu_out)
        .pairs;
}

namespace {

std::vector<std::vector<double>> read_numeric_csv(const std::filesystem::path& path,
                                                  const std::vector<std::string>& header) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error(path.string() + ": empty file");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::string expected;
    for (std::size_t i = 0; i < header.size(); ++i) expected += (i ? "," : "") + header[i];
    if (line != expected) {
        throw std::runtime_error(path.string() + ": expected header '" + expected + "', got '" + line + "'");
    }
    std::vector<std::vector<double>> rows;
    int lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::vector<double> row;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) {
            try {
                std::size_t used = 0;
                row.push_back(std::stod(cell, &used));
                if (used != cell.size()) throw std::invalid_argument(cell);
            } catch (const std::exception&) {
                throw std::runtime_error(path.string() + ":" + std::to_string(lineno) + ": bad number '" + cell +
                                         "'");
            }
        }
        if (row.size() != header.size()) {
            throw std::runtime_error(path.string() + ":" + std::to_string(lineno) + ": expected " +
                                     std::to_string(header.size()) + " columns");
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

// Shortest text that parses back to the same double.
std::string num(double v) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

std::ofstream open_for_write(const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
    return out;
}

}  // namespace

void write_vol_csv(const std::vector<VolPoint>& data, const std::filesystem::path& path) {
    auto out = open_for_write(path);
    out << "strike_pct,vol_bps\n";
    for (const auto& p : data) out << num(p.strike_pct) << ',' << num(p.vol_bps) << '\n';
}

std::vector<VolPoint> read_vol_csv(const std::filesystem::path& path) {
    std::vector<VolPoint> data;
    for (const auto& row : read_numeric_csv(path, {"strike_pct", "vol_bps"})) data.push_back({row[0], row[1]});
    return data;
}

void write_greek_csv(const std::vector<GreekPoint>& data, const std::filesystem::path& path) {
    auto out = open_for_write(path);
    out << "spot,price,delta,gamma\n";
    for (const auto& p : data) {
        out << num(p.spot) << ',' << num(p.price) << ',' << num(p.delta) << ',' << num(p.gamma) << '\n';
    }
}

std::vector<GreekPoint> read_greek_csv(const std::filesystem::path& path) {
    std::vector<GreekPoint> data;
    for (const auto& row : read_numeric_csv(path, {"spot", "price", "delta", "gamma"})) {
        data.push_back({row[0], row[1], row[2], row[3]});
    }
    return data;
}

}  // namespace dqnnfin::finance
