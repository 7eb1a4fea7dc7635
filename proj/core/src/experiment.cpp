#include "dqnnfin/experiment.hpp"

#include <chrono>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "dqnnfin/encode.hpp"
#include "dqnnfin/network_io.hpp"

namespace dqnnfin::cli {

namespace {

using json = nlohmann::json;

const std::set<std::string> kCommonKeys = {"mode",       "widths", "beta",    "gamma",  "eta",
                                           "epsilon",    "iterations", "seed", "dataset", "output_dir"};
const std::set<std::string> kVolKeys = {"forward"};
const std::set<std::string> kGreekKeys = {"nu_d",  "nu_g",  "mu_in",  "mu_out", "bs",
                                          "spots", "derivative_fidelity", "strict_bounds"};
const std::set<std::string> kBsKeys = {"strike", "rate", "maturity", "vol"};

template <typename T>
T get_field(const json& obj, const std::string& key) {
    try {
        return obj.at(key).get<T>();
    } catch (const json::exception& e) {
        throw std::invalid_argument("config key '" + key + "': " + e.what());
    }
}

template <typename T>
void read_optional(const json& obj, const std::string& key, T& dst) {
    if (obj.contains(key)) dst = get_field<T>(obj, key);
}

diff::DerivativeFidelity parse_fidelity(const std::string& name) {
    if (name == "uhlmann") return diff::DerivativeFidelity::uhlmann;
    if (name == "overlap") return diff::DerivativeFidelity::overlap;
    throw std::invalid_argument("config key 'derivative_fidelity': expected uhlmann or overlap, got '" + name + "'");
}

std::string fidelity_name(diff::DerivativeFidelity f) {
    return f == diff::DerivativeFidelity::uhlmann ? "uhlmann" : "overlap";
}

std::string widths_text(const std::vector<int>& w) {
    std::string s = "[";
    for (std::size_t i = 0; i < w.size(); ++i) s += (i ? "," : "") + std::to_string(w[i]);
    return s + "]";
}

std::string number(double v) {
    std::ostringstream os;
    os << v;
    return os.str();
}

double seconds_since(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

}  // namespace

std::string to_string(Mode m) { return m == Mode::implied_vol ? "implied_vol" : "price_greeks"; }

void ExperimentConfig::validate() const {
    dqnn::NetworkArchitecture arch(widths);
    if (arch.input_qubits() != 1 || arch.output_qubits() != 1) {
        throw std::invalid_argument("widths must start and end with a single qubit (scalar encoding)");
    }
    if (!(beta > 0.0) || !(gamma > 0.0)) throw std::invalid_argument("beta and gamma must be > 0");
    dqnn::Hyperparameters{eta, epsilon, iterations}.validate();
    if (dataset.empty()) throw std::invalid_argument("dataset must be 'bundled' or a path");
    if (mode == Mode::implied_vol) {
        if (!(forward_pct > 0.0)) throw std::invalid_argument("forward must be > 0");
    } else {
        bs.validate();
        if (dataset == "bundled" && spots.empty()) throw std::invalid_argument("spots must be nonempty");
        for (const double s : spots) {
            if (!(s > 0.0)) throw std::invalid_argument("spots must be > 0");
        }
        diff::DiffHyperparameters{{eta, epsilon, iterations}, nu_d, nu_g, mu_in, mu_out, fidelity}.validate();
    }
}

ExperimentConfig parse_config(const std::string& json_text) {
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw std::invalid_argument(std::string("config is not valid JSON: ") + e.what());
    }
    if (!doc.is_object()) throw std::invalid_argument("config must be a JSON object");

    ExperimentConfig cfg;
    for (const char* key : {"mode", "widths", "beta", "gamma"}) {
        if (!doc.contains(key)) throw std::invalid_argument(std::string("config is missing required key '") + key + "'");
    }
    const auto mode = get_field<std::string>(doc, "mode");
    if (mode == "implied_vol") {
        cfg.mode = Mode::implied_vol;
    } else if (mode == "price_greeks") {
        cfg.mode = Mode::price_greeks;
    } else {
        throw std::invalid_argument("config key 'mode': expected implied_vol or price_greeks, got '" + mode + "'");
    }

    const auto& mode_keys = cfg.mode == Mode::implied_vol ? kVolKeys : kGreekKeys;
    for (const auto& [key, value] : doc.items()) {
        if (kCommonKeys.count(key) || mode_keys.count(key)) continue;
        if (kVolKeys.count(key) || kGreekKeys.count(key)) {
            throw std::invalid_argument("config key '" + key + "' is not valid in mode " + mode);
        }
        throw std::invalid_argument("unknown config key '" + key + "'");
    }

    cfg.widths = get_field<std::vector<int>>(doc, "widths");
    cfg.beta = get_field<double>(doc, "beta");
    cfg.gamma = get_field<double>(doc, "gamma");
    read_optional(doc, "eta", cfg.eta);
    read_optional(doc, "epsilon", cfg.epsilon);
    read_optional(doc, "iterations", cfg.iterations);
    read_optional(doc, "seed", cfg.seed);
    read_optional(doc, "dataset", cfg.dataset);
    read_optional(doc, "output_dir", cfg.output_dir);

    if (cfg.mode == Mode::implied_vol) {
        read_optional(doc, "forward", cfg.forward_pct);
    } else {
        read_optional(doc, "nu_d", cfg.nu_d);
        read_optional(doc, "nu_g", cfg.nu_g);
        read_optional(doc, "mu_in", cfg.mu_in);
        read_optional(doc, "mu_out", cfg.mu_out);
        read_optional(doc, "spots", cfg.spots);
        read_optional(doc, "strict_bounds", cfg.strict_bounds);
        if (doc.contains("derivative_fidelity")) {
            cfg.fidelity = parse_fidelity(get_field<std::string>(doc, "derivative_fidelity"));
        }
        if (doc.contains("bs")) {
            const auto& bs = doc["bs"];
            if (!bs.is_object()) throw std::invalid_argument("config key 'bs' must be an object");
            for (const auto& [key, value] : bs.items()) {
                if (!kBsKeys.count(key)) throw std::invalid_argument("unknown config key 'bs." + key + "'");
            }
            read_optional(bs, "strike", cfg.bs.strike);
            read_optional(bs, "rate", cfg.bs.rate);
            read_optional(bs, "maturity", cfg.bs.maturity);
            read_optional(bs, "vol", cfg.bs.vol);
        }
    }
    cfg.validate();
    return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config " + path.string());
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str());
}

std::string config_to_json(const ExperimentConfig& cfg) {
    json doc;
    doc["mode"] = to_string(cfg.mode);
    doc["widths"] = cfg.widths;
    doc["beta"] = cfg.beta;
    doc["gamma"] = cfg.gamma;
    doc["eta"] = cfg.eta;
    doc["epsilon"] = cfg.epsilon;
    doc["iterations"] = cfg.iterations;
    doc["seed"] = cfg.seed;
    doc["dataset"] = cfg.dataset;
    doc["output_dir"] = cfg.output_dir;
    if (cfg.mode == Mode::implied_vol) {
        doc["forward"] = cfg.forward_pct;
    } else {
        doc["nu_d"] = cfg.nu_d;
        doc["nu_g"] = cfg.nu_g;
        doc["mu_in"] = cfg.mu_in;
        doc["mu_out"] = cfg.mu_out;
        doc["bs"] = {{"strike", cfg.bs.strike}, {"rate", cfg.bs.rate}, {"maturity", cfg.bs.maturity}, {"vol", cfg.bs.vol}};
        doc["spots"] = cfg.spots;
        doc["derivative_fidelity"] = fidelity_name(cfg.fidelity);
        doc["strict_bounds"] = cfg.strict_bounds;
    }
    return doc.dump(2);
}

ExperimentResult run_implied_vol(const ExperimentConfig& cfg) {
    if (cfg.mode != Mode::implied_vol) throw std::invalid_argument("run_implied_vol needs mode implied_vol");
    cfg.validate();
    const auto start = std::chrono::steady_clock::now();

    const auto data = cfg.dataset == "bundled" ? finance::bundled_vol_smile() : finance::read_vol_csv(cfg.dataset);
    if (data.empty()) throw std::invalid_argument("vol dataset is empty");
    const auto pairs = finance::build_vol_pairs(data, cfg.forward_pct, cfg.beta, cfg.gamma);

    const dqnn::NetworkArchitecture arch(cfg.widths);
    auto trained = dqnn::train(dqnn::Network::random(arch, cfg.seed), pairs, {cfg.eta, cfg.epsilon, cfg.iterations});

    ReportTable table{"implied_vol", "Implied volatility", "Strike (%)", "Training σ (bps)", 1, {}};
    const dqnn::CompiledNetwork compiled(trained.network);
    for (std::size_t n = 0; n < data.size(); ++n) {
        const auto rho = dqnn::feedforward(compiled, qmath::outer(pairs[n].input)).back();
        try {
            const double pct = encode::decode_value(rho(0, 0).real(), {data[n].strike_pct, cfg.gamma});
            table.rows.push_back(make_row(data[n].strike_pct, data[n].vol_bps, finance::pct_to_bps(pct)));
        } catch (const std::domain_error& e) {
            table.rows.push_back(make_row(data[n].strike_pct, data[n].vol_bps, std::nullopt, e.what()));
        }
    }

    ExperimentReport report;
    report.mode = to_string(cfg.mode);
    report.tables.push_back(std::move(table));
    report.final_cost = trained.trajectory.values.back();
    report.trajectory = std::move(trained.trajectory);
    report.config_echo = config_to_json(cfg);
    report.caption = "F=" + number(cfg.forward_pct) + "%, β=" + number(cfg.beta) + ", γ=" + number(cfg.gamma) +
                     ", widths=" + widths_text(cfg.widths);
    report.wall_seconds = seconds_since(start);
    return {std::move(report), std::move(trained.network)};
}

ExperimentResult run_price_greeks(const ExperimentConfig& cfg) {
    if (cfg.mode != Mode::price_greeks) throw std::invalid_argument("run_price_greeks needs mode price_greeks");
    cfg.validate();
    const auto start = std::chrono::steady_clock::now();

    const auto points = cfg.dataset == "bundled" ? finance::bs_greek_points(cfg.spots, cfg.bs)
                                                 : finance::read_greek_csv(cfg.dataset);
    if (points.empty()) throw std::invalid_argument("greek dataset is empty");
    const diff::PriceEncoding enc{cfg.bs.strike, cfg.beta, cfg.gamma};
    auto built = finance::build_greek_pairs(points, enc, cfg.mu_in, cfg.mu_out, cfg.strict_bounds);

    const diff::DiffHyperparameters hp{{cfg.eta, cfg.epsilon, cfg.iterations}, cfg.nu_d, cfg.nu_g,
                                       cfg.mu_in, cfg.mu_out, cfg.fidelity};
    const dqnn::NetworkArchitecture arch(cfg.widths);
    auto trained = diff::train_diff(dqnn::Network::random(arch, cfg.seed), built.pairs, hp);

    std::vector<double> xs;
    for (const auto& p : points) xs.push_back(p.spot);
    const auto predictions = diff::predict_greeks(trained.network, xs, enc, hp);

    ReportTable price{"price", "Predicted call price", "x", "Training", 3, {}};
    ReportTable delta{"delta", "Predicted delta", "x", "Training", 3, {}};
    ReportTable gamma{"gamma", "Predicted gamma", "x", "Training", 4, {}};
    for (std::size_t n = 0; n < points.size(); ++n) {
        const auto& pr = predictions[n];
        const auto& pt = points[n];
        price.rows.push_back(make_row(pt.spot, pt.price, pr.price, pr.price ? "" : pr.error));
        delta.rows.push_back(make_row(pt.spot, pt.delta, pr.delta, pr.delta ? "" : pr.error));
        gamma.rows.push_back(make_row(pt.spot, pt.gamma, pr.gamma, pr.gamma ? "" : pr.error));
    }

    ExperimentReport report;
    report.mode = to_string(cfg.mode);
    report.tables = {std::move(price), std::move(delta), std::move(gamma)};
    report.final_cost = trained.trajectory.values.back();
    report.trajectory = std::move(trained.trajectory);
    report.config_echo = config_to_json(cfg);
    report.caption = "K=" + number(cfg.bs.strike) + ", β=" + number(cfg.beta) + ", γ=" + number(cfg.gamma) +
                     ", ν_d=" + number(cfg.nu_d) + ", ν_g=" + number(cfg.nu_g) + ", widths=" + widths_text(cfg.widths);
    report.warnings = std::move(built.warnings);
    report.wall_seconds = seconds_since(start);
    return {std::move(report), std::move(trained.network)};
}

ExperimentResult run_experiment(const ExperimentConfig& cfg) {
    return cfg.mode == Mode::implied_vol ? run_implied_vol(cfg) : run_price_greeks(cfg);
}

void write_outputs(const ExperimentResult& result, const std::filesystem::path& dir, ReportFormat format) {
    std::filesystem::create_directories(dir);
    auto write = [&](const std::string& name, const std::string& text) {
        std::ofstream out(dir / name, std::ios::binary);
        if (!out) throw std::runtime_error("cannot write " + (dir / name).string());
        out << text;
    };
    write("report." + report_extension(format), emit_report(result.report, format));
    write("trajectory.csv", emit_trajectory(result.report.trajectory));
    write("config.json", result.report.config_echo + "\n");
    dqnn::save_network(result.network, dir / "network.json");
}

}  // namespace dqnnfin::cli
