#include "dqnnfin/network_io.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace dqnnfin::dqnn {

namespace {

using json = nlohmann::json;
using Index = Eigen::Index;

std::string where(std::size_t l, std::size_t j) {
    return "unitary (" + std::to_string(l) + ", " + std::to_string(j) + ")";
}

}  // namespace

std::string network_to_json(const Network& net) {
    json doc;
    doc["format_version"] = kNetworkFormatVersion;
    doc["widths"] = net.architecture().widths();
    json layers = json::array();
    for (const auto& layer : net.unitaries()) {
        json perceptrons = json::array();
        for (const auto& u : layer) {
            json entries = json::array();
            for (Index r = 0; r < u.rows(); ++r) {
                for (Index c = 0; c < u.cols(); ++c) {
                    entries.push_back(json::array({u(r, c).real(), u(r, c).imag()}));
                }
            }
            perceptrons.push_back(std::move(entries));
        }
        layers.push_back(std::move(perceptrons));
    }
    doc["unitaries"] = std::move(layers);
    return doc.dump(1);
}

Network network_from_json(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw std::runtime_error(std::string("malformed network file: ") + e.what());
    }
    if (!doc.is_object() || !doc.contains("format_version") || !doc.contains("widths") ||
        !doc.contains("unitaries")) {
        throw std::runtime_error("malformed network file: missing format_version, widths or unitaries");
    }
    if (!doc["format_version"].is_number_integer() || doc["format_version"].get<int>() != kNetworkFormatVersion) {
        throw std::runtime_error("unsupported network format_version " + doc["format_version"].dump() +
                                 " (expected " + std::to_string(kNetworkFormatVersion) + ")");
    }

    std::vector<int> widths;
    try {
        widths = doc["widths"].get<std::vector<int>>();
    } catch (const json::exception&) {
        throw std::runtime_error("malformed network file: widths must be a list of integers");
    }
    NetworkArchitecture arch(widths);

    const auto& layers = doc["unitaries"];
    if (!layers.is_array() || static_cast<int>(layers.size()) != arch.layer_count()) {
        throw std::runtime_error("malformed network file: expected " + std::to_string(arch.layer_count()) +
                                 " layers of unitaries");
    }

    std::vector<std::vector<ComplexMatrix>> us;
    for (std::size_t l = 1; l <= layers.size(); ++l) {
        const auto& layer = layers[l - 1];
        const auto expected = static_cast<std::size_t>(arch.width(static_cast<int>(l)));
        if (!layer.is_array() || layer.size() != expected) {
            throw std::runtime_error("malformed network file: layer " + std::to_string(l) + " must hold " +
                                     std::to_string(expected) + " unitaries");
        }
        const Index dim = Index{1} << (arch.width(static_cast<int>(l) - 1) + 1);
        std::vector<ComplexMatrix> perceptrons;
        for (std::size_t j = 1; j <= layer.size(); ++j) {
            const auto& entries = layer[j - 1];
            if (!entries.is_array() || entries.size() != static_cast<std::size_t>(dim * dim)) {
                throw std::runtime_error(where(l, j) + ": expected " + std::to_string(dim * dim) + " entries");
            }
            ComplexMatrix u(dim, dim);
            for (Index k = 0; k < dim * dim; ++k) {
                const auto& e = entries[static_cast<std::size_t>(k)];
                if (!e.is_array() || e.size() != 2 || !e[0].is_number() || !e[1].is_number()) {
                    throw std::runtime_error(where(l, j) + ": entry " + std::to_string(k) +
                                             " is not a [re, im] pair");
                }
                u(k / dim, k % dim) = qmath::Complex(e[0].get<double>(), e[1].get<double>());
            }
            const double dev = qmath::unitarity_deviation(u);
            if (!(dev <= 1e-10)) {
                std::ostringstream msg;
                msg << where(l, j) << " is not unitary (max |U†U - I| = " << dev << ")";
                throw std::runtime_error(msg.str());
            }
            perceptrons.push_back(std::move(u));
        }
        us.push_back(std::move(perceptrons));
    }
    return Network(std::move(arch), std::move(us));
}

void save_network(const Network& net, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
    out << network_to_json(net) << '\n';
    if (!out) throw std::runtime_error("failed writing " + path.string());
}

Network load_network(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    std::stringstream buf;
    buf << in.rdbuf();
    return network_from_json(buf.str());
}

}  // namespace dqnnfin::dqnn
