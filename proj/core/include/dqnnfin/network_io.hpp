#pragma once

#include <filesystem>
#include <string>

#include "dqnnfin/network.hpp"

namespace dqnnfin::dqnn {

inline constexpr int kNetworkFormatVersion = 1;

/// JSON document:
///   { "format_version": 1,
///     "widths": [m_0, ..., m_{L+1}],
///     "unitaries": [ layer 1 .. L+1 ][ perceptron 1 .. m_l ][ row-major [re, im] ] }
/// Doubles are written with round-trip precision.
std::string network_to_json(const Network& net);

/// Validates version, shapes and unitarity. Errors name the offending (l, j).
Network network_from_json(const std::string& text);

void save_network(const Network& net, const std::filesystem::path& path);
Network load_network(const std::filesystem::path& path);

}  // namespace dqnnfin::dqnn
