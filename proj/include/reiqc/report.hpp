#pragma once

// JSON views of the result types, shared by the CLI and the tests.

#include <string>
#include <vector>

#include <json.hpp>

#include "reiqc/hole_burning.hpp"
#include "reiqc/interactions.hpp"
#include "reiqc/protocols.hpp"

namespace reiqc {

nlohmann::json to_json(const Feature& f);
nlohmann::json to_json(const HolePair& p);
nlohmann::json to_json(const Detection& d);
nlohmann::json to_json(const QubitRegistry& r);
nlohmann::json to_json(const FidelityReport& r);
nlohmann::json to_json(const GatePlan& p);
nlohmann::json to_json(const PairShift& s);
nlohmann::json to_json(const LevelScheme& s);

/// Two columns, frequency_offset_hz and the spectrum value, at full precision.
std::string export_spectrum(const Spectrum& s, char delimiter = ',');
/// Same columns, restricted to the given grid indices (ascending).
std::string export_spectrum(const Spectrum& s, const std::vector<std::size_t>& indices, char delimiter = ',');
/// Grid indices where either spectrum reaches `fraction` of the larger peak.
std::vector<std::size_t> line_support(const Spectrum& a, const Spectrum& b, double fraction = 1e-3);

/// Value, published figure and their ratio; `order_of_magnitude_ok` when the ratio is in [0.01, 100].
nlohmann::json paper_comparison(const std::string& quantity, double value, double paper, const std::string& unit);

}  // namespace reiqc
