#pragma once

#include <stdexcept>
#include <string>

#include <nlohmann/json_fwd.hpp>

#include "orbatlas/atlas.hpp"
#include "orbatlas/invariants.hpp"
#include "orbatlas/resolve.hpp"

namespace orb {

/// Malformed input (bad JSON, unresolved references): CLI exit code 2.
struct ParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
/// Structurally parseable but mathematically broken input that prevents
/// construction (for example a non-group Cayley table): CLI exit code 1.
struct SemanticError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

nlohmann::json atlas_to_json(const Atlas& K);
Atlas atlas_from_json(const nlohmann::json& doc);

nlohmann::json report_to_json(const Report& rep);
std::string report_to_text(const Report& rep);

nlohmann::json weighting_to_json(const Weighting& w);

/// Section file schema: values keyed by chart index set and W-point name
/// (restricted to V internally), signs listed per zero point.
SectionData section_from_json(const nlohmann::json& doc, const Atlas& K, const Reduction& red);
nlohmann::json section_to_json(const Atlas& K, const Reduction& red, const SectionData& nu);

} // namespace orb
