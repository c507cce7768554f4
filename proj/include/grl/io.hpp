#pragma once

// Structured-text artifacts. Every file is JSON (or JSON Lines for episode
// logs) with a "schema" tag; doubles round-trip exactly.

#include <json.hpp>

#include <filesystem>
#include <string>
#include <vector>

#include "grl/circuit.hpp"
#include "grl/gadget_synth.hpp"
#include "grl/mlp.hpp"

namespace grl {

using Json = nlohmann::ordered_json;

Json circuit_to_json(const Circuit& circuit);
/// Throws std::invalid_argument on schema violations, then runs validate().
Circuit circuit_from_json(const Json& j);

struct LibraryEntry {
    GadgetDef gadget;
    /// Field strength of the regime whose corpus produced the gadget.
    double source_field = 0.0;
    double score_delta = 0.0;
};

Json library_to_json(const std::vector<LibraryEntry>& library);
std::vector<LibraryEntry> library_from_json(const Json& j);
GadgetLibrary gadgets_of(const std::vector<LibraryEntry>& library);

struct StoredCircuit {
    Circuit circuit;  // bound, gadgets expanded
    double energy = 0.0;
    double cost = 0.0;
    double field = 0.0;
    std::uint64_t seed = 0;

    friend bool operator==(const StoredCircuit&, const StoredCircuit&) = default;
};

Json corpus_to_json(const std::vector<StoredCircuit>& corpus);
std::vector<StoredCircuit> corpus_from_json(const Json& j);

Json mlp_to_json(const Mlp& net);
/// Rebuilds the network; the stored layer shapes must be consistent.
Mlp mlp_from_json(const Json& j);

std::string read_text(const std::filesystem::path& path);
/// Writes through a temporary file and renames, so readers never see a partial file.
void write_text(const std::filesystem::path& path, const std::string& text);
Json read_json(const std::filesystem::path& path);
void write_json(const std::filesystem::path& path, const Json& j);

}  // namespace grl
