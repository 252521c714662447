#pragma once

#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "dyadic/halfplane.hpp"
#include "dyadic/symbol.hpp"

// Symbol file format: { "depth": D, "entries": [ { "node": "level:pos",
// "re": x, "im": y }, ... ] }. Omitted nodes are zero; duplicates are
// rejected; nodes outside the declared depth are rejected. Tile-coefficient
// files mirror the same layout node for node.

namespace dyadic {

struct SymbolFormatError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct SymbolDuplicateError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct SymbolNodeRangeError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline nlohmann::ordered_json symbol_to_json(const Symbol& b) {
    nlohmann::ordered_json j;
    j["depth"] = b.tree().depth();
    auto& entries = j["entries"] = nlohmann::ordered_json::array();
    for (std::size_t id = 0; id < b.size(); ++id) {
        const Complex v = b[id];
        if (v.real() == 0.0 && v.imag() == 0.0) continue;
        entries.push_back({{"node", to_string(b.tree().node(id))},
                           {"re", v.real()},
                           {"im", v.imag()}});
    }
    return j;
}

inline Symbol symbol_from_json(const nlohmann::json& j) {
    if (!j.is_object() || !j.contains("depth") || !j["depth"].is_number_unsigned())
        throw SymbolFormatError("symbol file: missing or invalid \"depth\"");
    const auto depth = j["depth"].get<std::uint64_t>();
    if (depth > 30) throw SymbolFormatError("symbol file: depth out of range");
    const Tree tree(static_cast<std::uint32_t>(depth));
    Symbol b(tree);
    std::vector<bool> seen(tree.node_count(), false);
    if (j.contains("entries")) {
        if (!j["entries"].is_array()) throw SymbolFormatError("symbol file: \"entries\" must be an array");
        for (const auto& e : j["entries"]) {
            if (!e.is_object() || !e.contains("node") || !e["node"].is_string())
                throw SymbolFormatError("symbol file: entry missing \"node\" string");
            DyadicIndex node;
            try {
                node = parse_index(e["node"].get<std::string>());
            } catch (const std::invalid_argument& err) {
                throw SymbolFormatError(std::string("symbol file: ") + err.what());
            }
            if (!tree.member(node))
                throw SymbolNodeRangeError("symbol file: node " + to_string(node) +
                                           " outside declared depth " + std::to_string(depth));
            const std::size_t id = tree.id(node);
            if (seen[id])
                throw SymbolDuplicateError("symbol file: duplicate node " + to_string(node));
            seen[id] = true;
            double re = 0.0, im = 0.0;
            if (e.contains("re")) {
                if (!e["re"].is_number()) throw SymbolFormatError("symbol file: \"re\" must be a number");
                re = e["re"].get<double>();
            }
            if (e.contains("im")) {
                if (!e["im"].is_number()) throw SymbolFormatError("symbol file: \"im\" must be a number");
                im = e["im"].get<double>();
            }
            b[id] = Complex{re, im};
        }
    }
    return b;
}

inline void save_symbol(const Symbol& b, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("save_symbol: cannot open " + path);
    out << symbol_to_json(b).dump(2) << '\n';
    if (!out) throw std::runtime_error("save_symbol: write failed for " + path);
}

inline Symbol load_symbol(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("load_symbol: cannot open " + path);
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& err) {
        throw SymbolFormatError(std::string("symbol file: ") + err.what());
    }
    return symbol_from_json(j);
}

inline nlohmann::ordered_json tiles_to_json(const TileCoefficients& f) {
    Symbol carrier(Tree(f.depth));
    for (std::size_t id = 0; id < f.values.size(); ++id) carrier[id] = f.values[id];
    return symbol_to_json(carrier);
}

inline TileCoefficients tiles_from_json(const nlohmann::json& j) {
    const Symbol carrier = symbol_from_json(j);
    TileCoefficients f = TileCoefficients::zero(carrier.tree().depth());
    for (std::size_t id = 0; id < f.values.size(); ++id) f.values[id] = carrier[id];
    return f;
}

}  // namespace dyadic
