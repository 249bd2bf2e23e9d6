#pragma once

#include <iosfwd>
#include <string>

#include "depnet/network.hpp"

namespace depnet {

/// Model file: versioned JSON
///   {"format": "depnet-model", "version": 1, "cardinalities": [...],
///    "weights": [...], "nodes": [{"i":0, "ops":[{"op":"split","y":0,"j":1},
///    ...], "table": [[...], ...]}, ...]}
/// Numbers are written with 17 significant digits so loads are bit-exact.
/// Loading re-validates every invariant; violations are ModelErrors.
void write_network_json(std::ostream& os, const DependencyNetwork& network);
std::string network_to_json(const DependencyNetwork& network);
DependencyNetwork read_network_json(std::istream& in);
DependencyNetwork network_from_json(const std::string& text);

void save_network(const std::string& path, const DependencyNetwork& network);
DependencyNetwork load_network(const std::string& path);

}  // namespace depnet
