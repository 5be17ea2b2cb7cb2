#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>

#include "lnu/graph.hpp"

namespace lnu {

// Edge-list text format: one "u<TAB>v" pair per line, 0-based ids. Lines
// starting with '#' are comments, except that "# nodes: N" declares the node
// count (needed for trailing isolated nodes). Without it, n = max id + 1
// unless the caller supplies n.

Graph read_edge_list(std::istream& in, std::optional<std::size_t> n = std::nullopt);
Graph read_edge_list(const std::filesystem::path& path, std::optional<std::size_t> n = std::nullopt);

void write_edge_list(std::ostream& out, const Graph& g);
void write_edge_list(const std::filesystem::path& path, const Graph& g);

}  // namespace lnu
