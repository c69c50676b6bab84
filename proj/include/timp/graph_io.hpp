#pragma once

#include <iosfwd>
#include <string>

#include "timp/graph.hpp"

namespace timp {

enum class GraphFormat { edge_list, dimacs };

// Formats:
//   edge list  -- header "n m", then m lines "u v", 0-based
//   DIMACS     -- "p edge n m" header, "e u v" lines, 1-based, "c" comments
// read_graph auto-detects by the header token.
Graph read_graph(std::istream& in);
Graph read_graph_file(const std::string& path);

void write_graph(std::ostream& out, const Graph& g, GraphFormat f = GraphFormat::edge_list);
void write_graph_file(const std::string& path, const Graph& g,
                      GraphFormat f = GraphFormat::edge_list);

} // namespace timp
