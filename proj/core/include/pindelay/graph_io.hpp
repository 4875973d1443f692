#pragma once

#include <iosfwd>
#include <string>

#include "pindelay/graph.hpp"

namespace pindelay {

/// Graph JSON schema: {"n": <int>, "edges": [[i, j, w], ...]} where entry
/// [i, j, w] is a link j -> i (i listens to j) with weight w > 0. Node
/// indices are 0-based. Duplicate or out-of-range edges are rejected with a
/// ParseFailure naming the offending entry.
DirectedGraph read_graph_json(std::istream& in, const std::string& origin = "<stream>");
DirectedGraph load_graph(const std::string& path);

void write_graph_json(const DirectedGraph& g, std::ostream& out);
void save_graph(const DirectedGraph& g, const std::string& path);

}  // namespace pindelay
