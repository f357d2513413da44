#pragma once

#include <filesystem>
#include <istream>
#include <ostream>
#include <string>
#include <vector>

#include <cbnet/graphs.hpp>

namespace cbnet {

// The DOT subset written and read here:
//
//   digraph G {
//     a;
//     a -> b;
//     a -> b [dir=none];
//     a -> b [dir=both];
//   }
//
// Node lines list every vertex in id order so isolated vertices survive a
// round trip. Names made only of [A-Za-z0-9_] are written bare, anything
// else is double-quoted with '"' and '\' escaped.

void write_dot(std::ostream& out, const Dag& dag, const std::vector<std::string>& names);
void write_dot(std::ostream& out, const MixedGraph& g, const std::vector<std::string>& names);

struct DotGraph {
    std::vector<std::string> nodes;
    struct Line {
        std::string from;
        std::string to;
        EdgeKind kind = EdgeKind::Directed;
    };
    std::vector<Line> edges;
};

DotGraph parse_dot(std::istream& in);
DotGraph parse_dot(const std::filesystem::path& path);

/// Builds a Dag over `names` (ids follow `names`). Fails on unknown names,
/// undirected or bidirected edges, and cycles.
Dag dag_from_dot(const DotGraph& dot, const std::vector<std::string>& names);

}  // namespace cbnet
