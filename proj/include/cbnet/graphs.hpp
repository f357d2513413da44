#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

namespace cbnet {

enum class EdgeKind : std::uint8_t { Absent, Undirected, Directed, Bidirected };

using Edge = std::pair<int, int>;  // (from, to), or (low, high) when unoriented

/// Graph whose vertex pairs each carry one edge state: absent, undirected,
/// directed (either way) or bidirected. No self-loops.
class MixedGraph {
public:
    MixedGraph() = default;
    explicit MixedGraph(int n);

    /// All pairs joined by undirected edges.
    static MixedGraph complete(int n);

    int size() const { return n_; }

    EdgeKind kind(int a, int b) const;
    bool adjacent(int a, int b) const { return mark(a, b) != Mark::None; }
    bool undirected(int a, int b) const { return mark(a, b) == Mark::Line; }
    /// True for a Directed edge from -> to (bidirected edges do not count).
    bool directed(int from, int to) const { return mark(from, to) == Mark::Out; }
    bool bidirected(int a, int b) const { return mark(a, b) == Mark::Both; }

    void remove_edge(int a, int b) { set(a, b, Mark::None, Mark::None); }
    void set_undirected(int a, int b) { set(a, b, Mark::Line, Mark::Line); }
    void set_directed(int from, int to) { set(from, to, Mark::Out, Mark::In); }
    void set_bidirected(int a, int b) { set(a, b, Mark::Both, Mark::Both); }

    /// Vertices joined to `a` by any non-absent edge, ascending.
    std::vector<int> neighbors(int a) const;
    int degree(int a) const;
    std::size_t edge_count() const;

    /// Non-absent pairs as (low, high), lexicographic.
    std::vector<Edge> pairs() const;
    std::vector<Edge> directed_edges() const;

    bool operator==(const MixedGraph&) const = default;

private:
    enum class Mark : std::uint8_t { None, Line, Out, In, Both };

    Mark mark(int a, int b) const;
    void set(int a, int b, Mark ab, Mark ba);

    int n_ = 0;
    std::vector<Mark> marks_;  // n x n, marks_[a*n+b] describes the pair seen from a
};

/// Per-vertex parent sets of an acyclic directed graph. Every mutator keeps
/// the graph acyclic or throws ArgumentError.
class Dag {
public:
    Dag() = default;
    explicit Dag(int n);
    explicit Dag(std::vector<std::vector<int>> parents);

    int size() const { return static_cast<int>(parents_.size()); }
    const std::vector<int>& parents(int i) const { return parents_.at(static_cast<std::size_t>(i)); }
    const std::vector<std::vector<int>>& parent_sets() const { return parents_; }

    bool has_edge(int parent, int child) const;
    void add_edge(int parent, int child);
    void set_parents(int child, std::vector<int> parents);

    /// (parent, child) pairs, lexicographic.
    std::vector<Edge> edges() const;
    std::size_t edge_count() const;

    bool operator==(const Dag&) const = default;

private:
    std::vector<std::vector<int>> parents_;  // each ascending, no duplicates
};

/// Vertices adjacent to a or b, excluding a and b themselves.
std::vector<int> adjacency_beyond(const MixedGraph& g, int a, int b);

/// Would adding from -> to close a cycle among the Directed edges of g?
bool would_create_cycle(const MixedGraph& g, int from, int to);
bool would_create_cycle(const Dag& d, int from, int to);

bool is_acyclic(std::span<const std::vector<int>> parents);

/// Kahn's algorithm, emitting the smallest available id first.
std::vector<int> topo_sort(const Dag& d);

int max_degree(const MixedGraph& g);

/// Undirected skeleton of a DAG.
MixedGraph skeleton(const Dag& d);

/// The DAG's edges as Directed edges of a mixed graph.
MixedGraph to_mixed(const Dag& d);

}  // namespace cbnet
