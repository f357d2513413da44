#include <cbnet/graphs.hpp>

#include <algorithm>
#include <functional>
#include <queue>
#include <string>

#include <cbnet/error.hpp>

namespace cbnet {

namespace {

void check_vertex(int n, int v) {
    if (v < 0 || v >= n) throw ArgumentError("vertex " + std::to_string(v) + " out of range");
}

// Is there a directed path start -> ... -> goal using edges child -> parents?
// Walks backwards from goal over parent lists.
template <typename ParentsOf>
bool reaches(int n, int start, int goal, ParentsOf parents_of) {
    if (start == goal) return true;
    std::vector<char> seen(static_cast<std::size_t>(n), 0);
    std::vector<int> stack{goal};
    seen[static_cast<std::size_t>(goal)] = 1;
    while (!stack.empty()) {
        int v = stack.back();
        stack.pop_back();
        for (int p : parents_of(v)) {
            if (p == start) return true;
            if (!seen[static_cast<std::size_t>(p)]) {
                seen[static_cast<std::size_t>(p)] = 1;
                stack.push_back(p);
            }
        }
    }
    return false;
}

}  // namespace

MixedGraph::MixedGraph(int n) : n_(n), marks_(static_cast<std::size_t>(n) * static_cast<std::size_t>(n), Mark::None) {
    if (n < 0) throw ArgumentError("negative vertex count");
}

MixedGraph MixedGraph::complete(int n) {
    MixedGraph g(n);
    for (int a = 0; a < n; ++a)
        for (int b = a + 1; b < n; ++b) g.set_undirected(a, b);
    return g;
}

MixedGraph::Mark MixedGraph::mark(int a, int b) const {
    check_vertex(n_, a);
    check_vertex(n_, b);
    return marks_[static_cast<std::size_t>(a * n_ + b)];
}

void MixedGraph::set(int a, int b, Mark ab, Mark ba) {
    check_vertex(n_, a);
    check_vertex(n_, b);
    if (a == b) throw ArgumentError("self-loop on vertex " + std::to_string(a));
    marks_[static_cast<std::size_t>(a * n_ + b)] = ab;
    marks_[static_cast<std::size_t>(b * n_ + a)] = ba;
}

EdgeKind MixedGraph::kind(int a, int b) const {
    switch (mark(a, b)) {
        case Mark::None: return EdgeKind::Absent;
        case Mark::Line: return EdgeKind::Undirected;
        case Mark::Both: return EdgeKind::Bidirected;
        default: return EdgeKind::Directed;
    }
}

std::vector<int> MixedGraph::neighbors(int a) const {
    check_vertex(n_, a);
    std::vector<int> out;
    for (int b = 0; b < n_; ++b)
        if (marks_[static_cast<std::size_t>(a * n_ + b)] != Mark::None) out.push_back(b);
    return out;
}

int MixedGraph::degree(int a) const { return static_cast<int>(neighbors(a).size()); }

std::size_t MixedGraph::edge_count() const {
    auto nonzero = std::count_if(marks_.begin(), marks_.end(), [](Mark m) { return m != Mark::None; });
    return static_cast<std::size_t>(nonzero) / 2;
}

std::vector<Edge> MixedGraph::pairs() const {
    std::vector<Edge> out;
    for (int a = 0; a < n_; ++a)
        for (int b = a + 1; b < n_; ++b)
            if (adjacent(a, b)) out.emplace_back(a, b);
    return out;
}

std::vector<Edge> MixedGraph::directed_edges() const {
    std::vector<Edge> out;
    for (int a = 0; a < n_; ++a)
        for (int b = 0; b < n_; ++b)
            if (a != b && directed(a, b)) out.emplace_back(a, b);
    return out;
}

Dag::Dag(int n) {
    if (n < 0) throw ArgumentError("negative vertex count");
    parents_.resize(static_cast<std::size_t>(n));
}

Dag::Dag(std::vector<std::vector<int>> parents) : parents_(std::move(parents)) {
    const int n = size();
    for (int i = 0; i < n; ++i) {
        auto& ps = parents_[static_cast<std::size_t>(i)];
        std::sort(ps.begin(), ps.end());
        ps.erase(std::unique(ps.begin(), ps.end()), ps.end());
        for (int p : ps) {
            check_vertex(n, p);
            if (p == i) throw ArgumentError("vertex " + std::to_string(i) + " is its own parent");
        }
    }
    if (!is_acyclic(parents_)) throw ArgumentError("parent sets contain a directed cycle");
}

bool Dag::has_edge(int parent, int child) const {
    const auto& ps = parents(child);
    return std::binary_search(ps.begin(), ps.end(), parent);
}

void Dag::add_edge(int parent, int child) {
    check_vertex(size(), parent);
    check_vertex(size(), child);
    if (has_edge(parent, child)) return;
    if (would_create_cycle(*this, parent, child))
        throw ArgumentError("edge " + std::to_string(parent) + " -> " + std::to_string(child) + " closes a cycle");
    auto& ps = parents_[static_cast<std::size_t>(child)];
    ps.insert(std::lower_bound(ps.begin(), ps.end(), parent), parent);
}

void Dag::set_parents(int child, std::vector<int> parents) {
    check_vertex(size(), child);
    auto saved = parents_;
    parents_[static_cast<std::size_t>(child)].clear();
    try {
        for (int p : parents) add_edge(p, child);
    } catch (...) {
        parents_ = std::move(saved);
        throw;
    }
}

std::vector<Edge> Dag::edges() const {
    std::vector<Edge> out;
    for (int c = 0; c < size(); ++c)
        for (int p : parents(c)) out.emplace_back(p, c);
    std::sort(out.begin(), out.end());
    return out;
}

std::size_t Dag::edge_count() const {
    std::size_t k = 0;
    for (const auto& ps : parents_) k += ps.size();
    return k;
}

std::vector<int> adjacency_beyond(const MixedGraph& g, int a, int b) {
    if (a == b) throw ArgumentError("adjacency_beyond needs two distinct vertices");
    std::vector<int> out;
    for (int v = 0; v < g.size(); ++v) {
        if (v == a || v == b) continue;
        if (g.adjacent(a, v) || g.adjacent(b, v)) out.push_back(v);
    }
    return out;
}

bool would_create_cycle(const MixedGraph& g, int from, int to) {
    check_vertex(g.size(), from);
    check_vertex(g.size(), to);
    // Adding from -> to closes a cycle iff to already reaches from.
    return reaches(g.size(), to, from, [&g](int v) {
        std::vector<int> ps;
        for (int p = 0; p < g.size(); ++p)
            if (p != v && g.directed(p, v)) ps.push_back(p);
        return ps;
    });
}

bool would_create_cycle(const Dag& d, int from, int to) {
    check_vertex(d.size(), from);
    check_vertex(d.size(), to);
    return reaches(d.size(), to, from, [&d](int v) -> const std::vector<int>& { return d.parents(v); });
}

bool is_acyclic(std::span<const std::vector<int>> parents) {
    const auto n = parents.size();
    std::vector<int> pending(n, 0);
    std::vector<std::vector<int>> children(n);
    for (std::size_t c = 0; c < n; ++c) {
        for (int p : parents[c]) {
            if (p < 0 || static_cast<std::size_t>(p) >= n) return false;
            children[static_cast<std::size_t>(p)].push_back(static_cast<int>(c));
            ++pending[c];
        }
    }
    std::vector<int> ready;
    for (std::size_t v = 0; v < n; ++v)
        if (pending[v] == 0) ready.push_back(static_cast<int>(v));
    std::size_t emitted = 0;
    while (!ready.empty()) {
        int v = ready.back();
        ready.pop_back();
        ++emitted;
        for (int c : children[static_cast<std::size_t>(v)])
            if (--pending[static_cast<std::size_t>(c)] == 0) ready.push_back(c);
    }
    return emitted == n;
}

std::vector<int> topo_sort(const Dag& d) {
    const auto n = static_cast<std::size_t>(d.size());
    std::vector<int> pending(n, 0);
    std::vector<std::vector<int>> children(n);
    for (int c = 0; c < d.size(); ++c)
        for (int p : d.parents(c)) {
            children[static_cast<std::size_t>(p)].push_back(c);
            ++pending[static_cast<std::size_t>(c)];
        }
    std::priority_queue<int, std::vector<int>, std::greater<>> ready;
    for (std::size_t v = 0; v < n; ++v)
        if (pending[v] == 0) ready.push(static_cast<int>(v));
    std::vector<int> order;
    order.reserve(n);
    while (!ready.empty()) {
        int v = ready.top();
        ready.pop();
        order.push_back(v);
        for (int c : children[static_cast<std::size_t>(v)])
            if (--pending[static_cast<std::size_t>(c)] == 0) ready.push(c);
    }
    if (order.size() != n) throw InvariantError("topological sort found a directed cycle");
    return order;
}

int max_degree(const MixedGraph& g) {
    int best = 0;
    for (int v = 0; v < g.size(); ++v) best = std::max(best, g.degree(v));
    return best;
}

MixedGraph skeleton(const Dag& d) {
    MixedGraph g(d.size());
    for (auto [p, c] : d.edges()) g.set_undirected(p, c);
    return g;
}

MixedGraph to_mixed(const Dag& d) {
    MixedGraph g(d.size());
    for (auto [p, c] : d.edges()) g.set_directed(p, c);
    return g;
}

}  // namespace cbnet
