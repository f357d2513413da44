#include <cbnet/cb.hpp>

#include <algorithm>
#include <cstdio>
#include <limits>
#include <string>

#include <cbnet/error.hpp>

namespace cbnet {

namespace {

Edge unordered(int a, int b) { return a < b ? Edge{a, b} : Edge{b, a}; }

void require_acyclic(const MixedGraph& g, const char* stage) {
    std::vector<std::vector<int>> parents = directed_parents(g);
    if (!is_acyclic(parents)) throw InvariantError(std::string("directed cycle after ") + stage);
}

// Calls visit(subset) for each size-k subset of `pool` in lexicographic
// order until visit returns true. Returns whether any call did.
template <typename Visit>
bool for_each_subset(const std::vector<int>& pool, int k, Visit visit) {
    const int n = static_cast<int>(pool.size());
    if (k > n) return false;
    std::vector<int> idx(static_cast<std::size_t>(k));
    for (int i = 0; i < k; ++i) idx[static_cast<std::size_t>(i)] = i;
    std::vector<int> subset(static_cast<std::size_t>(k));
    while (true) {
        for (int i = 0; i < k; ++i) subset[static_cast<std::size_t>(i)] = pool[static_cast<std::size_t>(idx[static_cast<std::size_t>(i)])];
        if (visit(subset)) return true;
        int i = k - 1;
        while (i >= 0 && idx[static_cast<std::size_t>(i)] == n - k + i) --i;
        if (i < 0) return false;
        ++idx[static_cast<std::size_t>(i)];
        for (int j = i + 1; j < k; ++j) idx[static_cast<std::size_t>(j)] = idx[static_cast<std::size_t>(j - 1)] + 1;
    }
}

// Tries to orient from -> to. Fails on a non-undirected edge or when the
// orientation would close a directed cycle.
bool direct(MixedGraph& g, int from, int to) {
    if (!g.undirected(from, to) || would_create_cycle(g, from, to)) return false;
    g.set_directed(from, to);
    return true;
}

// One collider arrowhead x -> c.
void orient_into(MixedGraph& g, int x, int c) {
    if (g.undirected(x, c)) {
        if (!would_create_cycle(g, x, c)) g.set_directed(x, c);
    } else if (g.directed(c, x)) {
        g.set_bidirected(x, c);
    }
}

// Rule 1: a -> b, b - c, a and c non-adjacent => b -> c.
bool rule1(MixedGraph& g) {
    bool changed = false;
    const int n = g.size();
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) {
            if (a == b || !g.directed(a, b)) continue;
            for (int c = 0; c < n; ++c) {
                if (c == a || c == b || !g.undirected(b, c) || g.adjacent(a, c)) continue;
                changed |= direct(g, b, c);
            }
        }
    return changed;
}

// Rule 2: a -> b, b -> c, a - c => a -> c.
bool rule2(MixedGraph& g) {
    bool changed = false;
    const int n = g.size();
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) {
            if (a == b || !g.directed(a, b)) continue;
            for (int c = 0; c < n; ++c) {
                if (c == a || c == b || !g.directed(b, c) || !g.undirected(a, c)) continue;
                changed |= direct(g, a, c);
            }
        }
    return changed;
}

// Rule 3: a - b, b - c, b - d, a -> d, c -> d => b -> d.
bool rule3(MixedGraph& g) {
    bool changed = false;
    const int n = g.size();
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) {
            if (a == b || !g.undirected(a, b)) continue;
            for (int c = 0; c < n; ++c) {
                if (c == a || c == b || !g.undirected(b, c)) continue;
                for (int d = 0; d < n; ++d) {
                    if (d == a || d == b || d == c) continue;
                    if (g.undirected(b, d) && g.directed(a, d) && g.directed(c, d)) changed |= direct(g, b, d);
                }
            }
        }
    return changed;
}

// Rule 4: a - b, b - c, a - c, c - d, d -> a => a -> b and c -> b.
bool rule4(MixedGraph& g) {
    bool changed = false;
    const int n = g.size();
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) {
            if (a == b || !g.undirected(a, b)) continue;
            for (int c = 0; c < n; ++c) {
                if (c == a || c == b || !g.undirected(b, c) || !g.undirected(a, c)) continue;
                for (int d = 0; d < n; ++d) {
                    if (d == a || d == b || d == c) continue;
                    if (!g.undirected(c, d) || !g.directed(d, a)) continue;
                    changed |= direct(g, a, b);
                    changed |= direct(g, c, b);
                    // a - b may no longer hold; later d cannot fire for this (a, b, c).
                    if (!g.undirected(a, b)) break;
                }
                if (!g.undirected(a, b)) break;
            }
        }
    return changed;
}

// a -> b, b -> c, a <-> c => a -> c.
bool resolve_bidirected(MixedGraph& g) {
    bool changed = false;
    const int n = g.size();
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) {
            if (a == b || !g.directed(a, b)) continue;
            for (int c = 0; c < n; ++c) {
                if (c == a || c == b || !g.directed(b, c) || !g.bidirected(a, c)) continue;
                if (would_create_cycle(g, a, c)) continue;
                g.set_directed(a, c);
                changed = true;
            }
        }
    return changed;
}

std::vector<int> with(std::vector<int> set, int v) {
    set.insert(std::lower_bound(set.begin(), set.end(), v), v);
    return set;
}

}  // namespace

void SepsetTable::store(int a, int b, std::vector<int> sepset) {
    if (a == b) throw ArgumentError("sepset needs two distinct vertices");
    std::sort(sepset.begin(), sepset.end());
    for (int s : sepset)
        if (s == a || s == b) throw ArgumentError("sepset contains one of its own endpoints");
    entries_[unordered(a, b)] = std::move(sepset);
}

const std::vector<int>* SepsetTable::find(int a, int b) const {
    auto it = entries_.find(unordered(a, b));
    return it == entries_.end() ? nullptr : &it->second;
}

std::string_view to_string(Termination t) {
    switch (t) {
        case Termination::ScoreDropped: return "score-dropped";
        case Termination::SkeletonExhausted: return "skeleton-exhausted";
        case Termination::OrdCeiling: return "ord-ceiling";
    }
    return "unknown";
}

std::string_view to_string(OrderingMode m) { return m == OrderingMode::Total ? "total" : "partial"; }

SkeletonPass refine_skeleton(MixedGraph& skeleton, SepsetTable& sepsets, int ord, const CiTest& ci) {
    if (ord < 0) throw ArgumentError("ord must be non-negative");
    const int n = skeleton.size();
    for (auto [a, b] : skeleton.pairs())
        if (!skeleton.undirected(a, b)) throw ArgumentError("skeleton refinement needs an undirected graph");

    SkeletonPass pass;
    for (int a = 0; a < n; ++a) {
        for (int b = a + 1; b < n; ++b) {
            if (!skeleton.adjacent(a, b)) continue;
            auto beyond = adjacency_beyond(skeleton, a, b);
            if (static_cast<int>(beyond.size()) < ord) continue;
            for_each_subset(beyond, ord, [&](const std::vector<int>& s) {
                if (!ci(a, b, s)) return false;
                skeleton.remove_edge(a, b);
                sepsets.store(a, b, s);
                ++pass.removed;
                return true;
            });
        }
    }

    pass.all_pairs_small = true;
    for (auto [a, b] : skeleton.pairs())
        if (static_cast<int>(adjacency_beyond(skeleton, a, b).size()) >= ord) {
            pass.all_pairs_small = false;
            break;
        }
    return pass;
}

MixedGraph discover_skeleton(int n, const CiTest& ci, SepsetTable* sepsets, std::optional<int> max_ord) {
    auto g = MixedGraph::complete(n);
    SepsetTable local;
    SepsetTable& table = sepsets ? *sepsets : local;
    const int ceiling = max_ord.value_or(std::max(n - 2, 0));
    for (int ord = 0; ord <= ceiling; ++ord)
        if (refine_skeleton(g, table, ord, ci).all_pairs_small) break;
    return g;
}

MixedGraph orient_colliders(MixedGraph g, const SepsetTable& sepsets) {
    const int n = g.size();
    for (int a = 0; a < n; ++a) {
        for (int b = a + 1; b < n; ++b) {
            if (g.adjacent(a, b)) continue;
            const auto* sep = sepsets.find(a, b);
            if (!sep) continue;
            for (int c = 0; c < n; ++c) {
                if (c == a || c == b || !g.adjacent(a, c) || !g.adjacent(b, c)) continue;
                if (std::binary_search(sep->begin(), sep->end(), c)) continue;
                orient_into(g, a, c);
                orient_into(g, b, c);
            }
        }
    }
    return g;
}

MixedGraph propagate_orientations(MixedGraph g) {
    while (true) {
        bool changed = false;
        changed |= rule1(g);
        changed |= rule2(g);
        changed |= rule3(g);
        changed |= rule4(g);
        changed |= resolve_bidirected(g);
        if (!changed) break;
    }
    return g;
}

std::vector<std::vector<int>> directed_parents(const MixedGraph& g) {
    std::vector<std::vector<int>> parents(static_cast<std::size_t>(g.size()));
    for (auto [from, to] : g.directed_edges()) parents[static_cast<std::size_t>(to)].push_back(from);
    for (auto& ps : parents) std::sort(ps.begin(), ps.end());
    return parents;
}

Dag resolve_remaining(const MixedGraph& g, std::vector<std::vector<int>> parents, const CaseDatabase& db,
                      bool frozen_parents) {
    if (static_cast<std::size_t>(g.size()) != db.num_variables() || parents.size() != db.num_variables())
        throw ArgumentError("graph, parent sets and database disagree on the number of variables");
    const auto frozen = parents;
    Dag dag = [&] {
        try {
            return Dag(std::move(parents));
        } catch (const ArgumentError& e) {
            throw InvariantError(std::string("oriented pattern is not acyclic: ") + e.what());
        }
    }();

    for (auto [i, j] : g.pairs()) {
        const auto kind = g.kind(i, j);
        if (kind != EdgeKind::Undirected && kind != EdgeKind::Bidirected) continue;
        const auto& pi = frozen_parents ? frozen[static_cast<std::size_t>(i)] : dag.parents(i);
        const auto& pj = frozen_parents ? frozen[static_cast<std::size_t>(j)] : dag.parents(j);
        const LogScore i_val = log_g(db, i, pi) + log_g(db, j, with(pj, i));
        const LogScore j_val = log_g(db, j, pj) + log_g(db, i, with(pi, j));

        int from = i, to = j;
        if (j_val > i_val) std::swap(from, to);
        if (would_create_cycle(dag, from, to)) std::swap(from, to);
        if (would_create_cycle(dag, from, to))
            throw InvariantError("both orientations of " + std::to_string(i) + " - " + std::to_string(j) +
                                 " close a cycle");
        dag.add_edge(from, to);
    }
    return dag;
}

CBResult cb_learn(const CaseDatabase& db, const LearnConfig& cfg, const CiTest& ci) {
    const int n = static_cast<int>(db.num_variables());
    if (n == 0) throw ArgumentError("cannot learn a structure over zero variables");
    if (cfg.degree_bound < 1) throw ArgumentError("degree bound must be positive");
    if (cfg.max_parents && *cfg.max_parents < 1) throw ArgumentError("max_parents must be positive");
    const int ceiling = std::max(n - 2, 0);
    const int max_ord = cfg.max_ord.value_or(ceiling);
    if (max_ord < 0 || max_ord > ceiling)
        throw ArgumentError("max_ord must lie in [0, " + std::to_string(ceiling) + "]");
    const K2Config k2cfg{cfg.max_parents};

    CBResult result;
    result.parents = Dag(n);
    result.log_score = -std::numeric_limits<double>::infinity();
    MixedGraph g1 = MixedGraph::complete(n);
    std::optional<MixedGraph> last_scored;
    std::size_t previous_edges = g1.edge_count();

    int ord = 0;
    while (true) {
        if (ord > max_ord) {
            result.termination = Termination::OrdCeiling;
            break;
        }
        auto pass = refine_skeleton(g1, result.sepsets, ord, ci);
        result.max_ord_used = ord;
        if (g1.edge_count() > previous_edges) throw InvariantError("skeleton gained edges");
        previous_edges = g1.edge_count();

        if (pass.all_pairs_small && last_scored && *last_scored == g1) {
            result.termination = Termination::SkeletonExhausted;
            break;
        }
        if (!pass.all_pairs_small && ord < max_ord && max_degree(g1) > cfg.degree_bound) {
            ++ord;
            continue;
        }

        auto pattern = orient_colliders(g1, result.sepsets);
        require_acyclic(pattern, "collider orientation");
        pattern = propagate_orientations(std::move(pattern));
        require_acyclic(pattern, "rule propagation");
        Dag oriented = resolve_remaining(pattern, directed_parents(pattern), db, cfg.frozen_orientation_parents);

        Dag learned;
        if (cfg.mode == OrderingMode::Total) {
            auto order = topo_sort(oriented);
            learned = k2(db, order, k2cfg);
            std::vector<int> position(static_cast<std::size_t>(n));
            for (int k = 0; k < n; ++k) position[static_cast<std::size_t>(order[static_cast<std::size_t>(k)])] = k;
            for (auto [p, c] : learned.edges())
                if (position[static_cast<std::size_t>(p)] > position[static_cast<std::size_t>(c)])
                    throw InvariantError("K2 chose a parent that follows its child in the ordering");
        } else {
            learned = k2_constrained(db, oriented.parent_sets(), k2cfg);
            for (auto [p, c] : learned.edges())
                if (!oriented.has_edge(p, c)) throw InvariantError("K2 chose a parent outside its allowed set");
        }
        if (!is_acyclic(learned.parent_sets())) throw InvariantError("K2 output is cyclic");

        const LogScore score = log_network_score(db, learned);
        last_scored = g1;
        Iteration it{ord, g1.edge_count(), score, score > result.log_score};
        result.iterations.push_back(it);
        if (!it.accepted) {
            result.termination = Termination::ScoreDropped;
            break;
        }
        result.parents = std::move(learned);
        result.log_score = score;
        if (pass.all_pairs_small) {
            result.termination = Termination::SkeletonExhausted;
            break;
        }
        ++ord;
    }
    result.skeleton = std::move(g1);
    return result;
}

CBResult cb_learn(const CaseDatabase& db, const LearnConfig& cfg) {
    return cb_learn(db, cfg, chi_square_ci(db, cfg.alpha));
}

void write_trace(std::ostream& out, const CBResult& result) {
    char score[64];
    for (const auto& it : result.iterations) {
        std::snprintf(score, sizeof score, "%.6f", it.log_score);
        out << it.ord << '\t' << it.skeleton_edges << '\t' << score << '\t' << (it.accepted ? "accepted" : "rejected")
            << '\n';
    }
}

}  // namespace cbnet
