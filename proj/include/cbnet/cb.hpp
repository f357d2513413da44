#pragma once

#include <map>
#include <optional>
#include <ostream>
#include <span>
#include <string_view>
#include <vector>

#include <cbnet/casedata.hpp>
#include <cbnet/citest.hpp>
#include <cbnet/graphs.hpp>
#include <cbnet/k2score.hpp>

namespace cbnet {

/// Separating sets keyed by unordered vertex pair.
class SepsetTable {
public:
    void store(int a, int b, std::vector<int> sepset);
    const std::vector<int>* find(int a, int b) const;
    bool contains(int a, int b) const { return find(a, b) != nullptr; }
    std::size_t size() const { return entries_.size(); }

    bool operator==(const SepsetTable&) const = default;

private:
    std::map<Edge, std::vector<int>> entries_;
};

enum class OrderingMode { Total, Partial };

struct LearnConfig {
    double alpha = 0.1;
    int degree_bound = 15;
    std::optional<int> max_parents;
    OrderingMode mode = OrderingMode::Total;
    /// Highest CI order tried; nullopt means max(n - 2, 0).
    std::optional<int> max_ord;
    /// Score the orientation heuristic against the parent sets extracted from
    /// the oriented pattern only, ignoring orientations committed earlier in
    /// the same pass.
    bool frozen_orientation_parents = false;
};

enum class Termination { ScoreDropped, SkeletonExhausted, OrdCeiling };

std::string_view to_string(Termination t);
std::string_view to_string(OrderingMode m);

struct Iteration {
    int ord = 0;
    std::size_t skeleton_edges = 0;
    LogScore log_score = 0.0;
    bool accepted = false;
};

struct CBResult {
    Dag parents;
    LogScore log_score = 0.0;
    std::vector<Iteration> iterations;
    Termination termination = Termination::SkeletonExhausted;
    /// Highest order at which CI tests were run.
    int max_ord_used = 0;
    /// G1 at termination.
    MixedGraph skeleton;
    SepsetTable sepsets;
};

struct SkeletonPass {
    bool all_pairs_small = false;
    std::size_t removed = 0;
};

/// One pass of CI-based edge removal at conditioning-set size `ord`. Pairs
/// are visited in lexicographic order, conditioning subsets of the pair's
/// joint neighbourhood in lexicographic order; a removal takes effect
/// immediately. `skeleton` must hold only undirected edges.
SkeletonPass refine_skeleton(MixedGraph& skeleton, SepsetTable& sepsets, int ord, const CiTest& ci);

/// Repeats refine_skeleton from ord 0 until no adjacent pair has a large
/// enough neighbourhood or `max_ord` is passed.
MixedGraph discover_skeleton(int n, const CiTest& ci, SepsetTable* sepsets = nullptr,
                             std::optional<int> max_ord = std::nullopt);

/// Orient a -> c <- b for every separated pair (a, b) and common neighbour c
/// outside S_ab. An edge already oriented the other way becomes bidirected.
MixedGraph orient_colliders(MixedGraph g, const SepsetTable& sepsets);

/// Apply the four orientation rules and the bidirected rule to a fixpoint.
MixedGraph propagate_orientations(MixedGraph g);

/// parents[i] = { j : j -> i is Directed in g }.
std::vector<std::vector<int>> directed_parents(const MixedGraph& g);

/// Orient every remaining undirected or bidirected edge by comparing
/// log g(i, pi_i) + log g(j, pi_j + i) against the mirrored sum.
Dag resolve_remaining(const MixedGraph& g, std::vector<std::vector<int>> parents, const CaseDatabase& db,
                      bool frozen_parents = false);

CBResult cb_learn(const CaseDatabase& db, const LearnConfig& cfg, const CiTest& ci);

/// cb_learn with the chi-square test at cfg.alpha.
CBResult cb_learn(const CaseDatabase& db, const LearnConfig& cfg = {});

/// "ord<TAB>edges<TAB>log_score<TAB>accepted|rejected" per iteration.
void write_trace(std::ostream& out, const CBResult& result);

}  // namespace cbnet
