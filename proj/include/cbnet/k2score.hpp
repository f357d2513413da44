#pragma once

#include <optional>
#include <span>
#include <vector>

#include <cbnet/casedata.hpp>
#include <cbnet/graphs.hpp>

namespace cbnet {

/// Natural-log Bayesian score. Always <= 0; exactly 0 on an empty database.
using LogScore = double;

struct K2Config {
    /// Upper bound on |parents| per node; nullopt means unbounded.
    std::optional<int> max_parents;
};

/// ln g(i, parents): the log marginal likelihood of `target`'s column given
/// its parents under uniform Dirichlet priors,
///
///   sum_j [ lnG(r) - lnG(N_ij + r) + sum_k lnG(N_ijk + 1) ]
///
/// over observed parent instantiations j. Unobserved ones contribute 0.
LogScore log_g(const CaseDatabase& db, int target, std::span<const int> parents);

/// Sum of log_g over all nodes; the uniform structure prior is dropped.
LogScore log_network_score(const CaseDatabase& db, const Dag& dag);

/// Result of one greedy parent search.
struct ParentSearch {
    std::vector<int> parents;       // ascending
    LogScore score = 0.0;           // log_g of the final parent set
    std::vector<LogScore> accepted; // log_g after each accepted addition, starting with the empty set
};

/// Greedy K2 parent search over `candidates`. Adds the candidate with the
/// strictly best improvement; ties go to the candidate listed first.
ParentSearch k2_search(const CaseDatabase& db, int target, std::span<const int> candidates,
                       const K2Config& cfg = {});

std::vector<int> k2_parents(const CaseDatabase& db, int target, std::span<const int> predecessors,
                            const K2Config& cfg = {});

/// K2 over a total ordering: each node may take parents among its predecessors.
Dag k2(const CaseDatabase& db, std::span<const int> ordering, const K2Config& cfg = {});

/// K2 where node i may take parents only from allowed[i] (tried in ascending
/// id order). The candidate graph must be acyclic.
Dag k2_constrained(const CaseDatabase& db, std::span<const std::vector<int>> allowed, const K2Config& cfg = {});

}  // namespace cbnet
