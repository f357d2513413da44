#include <cbnet/k2score.hpp>

#include <algorithm>
#include <cmath>
#include <string>

#include <cbnet/error.hpp>

namespace cbnet {

namespace {

double ln_gamma(double x) { return std::lgamma(x); }

void check_config(const K2Config& cfg) {
    if (cfg.max_parents && *cfg.max_parents < 1) throw ArgumentError("max_parents must be at least 1");
}

}  // namespace

LogScore log_g(const CaseDatabase& db, int target, std::span<const int> parents) {
    auto table = cached_contingency(db, target, parents);
    const double r = db.cardinality(target);
    const double ln_gamma_r = ln_gamma(r);
    LogScore score = 0.0;
    for (const auto& stratum : table->strata) {
        score += ln_gamma_r - ln_gamma(static_cast<double>(stratum.total) + r);
        for (auto n : stratum.counts) score += ln_gamma(static_cast<double>(n) + 1.0);
    }
    return score;
}

LogScore log_network_score(const CaseDatabase& db, const Dag& dag) {
    if (static_cast<std::size_t>(dag.size()) != db.num_variables())
        throw ArgumentError("structure has " + std::to_string(dag.size()) + " nodes but the database has " +
                            std::to_string(db.num_variables()) + " variables");
    LogScore total = 0.0;
    for (int i = 0; i < dag.size(); ++i) total += log_g(db, i, dag.parents(i));
    return total;
}

ParentSearch k2_search(const CaseDatabase& db, int target, std::span<const int> candidates, const K2Config& cfg) {
    check_config(cfg);
    if (std::find(candidates.begin(), candidates.end(), target) != candidates.end())
        throw ArgumentError("node " + std::to_string(target) + " is among its own candidate parents");

    ParentSearch search;
    search.score = log_g(db, target, {});
    search.accepted.push_back(search.score);
    std::vector<int> remaining(candidates.begin(), candidates.end());
    const auto limit = cfg.max_parents ? static_cast<std::size_t>(*cfg.max_parents) : remaining.size();

    while (search.parents.size() < limit && !remaining.empty()) {
        std::size_t best = remaining.size();
        LogScore best_score = search.score;
        std::vector<int> trial = search.parents;
        trial.push_back(0);
        for (std::size_t k = 0; k < remaining.size(); ++k) {
            trial.back() = remaining[k];
            LogScore s = log_g(db, target, trial);
            if (s > best_score) {
                best_score = s;
                best = k;
            }
        }
        if (best == remaining.size()) break;
        search.parents.push_back(remaining[best]);
        remaining.erase(remaining.begin() + static_cast<std::ptrdiff_t>(best));
        search.score = best_score;
        search.accepted.push_back(best_score);
    }
    std::sort(search.parents.begin(), search.parents.end());
    return search;
}

std::vector<int> k2_parents(const CaseDatabase& db, int target, std::span<const int> predecessors,
                            const K2Config& cfg) {
    return k2_search(db, target, predecessors, cfg).parents;
}

Dag k2(const CaseDatabase& db, std::span<const int> ordering, const K2Config& cfg) {
    const auto n = db.num_variables();
    if (ordering.size() != n) throw ArgumentError("ordering does not cover every variable exactly once");
    std::vector<char> seen(n, 0);
    for (int v : ordering) {
        if (v < 0 || static_cast<std::size_t>(v) >= n || seen[static_cast<std::size_t>(v)])
            throw ArgumentError("ordering is not a permutation of the variable ids");
        seen[static_cast<std::size_t>(v)] = 1;
    }

    std::vector<std::vector<int>> parents(n);
    for (std::size_t pos = 0; pos < n; ++pos)
        parents[static_cast<std::size_t>(ordering[pos])] = k2_parents(db, ordering[pos], ordering.first(pos), cfg);
    return Dag(std::move(parents));
}

Dag k2_constrained(const CaseDatabase& db, std::span<const std::vector<int>> allowed, const K2Config& cfg) {
    const auto n = db.num_variables();
    if (allowed.size() != n) throw ArgumentError("need one candidate set per variable");
    std::vector<std::vector<int>> candidates(allowed.begin(), allowed.end());
    for (auto& c : candidates) {
        std::sort(c.begin(), c.end());
        c.erase(std::unique(c.begin(), c.end()), c.end());
    }
    if (!is_acyclic(candidates)) throw ArgumentError("candidate-parent graph contains a cycle");

    std::vector<std::vector<int>> parents(n);
    for (std::size_t i = 0; i < n; ++i) parents[i] = k2_parents(db, static_cast<int>(i), candidates[i], cfg);
    return Dag(std::move(parents));
}

}  // namespace cbnet
