#pragma once

#include <cstdint>
#include <filesystem>
#include <istream>
#include <ostream>
#include <string>
#include <vector>

#include <cbnet/casedata.hpp>
#include <cbnet/graphs.hpp>

namespace cbnet {

/// A discrete Bayesian network.
///
/// CPT rows for node i are indexed by the mixed-radix number of its parents'
/// values, parents in ascending id order, lowest id most significant. Each
/// row holds one probability per value of node i.
struct BayesNet {
    Dag dag;
    std::vector<std::string> names;
    std::vector<std::vector<std::string>> values;
    std::vector<std::vector<std::vector<double>>> cpts;

    int size() const { return dag.size(); }
    int cardinality(int i) const { return static_cast<int>(values.at(static_cast<std::size_t>(i)).size()); }

    /// Throws ArgumentError describing the first violated invariant.
    void validate() const;

    bool operator==(const BayesNet&) const = default;
};

/// Row index into cpts[node] for the given full assignment.
std::size_t cpt_row(const BayesNet& bn, int node, const std::vector<int>& assignment);

/// Draws m independent cases, visiting nodes in topological order.
///
/// Uses std::mt19937_64 seeded with `seed`; uniforms are taken from the top
/// 53 bits of each draw, so a seed reproduces the same database everywhere.
CaseDatabase forward_sample(const BayesNet& bn, std::size_t m, std::uint64_t seed);

struct StructuralDiff {
    std::vector<Edge> missing;   // gold edges absent from learned
    std::vector<Edge> extra;     // learned edges on pairs unconnected in gold
    std::vector<Edge> reversed;  // gold edges learned the other way round (gold orientation)
    std::size_t correct = 0;
};

StructuralDiff structural_diff(const Dag& learned, const Dag& gold);

/// Plain-text report: counts, then one edge list per category.
void write_diff_report(std::ostream& out, const StructuralDiff& diff, const std::vector<std::string>& names);

BayesNet load_network(std::istream& in);
BayesNet load_network(const std::filesystem::path& path);
void save_network(std::ostream& out, const BayesNet& bn);
void save_network(const std::filesystem::path& path, const BayesNet& bn);

/// Random CPTs for a fixed structure. Every row puts probability in
/// [0.6, 0.9] on one randomly chosen value, so no row is within 0.1 of
/// uniform.
BayesNet synthesize_network(const Dag& dag, std::vector<std::string> names, const std::vector<int>& cardinalities,
                            std::uint64_t seed);

/// The 37-node, 46-edge ALARM monitoring network structure, with the usual
/// node abbreviations and cardinalities.
struct NamedStructure {
    Dag dag;
    std::vector<std::string> names;
    std::vector<int> cardinalities;
};
NamedStructure alarm_structure();

/// A seven-segment display stand-in for the LED network: a digit node
/// driving seven segment indicators, plus two segment-to-segment faults.
NamedStructure led_structure();

/// ALARM structure with synthesize_network() CPTs.
BayesNet alarm_network(std::uint64_t seed);

/// LED stand-in whose segments follow the digit's seven-segment pattern with
/// probability 0.9; a faulted segment also lights with probability 0.5 when
/// its faulting segment is on.
BayesNet led_network();

}  // namespace cbnet
