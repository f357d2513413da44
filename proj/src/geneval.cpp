#include <cbnet/geneval.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <random>
#include <set>

#include <json.hpp>

#include <cbnet/error.hpp>

namespace cbnet {

namespace {

using Json = nlohmann::ordered_json;

constexpr double kRowTolerance = 1e-9;

// Uniform double in [0, 1) from the top 53 bits of one draw.
double uniform(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

double round12(double p) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", p);
    return std::strtod(buf, nullptr);
}

std::size_t row_count(const BayesNet& bn, int node) {
    std::size_t rows = 1;
    for (int p : bn.dag.parents(node)) rows *= static_cast<std::size_t>(bn.cardinality(p));
    return rows;
}

std::string edge_line(const Edge& e, const std::vector<std::string>& names) {
    return names.at(static_cast<std::size_t>(e.first)) + " -> " + names.at(static_cast<std::size_t>(e.second));
}

}  // namespace

void BayesNet::validate() const {
    const auto n = static_cast<std::size_t>(dag.size());
    if (names.size() != n || values.size() != n || cpts.size() != n)
        throw ArgumentError("network fields disagree on the number of nodes");
    std::set<std::string> seen;
    for (std::size_t i = 0; i < n; ++i) {
        if (names[i].empty()) throw ArgumentError("node " + std::to_string(i) + " has an empty name");
        if (!seen.insert(names[i]).second) throw ArgumentError("duplicate node name '" + names[i] + "'");
        if (values[i].size() < 2) throw ArgumentError("node '" + names[i] + "' needs at least two values");
        std::set<std::string> tokens(values[i].begin(), values[i].end());
        if (tokens.size() != values[i].size()) throw ArgumentError("node '" + names[i] + "' repeats a value token");
    }
    for (std::size_t i = 0; i < n; ++i) {
        const int node = static_cast<int>(i);
        const auto rows = row_count(*this, node);
        if (cpts[i].size() != rows)
            throw ArgumentError("node '" + names[i] + "' has " + std::to_string(cpts[i].size()) + " CPT rows, expected " +
                                std::to_string(rows));
        for (std::size_t r = 0; r < rows; ++r) {
            const auto& row = cpts[i][r];
            if (row.size() != values[i].size())
                throw ArgumentError("node '" + names[i] + "' CPT row " + std::to_string(r) + " has the wrong length");
            double sum = 0.0;
            for (double p : row) {
                if (!(p >= 0.0 && p <= 1.0))
                    throw ArgumentError("node '" + names[i] + "' CPT row " + std::to_string(r) +
                                        " has a probability outside [0, 1]");
                sum += p;
            }
            if (std::abs(sum - 1.0) > kRowTolerance) {
                char buf[32];
                std::snprintf(buf, sizeof buf, "%.12g", sum);
                throw ArgumentError("node '" + names[i] + "' CPT row " + std::to_string(r) + " sums to " + buf);
            }
        }
    }
}

std::size_t cpt_row(const BayesNet& bn, int node, const std::vector<int>& assignment) {
    std::size_t row = 0;
    for (int p : bn.dag.parents(node))
        row = row * static_cast<std::size_t>(bn.cardinality(p)) + static_cast<std::size_t>(assignment[static_cast<std::size_t>(p)]);
    return row;
}

CaseDatabase forward_sample(const BayesNet& bn, std::size_t m, std::uint64_t seed) {
    bn.validate();
    const auto n = static_cast<std::size_t>(bn.size());
    const auto order = topo_sort(bn.dag);
    std::mt19937_64 rng(seed);
    std::vector<std::vector<int>> columns(n, std::vector<int>(m));
    std::vector<int> assignment(n, 0);
    for (std::size_t row = 0; row < m; ++row) {
        for (int node : order) {
            const auto& probs = bn.cpts[static_cast<std::size_t>(node)][cpt_row(bn, node, assignment)];
            const double u = uniform(rng);
            double cumulative = 0.0;
            int value = static_cast<int>(probs.size()) - 1;
            for (std::size_t k = 0; k < probs.size(); ++k) {
                cumulative += probs[k];
                if (u < cumulative) {
                    value = static_cast<int>(k);
                    break;
                }
            }
            // Rounding can leave the tail on a zero-probability value.
            while (value > 0 && probs[static_cast<std::size_t>(value)] == 0.0) --value;
            assignment[static_cast<std::size_t>(node)] = value;
            columns[static_cast<std::size_t>(node)][row] = value;
        }
    }

    std::vector<Variable> vars;
    for (std::size_t i = 0; i < n; ++i)
        vars.push_back({bn.names[i], static_cast<int>(bn.values[i].size()), bn.values[i]});
    return CaseDatabase::from_columns(std::move(vars), std::move(columns));
}

StructuralDiff structural_diff(const Dag& learned, const Dag& gold) {
    if (learned.size() != gold.size())
        throw ArgumentError("learned structure has " + std::to_string(learned.size()) + " nodes, gold has " +
                            std::to_string(gold.size()));
    StructuralDiff diff;
    for (auto [p, c] : gold.edges()) {
        if (learned.has_edge(p, c))
            ++diff.correct;
        else if (learned.has_edge(c, p))
            diff.reversed.emplace_back(p, c);
        else
            diff.missing.emplace_back(p, c);
    }
    for (auto [p, c] : learned.edges())
        if (!gold.has_edge(p, c) && !gold.has_edge(c, p)) diff.extra.emplace_back(p, c);
    return diff;
}

void write_diff_report(std::ostream& out, const StructuralDiff& diff, const std::vector<std::string>& names) {
    out << "correct\t" << diff.correct << '\n';
    out << "missing\t" << diff.missing.size() << '\n';
    out << "reversed\t" << diff.reversed.size() << '\n';
    out << "extra\t" << diff.extra.size() << '\n';
    for (const auto& e : diff.missing) out << "missing_edge\t" << edge_line(e, names) << '\n';
    for (const auto& e : diff.reversed) out << "reversed_edge\t" << edge_line(e, names) << '\n';
    for (const auto& e : diff.extra) out << "extra_edge\t" << edge_line(e, names) << '\n';
}

BayesNet load_network(std::istream& in) {
    Json doc;
    try {
        doc = Json::parse(in);
    } catch (const Json::parse_error& e) {
        throw FormatError(std::string("network file is not valid JSON: ") + e.what());
    }

    try {
        BayesNet bn;
        std::map<std::string, int> index;
        for (const auto& node : doc.at("nodes")) {
            auto name = node.at("name").get<std::string>();
            if (!index.emplace(name, static_cast<int>(bn.names.size())).second)
                throw FormatError("duplicate node '" + name + "'");
            bn.names.push_back(std::move(name));
            bn.values.push_back(node.at("values").get<std::vector<std::string>>());
        }
        const auto lookup = [&index](const std::string& name) {
            auto it = index.find(name);
            if (it == index.end()) throw FormatError("edge refers to unknown node '" + name + "'");
            return it->second;
        };

        std::vector<std::vector<int>> parents(bn.names.size());
        for (const auto& edge : doc.value("edges", Json::array())) {
            if (!edge.is_array() || edge.size() != 2) throw FormatError("each edge must be [parent, child]");
            int p = lookup(edge[0].get<std::string>());
            int c = lookup(edge[1].get<std::string>());
            parents[static_cast<std::size_t>(c)].push_back(p);
        }
        try {
            bn.dag = Dag(std::move(parents));
        } catch (const ArgumentError& e) {
            throw FormatError(std::string("network edges are invalid: ") + e.what());
        }

        const auto& cpts = doc.at("cpts");
        for (const auto& name : bn.names) {
            if (!cpts.contains(name)) throw FormatError("no CPT for node '" + name + "'");
            bn.cpts.push_back(cpts.at(name).get<std::vector<std::vector<double>>>());
        }
        try {
            bn.validate();
        } catch (const ArgumentError& e) {
            throw FormatError(e.what());
        }
        return bn;
    } catch (const Json::exception& e) {
        throw FormatError(std::string("malformed network file: ") + e.what());
    }
}

BayesNet load_network(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw FormatError("cannot open network file " + path.string());
    return load_network(in);
}

void save_network(std::ostream& out, const BayesNet& bn) {
    bn.validate();
    Json doc;
    doc["nodes"] = Json::array();
    for (int i = 0; i < bn.size(); ++i)
        doc["nodes"].push_back({{"name", bn.names[static_cast<std::size_t>(i)]}, {"values", bn.values[static_cast<std::size_t>(i)]}});
    doc["edges"] = Json::array();
    for (auto [p, c] : bn.dag.edges())
        doc["edges"].push_back({bn.names[static_cast<std::size_t>(p)], bn.names[static_cast<std::size_t>(c)]});
    Json cpts = Json::object();
    for (int i = 0; i < bn.size(); ++i) {
        Json rows = Json::array();
        for (const auto& row : bn.cpts[static_cast<std::size_t>(i)]) {
            Json r = Json::array();
            for (double p : row) r.push_back(round12(p));
            rows.push_back(std::move(r));
        }
        cpts[bn.names[static_cast<std::size_t>(i)]] = std::move(rows);
    }
    doc["cpts"] = std::move(cpts);
    out << doc.dump(2) << '\n';
}

void save_network(const std::filesystem::path& path, const BayesNet& bn) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw FormatError("cannot write network file " + path.string());
    save_network(out, bn);
}

BayesNet synthesize_network(const Dag& dag, std::vector<std::string> names, const std::vector<int>& cardinalities,
                            std::uint64_t seed) {
    const auto n = static_cast<std::size_t>(dag.size());
    if (names.size() != n || cardinalities.size() != n) throw ArgumentError("need one name and cardinality per node");
    BayesNet bn;
    bn.dag = dag;
    bn.names = std::move(names);
    for (int r : cardinalities) {
        if (r < 2) throw ArgumentError("every node needs at least two values");
        std::vector<std::string> tokens;
        for (int k = 0; k < r; ++k) tokens.push_back(std::to_string(k));
        bn.values.push_back(std::move(tokens));
    }

    std::mt19937_64 rng(seed);
    for (std::size_t i = 0; i < n; ++i) {
        const auto r = static_cast<std::size_t>(cardinalities[i]);
        std::vector<std::vector<double>> table(row_count(bn, static_cast<int>(i)));
        for (auto& row : table) {
            row.assign(r, 0.0);
            const auto dominant = std::min(r - 1, static_cast<std::size_t>(uniform(rng) * static_cast<double>(r)));
            const double peak = round12(0.6 + 0.3 * uniform(rng));
            std::vector<double> weights(r, 0.0);
            double total = 0.0;
            for (std::size_t k = 0; k < r; ++k)
                if (k != dominant) total += weights[k] = 0.05 + uniform(rng);
            double assigned = peak;
            row[dominant] = peak;
            std::size_t last = dominant == r - 1 ? r - 2 : r - 1;
            for (std::size_t k = 0; k < r; ++k) {
                if (k == dominant || k == last) continue;
                row[k] = round12((1.0 - peak) * weights[k] / total);
                assigned += row[k];
            }
            row[last] = round12(1.0 - assigned);
        }
        bn.cpts.push_back(std::move(table));
    }
    bn.validate();
    return bn;
}

NamedStructure alarm_structure() {
    // name, cardinality, parents
    struct Node {
        const char* name;
        int card;
        std::vector<const char*> parents;
    };
    const std::vector<Node> nodes = {
        {"HIST", 2, {"LVF"}},
        {"CVP", 3, {"LVV"}},
        {"PCWP", 3, {"LVV"}},
        {"HYP", 2, {}},
        {"LVV", 3, {"HYP", "LVF"}},
        {"LVF", 2, {}},
        {"STKV", 3, {"HYP", "LVF"}},
        {"ERLO", 2, {}},
        {"HRBP", 3, {"ERLO", "HR"}},
        {"HREK", 3, {"ERCA", "HR"}},
        {"ERCA", 2, {}},
        {"HRSA", 3, {"ERCA", "HR"}},
        {"ANES", 2, {}},
        {"APL", 2, {}},
        {"TPR", 3, {"APL"}},
        {"ECO2", 4, {"ACO2", "VLNG"}},
        {"KINK", 2, {}},
        {"MINV", 4, {"INT", "VLNG"}},
        {"FIO2", 2, {}},
        {"PVS", 3, {"FIO2", "VALV"}},
        {"SAO2", 3, {"PVS", "SHNT"}},
        {"PAP", 3, {"PMB"}},
        {"PMB", 2, {}},
        {"SHNT", 2, {"INT", "PMB"}},
        {"INT", 3, {}},
        {"PRSS", 4, {"INT", "KINK", "VTUB"}},
        {"DISC", 2, {}},
        {"MVS", 3, {}},
        {"VMCH", 4, {"MVS"}},
        {"VTUB", 4, {"DISC", "VMCH"}},
        {"VLNG", 4, {"INT", "KINK", "VTUB"}},
        {"VALV", 4, {"INT", "VLNG"}},
        {"ACO2", 3, {"VALV"}},
        {"CCHL", 2, {"ACO2", "ANES", "SAO2", "TPR"}},
        {"HR", 3, {"CCHL"}},
        {"CO", 3, {"HR", "STKV"}},
        {"BP", 3, {"CO", "TPR"}},
    };
    NamedStructure s;
    std::map<std::string, int> index;
    for (const auto& node : nodes) {
        index[node.name] = static_cast<int>(s.names.size());
        s.names.emplace_back(node.name);
        s.cardinalities.push_back(node.card);
    }
    std::vector<std::vector<int>> parents(nodes.size());
    for (std::size_t i = 0; i < nodes.size(); ++i)
        for (const char* p : nodes[i].parents) parents[i].push_back(index.at(p));
    s.dag = Dag(std::move(parents));
    return s;
}

NamedStructure led_structure() {
    NamedStructure s;
    s.names = {"digit", "seg_a", "seg_b", "seg_c", "seg_d", "seg_e", "seg_f", "seg_g"};
    s.cardinalities = {10, 2, 2, 2, 2, 2, 2, 2};
    std::vector<std::vector<int>> parents(8);
    for (int seg = 1; seg <= 7; ++seg) parents[static_cast<std::size_t>(seg)].push_back(0);
    parents[5].push_back(3);  // seg_e faulted by seg_c
    parents[6].push_back(2);  // seg_f faulted by seg_b
    s.dag = Dag(std::move(parents));
    return s;
}

BayesNet alarm_network(std::uint64_t seed) {
    auto s = alarm_structure();
    return synthesize_network(s.dag, s.names, s.cardinalities, seed);
}

BayesNet led_network() {
    // Segments a..g lit for digits 0..9.
    static const char* const kPatterns[10] = {"1111110", "0110000", "1101101", "1111001", "0110011",
                                              "1011011", "1011111", "1110000", "1111111", "1111011"};
    auto s = led_structure();
    BayesNet bn;
    bn.dag = s.dag;
    bn.names = s.names;
    for (int r : s.cardinalities) {
        std::vector<std::string> tokens;
        for (int k = 0; k < r; ++k) tokens.push_back(std::to_string(k));
        bn.values.push_back(std::move(tokens));
    }
    bn.cpts.push_back(std::vector<std::vector<double>>(1, std::vector<double>(10, 0.1)));
    for (int seg = 1; seg <= 7; ++seg) {
        const bool faulted = bn.dag.parents(seg).size() == 2;
        std::vector<std::vector<double>> table;
        for (int digit = 0; digit < 10; ++digit) {
            const bool lit = kPatterns[digit][seg - 1] == '1';
            for (int fault = 0; fault < (faulted ? 2 : 1); ++fault) {
                double on = lit ? 0.9 : (fault ? 0.5 : 0.1);
                table.push_back({round12(1.0 - on), on});
            }
        }
        bn.cpts.push_back(std::move(table));
    }
    bn.validate();
    return bn;
}

}  // namespace cbnet
