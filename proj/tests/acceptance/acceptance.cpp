// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any FAIL.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <optional>
#include <random>
#include <sstream>
#include <string>

#include <cbnet/cb.hpp>
#include <cbnet/citest.hpp>
#include <cbnet/geneval.hpp>
#include <cbnet/k2score.hpp>

#include "test_support.hpp"

using namespace cbnet;
using cbnet::testing::exact_g;
using cbnet::testing::make_db;
using cbnet::testing::Rational;

namespace {

using Clock = std::chrono::steady_clock;

struct Outcome {
    bool pass = false;
    std::string detail;
};

int failures = 0;

void report(int id, const std::string& title, double limit_s, const std::function<Outcome()>& body) {
    const auto start = Clock::now();
    Outcome o;
    try {
        o = body();
    } catch (const std::exception& e) {
        o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(Clock::now() - start).count();
    if (limit_s > 0 && secs >= limit_s) {
        o.pass = false;
        o.detail += "; over time limit";
    }
    char timing[64];
    std::snprintf(timing, sizeof timing, "%.2fs", secs);
    std::printf("%s criterion %d (%s): %s [%s%s]\n", o.pass ? "PASS" : "FAIL", id, title.c_str(), o.detail.c_str(),
                timing, limit_s > 0 ? (" < " + std::to_string(static_cast<int>(limit_s)) + "s").c_str() : "");
    std::fflush(stdout);
    if (!o.pass) ++failures;
}

std::string fmt(const char* f, double a, double b = 0, double c = 0) {
    char buf[256];
    std::snprintf(buf, sizeof buf, f, a, b, c);
    return buf;
}

// Checks the score and skeleton invariants of one learning run.
bool invariants_hold(const CBResult& r, const CaseDatabase& db, std::string& why) {
    double best = -INFINITY;
    for (std::size_t k = 0; k < r.iterations.size(); ++k) {
        const auto& it = r.iterations[k];
        if (k > 0 && it.skeleton_edges > r.iterations[k - 1].skeleton_edges) {
            why = "skeleton grew";
            return false;
        }
        if (it.accepted) {
            if (!(it.log_score > best)) {
                why = "accepted score did not increase";
                return false;
            }
            best = it.log_score;
        }
    }
    if (r.iterations.empty() || r.log_score != best) {
        why = "result score is not the last accepted score";
        return false;
    }
    if (!is_acyclic(r.parents.parent_sets())) {
        why = "result is cyclic";
        return false;
    }
    if (log_network_score(db, r.parents) != r.log_score) {
        why = "result score does not rescore";
        return false;
    }
    return true;
}

std::string trace_of(const CBResult& r) {
    std::ostringstream out;
    write_trace(out, r);
    for (auto [p, c] : r.parents.edges()) out << p << "->" << c << '\n';
    out << to_string(r.termination) << ' ' << r.max_ord_used << '\n';
    return out.str();
}

BayesNet three_node(const Dag& dag, std::vector<std::vector<std::vector<double>>> cpts) {
    BayesNet bn;
    bn.dag = dag;
    bn.names = {"x0", "x1", "x2"};
    bn.values = {{"0", "1"}, {"0", "1"}, {"0", "1"}};
    bn.cpts = std::move(cpts);
    bn.validate();
    return bn;
}

Outcome criterion1() {
    std::mt19937_64 rng(1001);
    double worst = 0.0;
    for (int trial = 0; trial < 200; ++trial) {
        const int n = std::uniform_int_distribution<int>(1, 4)(rng);
        auto db = cbnet::testing::random_db(rng, n, 3, 12);
        const int target = std::uniform_int_distribution<int>(0, n - 1)(rng);
        std::vector<int> parents;
        for (int v = 0; v < n; ++v)
            if (v != target && std::bernoulli_distribution(0.5)(rng)) parents.push_back(v);
        const double exact = exact_g(db, target, parents).convert_to<double>();
        worst = std::max(worst, std::abs(std::exp(log_g(db, target, parents)) - exact) / exact);
    }
    return {worst <= 1e-9, fmt("200 databases, max relative error %.3g (limit 1e-9)", worst)};
}

Outcome criterion2() {
    std::mt19937_64 rng(2002);
    int nodes = 0, equal = 0, exceeded = 0;
    for (int trial = 0; trial < 100; ++trial) {
        auto db = cbnet::testing::random_db(rng, 4, 3, 20);
        std::vector<int> order{0, 1, 2, 3};
        std::shuffle(order.begin(), order.end(), rng);
        auto dag = k2(db, order);
        for (std::size_t pos = 0; pos < order.size(); ++pos) {
            const int node = order[pos];
            std::vector<int> pred(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(pos));
            double best = -INFINITY;
            for (const auto& s : cbnet::testing::all_subsets(pred))
                best = std::max(best, cbnet::testing::exact_log_g(db, node, s));
            const double greedy = log_g(db, node, dag.parents(node));
            ++nodes;
            if (greedy > best + 1e-9) ++exceeded;
            if (std::abs(greedy - best) <= 1e-9) ++equal;
        }
    }
    return {exceeded == 0, fmt("100 databases, %g node searches, greedy above optimum %g times, greedy optimal in "
                               "%.1f%% of searches",
                               nodes, exceeded, 100.0 * equal / nodes)};
}

Outcome criterion3() {
    std::mt19937_64 rng(3003);
    int exact = 0, superset = 0;
    for (int trial = 0; trial < 100; ++trial) {
        const int n = std::uniform_int_distribution<int>(2, 7)(rng);
        auto dag = cbnet::testing::random_dag(rng, n, 3);
        auto ci = d_separation_ci(dag);
        if (discover_skeleton(n, ci) == skeleton(dag)) ++exact;

        std::vector<std::string> names;
        for (int i = 0; i < n; ++i) names.push_back("x" + std::to_string(i));
        auto db = forward_sample(synthesize_network(dag, names, std::vector<int>(static_cast<std::size_t>(n), 2), rng()),
                                 300, rng());
        LearnConfig cfg;
        cfg.degree_bound = n;
        auto learned = cb_learn(db, cfg, ci);
        bool contains = true;
        for (auto [a, b] : skeleton(dag).pairs()) contains &= learned.skeleton.adjacent(a, b);
        superset += contains;
    }
    return {exact == 100 && superset == 100,
            fmt("oracle skeleton exact in %g/100 DAGs; cb_learn skeleton keeps every true adjacency in %g/100", exact,
                superset)};
}

Outcome criterion4() {
    std::mt19937_64 rng(4004);
    std::bernoulli_distribution coin(0.5);
    int rejections = 0;
    for (int trial = 0; trial < 500; ++trial) {
        std::vector<std::vector<int>> rows(1000);
        for (auto& row : rows) row = {coin(rng) ? 1 : 0, coin(rng) ? 1 : 0};
        if (!ci_test(make_db({2, 2}, rows), 0, 1, {}, 0.1).independent) ++rejections;
    }
    const double rate = rejections / 500.0;
    const double p20 = chi_square_pvalue(20.0, 1);
    const double p2706 = chi_square_pvalue(2.706, 1);
    const bool ok = rate >= 0.05 && rate <= 0.15 && std::abs(p20 - 7.74e-6) <= 1e-7 && std::abs(p2706 - 0.100) <= 0.002;
    return {ok, fmt("rejection rate %.3f in [0.05, 0.15]; p(20,1)=%.4g; p(2.706,1)=%.4f", rate, p20, p2706)};
}

Outcome criterion5() {
    Dag chain(3);
    chain.add_edge(0, 1);
    chain.add_edge(1, 2);
    auto chain_bn = three_node(chain, {{{0.1, 0.9}}, {{0.9, 0.1}, {0.1, 0.9}}, {{0.9, 0.1}, {0.1, 0.9}}});

    // x0 -> x1 <- x2, x1 a noisy XOR of its parents.
    Dag collider(3);
    collider.add_edge(0, 1);
    collider.add_edge(2, 1);
    auto collider_bn = three_node(
        collider, {{{0.1, 0.9}}, {{0.9, 0.1}, {0.1, 0.9}, {0.1, 0.9}, {0.9, 0.1}}, {{0.9, 0.1}}});

    int chain_ok = 0, collider_skel = 0, collider_arrows = 0;
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        auto cdb = forward_sample(chain_bn, 5000, seed);
        chain_ok += skeleton(cb_learn(cdb).parents) == skeleton(chain);

        auto vdb = forward_sample(collider_bn, 5000, 100 + seed);
        auto learned = cb_learn(vdb).parents;
        collider_skel += skeleton(learned) == skeleton(collider);
        collider_arrows += learned.has_edge(0, 1) && learned.has_edge(2, 1);
    }
    return {chain_ok >= 9 && collider_skel >= 9 && collider_arrows >= 9,
            fmt("chain skeleton %g/10, collider skeleton %g/10, collider arrowheads %g/10 (need >= 9 each)", chain_ok,
                collider_skel, collider_arrows)};
}

Outcome criterion6(CBResult& alarm_result, std::optional<CaseDatabase>& alarm_db) {
    auto bn = load_network(std::filesystem::path(CBNET_DATA_DIR) / "alarm.json");
    alarm_db = forward_sample(bn, 10000, 42);
    alarm_result = cb_learn(*alarm_db);
    auto diff = structural_diff(alarm_result.parents, bn.dag);

    std::printf("  ALARM-structure, resampled (10000 cases, seed 42, alpha 0.1, u 15)\n");
    std::printf("  termination %s, max ord %d, %zu iterations\n", std::string(to_string(alarm_result.termination)).c_str(),
                alarm_result.max_ord_used, alarm_result.iterations.size());
    std::ostringstream trace;
    write_trace(trace, alarm_result);
    std::istringstream lines(trace.str());
    for (std::string line; std::getline(lines, line);) std::printf("  trace  %s\n", line.c_str());
    std::printf("  recovered %zu/46 (correct %zu + reversed %zu), missing %zu, extra %zu\n",
                diff.correct + diff.reversed.size(), diff.correct, diff.reversed.size(), diff.missing.size(),
                diff.extra.size());
    std::printf("  original ALARM run for context: recovered 45/46, 2 reversed, 14 extra\n");
    std::ostringstream rep;
    write_diff_report(rep, diff, bn.names);
    std::istringstream rep_lines(rep.str());
    for (std::string line; std::getline(rep_lines, line);) std::printf("  diff   %s\n", line.c_str());

    const bool ok = alarm_result.max_ord_used <= 4 && is_acyclic(alarm_result.parents.parent_sets()) &&
                    alarm_result.parents.size() == 37;
    return {ok, fmt("terminated, max ord %g (limit 4), valid DAG with %g edges, diff report emitted",
                    alarm_result.max_ord_used, static_cast<double>(alarm_result.parents.edge_count()))};
}

Outcome criterion7(const CBResult& alarm_result, const std::optional<CaseDatabase>& alarm_data) {
    if (!alarm_data) return {false, "ALARM run did not complete"};
    const CaseDatabase& alarm_db = *alarm_data;
    std::string why;
    int runs = 0;
    auto check = [&](const CBResult& r, const CaseDatabase& db) {
        ++runs;
        return invariants_hold(r, db, why);
    };
    if (!check(alarm_result, alarm_db)) return {false, "ALARM run: " + why};
    if (trace_of(cb_learn(alarm_db)) != trace_of(alarm_result)) return {false, "ALARM rerun differs"};

    std::mt19937_64 rng(7007);
    for (int trial = 0; trial < 40; ++trial) {
        const int n = std::uniform_int_distribution<int>(3, 8)(rng);
        auto dag = cbnet::testing::random_dag(rng, n, 3);
        std::vector<std::string> names;
        std::vector<int> cards;
        for (int i = 0; i < n; ++i) {
            names.push_back("x" + std::to_string(i));
            cards.push_back(std::uniform_int_distribution<int>(2, 3)(rng));
        }
        auto db = forward_sample(synthesize_network(dag, names, cards, rng()), 1000, rng());
        for (auto mode : {OrderingMode::Total, OrderingMode::Partial})
            for (int u : {1, 15}) {
                LearnConfig cfg;
                cfg.mode = mode;
                cfg.degree_bound = u;
                auto first = cb_learn(db, cfg);
                if (!check(first, db)) return {false, "synthetic run: " + why};
                if (trace_of(cb_learn(db, cfg)) != trace_of(first)) return {false, "synthetic rerun differs"};
                auto oracle = cb_learn(db, cfg, d_separation_ci(dag));
                if (!check(oracle, db)) return {false, "oracle run: " + why};
            }
    }
    return {true, fmt("%g runs: scores strictly increase, skeleton never grows, all structures acyclic, reruns "
                      "byte-identical",
                      runs)};
}

Outcome criterion8() {
    MixedGraph g(2);
    g.set_undirected(0, 1);
    std::vector<int> p0{0}, p1{1};

    auto tie_db = make_db({2, 2}, {{0, 0}, {0, 0}, {1, 1}, {1, 1}});
    const Rational tie_i = exact_g(tie_db, 0, {}) * exact_g(tie_db, 1, p0);
    const Rational tie_j = exact_g(tie_db, 1, {}) * exact_g(tie_db, 0, p1);
    const bool tie_ok = tie_i == Rational(1, 270) && tie_j == Rational(1, 270) &&
                        resolve_remaining(g, directed_parents(g), tie_db).has_edge(0, 1);

    auto db = make_db({2, 2}, {{0, 0}, {0, 0}, {0, 1}, {1, 1}});
    const Rational i_val = exact_g(db, 0, {}) * exact_g(db, 1, p0);
    const Rational j_val = exact_g(db, 1, {}) * exact_g(db, 0, p1);
    const double log_i = log_g(db, 0, {}) + log_g(db, 1, p0);
    const double log_j = log_g(db, 1, {}) + log_g(db, 0, p1);
    const bool strict_ok = i_val == Rational(1, 480) && j_val == Rational(1, 540) &&
                           std::abs(log_i - std::log(1.0 / 480.0)) < 1e-12 &&
                           std::abs(log_j - std::log(1.0 / 540.0)) < 1e-12 &&
                           resolve_remaining(g, directed_parents(g), db).has_edge(0, 1);
    return {tie_ok && strict_ok, std::string("tie 1/270 = 1/270 -> 0->1 ") + (tie_ok ? "ok" : "WRONG") +
                                     "; 1/480 > 1/540 -> 0->1 " + (strict_ok ? "ok" : "WRONG")};
}

}  // namespace

int main() {
    CBResult alarm_result;
    std::optional<CaseDatabase> alarm_db;

    report(1, "log-score exactness", 5, criterion1);
    report(2, "K2 greedy vs exhaustive", 30, criterion2);
    report(3, "oracle skeleton", 60, criterion3);
    report(4, "chi-square calibration", 0, criterion4);
    report(5, "desk-scale recovery", 30, criterion5);
    report(6, "ALARM methodology run", 60, [&] { return criterion6(alarm_result, alarm_db); });
    report(7, "CB invariants", 0, [&] { return criterion7(alarm_result, alarm_db); });
    report(8, "orientation heuristic oracle", 0, criterion8);

    std::printf("%s: %d of 8 criteria failed\n", failures ? "FAIL" : "PASS", failures);
    return failures ? 1 : 0;
}
