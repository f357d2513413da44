#include <cbnet/citest.hpp>

#include <algorithm>
#include <string>

#include <boost/math/special_functions/gamma.hpp>

#include <cbnet/error.hpp>

namespace cbnet {

namespace {

void check_pair(int n, int a, int b, std::span<const int> cond) {
    if (a < 0 || a >= n || b < 0 || b >= n) throw ArgumentError("vertex out of range");
    if (a == b) throw ArgumentError("independence query needs two distinct variables");
    for (int s : cond) {
        if (s < 0 || s >= n) throw ArgumentError("conditioning vertex out of range");
        if (s == a || s == b) throw ArgumentError("conditioning set overlaps the tested pair");
    }
}

}  // namespace

ChiSquare chi_square_stat(std::span<const PairTable> tables) {
    ChiSquare out;
    for (const auto& t : tables) {
        if (std::any_of(t.counts.begin(), t.counts.end(), [](std::int64_t c) { return c < 0; }))
            throw ArgumentError("negative cell count");

        std::vector<double> row_totals;
        std::vector<int> rows;
        for (int r = 0; r < t.rows; ++r) {
            std::int64_t sum = 0;
            for (int c = 0; c < t.cols; ++c) sum += t.at(r, c);
            if (sum > 0) {
                rows.push_back(r);
                row_totals.push_back(static_cast<double>(sum));
            }
        }
        std::vector<double> col_totals;
        std::vector<int> cols;
        for (int c = 0; c < t.cols; ++c) {
            std::int64_t sum = 0;
            for (int r = 0; r < t.rows; ++r) sum += t.at(r, c);
            if (sum > 0) {
                cols.push_back(c);
                col_totals.push_back(static_cast<double>(sum));
            }
        }
        if (rows.size() < 2 || cols.size() < 2) continue;

        double total = 0.0;
        for (double x : row_totals) total += x;
        for (std::size_t i = 0; i < rows.size(); ++i) {
            for (std::size_t j = 0; j < cols.size(); ++j) {
                double expected = row_totals[i] * col_totals[j] / total;
                double diff = static_cast<double>(t.at(rows[i], cols[j])) - expected;
                out.statistic += diff * diff / expected;
            }
        }
        out.dof += static_cast<int>((rows.size() - 1) * (cols.size() - 1));
    }
    return out;
}

double chi_square_pvalue(double statistic, int dof) {
    if (dof <= 0) return 1.0;
    if (statistic <= 0.0) return 1.0;
    return boost::math::gamma_q(0.5 * dof, 0.5 * statistic);
}

IndependenceVerdict ci_test(const CaseDatabase& db, int a, int b, std::span<const int> cond, double alpha) {
    check_pair(static_cast<int>(db.num_variables()), a, b, cond);
    if (!(alpha > 0.0 && alpha < 1.0)) throw ArgumentError("alpha must lie in (0, 1)");
    // Always tally with the lower id as rows so (a, b) and (b, a) agree exactly.
    auto tables = stratified_pair_counts(db, std::min(a, b), std::max(a, b), cond);
    auto [stat, dof] = chi_square_stat(tables);
    IndependenceVerdict v;
    v.dof = dof;
    v.statistic = dof == 0 ? 0.0 : stat;
    v.p_value = chi_square_pvalue(v.statistic, dof);
    v.independent = dof == 0 || v.p_value > alpha;
    return v;
}

bool d_separated(const Dag& dag, int a, int b, std::span<const int> cond) {
    const int n = dag.size();
    check_pair(n, a, b, cond);
    const auto N = static_cast<std::size_t>(n);

    std::vector<char> observed(N, 0);
    for (int s : cond) observed[static_cast<std::size_t>(s)] = 1;

    // Ancestors of the conditioning set, itself included.
    std::vector<char> has_observed_descendant = observed;
    std::vector<int> stack(cond.begin(), cond.end());
    while (!stack.empty()) {
        int v = stack.back();
        stack.pop_back();
        for (int p : dag.parents(v))
            if (!has_observed_descendant[static_cast<std::size_t>(p)]) {
                has_observed_descendant[static_cast<std::size_t>(p)] = 1;
                stack.push_back(p);
            }
    }

    std::vector<std::vector<int>> children(N);
    for (int c = 0; c < n; ++c)
        for (int p : dag.parents(c)) children[static_cast<std::size_t>(p)].push_back(c);

    // Active-trail search over (vertex, direction). `up` means the trail
    // arrived from a child, `down` from a parent.
    enum Dir { up = 0, down = 1 };
    std::vector<char> visited(2 * N, 0);
    std::vector<std::pair<int, Dir>> frontier{{a, up}};
    while (!frontier.empty()) {
        auto [v, dir] = frontier.back();
        frontier.pop_back();
        auto slot = 2 * static_cast<std::size_t>(v) + dir;
        if (visited[slot]) continue;
        visited[slot] = 1;
        const bool obs = observed[static_cast<std::size_t>(v)];
        if (v == b && !obs) return false;

        if (dir == up && !obs) {
            for (int p : dag.parents(v)) frontier.emplace_back(p, up);
            for (int c : children[static_cast<std::size_t>(v)]) frontier.emplace_back(c, down);
        } else if (dir == down) {
            if (!obs)
                for (int c : children[static_cast<std::size_t>(v)]) frontier.emplace_back(c, down);
            if (has_observed_descendant[static_cast<std::size_t>(v)])
                for (int p : dag.parents(v)) frontier.emplace_back(p, up);
        }
    }
    return true;
}

CiTest chi_square_ci(const CaseDatabase& db, double alpha) {
    if (!(alpha > 0.0 && alpha < 1.0)) throw ArgumentError("alpha must lie in (0, 1)");
    return [db, alpha](int a, int b, std::span<const int> cond) { return ci_test(db, a, b, cond, alpha).independent; };
}

CiTest d_separation_ci(const Dag& dag) {
    return [dag](int a, int b, std::span<const int> cond) { return d_separated(dag, a, b, cond); };
}

}  // namespace cbnet
