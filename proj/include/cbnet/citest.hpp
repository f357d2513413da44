#pragma once

#include <functional>
#include <span>
#include <vector>

#include <cbnet/casedata.hpp>
#include <cbnet/graphs.hpp>

namespace cbnet {

struct ChiSquare {
    double statistic = 0.0;
    int dof = 0;
};

struct IndependenceVerdict {
    bool independent = true;
    double statistic = 0.0;
    int dof = 0;
    double p_value = 1.0;
};

/// Pearson statistic pooled over strata. In each stratum all-zero rows and
/// columns are dropped first; strata left with fewer than 2 rows or columns
/// contribute neither statistic nor degrees of freedom.
ChiSquare chi_square_stat(std::span<const PairTable> tables);

/// Upper tail Q(dof/2, statistic/2) of the chi-square distribution; 1 when dof == 0.
double chi_square_pvalue(double statistic, int dof);

/// Is a independent of b given `cond`? independent == (p_value > alpha).
IndependenceVerdict ci_test(const CaseDatabase& db, int a, int b, std::span<const int> cond, double alpha);

/// Pearl's d-separation criterion on `dag`.
bool d_separated(const Dag& dag, int a, int b, std::span<const int> cond);

/// A conditional-independence decision I(a, cond, b).
using CiTest = std::function<bool(int a, int b, std::span<const int> cond)>;

/// Chi-square test on `db` at level `alpha`. The database is captured by value.
CiTest chi_square_ci(const CaseDatabase& db, double alpha);

/// Exact answers read off a known structure.
CiTest d_separation_ci(const Dag& dag);

}  // namespace cbnet
