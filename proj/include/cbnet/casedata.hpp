#pragma once

#include <cstdint>
#include <filesystem>
#include <istream>
#include <map>
#include <memory>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace cbnet {

namespace detail {
class CountMemo;
}

struct ContingencyTable;

/// A discrete variable: its name, its number of values, and the tokens the
/// values were read from (index = value id). `labels` may be shorter than
/// `cardinality` when a schema declares values never observed.
struct Variable {
    std::string name;
    int cardinality = 0;
    std::vector<std::string> labels;

    std::string label(int value) const;
};

/// Declared cardinalities keyed by variable name.
using Schema = std::map<std::string, int>;

/// Immutable table of m complete discrete cases over n variables.
///
/// Values are stored column-major. Copies share an internal count memo; the
/// memo never changes observable results.
class CaseDatabase {
public:
    /// `rows` is row-major: rows.size() == m, each row has n value ids.
    CaseDatabase(std::vector<Variable> variables, const std::vector<std::vector<int>>& rows);

    /// `columns` is column-major: columns.size() == n, each of length m.
    static CaseDatabase from_columns(std::vector<Variable> variables,
                                     std::vector<std::vector<int>> columns);

    std::size_t num_variables() const { return variables_.size(); }
    std::size_t num_cases() const { return num_cases_; }

    const Variable& variable(int i) const { return variables_.at(static_cast<std::size_t>(i)); }
    const std::vector<Variable>& variables() const { return variables_; }
    int cardinality(int i) const { return variable(i).cardinality; }
    std::vector<std::string> names() const;

    /// Index of the variable called `name`, or nullopt.
    std::optional<int> find(std::string_view name) const;

    std::span<const int> column(int i) const { return columns_.at(static_cast<std::size_t>(i)); }
    int value(std::size_t row, int i) const { return columns_[static_cast<std::size_t>(i)][row]; }

    bool operator==(const CaseDatabase& other) const;

private:
    friend std::shared_ptr<const ContingencyTable> cached_contingency(
        const CaseDatabase& db, int target, std::span<const int> parents);

    CaseDatabase() = default;
    void validate() const;

    std::vector<Variable> variables_;
    std::vector<std::vector<int>> columns_;
    std::size_t num_cases_ = 0;
    std::shared_ptr<detail::CountMemo> memo_;
};

/// One observed parent instantiation w_ij with its per-value counts N_ijk.
struct Stratum {
    std::vector<int> parent_values;   // aligned with ContingencyTable::parents
    std::vector<std::int64_t> counts; // size r_i
    std::int64_t total = 0;           // N_ij
};

struct ContingencyTable {
    int target = 0;
    std::vector<int> parents;     // ascending ids
    std::vector<Stratum> strata;  // lexicographic in parent_values, observed only
};

/// An r_a x r_b table of counts for one instantiation of a conditioning set.
struct PairTable {
    std::vector<int> cond_values;
    int rows = 0;
    int cols = 0;
    std::vector<std::int64_t> counts;  // row-major

    std::int64_t at(int r, int c) const { return counts[static_cast<std::size_t>(r * cols + c)]; }
};

ContingencyTable contingency(const CaseDatabase& db, int target, std::span<const int> parents);

/// Shared, memoized form of contingency() used by the scorer.
std::shared_ptr<const ContingencyTable> cached_contingency(const CaseDatabase& db, int target,
                                                           std::span<const int> parents);

/// One table per observed instantiation of `cond`, ordered lexicographically
/// by the instantiation (cond ids taken in ascending order).
std::vector<PairTable> stratified_pair_counts(const CaseDatabase& db, int a, int b,
                                              std::span<const int> cond);

/// Parse the CSV case format. Token -> value id is the lexicographic rank of
/// the token among the column's distinct tokens.
CaseDatabase load_cases(std::istream& in, const std::optional<Schema>& schema = std::nullopt);
CaseDatabase load_cases(const std::filesystem::path& path,
                        const std::optional<Schema>& schema = std::nullopt);

/// Parse "name,cardinality" lines.
Schema load_schema(std::istream& in);
Schema load_schema(const std::filesystem::path& path);

void write_cases(std::ostream& out, const CaseDatabase& db);

}  // namespace cbnet
