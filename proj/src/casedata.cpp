#include <cbnet/casedata.hpp>

#include <algorithm>
#include <fstream>
#include <limits>
#include <map>
#include <mutex>
#include <set>
#include <sstream>
#include <utility>

#include <cbnet/error.hpp>

namespace cbnet {

namespace detail {

class CountMemo {
public:
    using Key = std::pair<int, std::vector<int>>;

    std::shared_ptr<const ContingencyTable> find(const Key& key) const {
        std::lock_guard lock(mutex_);
        auto it = tables_.find(key);
        return it == tables_.end() ? nullptr : it->second;
    }

    void insert(Key key, std::shared_ptr<const ContingencyTable> table) {
        std::lock_guard lock(mutex_);
        if (tables_.size() >= kMaxEntries) tables_.clear();
        tables_.emplace(std::move(key), std::move(table));
    }

private:
    static constexpr std::size_t kMaxEntries = 1 << 15;

    mutable std::mutex mutex_;
    std::map<Key, std::shared_ptr<const ContingencyTable>> tables_;
};

}  // namespace detail

namespace {

// Dense counting is used while the number of cells stays below this.
constexpr std::uint64_t kDenseCells = std::uint64_t{1} << 22;

std::vector<int> sorted_ids(const CaseDatabase& db, std::span<const int> ids, const char* what) {
    std::vector<int> out(ids.begin(), ids.end());
    std::sort(out.begin(), out.end());
    if (std::adjacent_find(out.begin(), out.end()) != out.end())
        throw ArgumentError(std::string(what) + " contains a repeated variable");
    for (int v : out)
        if (v < 0 || static_cast<std::size_t>(v) >= db.num_variables())
            throw ArgumentError(std::string(what) + " contains an unknown variable id");
    return out;
}

void check_id(const CaseDatabase& db, int v) {
    if (v < 0 || static_cast<std::size_t>(v) >= db.num_variables())
        throw ArgumentError("unknown variable id " + std::to_string(v));
}

// Product of cardinalities, saturating at UINT64_MAX.
std::uint64_t radix_product(const CaseDatabase& db, const std::vector<int>& vars) {
    std::uint64_t p = 1;
    for (int v : vars) {
        auto r = static_cast<std::uint64_t>(db.cardinality(v));
        if (p > std::numeric_limits<std::uint64_t>::max() / r) return std::numeric_limits<std::uint64_t>::max();
        p *= r;
    }
    return p;
}

// Mixed-radix code of a case's values over `vars`, first var most significant,
// so code order equals lexicographic order of the value tuple.
std::uint64_t encode(const CaseDatabase& db, const std::vector<int>& vars, std::size_t row) {
    std::uint64_t code = 0;
    for (int v : vars) code = code * static_cast<std::uint64_t>(db.cardinality(v)) + static_cast<std::uint64_t>(db.value(row, v));
    return code;
}

std::vector<int> decode(const CaseDatabase& db, const std::vector<int>& vars, std::uint64_t code) {
    std::vector<int> values(vars.size());
    for (std::size_t k = vars.size(); k-- > 0;) {
        auto r = static_cast<std::uint64_t>(db.cardinality(vars[k]));
        values[k] = static_cast<int>(code % r);
        code /= r;
    }
    return values;
}

std::vector<int> row_values(const CaseDatabase& db, const std::vector<int>& vars, std::size_t row) {
    std::vector<int> values(vars.size());
    for (std::size_t k = 0; k < vars.size(); ++k) values[k] = db.value(row, vars[k]);
    return values;
}

ContingencyTable build_contingency(const CaseDatabase& db, int target, std::vector<int> parents) {
    ContingencyTable table;
    table.target = target;
    const auto r = static_cast<std::size_t>(db.cardinality(target));
    const std::size_t m = db.num_cases();
    auto col = db.column(target);
    std::uint64_t q = radix_product(db, parents);

    if (q <= kDenseCells / r) {
        std::vector<std::int64_t> cells(q * r, 0);
        for (std::size_t row = 0; row < m; ++row)
            ++cells[encode(db, parents, row) * r + static_cast<std::size_t>(col[row])];
        for (std::uint64_t j = 0; j < q; ++j) {
            auto first = cells.begin() + static_cast<std::ptrdiff_t>(j * r);
            std::int64_t total = 0;
            for (std::size_t k = 0; k < r; ++k) total += first[static_cast<std::ptrdiff_t>(k)];
            if (total == 0) continue;
            table.strata.push_back({decode(db, parents, j), std::vector<std::int64_t>(first, first + static_cast<std::ptrdiff_t>(r)), total});
        }
    } else {
        std::map<std::vector<int>, std::vector<std::int64_t>> groups;
        for (std::size_t row = 0; row < m; ++row) {
            auto& counts = groups[row_values(db, parents, row)];
            if (counts.empty()) counts.assign(r, 0);
            ++counts[static_cast<std::size_t>(col[row])];
        }
        for (auto& [values, counts] : groups) {
            std::int64_t total = 0;
            for (auto c : counts) total += c;
            table.strata.push_back({values, std::move(counts), total});
        }
    }
    table.parents = std::move(parents);
    return table;
}

std::vector<std::string> split_line(const std::string& line) {
    std::vector<std::string> tokens;
    std::size_t start = 0;
    while (true) {
        auto comma = line.find(',', start);
        tokens.push_back(line.substr(start, comma - start));
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    return tokens;
}

// Reads lines, stripping a trailing '\r'. A final newline does not produce an
// extra empty line.
std::vector<std::string> read_lines(std::istream& in) {
    std::vector<std::string> lines;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        lines.push_back(std::move(line));
    }
    while (!lines.empty() && lines.back().empty()) lines.pop_back();
    return lines;
}

}  // namespace

std::string Variable::label(int value) const {
    if (value >= 0 && static_cast<std::size_t>(value) < labels.size()) return labels[static_cast<std::size_t>(value)];
    return "#" + std::to_string(value);
}

CaseDatabase::CaseDatabase(std::vector<Variable> variables, const std::vector<std::vector<int>>& rows)
    : variables_(std::move(variables)), num_cases_(rows.size()), memo_(std::make_shared<detail::CountMemo>()) {
    const std::size_t n = variables_.size();
    columns_.assign(n, std::vector<int>(rows.size()));
    for (std::size_t row = 0; row < rows.size(); ++row) {
        if (rows[row].size() != n)
            throw ArgumentError("case " + std::to_string(row) + " has " + std::to_string(rows[row].size()) +
                                " values, expected " + std::to_string(n));
        for (std::size_t i = 0; i < n; ++i) columns_[i][row] = rows[row][i];
    }
    validate();
}

CaseDatabase CaseDatabase::from_columns(std::vector<Variable> variables, std::vector<std::vector<int>> columns) {
    if (columns.size() != variables.size()) throw ArgumentError("column count does not match variable count");
    CaseDatabase db;
    db.num_cases_ = columns.empty() ? 0 : columns.front().size();
    for (const auto& c : columns)
        if (c.size() != db.num_cases_) throw ArgumentError("columns have different lengths");
    db.variables_ = std::move(variables);
    db.columns_ = std::move(columns);
    db.memo_ = std::make_shared<detail::CountMemo>();
    db.validate();
    return db;
}

void CaseDatabase::validate() const {
    std::set<std::string_view> seen;
    for (std::size_t i = 0; i < variables_.size(); ++i) {
        const auto& v = variables_[i];
        if (v.name.empty()) throw ArgumentError("variable " + std::to_string(i) + " has an empty name");
        if (!seen.insert(v.name).second) throw ArgumentError("duplicate variable name '" + v.name + "'");
        if (v.cardinality < 2)
            throw ArgumentError("variable '" + v.name + "' has cardinality " + std::to_string(v.cardinality) +
                                "; at least 2 values are required");
        if (v.labels.size() > static_cast<std::size_t>(v.cardinality))
            throw ArgumentError("variable '" + v.name + "' has more labels than values");
        for (std::size_t row = 0; row < num_cases_; ++row) {
            int x = columns_[i][row];
            if (x < 0 || x >= v.cardinality)
                throw ArgumentError("case " + std::to_string(row) + ": value " + std::to_string(x) +
                                    " out of range for '" + v.name + "'");
        }
    }
}

std::vector<std::string> CaseDatabase::names() const {
    std::vector<std::string> out;
    out.reserve(variables_.size());
    for (const auto& v : variables_) out.push_back(v.name);
    return out;
}

std::optional<int> CaseDatabase::find(std::string_view name) const {
    for (std::size_t i = 0; i < variables_.size(); ++i)
        if (variables_[i].name == name) return static_cast<int>(i);
    return std::nullopt;
}

bool CaseDatabase::operator==(const CaseDatabase& other) const {
    if (num_cases_ != other.num_cases_ || columns_ != other.columns_) return false;
    if (variables_.size() != other.variables_.size()) return false;
    for (std::size_t i = 0; i < variables_.size(); ++i) {
        const auto& a = variables_[i];
        const auto& b = other.variables_[i];
        if (a.name != b.name || a.cardinality != b.cardinality || a.labels != b.labels) return false;
    }
    return true;
}

ContingencyTable contingency(const CaseDatabase& db, int target, std::span<const int> parents) {
    return *cached_contingency(db, target, parents);
}

std::shared_ptr<const ContingencyTable> cached_contingency(const CaseDatabase& db, int target,
                                                           std::span<const int> parents) {
    check_id(db, target);
    auto sorted = sorted_ids(db, parents, "parent set");
    if (std::binary_search(sorted.begin(), sorted.end(), target))
        throw ArgumentError("target variable " + std::to_string(target) + " is in its own parent set");

    detail::CountMemo::Key key{target, sorted};
    if (auto hit = db.memo_->find(key)) return hit;
    auto table = std::make_shared<const ContingencyTable>(build_contingency(db, target, std::move(sorted)));
    db.memo_->insert(std::move(key), table);
    return table;
}

std::vector<PairTable> stratified_pair_counts(const CaseDatabase& db, int a, int b, std::span<const int> cond) {
    check_id(db, a);
    check_id(db, b);
    if (a == b) throw ArgumentError("pair variables must differ");
    auto vars = sorted_ids(db, cond, "conditioning set");
    if (std::binary_search(vars.begin(), vars.end(), a) || std::binary_search(vars.begin(), vars.end(), b))
        throw ArgumentError("conditioning set overlaps the tested pair");

    const int ra = db.cardinality(a);
    const int rb = db.cardinality(b);
    const auto cells = static_cast<std::uint64_t>(ra) * static_cast<std::uint64_t>(rb);
    const std::size_t m = db.num_cases();
    auto ca = db.column(a);
    auto cb = db.column(b);
    std::uint64_t q = radix_product(db, vars);

    std::vector<PairTable> tables;
    if (q <= kDenseCells / cells) {
        std::vector<std::int64_t> counts(q * cells, 0);
        for (std::size_t row = 0; row < m; ++row)
            ++counts[encode(db, vars, row) * cells + static_cast<std::uint64_t>(ca[row] * rb + cb[row])];
        for (std::uint64_t j = 0; j < q; ++j) {
            auto first = counts.begin() + static_cast<std::ptrdiff_t>(j * cells);
            auto last = first + static_cast<std::ptrdiff_t>(cells);
            if (std::all_of(first, last, [](std::int64_t c) { return c == 0; })) continue;
            tables.push_back({decode(db, vars, j), ra, rb, std::vector<std::int64_t>(first, last)});
        }
    } else {
        std::map<std::vector<int>, std::vector<std::int64_t>> groups;
        for (std::size_t row = 0; row < m; ++row) {
            auto& counts = groups[row_values(db, vars, row)];
            if (counts.empty()) counts.assign(cells, 0);
            ++counts[static_cast<std::size_t>(ca[row] * rb + cb[row])];
        }
        for (auto& [values, counts] : groups) tables.push_back({values, ra, rb, std::move(counts)});
    }
    return tables;
}

CaseDatabase load_cases(std::istream& in, const std::optional<Schema>& schema) {
    auto lines = read_lines(in);
    if (lines.empty()) throw FormatError("case file is empty");

    auto header = split_line(lines.front());
    std::set<std::string> seen;
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (header[i].empty()) throw FormatError("header: column " + std::to_string(i + 1) + " has an empty name");
        if (!seen.insert(header[i]).second) throw FormatError("header: duplicate variable name '" + header[i] + "'");
    }
    if (schema) {
        for (const auto& [name, card] : *schema)
            if (!seen.count(name)) throw SchemaError("schema declares unknown variable '" + name + "'");
    }

    const std::size_t n = header.size();
    std::vector<std::vector<std::string>> raw(n);
    for (std::size_t line = 1; line < lines.size(); ++line) {
        auto tokens = split_line(lines[line]);
        if (tokens.size() != n)
            throw FormatError("row " + std::to_string(line + 1) + ": expected " + std::to_string(n) +
                              " values, found " + std::to_string(tokens.size()));
        for (std::size_t i = 0; i < n; ++i) {
            if (tokens[i].empty())
                throw FormatError("row " + std::to_string(line + 1) + ": empty value for '" + header[i] + "'");
            raw[i].push_back(std::move(tokens[i]));
        }
    }

    std::vector<Variable> variables;
    std::vector<std::vector<int>> columns(n);
    for (std::size_t i = 0; i < n; ++i) {
        std::set<std::string> distinct(raw[i].begin(), raw[i].end());
        Variable var{header[i], static_cast<int>(distinct.size()), {distinct.begin(), distinct.end()}};
        if (schema) {
            if (auto it = schema->find(header[i]); it != schema->end()) {
                if (it->second < var.cardinality)
                    throw SchemaError("variable '" + header[i] + "' has " + std::to_string(var.cardinality) +
                                      " distinct values but the schema declares " + std::to_string(it->second));
                var.cardinality = it->second;
            }
        }
        if (var.cardinality < 2)
            throw FormatError("variable '" + header[i] + "' has " + std::to_string(var.cardinality) +
                              " distinct value(s); drop the column or declare its cardinality in a schema");
        columns[i].reserve(raw[i].size());
        for (const auto& token : raw[i]) {
            auto pos = std::lower_bound(var.labels.begin(), var.labels.end(), token);
            columns[i].push_back(static_cast<int>(pos - var.labels.begin()));
        }
        variables.push_back(std::move(var));
    }
    return CaseDatabase::from_columns(std::move(variables), std::move(columns));
}

CaseDatabase load_cases(const std::filesystem::path& path, const std::optional<Schema>& schema) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw FormatError("cannot open case file " + path.string());
    return load_cases(in, schema);
}

Schema load_schema(std::istream& in) {
    Schema schema;
    auto lines = read_lines(in);
    for (std::size_t k = 0; k < lines.size(); ++k) {
        if (lines[k].empty()) continue;
        auto tokens = split_line(lines[k]);
        const auto where = "schema line " + std::to_string(k + 1);
        if (tokens.size() != 2 || tokens[0].empty()) throw FormatError(where + ": expected 'name,cardinality'");
        int card = 0;
        try {
            std::size_t used = 0;
            card = std::stoi(tokens[1], &used);
            if (used != tokens[1].size()) throw std::invalid_argument("trailing characters");
        } catch (const std::exception&) {
            throw FormatError(where + ": cardinality '" + tokens[1] + "' is not an integer");
        }
        if (card < 1) throw FormatError(where + ": cardinality must be positive");
        if (!schema.emplace(tokens[0], card).second)
            throw FormatError(where + ": variable '" + tokens[0] + "' declared twice");
    }
    return schema;
}

Schema load_schema(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw FormatError("cannot open schema file " + path.string());
    return load_schema(in);
}

void write_cases(std::ostream& out, const CaseDatabase& db) {
    const auto n = static_cast<int>(db.num_variables());
    for (int i = 0; i < n; ++i) out << (i ? "," : "") << db.variable(i).name;
    out << '\n';
    for (std::size_t row = 0; row < db.num_cases(); ++row) {
        for (int i = 0; i < n; ++i) out << (i ? "," : "") << db.variable(i).label(db.value(row, i));
        out << '\n';
    }
}

}  // namespace cbnet
