#include <cbnet/cli.hpp>

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include <cbnet/cb.hpp>
#include <cbnet/casedata.hpp>
#include <cbnet/dot.hpp>
#include <cbnet/error.hpp>
#include <cbnet/geneval.hpp>
#include <cbnet/k2score.hpp>

namespace cbnet {

namespace {

struct LearnOptions {
    std::string data;
    std::string schema;
    double alpha = 0.1;
    int max_degree = 15;
    std::optional<int> max_parents;
    std::string mode = "total";
    std::optional<int> max_ord;
    bool trace = false;
    std::string out;
};

struct SampleOptions {
    std::string net;
    std::size_t cases = 1000;
    std::uint64_t seed = 1;
    std::string out;
};

struct CompareOptions {
    std::string learned;
    std::string gold;
};

struct ScoreOptions {
    std::string data;
    std::string schema;
    std::string learned;
};

std::string format_score(double score) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6f", score);
    return buf;
}

std::ofstream open_output(const std::string& path) {
    std::ofstream file(path, std::ios::binary);
    if (!file) throw FormatError("cannot write " + path);
    return file;
}

CaseDatabase read_data(const std::string& data, const std::string& schema) {
    std::optional<Schema> declared;
    if (!schema.empty()) declared = load_schema(std::filesystem::path(schema));
    return load_cases(std::filesystem::path(data), declared);
}

// Structure and node names from a DOT file, or from a network JSON file.
std::pair<std::vector<std::string>, DotGraph> read_structure(const std::string& path) {
    if (std::filesystem::path(path).extension() == ".json") {
        auto bn = load_network(std::filesystem::path(path));
        DotGraph dot;
        dot.nodes = bn.names;
        for (auto [p, c] : bn.dag.edges())
            dot.edges.push_back({bn.names[static_cast<std::size_t>(p)], bn.names[static_cast<std::size_t>(c)], EdgeKind::Directed});
        return {bn.names, dot};
    }
    auto dot = parse_dot(std::filesystem::path(path));
    return {dot.nodes, dot};
}

void run_learn(const LearnOptions& o, std::ostream& out) {
    auto db = read_data(o.data, o.schema);
    LearnConfig cfg;
    cfg.alpha = o.alpha;
    cfg.degree_bound = o.max_degree;
    cfg.max_parents = o.max_parents;
    cfg.mode = o.mode == "partial" ? OrderingMode::Partial : OrderingMode::Total;
    cfg.max_ord = o.max_ord;
    auto result = cb_learn(db, cfg);

    std::ostringstream summary;
    summary << "log_score\t" << format_score(result.log_score) << '\n';
    summary << "max_ord\t" << result.max_ord_used << '\n';
    summary << "termination\t" << to_string(result.termination) << '\n';
    summary << "edges\t" << result.parents.edge_count() << '\n';
    summary << "iterations\t" << result.iterations.size() << '\n';
    if (o.trace) write_trace(summary, result);

    if (!o.out.empty()) {
        auto file = open_output(o.out);
        write_dot(file, result.parents, db.names());
        out << summary.str();
    } else {
        write_dot(out, result.parents, db.names());
        std::istringstream lines(summary.str());
        for (std::string line; std::getline(lines, line);) out << "// " << line << '\n';
    }
}

void run_sample(const SampleOptions& o, std::ostream& out) {
    auto bn = load_network(std::filesystem::path(o.net));
    auto db = forward_sample(bn, o.cases, o.seed);
    if (o.out.empty()) {
        write_cases(out, db);
    } else {
        auto file = open_output(o.out);
        write_cases(file, db);
    }
}

void run_compare(const CompareOptions& o, std::ostream& out) {
    auto [gold_names, gold_dot] = read_structure(o.gold);
    auto [learned_names, learned_dot] = read_structure(o.learned);
    auto names = gold_names;
    for (const auto& name : learned_names)
        if (std::find(names.begin(), names.end(), name) == names.end()) names.push_back(name);
    auto diff = structural_diff(dag_from_dot(learned_dot, names), dag_from_dot(gold_dot, names));
    write_diff_report(out, diff, names);
}

void run_score(const ScoreOptions& o, std::ostream& out) {
    auto db = read_data(o.data, o.schema);
    auto [names, dot] = read_structure(o.learned);
    auto dag = dag_from_dot(dot, db.names());
    out << "log_score\t" << format_score(log_network_score(db, dag)) << '\n';
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Bayesian-network structure learning from complete discrete data", "cbnet"};
    app.option_defaults()->always_capture_default();
    app.require_subcommand(1);

    LearnOptions learn;
    auto* learn_cmd = app.add_subcommand("learn", "Learn a structure from a CSV case file");
    learn_cmd->add_option("--data", learn.data, "CSV case file")->required();
    learn_cmd->add_option("--schema", learn.schema, "Optional name,cardinality schema file");
    learn_cmd->add_option("--alpha", learn.alpha, "Chi-square test level")->check(CLI::Range(0.0, 1.0));
    learn_cmd->add_option("--max-degree", learn.max_degree, "Skeleton degree bound u")->check(CLI::PositiveNumber);
    learn_cmd->add_option("--max-parents", learn.max_parents, "Parent bound for K2 (default: unbounded)")
        ->check(CLI::PositiveNumber);
    learn_cmd->add_option("--mode", learn.mode, "Ordering handed to K2")
        ->check(CLI::IsMember({"total", "partial"}));
    learn_cmd->add_option("--max-ord", learn.max_ord, "Highest CI order (default: n-2)")
        ->check(CLI::NonNegativeNumber);
    learn_cmd->add_flag("--trace", learn.trace, "Append the per-iteration trace to the summary");
    learn_cmd->add_option("--out", learn.out, "DOT output file (default: standard output)");

    SampleOptions sample;
    auto* sample_cmd = app.add_subcommand("sample", "Forward-sample cases from a network file");
    sample_cmd->add_option("--net", sample.net, "Network JSON file")->required();
    sample_cmd->add_option("--cases", sample.cases, "Number of cases");
    sample_cmd->add_option("--seed", sample.seed, "Random seed");
    sample_cmd->add_option("--out", sample.out, "CSV output file (default: standard output)");

    CompareOptions compare;
    auto* compare_cmd = app.add_subcommand("compare", "Structural diff of a learned structure against a gold one");
    compare_cmd->add_option("--learned", compare.learned, "Learned DOT file")->required();
    compare_cmd->add_option("--gold", compare.gold, "Gold DOT file or network JSON")->required();

    ScoreOptions score;
    auto* score_cmd = app.add_subcommand("score", "Log score of a DOT structure against a CSV case file");
    score_cmd->add_option("--data", score.data, "CSV case file")->required();
    score_cmd->add_option("--schema", score.schema, "Optional name,cardinality schema file");
    score_cmd->add_option("--learned", score.learned, "DOT structure to score")->required();

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        auto* target = &app;
        for (auto* sub : app.get_subcommands()) target = sub;
        out << target->help();
        return kExitOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "cbnet: " << e.what() << '\n';
        return kExitUsage;
    }

    try {
        if (*learn_cmd) run_learn(learn, out);
        if (*sample_cmd) run_sample(sample, out);
        if (*compare_cmd) run_compare(compare, out);
        if (*score_cmd) run_score(score, out);
    } catch (const ArgumentError& e) {
        err << "cbnet: " << e.what() << '\n';
        return kExitUsage;
    } catch (const FormatError& e) {
        err << "cbnet: " << e.what() << '\n';
        return kExitFileError;
    } catch (const SchemaError& e) {
        err << "cbnet: " << e.what() << '\n';
        return kExitFileError;
    } catch (const std::exception& e) {
        err << "cbnet: internal error: " << e.what() << '\n';
        return kExitInternal;
    }
    return kExitOk;
}

}  // namespace cbnet
