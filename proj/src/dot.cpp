#include <cbnet/dot.hpp>

#include <algorithm>
#include <cctype>
#include <fstream>
#include <map>
#include <set>

#include <cbnet/error.hpp>

namespace cbnet {

namespace {

bool is_bare(const std::string& name) {
    return !name.empty() &&
           std::all_of(name.begin(), name.end(), [](unsigned char ch) { return std::isalnum(ch) || ch == '_'; });
}

std::string quote(const std::string& name) {
    if (is_bare(name)) return name;
    std::string out = "\"";
    for (char ch : name) {
        if (ch == '"' || ch == '\\') out += '\\';
        out += ch;
    }
    return out + '"';
}

void write_nodes(std::ostream& out, const std::vector<std::string>& names, int n) {
    if (static_cast<int>(names.size()) != n) throw ArgumentError("need one name per vertex");
    out << "digraph G {\n";
    for (const auto& name : names) out << "  " << quote(name) << ";\n";
}

class LineParser {
public:
    LineParser(const std::string& line, std::size_t number) : line_(line), number_(number) {}

    void skip_space() {
        while (pos_ < line_.size() && std::isspace(static_cast<unsigned char>(line_[pos_]))) ++pos_;
    }

    bool consume(std::string_view token) {
        skip_space();
        if (line_.compare(pos_, token.size(), token) != 0) return false;
        pos_ += token.size();
        return true;
    }

    bool at_end() {
        skip_space();
        return pos_ == line_.size();
    }

    std::string name() {
        skip_space();
        if (pos_ < line_.size() && line_[pos_] == '"') {
            std::string out;
            ++pos_;
            while (pos_ < line_.size() && line_[pos_] != '"') {
                if (line_[pos_] == '\\' && pos_ + 1 < line_.size()) ++pos_;
                out += line_[pos_++];
            }
            if (pos_ == line_.size()) fail("unterminated quoted name");
            ++pos_;
            return out;
        }
        auto start = pos_;
        while (pos_ < line_.size() && (std::isalnum(static_cast<unsigned char>(line_[pos_])) || line_[pos_] == '_')) ++pos_;
        if (start == pos_) fail("expected a node name");
        return line_.substr(start, pos_ - start);
    }

    [[noreturn]] void fail(const std::string& what) const {
        throw FormatError("DOT line " + std::to_string(number_) + ": " + what);
    }

private:
    const std::string& line_;
    std::size_t number_;
    std::size_t pos_ = 0;
};

}  // namespace

void write_dot(std::ostream& out, const Dag& dag, const std::vector<std::string>& names) {
    write_nodes(out, names, dag.size());
    for (auto [p, c] : dag.edges())
        out << "  " << quote(names[static_cast<std::size_t>(p)]) << " -> " << quote(names[static_cast<std::size_t>(c)])
            << ";\n";
    out << "}\n";
}

void write_dot(std::ostream& out, const MixedGraph& g, const std::vector<std::string>& names) {
    write_nodes(out, names, g.size());
    for (auto [a, b] : g.pairs()) {
        const auto& na = names[static_cast<std::size_t>(a)];
        const auto& nb = names[static_cast<std::size_t>(b)];
        switch (g.kind(a, b)) {
            case EdgeKind::Undirected: out << "  " << quote(na) << " -> " << quote(nb) << " [dir=none];\n"; break;
            case EdgeKind::Bidirected: out << "  " << quote(na) << " -> " << quote(nb) << " [dir=both];\n"; break;
            case EdgeKind::Directed:
                if (g.directed(a, b))
                    out << "  " << quote(na) << " -> " << quote(nb) << ";\n";
                else
                    out << "  " << quote(nb) << " -> " << quote(na) << ";\n";
                break;
            case EdgeKind::Absent: break;
        }
    }
    out << "}\n";
}

DotGraph parse_dot(std::istream& in) {
    DotGraph dot;
    std::set<std::string> declared;
    auto declare = [&](const std::string& name) {
        if (declared.insert(name).second) dot.nodes.push_back(name);
    };

    std::string line;
    std::size_t number = 0;
    bool opened = false, closed = false;
    while (std::getline(in, line)) {
        ++number;
        LineParser p(line, number);
        if (p.at_end() || p.consume("//") || p.consume("#")) continue;
        if (!opened) {
            if (!p.consume("digraph")) p.fail("expected 'digraph'");
            while (!p.at_end() && !p.consume("{")) p.name();
            opened = true;
            continue;
        }
        if (p.consume("}")) {
            closed = true;
            continue;
        }
        if (closed) p.fail("content after closing brace");

        auto from = p.name();
        if (p.consume("->")) {
            DotGraph::Line edge{from, p.name(), EdgeKind::Directed};
            if (p.consume("[")) {
                if (!p.consume("dir") || !p.consume("=")) p.fail("only the dir attribute is supported");
                if (p.consume("none"))
                    edge.kind = EdgeKind::Undirected;
                else if (p.consume("both"))
                    edge.kind = EdgeKind::Bidirected;
                else if (!p.consume("forward"))
                    p.fail("unknown dir value");
                if (!p.consume("]")) p.fail("expected ']'");
            }
            declare(edge.from);
            declare(edge.to);
            dot.edges.push_back(std::move(edge));
        } else {
            declare(from);
        }
        p.consume(";");
        if (!p.at_end()) p.fail("unexpected trailing text");
    }
    if (!opened) throw FormatError("DOT input has no digraph");
    if (!closed) throw FormatError("DOT input is missing its closing brace");
    return dot;
}

DotGraph parse_dot(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw FormatError("cannot open DOT file " + path.string());
    return parse_dot(in);
}

Dag dag_from_dot(const DotGraph& dot, const std::vector<std::string>& names) {
    std::map<std::string, int> index;
    for (std::size_t i = 0; i < names.size(); ++i) index[names[i]] = static_cast<int>(i);
    auto lookup = [&](const std::string& name) {
        auto it = index.find(name);
        if (it == index.end()) throw FormatError("DOT graph mentions unknown node '" + name + "'");
        return it->second;
    };
    for (const auto& node : dot.nodes) lookup(node);

    std::vector<std::vector<int>> parents(names.size());
    for (const auto& e : dot.edges) {
        if (e.kind != EdgeKind::Directed)
            throw FormatError("edge " + e.from + " -> " + e.to + " is not directed; a DAG was expected");
        parents[static_cast<std::size_t>(lookup(e.to))].push_back(lookup(e.from));
    }
    try {
        return Dag(std::move(parents));
    } catch (const ArgumentError& e) {
        throw FormatError(std::string("DOT graph is not a DAG: ") + e.what());
    }
}

}  // namespace cbnet
