#include <sstream>

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <cbnet/cb.hpp>
#include <cbnet/citest.hpp>
#include <cbnet/cli.hpp>
#include <cbnet/dot.hpp>
#include <cbnet/error.hpp>
#include <cbnet/geneval.hpp>
#include <cbnet/k2score.hpp>

namespace py = pybind11;
using namespace cbnet;

namespace {

CaseDatabase cases_from_rows(const std::vector<std::string>& names, const std::vector<int>& cardinalities,
                             const std::vector<std::vector<int>>& rows) {
    if (names.size() != cardinalities.size()) throw ArgumentError("need one cardinality per name");
    std::vector<Variable> vars;
    for (std::size_t i = 0; i < names.size(); ++i) vars.push_back({names[i], cardinalities[i], {}});
    return CaseDatabase(std::move(vars), rows);
}

std::vector<std::vector<int>> rows_of(const CaseDatabase& db) {
    std::vector<std::vector<int>> rows(db.num_cases(), std::vector<int>(db.num_variables()));
    for (std::size_t r = 0; r < db.num_cases(); ++r)
        for (std::size_t i = 0; i < db.num_variables(); ++i) rows[r][i] = db.value(r, static_cast<int>(i));
    return rows;
}

OrderingMode parse_mode(const std::string& mode) {
    if (mode == "total") return OrderingMode::Total;
    if (mode == "partial") return OrderingMode::Partial;
    throw ArgumentError("mode must be 'total' or 'partial'");
}

}  // namespace

PYBIND11_MODULE(_cbnet, m) {
    m.doc() = "Bayesian-network structure learning from complete discrete data";

    py::register_exception<FormatError>(m, "FormatError", PyExc_ValueError);
    py::register_exception<SchemaError>(m, "SchemaError", PyExc_ValueError);
    py::register_exception<ArgumentError>(m, "ArgumentError", PyExc_ValueError);
    py::register_exception<InvariantError>(m, "InvariantError", PyExc_RuntimeError);

    py::class_<CaseDatabase>(m, "CaseDatabase")
        .def(py::init(&cases_from_rows), py::arg("names"), py::arg("cardinalities"), py::arg("rows"))
        .def_property_readonly("num_variables", &CaseDatabase::num_variables)
        .def_property_readonly("num_cases", &CaseDatabase::num_cases)
        .def_property_readonly("names", &CaseDatabase::names)
        .def("cardinality", &CaseDatabase::cardinality)
        .def("labels", [](const CaseDatabase& db, int i) { return db.variable(i).labels; })
        .def("rows", &rows_of)
        .def("__eq__", &CaseDatabase::operator==)
        .def("__repr__", [](const CaseDatabase& db) {
            return "<CaseDatabase " + std::to_string(db.num_variables()) + " variables, " +
                   std::to_string(db.num_cases()) + " cases>";
        });

    py::class_<Dag>(m, "Dag")
        .def(py::init<int>(), py::arg("n"))
        .def(py::init<std::vector<std::vector<int>>>(), py::arg("parents"))
        .def_property_readonly("size", &Dag::size)
        .def("parents", &Dag::parents)
        .def("parent_sets", &Dag::parent_sets)
        .def("has_edge", &Dag::has_edge)
        .def("add_edge", &Dag::add_edge)
        .def("edges", &Dag::edges)
        .def_property_readonly("edge_count", &Dag::edge_count)
        .def("__eq__", &Dag::operator==)
        .def("__repr__", [](const Dag& d) {
            return "<Dag " + std::to_string(d.size()) + " nodes, " + std::to_string(d.edge_count()) + " edges>";
        });

    py::class_<Iteration>(m, "Iteration")
        .def_readonly("ord", &Iteration::ord)
        .def_readonly("skeleton_edges", &Iteration::skeleton_edges)
        .def_readonly("log_score", &Iteration::log_score)
        .def_readonly("accepted", &Iteration::accepted);

    py::class_<CBResult>(m, "CBResult")
        .def_readonly("parents", &CBResult::parents)
        .def_readonly("log_score", &CBResult::log_score)
        .def_readonly("iterations", &CBResult::iterations)
        .def_readonly("max_ord_used", &CBResult::max_ord_used)
        .def_property_readonly("termination", [](const CBResult& r) { return std::string(to_string(r.termination)); })
        .def_property_readonly("trace", [](const CBResult& r) {
            std::ostringstream out;
            write_trace(out, r);
            return out.str();
        });

    py::class_<IndependenceVerdict>(m, "IndependenceVerdict")
        .def_readonly("independent", &IndependenceVerdict::independent)
        .def_readonly("statistic", &IndependenceVerdict::statistic)
        .def_readonly("dof", &IndependenceVerdict::dof)
        .def_readonly("p_value", &IndependenceVerdict::p_value);

    py::class_<StructuralDiff>(m, "StructuralDiff")
        .def_readonly("missing", &StructuralDiff::missing)
        .def_readonly("extra", &StructuralDiff::extra)
        .def_readonly("reversed", &StructuralDiff::reversed)
        .def_readonly("correct", &StructuralDiff::correct);

    py::class_<BayesNet>(m, "BayesNet")
        .def_readonly("dag", &BayesNet::dag)
        .def_readonly("names", &BayesNet::names)
        .def_readonly("values", &BayesNet::values)
        .def_readonly("cpts", &BayesNet::cpts)
        .def_property_readonly("size", &BayesNet::size);

    m.def(
        "load_cases",
        [](const std::filesystem::path& path, std::optional<Schema> schema) { return load_cases(path, schema); },
        py::arg("path"), py::arg("schema") = py::none(), "Read a CSV case file.");

    m.def(
        "log_g", [](const CaseDatabase& db, int target, const std::vector<int>& parents) { return log_g(db, target, parents); },
        py::arg("db"), py::arg("target"), py::arg("parents"), "Natural-log K2 score of one node given its parents.");
    m.def("log_network_score", &log_network_score, py::arg("db"), py::arg("dag"));
    m.def(
        "k2",
        [](const CaseDatabase& db, const std::vector<int>& ordering, std::optional<int> max_parents) {
            return k2(db, ordering, K2Config{max_parents});
        },
        py::arg("db"), py::arg("ordering"), py::arg("max_parents") = py::none(),
        "Greedy K2 search over a total node ordering.");

    m.def(
        "ci_test",
        [](const CaseDatabase& db, int a, int b, const std::vector<int>& cond, double alpha) {
            return ci_test(db, a, b, cond, alpha);
        },
        py::arg("db"), py::arg("a"), py::arg("b"), py::arg("cond") = std::vector<int>{}, py::arg("alpha") = 0.1);
    m.def("chi_square_pvalue", &chi_square_pvalue, py::arg("statistic"), py::arg("dof"));
    m.def(
        "d_separated",
        [](const Dag& dag, int a, int b, const std::vector<int>& cond) { return d_separated(dag, a, b, cond); },
        py::arg("dag"), py::arg("a"), py::arg("b"), py::arg("cond") = std::vector<int>{});

    m.def(
        "cb_learn",
        [](const CaseDatabase& db, double alpha, int max_degree, std::optional<int> max_parents, const std::string& mode,
           std::optional<int> max_ord) {
            LearnConfig cfg;
            cfg.alpha = alpha;
            cfg.degree_bound = max_degree;
            cfg.max_parents = max_parents;
            cfg.mode = parse_mode(mode);
            cfg.max_ord = max_ord;
            py::gil_scoped_release release;
            return cb_learn(db, cfg);
        },
        py::arg("db"), py::arg("alpha") = 0.1, py::arg("max_degree") = 15, py::arg("max_parents") = py::none(),
        py::arg("mode") = "total", py::arg("max_ord") = py::none(), "Learn a structure with the CB algorithm.");

    m.def("load_network", py::overload_cast<const std::filesystem::path&>(&load_network), py::arg("path"));
    m.def("save_network", py::overload_cast<const std::filesystem::path&, const BayesNet&>(&save_network),
          py::arg("path"), py::arg("net"));
    m.def("alarm_network", &alarm_network, py::arg("seed") = 1993);
    m.def("led_network", &led_network);
    m.def("forward_sample", &forward_sample, py::arg("net"), py::arg("cases"), py::arg("seed"));
    m.def("structural_diff", &structural_diff, py::arg("learned"), py::arg("gold"));

    m.def(
        "to_dot",
        [](const Dag& dag, const std::vector<std::string>& names) {
            std::ostringstream out;
            write_dot(out, dag, names);
            return out.str();
        },
        py::arg("dag"), py::arg("names"));
    m.def(
        "run_cli",
        [](const std::vector<std::string>& args) {
            std::ostringstream out, err;
            const int code = run_cli(args, out, err);
            return py::make_tuple(code, out.str(), err.str());
        },
        py::arg("args"), "Run one command-line invocation; returns (exit_code, stdout, stderr).");
}
