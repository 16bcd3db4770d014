#include <sstream>

#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "nearsearch/bounds.hpp"
#include "nearsearch/cli.hpp"
#include "nearsearch/constructions.hpp"
#include "nearsearch/oracle.hpp"
#include "nearsearch/swap_engine.hpp"

namespace py = pybind11;
using namespace nearsearch;

namespace {

// Cells as Python values: int symbol, None for Empty, "x" for a Marker.
py::object cell_value(Cell c) {
    if (c.is_symbol()) return py::int_(c.value());
    if (c.is_marker()) return py::str("x");
    return py::none();
}

py::list transversal_list(const PartialTransversal& t) {
    py::list out;
    for (const auto& e : t.entries) out.append(py::make_tuple(e.row, e.col, e.symbol));
    return out;
}

py::dict stats_dict(const SearchStats& s) {
    py::dict d;
    d["true_leaves"] = s.true_leaves;
    d["false_leaves"] = s.false_leaves;
    d["pruned_leaves"] = s.pruned_leaves;
    d["cycle_backs_at"] = std::vector<std::uint64_t>(s.cycle_backs_at.begin(), s.cycle_backs_at.end());
    d["nodes"] = s.nodes;
    d["max_depth"] = s.max_depth;
    return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.attr("__version__") = kVersion;

    py::register_exception<GridParseError>(m, "GridParseError", PyExc_ValueError);
    py::register_exception<OracleCapError>(m, "OracleCapError", PyExc_ValueError);

    py::class_<PartialLatinArray>(m, "LatinArray")
        .def(py::init<int, int, int>(), py::arg("rows"), py::arg("cols"), py::arg("universe"))
        .def_static("parse", [](const std::string& text) { return parse_array(text); })
        .def_property_readonly("rows", &PartialLatinArray::rows)
        .def_property_readonly("cols", &PartialLatinArray::cols)
        .def_property_readonly("universe", &PartialLatinArray::universe)
        .def("__getitem__", [](const PartialLatinArray& a, std::pair<int, int> rc) {
            if (rc.first < 0 || rc.first >= a.rows() || rc.second < 0 || rc.second >= a.cols())
                throw py::index_error("cell out of range");
            return cell_value(a.at(rc.first, rc.second));
        })
        .def("is_latin", [](const PartialLatinArray& a) { return check_latin(a).ok(); })
        .def("to_text", &serialize_array)
        .def("__str__", &serialize_array)
        .def("__eq__", [](const PartialLatinArray& a, const PartialLatinArray& b) { return a == b; });

    m.def(
        "max_diagonal_weight",
        [](const PartialLatinArray& a, int max_order) {
            const auto r = max_diagonal_weight(a, OracleConfig{max_order});
            return py::make_tuple(r.value, std::get<DiagonalPerm>(r.witness).columns());
        },
        py::arg("array"), py::arg("max_order") = 10);
    m.def(
        "max_partial_transversal",
        [](const PartialLatinArray& a, int max_order) {
            const auto r = max_partial_transversal_length(a, OracleConfig{max_order});
            return py::make_tuple(r.value, transversal_list(std::get<PartialTransversal>(r.witness)));
        },
        py::arg("array"), py::arg("max_order") = 10);

    m.def(
        "verify_order",
        [](int n, const std::string& algorithm, bool swap_only, bool square_prune, int parallel) {
            SearchOptions options;
            options.swap_only = swap_only;
            options.square_prune = square_prune;
            options.parallel = parallel;
            OrderReport r;
            {
                py::gil_scoped_release release;
                r = verify_order(n, algorithm_from_string(algorithm), options);
            }
            py::dict d;
            d["order"] = r.order;
            d["algorithm"] = to_string(r.algorithm);
            d["proved"] = r.proved;
            d["stats"] = stats_dict(r.stats);
            std::vector<PartialLatinArray> failures;
            for (const auto& f : r.failures) failures.push_back(f.array);
            d["failures"] = failures;
            d["chain_assumption"] = r.chain_assumption;
            return d;
        },
        py::arg("n"), py::arg("algorithm") = "advanced", py::arg("swap_only") = false,
        py::arg("square_prune") = false, py::arg("parallel") = 1);

    m.def("drisko", &drisko, py::arg("m"), py::arg("n"));
    m.def("certify_no_transversal", [](const PartialLatinArray& a) {
        const auto c = certify_no_transversal(a);
        py::dict d;
        d["pattern_ok"] = c.pattern_ok;
        d["no_transversal"] = c.no_transversal;
        d["min_count"] = c.min_count;
        d["max_count"] = c.max_count;
        d["delta_table"] = c.delta_table;
        return d;
    });

    m.def(
        "minimize_nk",
        [](int max_k, bounds::Value n2) {
            bounds::MinimizeOptions options;
            options.n2 = n2;
            const auto r = bounds::minimize_nk(max_k, options);
            py::list out;
            for (const auto& l : r.levels) out.append(py::make_tuple(l.k, l.n_k, l.witness.values));
            return out;
        },
        py::arg("max_k"), py::arg("n2") = bounds::kDefaultN2);
    m.def(
        "check_sequence",
        [](const std::vector<bounds::Value>& seq, bounds::Value n2) {
            const auto c = bounds::check_sequence(bounds::BoundSequence{seq}, n2);
            return py::make_tuple(c.ok, bounds::describe(c));
        },
        py::arg("sequence"), py::arg("n2") = bounds::kDefaultN2);
    m.def("guarantee_length", [](bounds::Value n) {
        const auto g = bounds::guarantee_length(n);
        py::dict d;
        d["length"] = g.length;
        d["rule"] = bounds::to_string(g.rule);
        d["k_star"] = g.k_star;
        return d;
    });

    m.def("run_cli", [](const std::vector<std::string>& args) {
        std::ostringstream out, err;
        const int code = run_cli(args, out, err);
        return py::make_tuple(code, out.str(), err.str());
    });
}
