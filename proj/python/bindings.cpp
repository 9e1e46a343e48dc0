#include <pybind11/eigen.h>
#include <pybind11/operators.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "spectral/certify.hpp"
#include "spectral/json_io.hpp"

namespace py = pybind11;
using namespace spectral;

namespace {

std::optional<double> end_or_none(const std::optional<Interval>& x, bool lower) {
    if (!x) return std::nullopt;
    return lower ? x->lo() : x->hi();
}

}  // namespace

PYBIND11_MODULE(_spectral, m) {
    m.doc() = "Interval enclosures and spectrum certification for localized patterns";
    m.attr("__version__") = kToolVersion;

    // library errors surface as RuntimeError carrying the kind prefix
    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p) std::rethrow_exception(p);
        } catch (const Error& e) {
            PyErr_SetString(PyExc_RuntimeError, e.what());
        }
    });

    py::class_<Interval>(m, "Interval")
        .def(py::init<double>())
        .def(py::init<double, double>())
        .def_property_readonly("lo", &Interval::lo)
        .def_property_readonly("hi", &Interval::hi)
        .def("mid", &Interval::mid)
        .def("width", &Interval::width)
        .def("contains", py::overload_cast<double>(&Interval::contains, py::const_))
        .def(py::self + py::self)
        .def(py::self - py::self)
        .def(py::self * py::self)
        .def(py::self / py::self)
        .def("__repr__", [](const Interval& x) {
            return "Interval(" + shortest_decimal(x.lo()) + ", " + shortest_decimal(x.hi()) + ")";
        });

    m.def("parse_interval", &parse_interval_literal, "tight enclosure of a decimal or hex literal");
    m.def("sqrt", &iv_sqrt);
    m.def("exp", py::overload_cast<const Interval&>(&spectral::exp));

    m.def(
        "essential_spectrum",
        [](const std::string& model_json) {
            std::vector<std::pair<std::optional<double>, std::optional<double>>> out;
            for (const auto& p : essential_spectrum(model_from_json(model_json)).pieces)
                out.emplace_back(end_or_none(p.lo, true), end_or_none(p.hi, false));
            return out;
        },
        py::arg("model_json"), "pieces (lo, hi) of the symbol range, None for an infinite end");

    m.def(
        "gershgorin_disks",
        [](const Eigen::MatrixXd& a) {
            Jacobian jac = jacobian_from_matrix(IMatrix(a));
            DiskSet ds = cluster_disks(gershgorin_radii(build_pseudo_diag(jac), jac));
            std::vector<std::tuple<std::complex<double>, double>> disks;
            for (const auto& d : ds.disks) disks.emplace_back(d.center.mid(), d.radius.hi());
            std::vector<std::vector<size_t>> clusters;
            for (const auto& c : ds.clusters) clusters.push_back(c.members);
            return py::make_tuple(disks, clusters);
        },
        py::arg("matrix"), "disks (center, radius) and clusters for a real square matrix");

    m.def(
        "newton",
        [](const std::string& model_json, int N, double d, const std::string& sector, const std::string& kind,
           double amplitude, double width) {
            ModelDescriptor md = model_from_json(model_json);
            GridSpec g{md.m, N, d};
            FourierSeq seed = make_seed({kind, amplitude, width, ""}, g, Sector::parse(sector, md.m));
            NewtonResult r = newton_solve(md, seed);
            return py::make_tuple(seq_to_json(r.U0), r.iterations, r.residual);
        },
        py::arg("model_json"), py::arg("N"), py::arg("d"), py::arg("sector") = "c", py::arg("seed") = "gaussian",
        py::arg("amplitude") = 1.0, py::arg("width") = 1.0,
        "floating point Newton solve; returns (sequence json, iterations, residual)");

    m.def(
        "run",
        [](const std::string& config_path) {
            RunResult r = run(read_run_config(config_path));
            return py::make_tuple(r.exit_code, r.document.dump());
        },
        py::arg("config_path"), "run a configuration file; returns (exit code, document json)");
}
