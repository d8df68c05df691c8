#include <pybind11/complex.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "ahscatter/ah_transform.hpp"
#include "ahscatter/sign_analysis.hpp"
#include "ahscatter/zs_oracle.hpp"

namespace py = pybind11;
using namespace ahs;

PYBIND11_MODULE(_core, m) {
    m.doc() = "Semiclassical scattering data for focusing NLS initial data";
    m.attr("__version__") = toolkit_version;

    static py::exception<Error> error(m, "AhsError", PyExc_RuntimeError);
    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p) std::rethrow_exception(p);
        } catch (const Error& e) {
            py::set_error(error, e.what());
        }
    });

    py::class_<InitialDataSpec>(m, "InitialData")
        .def_readonly("family", &InitialDataSpec::family_tag)
        .def_readonly("parameter", &InitialDataSpec::parameter)
        .def_readonly("mu_minus", &InitialDataSpec::mu_minus)
        .def_readonly("mu_plus", &InitialDataSpec::mu_plus)
        .def("alpha", [](const InitialDataSpec& s, cplx x) { return s.alpha(x); })
        .def("alpha_prime", [](const InitialDataSpec& s, cplx x) { return s.alpha_prime(x); })
        .def("__repr__", [](const InitialDataSpec& s) {
            return "<InitialData " + s.family_tag + "(" + std::to_string(s.parameter) + ")>";
        });

    m.def("builtin_family", &builtin_family, py::arg("name"), py::arg("parameter"));
    m.def("inverse_map", [](const InitialDataSpec& s, cplx z) { return inverse_map(s, z); },
          py::arg("spec"), py::arg("z"));
    m.def("forward_f0", [](const InitialDataSpec& s, cplx z, double c) { return forward_f0(s, z, c); },
          py::arg("spec"), py::arg("z"), py::arg("f0_at_mu_plus") = 0.0);
    m.def("f0_prime", [](const InitialDataSpec& s, cplx z) { return f0_prime(s, z); }, py::arg("spec"),
          py::arg("z"));
    m.def("sech_closed_form_f0_prime", &sech_closed_form_f0_prime, py::arg("mu"), py::arg("z"));
    m.def("w", [](const InitialDataSpec& s, double z) { return w_of_z(s, z); }, py::arg("spec"), py::arg("z"));
    m.def(
        "roundtrip",
        [](const InitialDataSpec& s, const std::vector<double>& xs) {
            const RoundtripReport r = roundtrip(s, xs);
            return py::make_tuple(r.recovered, r.max_error);
        },
        py::arg("spec"), py::arg("x"), "Returns (recovered x values, max error).");
    m.def("bronski_critical_point", [] {
        const CriticalPoint cp = bronski_critical_point();
        return py::make_tuple(cp.mu_star, cp.z_star);
    });
    m.def(
        "reflection_coefficient",
        [](const InitialDataSpec& s, double z, double eps) { return integrate_zs(s, z, eps).r; },
        py::arg("spec"), py::arg("z"), py::arg("epsilon"));
}
