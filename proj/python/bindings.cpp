#include <pybind11/functional.h>
#include <pybind11/numpy.h>
#include <pybind11/operators.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <algorithm>
#include <string>
#include <vector>

#include "ruinlab/error.hpp"
#include "ruinlab/model.hpp"
#include "ruinlab/solver.hpp"
#include "ruinlab/verify.hpp"

namespace py = pybind11;
using namespace ruinlab;

namespace {

py::array_t<double> to_array(const std::vector<double>& v) {
    py::array_t<double> out(static_cast<py::ssize_t>(v.size()));
    std::copy(v.begin(), v.end(), out.mutable_data());
    return out;
}

std::string params_repr(const ModelParams& p) {
    return "ModelParams(a=" + py::repr(py::float_(p.a())).cast<std::string>() +
           ", b=" + py::repr(py::float_(p.b())).cast<std::string>() +
           ", c=" + py::repr(py::float_(p.c())).cast<std::string>() +
           ", lambda_=" + py::repr(py::float_(p.lambda())).cast<std::string>() +
           ", m=" + py::repr(py::float_(p.m())).cast<std::string>() + ")";
}

}  // namespace

PYBIND11_MODULE(_core, mod) {
    mod.doc() = "Survival probability of an insurer investing in a risky asset";

    auto error = py::register_exception<Error>(mod, "Error", PyExc_RuntimeError);
    py::register_exception<InvalidParams>(mod, "InvalidParams", error.ptr());
    py::register_exception<NoSolution>(mod, "NoSolution", error.ptr());
    py::register_exception<Refused>(mod, "Refused", error.ptr());
    py::register_exception<RegimeMismatch>(mod, "RegimeMismatch", error.ptr());
    py::register_exception<NumericalFailure>(mod, "NumericalFailure", error.ptr());

    py::enum_<Regime>(mod, "Regime")
        .value("Main", Regime::Main)
        .value("ClassicalCL", Regime::ClassicalCL)
        .value("RiskFree", Regime::RiskFree)
        .value("CapitalStock", Regime::CapitalStock)
        .value("NoSolution", Regime::NoSolution);

    py::enum_<NoSolutionReason>(mod, "NoSolutionReason")
        .value("None_", NoSolutionReason::None)
        .value("SafetyLoadingNonpositive", NoSolutionReason::SafetyLoadingNonpositive)
        .value("SharesNotRobust", NoSolutionReason::SharesNotRobust)
        .value("BorderlineRobustness", NoSolutionReason::BorderlineRobustness);

    py::enum_<Spacing>(mod, "Spacing").value("Uniform", Spacing::Uniform).value("Log", Spacing::Log);

    py::class_<ModelParams>(mod, "ModelParams")
        .def(py::init<double, double, double, double, double>(), py::arg("a"), py::arg("b"), py::arg("c"),
             py::arg("lambda_"), py::arg("m"))
        .def_property_readonly("a", &ModelParams::a)
        .def_property_readonly("b", &ModelParams::b)
        .def_property_readonly("c", &ModelParams::c)
        .def_property_readonly("lambda_", &ModelParams::lambda)
        .def_property_readonly("m", &ModelParams::m)
        .def("robustness", &ModelParams::robustness)
        .def(py::self == py::self)
        .def("__repr__", &params_repr);

    py::class_<Classification>(mod, "Classification")
        .def_readonly("regime", &Classification::regime)
        .def_readonly("reason", &Classification::reason);
    mod.def("classify_regime", &classify_regime, py::arg("params"));

    py::class_<Tolerances>(mod, "Tolerances")
        .def(py::init<double, double>(), py::arg("rtol") = 1e-10, py::arg("atol") = 1e-12)
        .def_readwrite("rtol", &Tolerances::rtol)
        .def_readwrite("atol", &Tolerances::atol);

    py::class_<GridSpec>(mod, "GridSpec")
        .def(py::init([](double u_max, std::size_t points, Spacing spacing) {
                 return GridSpec{u_max, points, spacing};
             }),
             py::arg("u_max") = 100.0, py::arg("points") = 201, py::arg("spacing") = Spacing::Uniform)
        .def_readwrite("u_max", &GridSpec::u_max)
        .def_readwrite("points", &GridSpec::points)
        .def_readwrite("spacing", &GridSpec::spacing);

    py::class_<SolveOptions>(mod, "SolveOptions")
        .def(py::init<>())
        .def_readwrite("grid", &SolveOptions::grid)
        .def_readwrite("tol", &SolveOptions::tol)
        .def_readwrite("series_order", &SolveOptions::series_order)
        .def_readwrite("series_tol", &SolveOptions::series_tol)
        .def_readwrite("U", &SolveOptions::U)
        .def_readwrite("stability_tol", &SolveOptions::stability_tol)
        .def_readwrite("max_doublings", &SolveOptions::max_doublings);

    py::class_<TailFit>(mod, "TailFit")
        .def_readonly("A", &TailFit::A)
        .def_readonly("K", &TailFit::K)
        .def_readonly("exponent", &TailFit::exponent)
        .def_readonly("U", &TailFit::U)
        .def_readonly("stability", &TailFit::stability);

    py::class_<Diagnostics>(mod, "Diagnostics")
        .def_readonly("u0", &Diagnostics::u0)
        .def_readonly("order", &Diagnostics::order)
        .def_readonly("u0_fallback", &Diagnostics::u0_fallback)
        .def_readonly("U", &Diagnostics::U)
        .def_readonly("tolerances", &Diagnostics::tolerances)
        .def_readonly("steps", &Diagnostics::steps)
        .def_readonly("error_estimate", &Diagnostics::error_estimate);

    py::class_<SolutionGrid>(mod, "Solution")
        .def_readonly("regime", &SolutionGrid::regime)
        .def_readonly("reason", &SolutionGrid::reason)
        .def_readonly("params", &SolutionGrid::params)
        .def_property_readonly("u", [](const SolutionGrid& s) { return to_array(s.u); })
        .def_property_readonly("phi", [](const SolutionGrid& s) { return to_array(s.phi); })
        .def_property_readonly("dphi", [](const SolutionGrid& s) { return to_array(s.dphi); })
        .def_property_readonly("ddphi", [](const SolutionGrid& s) { return to_array(s.ddphi); })
        .def_readonly("C0", &SolutionGrid::C0)
        .def_readonly("P1", &SolutionGrid::P1)
        .def_readonly("tail", &SolutionGrid::tail)
        .def_readonly("diagnostics", &SolutionGrid::diagnostics)
        .def_readonly("span_end", &SolutionGrid::span_end)
        .def("ruin_certain", &SolutionGrid::ruin_certain)
        .def(
            "evaluate",
            [](const SolutionGrid& s, double u) {
                const PhiJet j = s.evaluate(u);
                return py::make_tuple(j.phi, j.dphi, j.ddphi);
            },
            py::arg("u"), "Returns (phi, phi', phi'') at u.");

    mod.def("solve", &solve, py::arg("params"), py::arg("options") = SolveOptions{},
            py::call_guard<py::gil_scoped_release>());

    py::class_<ResidualReport>(mod, "ResidualReport")
        .def_property_readonly("u", [](const ResidualReport& r) { return to_array(r.u); })
        .def_property_readonly("residual", [](const ResidualReport& r) { return to_array(r.residual); })
        .def_readonly("sup_norm", &ResidualReport::sup_norm)
        .def_readonly("sup_rel", &ResidualReport::sup_rel);
    mod.def(
        "ide_residual",
        [](const SolutionGrid& s, const std::vector<double>& grid, const Tolerances& tol) {
            return ide_residual(s, grid, tol);
        },
        py::arg("solution"), py::arg("grid"), py::arg("tol") = Tolerances{1e-12, 1e-15});

    py::class_<McOptions>(mod, "McOptions")
        .def(py::init<>())
        .def_readwrite("n_paths", &McOptions::n_paths)
        .def_readwrite("T", &McOptions::T)
        .def_readwrite("dt", &McOptions::dt)
        .def_readwrite("seed", &McOptions::seed)
        .def_readwrite("threads", &McOptions::threads);

    py::class_<McEstimate>(mod, "McEstimate")
        .def_readonly("u", &McEstimate::u)
        .def_readonly("n_paths", &McEstimate::n_paths)
        .def_readonly("T", &McEstimate::T)
        .def_readonly("dt", &McEstimate::dt)
        .def_readonly("seed", &McEstimate::seed)
        .def_readonly("p_hat", &McEstimate::p_hat)
        .def_readonly("std_error", &McEstimate::std_error);
    mod.def("mc_survival", &mc_survival, py::arg("params"), py::arg("u"), py::arg("options") = McOptions{},
            py::call_guard<py::gil_scoped_release>());
    mod.def("default_horizon", &default_horizon, py::arg("params"));
    mod.def("default_time_step", &default_time_step, py::arg("params"));

    py::class_<TailExponentFit>(mod, "TailExponentFit")
        .def_readonly("slope", &TailExponentFit::slope)
        .def_readonly("K", &TailExponentFit::K)
        .def_readonly("samples", &TailExponentFit::samples);
    mod.def(
        "tail_exponent",
        [](const SolutionGrid& s, double lo, double hi) { return tail_exponent(s, lo, hi); },
        py::arg("solution"), py::arg("lo"), py::arg("hi"));
}
