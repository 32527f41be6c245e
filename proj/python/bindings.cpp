#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "attractorlab/attractor.hpp"
#include "attractorlab/scalar_ode.hpp"
#include "attractorlab/scenario.hpp"

namespace py = pybind11;
using namespace attractorlab;

PYBIND11_MODULE(_attractorlab, m) {
    m.doc() = "pullback attractors of scalar parabolic problems over compact hull flows";

    py::enum_<BoundaryKind>(m, "BoundaryKind")
        .value("Neumann", BoundaryKind::Neumann)
        .value("Robin", BoundaryKind::Robin)
        .value("Dirichlet", BoundaryKind::Dirichlet);

    py::enum_<SectionClass>(m, "SectionClass")
        .value("Trivial", SectionClass::Trivial)
        .value("StronglyPositive", SectionClass::StronglyPositive)
        .value("Indeterminate", SectionClass::Indeterminate);

    py::class_<DriverSpec>(m, "DriverSpec")
        .def_static("p0", &DriverSpec::p0)
        .def_static("p1", &DriverSpec::p1)
        .def_static("p2", &DriverSpec::p2)
        .def_static("constant", &DriverSpec::constant, py::arg("c"))
        .def_static("quasi_periodic", &DriverSpec::quasi_periodic,
                    py::arg("amplitudes"), py::arg("frequencies"), py::arg("phases"))
        .def_static("slow_growth", &DriverSpec::slow_growth,
                    py::arg("beta") = 0.5, py::arg("terms") = 16)
        .def("time_reversed", &DriverSpec::time_reversed)
        .def("bound", &DriverSpec::bound)
        .def("label", &DriverSpec::label);

    py::class_<HullPoint>(m, "HullPoint")
        .def_static("of", &HullPoint::of, py::arg("driver"), py::arg("shift") = 0.0)
        .def_static("limit_zero", &HullPoint::limit_zero)
        .def_static("limit_const", &HullPoint::limit_const)
        .def("label", &HullPoint::label);

    m.def("evaluate", &evaluate, py::arg("hp"), py::arg("t"));
    m.def("advance", &advance, py::arg("hp"), py::arg("t"));
    m.def("limit_points", &limit_points, py::arg("driver"));

    m.def("log_cocycle", &log_cocycle, py::arg("hp"), py::arg("t"),
          py::arg("step") = 1e-3);

    py::class_<LyapunovEstimate>(m, "LyapunovEstimate")
        .def_readonly("lambda_sup_plus", &LyapunovEstimate::lambda_sup_plus)
        .def_readonly("lambda_inf_plus", &LyapunovEstimate::lambda_inf_plus)
        .def_readonly("lambda_sup_minus", &LyapunovEstimate::lambda_sup_minus)
        .def_readonly("lambda_inf_minus", &LyapunovEstimate::lambda_inf_minus)
        .def_readonly("horizon", &LyapunovEstimate::horizon);
    m.def("lyapunov", &lyapunov, py::arg("hp"), py::arg("horizon"),
          py::arg("step") = 2e-2);

    py::class_<SpectralInterval>(m, "SpectralInterval")
        .def_readonly("alpha_lower", &SpectralInterval::alpha_lower)
        .def_readonly("lambda_upper", &SpectralInterval::lambda_upper)
        .def_readonly("samples", &SpectralInterval::samples);
    m.def("spectrum_estimate", &spectrum_estimate, py::arg("driver"),
          py::arg("horizons"), py::arg("shifts"), py::arg("step") = 2e-2);

    py::class_<TailIntegralResult>(m, "TailIntegralResult")
        .def_readonly("beta", &TailIntegralResult::beta)
        .def_readonly("truncation_T", &TailIntegralResult::truncation_T)
        .def_readonly("value", &TailIntegralResult::value)
        .def_readonly("tail_bound", &TailIntegralResult::tail_bound)
        .def_readonly("converged", &TailIntegralResult::converged)
        .def_readonly("integrable", &TailIntegralResult::integrable);
    m.def("tail_integral", &tail_integral, py::arg("hp"), py::arg("beta"),
          py::arg("T"), py::arg("tol"), py::arg("step") = 1e-2,
          py::arg("offset_rate") = 0.0, py::arg("scale") = 1.0);
    m.def("is_asymptotic_at_minus_infinity", &is_asymptotic_at_minus_infinity,
          py::arg("hp"), py::arg("beta"), py::arg("T"));

    m.def("closed_form_v", &closed_form_v, py::arg("hp"), py::arg("t"),
          py::arg("tol") = 1e-8);
    m.def("entire_solution_w0", &entire_solution_w0, py::arg("hp"), py::arg("t"),
          py::arg("theta"), py::arg("tol") = 1e-8);

    py::class_<ScalarProblem>(m, "ScalarProblem")
        .def(py::init<double, HullPoint>(), py::arg("theta"), py::arg("driver"));
    py::class_<ScalarTrajectory>(m, "ScalarTrajectory")
        .def_readonly("times", &ScalarTrajectory::times)
        .def_readonly("values", &ScalarTrajectory::values)
        .def("final_value", &ScalarTrajectory::final_value);
    m.def("integrate_scalar", &integrate_scalar, py::arg("problem"), py::arg("r"),
          py::arg("t0"), py::arg("t1"), py::arg("dt"));
    py::class_<ScalarAttractor>(m, "ScalarAttractor")
        .def_readonly("b_star", &ScalarAttractor::b_star)
        .def_readonly("horizon", &ScalarAttractor::horizon)
        .def_readonly("cauchy_gap", &ScalarAttractor::cauchy_gap)
        .def_readonly("classification", &ScalarAttractor::classification);
    m.def("pullback_bstar", &pullback_bstar, py::arg("problem"), py::arg("r"),
          py::arg("horizons"), py::arg("tol"));

    py::class_<Grid>(m, "Grid")
        .def(py::init<double, int, BoundaryKind, double>(), py::arg("length"),
             py::arg("n_nodes"), py::arg("bc"), py::arg("robin_alpha") = 0.0)
        .def_readonly("length", &Grid::length)
        .def_readonly("n_nodes", &Grid::n_nodes)
        .def("nodes", &Grid::nodes);

    py::class_<FieldState>(m, "FieldState")
        .def_static("constant", &FieldState::constant, py::arg("grid"), py::arg("c"))
        .def_readwrite("values", &FieldState::values)
        .def("sup_norm", &FieldState::sup_norm);

    py::class_<NonlinearitySpec>(m, "NonlinearitySpec")
        .def_static("pure_power", &NonlinearitySpec::pure_power, py::arg("rho"),
                    py::arg("theta"))
        .def_static("deadzone", &NonlinearitySpec::deadzone, py::arg("rho"),
                    py::arg("theta"), py::arg("r0"))
        .def("g", &NonlinearitySpec::g, py::arg("y"));

    py::class_<LinearCoefficientSpec>(m, "LinearCoefficientSpec")
        .def(py::init([](double gamma_offset, const HullPoint& hp,
                         std::vector<double> profile) {
                 LinearCoefficientSpec c;
                 c.gamma_offset = gamma_offset;
                 c.driver = hp;
                 c.spatial_profile = std::move(profile);
                 return c;
             }),
             py::arg("gamma_offset"), py::arg("driver"),
             py::arg("spatial_profile") = std::vector<double>{})
        .def_readwrite("gamma_offset", &LinearCoefficientSpec::gamma_offset)
        .def_readwrite("driver", &LinearCoefficientSpec::driver)
        .def_readwrite("spatial_profile", &LinearCoefficientSpec::spatial_profile);

    m.def("principal_eigenpair", &principal_eigenpair, py::arg("grid"));
    m.def("evolve", &evolve, py::arg("coeff"), py::arg("g"), py::arg("grid"),
          py::arg("z0"), py::arg("t"), py::arg("dt"));
    m.def("evolve_linear", &evolve_linear, py::arg("coeff"), py::arg("grid"),
          py::arg("z0"), py::arg("t"), py::arg("dt"));
    m.def("pde_cocycle", &pde_cocycle, py::arg("coeff"), py::arg("grid"),
          py::arg("t"), py::arg("dt"));

    py::class_<ProblemSetup>(m, "ProblemSetup")
        .def(py::init([](LinearCoefficientSpec coeff, NonlinearitySpec g, Grid grid) {
                 return ProblemSetup{std::move(coeff), std::move(g), std::move(grid)};
             }),
             py::arg("coeff"), py::arg("g"), py::arg("grid"));

    py::class_<PullbackOptions>(m, "PullbackOptions")
        .def(py::init<>())
        .def_readwrite("r", &PullbackOptions::r)
        .def_readwrite("horizons", &PullbackOptions::horizons)
        .def_readwrite("tol", &PullbackOptions::tol)
        .def_readwrite("dt", &PullbackOptions::dt);

    py::class_<AttractorSection>(m, "AttractorSection")
        .def_readonly("b_field", &AttractorSection::b_field)
        .def_readonly("classification", &AttractorSection::classification)
        .def_readonly("horizon", &AttractorSection::horizon)
        .def_readonly("cauchy_gap", &AttractorSection::cauchy_gap)
        .def_readonly("converged", &AttractorSection::converged)
        .def_readonly("sup_norm", &AttractorSection::sup_norm)
        .def_readonly("min_interior", &AttractorSection::min_interior);

    m.def("pullback_boundary", &pullback_boundary, py::arg("setup"), py::arg("hp"),
          py::arg("options"));
    m.def("pullback_section", &pullback_section, py::arg("setup"), py::arg("hp"),
          py::arg("options"));
    m.def(
        "integrability_criterion",
        [](const HullPoint& hp, double theta, double T, double tol) {
            return integrability_criterion(hp, theta, T, tol);
        },
        py::arg("hp"), py::arg("theta"), py::arg("T"), py::arg("tol"));

    m.def("run_scenario_file", &run_scenario_file, py::arg("config_path"),
          py::arg("output_dir"));
}
