#include "cavmag/dynamics.hpp"
#include "cavmag/hamiltonian.hpp"
#include "cavmag/response.hpp"
#include "cavmag/run.hpp"
#include "cavmag/spectra.hpp"

#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

namespace py = pybind11;
using namespace cavmag;

PYBIND11_MODULE(_core, m) {
    m.doc() = "Two magnon modes coupled through a lossy microwave cavity";

    py::register_exception<NumericalError>(m, "NumericalError", PyExc_ArithmeticError);
    py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
    py::register_exception<ParameterError>(m, "ParameterError", PyExc_ValueError);

    py::class_<SystemParams>(m, "SystemParams")
        .def(py::init([](double kappa, double gamma1, double gamma2, double g1, double g2, double s) {
                 SystemParams p{kappa, gamma1, gamma2, g1, g2, s};
                 p.validate();
                 return p;
             }),
             py::arg("kappa") = 1.0, py::arg("gamma1") = 0.01, py::arg("gamma2") = 0.01, py::arg("g1") = 0.2,
             py::arg("g2") = 0.2, py::arg("s") = 0.0)
        .def_static("symmetric", &SystemParams::symmetric, py::arg("kappa"), py::arg("gamma"), py::arg("g"),
                    py::arg("s"))
        .def_readwrite("kappa", &SystemParams::kappa)
        .def_readwrite("gamma1", &SystemParams::gamma1)
        .def_readwrite("gamma2", &SystemParams::gamma2)
        .def_readwrite("g1", &SystemParams::g1)
        .def_readwrite("g2", &SystemParams::g2)
        .def_readwrite("s", &SystemParams::s)
        .def_property_readonly("induced_rate", &SystemParams::induced_rate)
        .def("with_s", &SystemParams::with_s)
        .def("__repr__", [](const SystemParams& p) {
            return "SystemParams(kappa=" + format_double(p.kappa) + ", gamma1=" + format_double(p.gamma1) +
                   ", gamma2=" + format_double(p.gamma2) + ", g1=" + format_double(p.g1) +
                   ", g2=" + format_double(p.g2) + ", s=" + format_double(p.s) + ")";
        });

    py::class_<DriveParams>(m, "DriveParams")
        .def(py::init([](double delta, double amplitude) {
                 DriveParams d{delta, amplitude};
                 d.validate();
                 return d;
             }),
             py::arg("delta") = 0.0, py::arg("amplitude") = 1.0)
        .def_readwrite("delta", &DriveParams::delta)
        .def_readwrite("amplitude", &DriveParams::amplitude);

    py::class_<AdiabaticModel>(m, "AdiabaticModel")
        .def_readonly("matrix", &AdiabaticModel::matrix)
        .def_readonly("Gamma", &AdiabaticModel::Gamma)
        .def_readonly("gamma_tilde1", &AdiabaticModel::gamma_tilde1)
        .def_readonly("gamma_tilde2", &AdiabaticModel::gamma_tilde2);

    py::enum_<SpectrumModel>(m, "SpectrumModel")
        .value("full", SpectrumModel::Full)
        .value("adiabatic", SpectrumModel::Adiabatic);

    py::class_<EigenBranchSet>(m, "EigenBranchSet")
        .def_readonly("sweep_values", &EigenBranchSet::sweep_values)
        .def_readonly("branches", &EigenBranchSet::branches)
        .def_readonly("cavity_branch", &EigenBranchSet::cavity_branch)
        .def_readonly("magnon1_branch", &EigenBranchSet::magnon1_branch)
        .def_readonly("magnon2_branch", &EigenBranchSet::magnon2_branch)
        .def_readonly("ambiguous_intervals", &EigenBranchSet::ambiguous_intervals);

    py::class_<ExceptionalPoint>(m, "ExceptionalPoint")
        .def_readonly("location", &ExceptionalPoint::location)
        .def_readonly("degenerate_value", &ExceptionalPoint::degenerate_value)
        .def_readonly("gap_at_location", &ExceptionalPoint::gap_at_location);

    py::class_<ResponsePoint>(m, "ResponsePoint")
        .def_readonly("delta", &ResponsePoint::delta)
        .def_readonly("a", &ResponsePoint::a)
        .def_readonly("m1", &ResponsePoint::m1)
        .def_readonly("m2", &ResponsePoint::m2)
        .def_readonly("total_spincurrent", &ResponsePoint::total_spincurrent)
        .def_readonly("dark_amplitude", &ResponsePoint::dark_amplitude)
        .def_readonly("r", &ResponsePoint::r)
        .def_readonly("t", &ResponsePoint::t);

    py::class_<Peak>(m, "Peak").def_readonly("delta", &Peak::delta).def_readonly("height", &Peak::height);

    py::class_<SpectrumSweep>(m, "SpectrumSweep")
        .def_readonly("grid", &SpectrumSweep::grid)
        .def_readonly("points", &SpectrumSweep::points)
        .def_readonly("peaks", &SpectrumSweep::peaks);

    py::class_<Trajectory>(m, "Trajectory")
        .def_readonly("times", &Trajectory::times)
        .def_readonly("states", &Trajectory::states)
        .def_readonly("step", &Trajectory::step)
        .def_readonly("final_residual", &Trajectory::final_residual);

    m.def("build_full_hamiltonian", &build_full_hamiltonian, py::arg("params"));
    m.def("build_adiabatic_model", &build_adiabatic_model, py::arg("params"));
    m.def("polariton_transform", &polariton_transform, py::arg("params"));
    m.def("drive_amplitude_from_power", &drive_amplitude_from_power, py::arg("power"), py::arg("frequency"));
    m.def("eigenvalues_3x3", &eigenvalues_3x3, py::arg("matrix"));
    m.def("closed_form_symmetric", &closed_form_symmetric, py::arg("params"));
    m.def("weak_coupling_approx", &weak_coupling_approx, py::arg("params"));
    m.def("adiabatic_eigenvalues", &adiabatic_eigenvalues, py::arg("model"));
    m.def("sweep_eigenvalues",
          py::overload_cast<const SystemParams&, double, double, std::size_t, SpectrumModel>(&sweep_eigenvalues),
          py::arg("params"), py::arg("s_min"), py::arg("s_max"), py::arg("n_points"),
          py::arg("model") = SpectrumModel::Full);
    m.def(
        "find_exceptional_point",
        [](const SystemParams& p, double lo, double hi, SpectrumModel model) {
            return find_exceptional_point(p, lo, hi, model);
        },
        py::arg("params"), py::arg("s_lo"), py::arg("s_hi"), py::arg("model") = SpectrumModel::Full);
    m.def("steady_state", &steady_state, py::arg("params"), py::arg("drive"));
    m.def("analytic_magnon_response", &analytic_magnon_response, py::arg("params"), py::arg("drive"));
    m.def(
        "spincurrent_spectrum",
        [](const SystemParams& p, const std::vector<double>& grid, double amplitude, bool refine) {
            return spincurrent_spectrum(p, grid, amplitude, refine);
        },
        py::arg("params"), py::arg("grid"), py::arg("amplitude") = 1.0, py::arg("refine_peaks") = false);
    m.def("resonance_peak_height", &resonance_peak_height, py::arg("params"), py::arg("amplitude") = 1.0);
    m.def(
        "reflection_transmission",
        [](const SystemParams& p, const DriveParams& d) {
            const auto sc = reflection_transmission(p, d);
            return py::make_tuple(sc.r, sc.t);
        },
        py::arg("params"), py::arg("drive"));
    m.def("dark_mode_amplitude", &dark_mode_amplitude, py::arg("params"), py::arg("drive"));
    m.def("integrate_full", &integrate_full, py::arg("params"), py::arg("drive"), py::arg("initial"),
          py::arg("t_end"), py::arg("dt"), py::arg("record_stride") = 1);
    m.def("integrate_adiabatic", &integrate_adiabatic, py::arg("model"), py::arg("initial"), py::arg("t_end"),
          py::arg("dt"), py::arg("record_stride") = 1);
    m.def("adiabatic_validity_report", &adiabatic_validity_report, py::arg("params"), py::arg("initial_magnons"),
          py::arg("t_end"), py::arg("dt") = 0.0);
    m.def(
        "run_config",
        [](const std::string& text) {
            const RunConfig cfg = parse_config(text);
            const RunResult res = execute(cfg);
            return py::make_tuple(to_csv(cfg, res.table), to_json_sidecar(cfg, res));
        },
        py::arg("text"), "Parse a config, run it, and return (csv_text, json_text) without touching the filesystem");
}
