#include "jclcd/cd.hpp"
#include "jclcd/errors.hpp"
#include "jclcd/evolve.hpp"
#include "jclcd/observables.hpp"
#include "jclcd/runner.hpp"
#include "jclcd/spectrum.hpp"

#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

namespace py = pybind11;
using namespace jclcd;

namespace {

// Rows are recorded times.
ComplexMatrix stack_states(const std::vector<ComplexVector>& states) {
    ComplexMatrix out(static_cast<Eigen::Index>(states.size()), states.empty() ? 0 : states.front().size());
    for (std::size_t i = 0; i < states.size(); ++i) out.row(static_cast<Eigen::Index>(i)) = states[i].transpose();
    return out;
}

py::array_t<Complex> stack_densities(const std::vector<ComplexMatrix>& states) {
    const py::ssize_t n = static_cast<py::ssize_t>(states.size());
    const py::ssize_t d = states.empty() ? 0 : states.front().rows();
    py::array_t<Complex> out({n, d, d});
    auto view = out.mutable_unchecked<3>();
    for (py::ssize_t i = 0; i < n; ++i)
        for (py::ssize_t a = 0; a < d; ++a)
            for (py::ssize_t b = 0; b < d; ++b) view(i, a, b) = states[static_cast<std::size_t>(i)](a, b);
    return out;
}

std::vector<double> column(const std::vector<CouplingSample>& cs, double CouplingSample::*field) {
    std::vector<double> out;
    out.reserve(cs.size());
    for (const CouplingSample& c : cs) out.push_back(c.*field);
    return out;
}

py::dict trajectory_dict(const Trajectory& t) {
    py::dict d;
    d["drive"] = to_string(t.drive);
    d["times"] = t.times;
    d["states"] = stack_states(t.states);
    d["g"] = column(t.couplings, &CouplingSample::g);
    d["J"] = column(t.couplings, &CouplingSample::j);
    d["im_gl"] = t.im_gl;
    d["convergence_error"] = t.convergence_error;
    return d;
}

IntegratorConfig integrator(int steps, int record_every, bool check) {
    IntegratorConfig cfg{steps, record_every, check};
    cfg.validate();
    return cfg;
}

ExperimentConfig config_from(const py::object& source) {
    const std::string text = py::str(source);
    if (text.find('{') != std::string::npos) return parse_config(text);
    return load_preset(text);
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Counterdiabatic driving of a Jaynes-Cummings lattice";

    auto base = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
    py::register_exception<SizeError>(m, "SizeError", base.ptr());
    py::register_exception<NonFiniteError>(m, "NonFiniteError", base.ptr());
    py::register_exception<RangeError>(m, "RangeError", base.ptr());
    py::register_exception<DimensionError>(m, "DimensionError", base.ptr());
    py::register_exception<DegenerateModeError>(m, "DegenerateModeError", base.ptr());
    py::register_exception<DegenerateSpectrumError>(m, "DegenerateSpectrumError", base.ptr());
    py::register_exception<ConvergenceError>(m, "ConvergenceError", base.ptr());
    py::register_exception<NumericalIntegrityError>(m, "NumericalIntegrityError", base.ptr());
    py::register_exception<ConfigError>(m, "ConfigError", base.ptr());

    py::enum_<Boundary>(m, "Boundary").value("PBC", Boundary::Periodic).value("OBC", Boundary::Open);
    py::enum_<Branch>(m, "Branch").value("PLUS", Branch::Plus).value("MINUS", Branch::Minus);
    py::enum_<DrivePlan>(m, "Drive")
        .value("NONE", DrivePlan::None)
        .value("EXACT", DrivePlan::ExactCD)
        .value("LOCAL", DrivePlan::LocalCD);
    py::enum_<CdMethod>(m, "CdMethod")
        .value("SPECTRAL_SUM", CdMethod::SpectralSum)
        .value("MODE_BLOCKS", CdMethod::ModeBlocks);

    py::class_<LatticeSpec>(m, "Lattice")
        .def(py::init(&make_lattice_spec), py::arg("n_sites"), py::arg("boundary"), py::arg("delta"))
        .def_property_readonly("n_sites", &LatticeSpec::n_sites)
        .def_property_readonly("boundary", &LatticeSpec::boundary)
        .def_property_readonly("delta", &LatticeSpec::delta)
        .def_property_readonly("dim", &LatticeSpec::dim);

    py::class_<CouplingSample>(m, "Couplings")
        .def(py::init<double, double, double, double, double>(), py::arg("t"), py::arg("g"), py::arg("J"),
             py::arg("dg"), py::arg("dJ"))
        .def_readonly("t", &CouplingSample::t)
        .def_readonly("g", &CouplingSample::g)
        .def_readonly("J", &CouplingSample::j)
        .def_readonly("dg", &CouplingSample::dg)
        .def_readonly("dJ", &CouplingSample::dj);

    py::class_<RampSchedule>(m, "Ramp")
        .def(py::init<double, double, double, double, double>(), py::arg("g0"), py::arg("gf"), py::arg("J0"),
             py::arg("Jf"), py::arg("T"))
        .def_property_readonly("T", &RampSchedule::total_time)
        .def("at", [](const RampSchedule& s, double t) { return couplings_at(s, t); }, py::arg("t"))
        .def("with_total_time", &RampSchedule::with_total_time, py::arg("T"));

    py::class_<ModeSpectrum>(m, "Mode")
        .def_readonly("k", &ModeSpectrum::k)
        .def_readonly("delta_k", &ModeSpectrum::delta_k)
        .def_readonly("chi_k", &ModeSpectrum::chi_k)
        .def_readonly("theta_k", &ModeSpectrum::theta_k)
        .def_readonly("lambda_plus", &ModeSpectrum::lambda_plus)
        .def_readonly("lambda_minus", &ModeSpectrum::lambda_minus);

    m.def("assemble_hr", &assemble_hr, py::arg("lattice"), py::arg("g"), py::arg("J"));
    m.def("mode_spectra", &mode_spectra, py::arg("lattice"), py::arg("g"), py::arg("J"));
    m.def("eigenstate", &eigenstate, py::arg("lattice"), py::arg("g"), py::arg("J"), py::arg("k"),
          py::arg("branch"));
    m.def("eigvalsh", [](const ComplexMatrix& h) { return jacobi_eigensystem(h).eigenvalues; }, py::arg("h"),
          "Eigenvalues of a small Hermitian matrix (ascending), by cyclic Jacobi.");
    m.def("cd_strength", &cd_strength, py::arg("lattice"), py::arg("couplings"), py::arg("k"));
    m.def(
        "exact_cd", [](const LatticeSpec& s, const CouplingSample& c, CdMethod method) {
            return exact_cd_matrix(s, c, method);
        },
        py::arg("lattice"), py::arg("couplings"), py::arg("method") = CdMethod::ModeBlocks);
    m.def(
        "local_cd", [](const LatticeSpec& s, const CouplingSample& c) {
            return local_cd_matrix(s, local_cd_params(s, c));
        },
        py::arg("lattice"), py::arg("couplings"));
    m.def("total_hamiltonian", &total_hamiltonian, py::arg("lattice"), py::arg("couplings"), py::arg("drive"));
    m.def("initial_ground_state", &initial_ground_state, py::arg("lattice"), py::arg("ramp"));

    m.def(
        "evolve",
        [](const LatticeSpec& s, const RampSchedule& r, DrivePlan d, const ComplexVector& psi0, int steps,
           int record_every, bool check, bool dense) {
            const IntegratorConfig cfg = integrator(steps, record_every, check);
            Trajectory t;
            {
                py::gil_scoped_release release;
                t = dense ? evolve_schrodinger(s, r, d, psi0, cfg) : evolve_blockwise(s, r, d, psi0, cfg);
            }
            return trajectory_dict(t);
        },
        py::arg("lattice"), py::arg("ramp"), py::arg("drive"), py::arg("psi0"), py::arg("steps") = 1 << 14,
        py::arg("record_every") = 0, py::arg("convergence_check") = false, py::arg("dense") = false);

    m.def(
        "evolve_lindblad",
        [](const LatticeSpec& s, const RampSchedule& r, DrivePlan d, const ComplexMatrix& rho0, double gamma,
           double kappa, int steps, int record_every) {
            const IntegratorConfig cfg = integrator(steps, record_every, false);
            DensityTrajectory t;
            {
                py::gil_scoped_release release;
                t = evolve_lindblad(s, r, d, rho0, {gamma, kappa}, cfg);
            }
            py::dict out;
            out["drive"] = to_string(t.drive);
            out["times"] = t.times;
            out["states"] = stack_densities(t.states);
            out["g"] = column(t.couplings, &CouplingSample::g);
            out["J"] = column(t.couplings, &CouplingSample::j);
            out["min_eigenvalue_warnings"] = t.positivity_warnings.size();
            return out;
        },
        py::arg("lattice"), py::arg("ramp"), py::arg("drive"), py::arg("rho0"), py::arg("gamma") = 0.0,
        py::arg("kappa") = 0.0, py::arg("steps") = 1 << 14, py::arg("record_every") = 0);
    m.def("embed_pure_state", &embed_pure_state, py::arg("psi"));

    m.def("ground_fidelity", &ground_fidelity_pure, py::arg("lattice"), py::arg("g"), py::arg("J"), py::arg("psi"));
    m.def("ground_fidelity_mixed", &ground_fidelity_mixed, py::arg("lattice"), py::arg("g"), py::arg("J"),
          py::arg("rho"));
    m.def(
        "energy_cost",
        [](const LatticeSpec& s, const RampSchedule& r, DrivePlan d, const ComplexVector& psi, double t) {
            const EnergyCostSample e = energy_cost(s, r, d, psi, t);
            return py::make_tuple(e.delta_e, e.ground_energy);
        },
        py::arg("lattice"), py::arg("ramp"), py::arg("drive"), py::arg("psi"), py::arg("t"),
        "Returns (delta_E, E_G).");
    m.def("w_state", &w_state_reference, py::arg("n_sites"));

    m.def("presets", &preset_names);
    m.def("preset_json", &preset_json, py::arg("name"));
    m.def(
        "trace_csv", [](const py::object& cfg) { return run_trace(config_from(cfg)).str(); }, py::arg("config"),
        "Trace CSV for a preset name or a JSON config string.");
    m.def(
        "sweep_time_csv", [](const py::object& cfg) { return run_time_sweep(config_from(cfg)).str(); },
        py::arg("config"));
    m.def(
        "sweep_kappa_csv", [](const py::object& cfg) { return run_kappa_sweep(config_from(cfg)).str(); },
        py::arg("config"));
    m.def(
        "validate",
        [](const py::object& cfg) {
            const ValidationReport r = validate(config_from(cfg));
            std::ostringstream out;
            r.print(out);
            return py::make_tuple(r.passed(), out.str());
        },
        py::arg("config"), "Runs the oracle checks; returns (passed, report).");
}
