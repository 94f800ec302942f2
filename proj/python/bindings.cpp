#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "fsim/experiments.hpp"
#include "fsim/nv.hpp"

namespace py = pybind11;
using namespace fsim;

namespace {

PhysicalParams params_from_kwargs(double g_over_2pi, double D, double c, double d,
                                  double Omega_over_2pi, double theta, double kappa1,
                                  double kappa2, double gamma_ag, double gamma_ea,
                                  double gamma_eg, double gamma_phi_a, double gamma_phi_e,
                                  int d1, int d2) {
    PhysicalParams p;
    p.g1 = 2 * M_PI * g_over_2pi;
    p.g2 = d * p.g1;
    p.delta1 = D * p.g1;
    p.delta2 = c * p.delta1;
    p.Omega = 2 * M_PI * Omega_over_2pi;
    p.theta = theta;
    p.kappa1 = kappa1;
    p.kappa2 = kappa2;
    p.gamma_ag = gamma_ag;
    p.gamma_ea = gamma_ea;
    p.gamma_eg = gamma_eg;
    p.gamma_phi_a = gamma_phi_a;
    p.gamma_phi_e = gamma_phi_e;
    p.d1 = d1;
    p.d2 = d2;
    return p;
}

py::dict row_to_dict(const SweepRow& r) {
    py::dict d;
    d["scenario"] = r.scenario;
    d["D"] = r.D;
    d["c"] = r.c;
    d["d"] = r.d;
    d["delta_over_2pi_hz"] = r.delta_over_2pi_hz;
    d["lambda_over_2pi_hz"] = r.lambda_over_2pi_hz;
    d["t_swap_s"] = r.t_swap_s;
    d["fidelity"] = r.fidelity;
    d["leak_a"] = r.leak_a;
    d["trace_error"] = r.trace_error;
    d["wall_time_s"] = r.wall_time_s;
    return d;
}

InitialCase case_from_name(const std::string& scenario, int noon_n, double alpha, double beta) {
    SweepSpec s;
    s.scenario = scenario_from_string(scenario);
    s.noon_n = noon_n;
    s.alpha = alpha;
    s.beta = beta;
    return initial_case_for(s);
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "one-step controlled-SWAP between two bosonic quantum memories: gate dynamics, "
              "entangled-state synthesis under decoherence, swap tests and concurrence";

    py::register_exception<Error>(m, "FsimError");

    py::class_<SpaceLayout>(m, "SpaceLayout")
        .def(py::init<std::vector<int>>())
        .def_static("qutrit_with_modes", &SpaceLayout::qutrit_with_modes)
        .def_readonly("dims", &SpaceLayout::dims)
        .def("total", &SpaceLayout::total)
        .def("__repr__", [](const SpaceLayout& l) { return "SpaceLayout" + l.str(); });

    py::class_<Ket>(m, "Ket")
        .def_readonly("layout", &Ket::layout)
        .def_property_readonly("amps", [](const Ket& k) { return k.amps; })
        .def("norm", &Ket::norm);

    py::class_<DensityOp>(m, "DensityOp")
        .def_property_readonly("matrix", [](const DensityOp& r) { return r.mat; })
        .def_readonly("layout", &DensityOp::layout)
        .def("trace_real", &DensityOp::trace_real)
        .def("min_eigenvalue", &DensityOp::min_eigenvalue);

    py::class_<LinOp>(m, "LinOp")
        .def_property_readonly("matrix", [](const LinOp& o) { return o.mat; })
        .def_readonly("layout", &LinOp::layout);

    m.def("fock_state", &fock_state, py::arg("n"), py::arg("dim"));
    m.def("coherent_state", &coherent_state, py::arg("alpha"), py::arg("dim"),
          py::arg("tail_tol") = 1e-6);
    m.def(
        "cat_state",
        [](double alpha, const std::string& parity, int dim, double tol) {
            return cat_state(alpha, cat_parity_from_string(parity), dim, tol);
        },
        py::arg("alpha"), py::arg("parity"), py::arg("dim"), py::arg("tail_tol") = 1e-6);
    m.def("tensor", py::overload_cast<const Ket&, const Ket&>(&tensor));

    py::class_<PhysicalParams>(m, "PhysicalParams")
        .def(py::init(&params_from_kwargs), py::kw_only(), py::arg("g_over_2pi") = 70e6,
             py::arg("D") = 16.0, py::arg("c") = 1.0, py::arg("d") = 1.0,
             py::arg("Omega_over_2pi") = 100e6, py::arg("theta") = -M_PI / 2,
             py::arg("kappa1") = 0.0, py::arg("kappa2") = 0.0, py::arg("gamma_ag") = 0.0,
             py::arg("gamma_ea") = 0.0, py::arg("gamma_eg") = 0.0, py::arg("gamma_phi_a") = 0.0,
             py::arg("gamma_phi_e") = 0.0, py::arg("d1") = 6, py::arg("d2") = 6)
        .def_readwrite("g1", &PhysicalParams::g1)
        .def_readwrite("g2", &PhysicalParams::g2)
        .def_readwrite("delta1", &PhysicalParams::delta1)
        .def_readwrite("delta2", &PhysicalParams::delta2)
        .def_readwrite("Omega", &PhysicalParams::Omega)
        .def_readwrite("theta", &PhysicalParams::theta)
        .def_readwrite("kappa1", &PhysicalParams::kappa1)
        .def_readwrite("kappa2", &PhysicalParams::kappa2)
        .def_readwrite("d1", &PhysicalParams::d1)
        .def_readwrite("d2", &PhysicalParams::d2)
        .def("dispersive_warning", &PhysicalParams::dispersive_warning);

    py::class_<DerivedParams>(m, "DerivedParams")
        .def_readonly("lambda_", &DerivedParams::lambda)
        .def_readonly("omega_stark", &DerivedParams::omega_stark)
        .def_readonly("delta_prime", &DerivedParams::delta_prime)
        .def_readonly("t_swap", &DerivedParams::t_swap)
        .def_readonly("t_pulse", &DerivedParams::t_pulse);
    m.def("derive", &derive);

    m.def("ideal_fredkin", &ideal_fredkin);
    m.def("controlled_parity", &controlled_parity);
    m.def("effective_gate_unitary", &effective_gate_unitary);
    m.def("pulse_unitary", &pulse_unitary);

    py::class_<ProtocolResult>(m, "ProtocolResult")
        .def_readonly("pure", &ProtocolResult::pure)
        .def_readonly("t_gate", &ProtocolResult::t_gate)
        .def_readonly("t_pulse", &ProtocolResult::t_pulse)
        .def_readonly("leak_a", &ProtocolResult::leak_a)
        .def_readonly("trace_error", &ProtocolResult::trace_error)
        .def_readonly("top_fock", &ProtocolResult::top_fock)
        .def_readonly("fidelity", &ProtocolResult::fidelity)
        .def_readonly("fidelity_ideal_gate", &ProtocolResult::fidelity_ideal_gate)
        .def_property_readonly("final_rho", [](const ProtocolResult& r) { return r.final_rho; });

    m.def(
        "run_protocol",
        [](const PhysicalParams& p, const std::string& scenario, int noon_n, double alpha,
           double beta, const std::string& mode, bool lossy, bool include_pulse,
           bool lossy_pulse) {
            RunOptions opts;
            opts.mode = gate_mode_from_string(mode);
            opts.lossy = lossy;
            opts.include_pulse = include_pulse;
            opts.lossy_pulse = lossy_pulse;
            return run_protocol(p, case_from_name(scenario, noon_n, alpha, beta), opts);
        },
        py::arg("params"), py::kw_only(), py::arg("scenario") = "noon", py::arg("noon_n") = 5,
        py::arg("alpha") = 1.1, py::arg("beta") = 1.1, py::arg("mode") = "full",
        py::arg("lossy") = true, py::arg("include_pulse") = true, py::arg("lossy_pulse") = true,
        py::call_guard<py::gil_scoped_release>());

    py::class_<Measurement>(m, "Measurement")
        .def_property_readonly("p_g", [](const Measurement& m_) { return m_.g.probability; })
        .def_property_readonly("p_e", [](const Measurement& m_) { return m_.e.probability; })
        .def_readonly("leak_a", &Measurement::leak_a)
        .def_property_readonly("memory_g",
                               [](const Measurement& m_) { return m_.g.memory_state; })
        .def_property_readonly("memory_e",
                               [](const Measurement& m_) { return m_.e.memory_state; });
    m.def("measure_control", py::overload_cast<const DensityOp&>(&measure_control));

    m.def(
        "swap_test",
        [](const Ket& psi, const Ket& phi, const std::string& gate,
           const PhysicalParams* params) {
            SwapGateRoute route =
                gate == "ideal" ? SwapGateRoute::IdealGate : SwapGateRoute::EffectiveModel;
            SwapTestRun r = run_swap_test(psi, phi, ControlAmplitudes::balanced(), route, params);
            py::dict out;
            out["p_g"] = r.p_g;
            out["inferred_F2"] = r.inferred_F2;
            out["true_F2"] = r.true_F2;
            return out;
        },
        py::arg("psi"), py::arg("phi"), py::arg("gate") = "ideal",
        py::arg("params") = nullptr);

    m.def(
        "target_entangled_state",
        [](const std::string& kind, const std::string& branch, int N, double alpha, double beta,
           int d1, int d2) {
            TargetState t;
            if (kind == "noon")
                t.kind = TargetKind::Noon;
            else if (kind == "coherent")
                t.kind = TargetKind::EntCoherent;
            else if (kind == "cat")
                t.kind = TargetKind::EntCat;
            else
                throw ConfigError("unknown target kind '" + kind + "'");
            t.branch = branch_from_string(branch);
            t.N = N;
            t.alpha = alpha;
            t.beta = beta;
            return target_entangled_state(t, SpaceLayout({d1, d2}));
        },
        py::arg("kind"), py::arg("branch") = "plus", py::arg("N") = 5, py::arg("alpha") = 1.1,
        py::arg("beta") = 1.1, py::arg("d1") = 6, py::arg("d2") = 6);

    m.def("state_fidelity", &state_fidelity);
    m.def("overlap_fidelity", &overlap_fidelity);
    m.def("concurrence", &concurrence_oracle);
    m.def(
        "concurrence_closed_form",
        [](Cx gamma, Cx eta, double F, const std::string& branch) {
            auto r = concurrence_closed_form(gamma, eta, F, branch_from_string(branch));
            py::dict out;
            out["value"] = r.value;
            out["radicand"] = r.radicand;
            out["negative_radicand"] = r.negative_radicand;
            return out;
        },
        py::arg("gamma"), py::arg("eta"), py::arg("F"), py::arg("branch") = "plus");
    m.def(
        "concurrence_from_overlap",
        [](Cx gamma, Cx eta, double F, const std::string& branch) {
            return concurrence_from_overlap(gamma, eta, F, branch_from_string(branch));
        },
        py::arg("gamma"), py::arg("eta"), py::arg("F"), py::arg("branch") = "plus");

    m.def(
        "sweep_detuning",
        [](const std::string& scenario, const std::vector<double>& D_grid, bool lossy,
           bool include_pulse, int jobs) {
            SweepSpec s;
            s.scenario = scenario_from_string(scenario);
            s.D_grid = D_grid;
            s.lossy = lossy;
            s.include_pulse = include_pulse;
            s.jobs = jobs;
            py::list out;
            for (const auto& r : sweep_detuning(s)) out.append(row_to_dict(r));
            return out;
        },
        py::arg("scenario"), py::arg("D_grid"), py::arg("lossy") = true,
        py::arg("include_pulse") = true, py::arg("jobs") = 1,
        py::call_guard<py::gil_scoped_release>());

    m.def(
        "validate_low_excitation",
        [](int N, double mu_over_2pi, double delta_over_2pi, int excitations, double horizon) {
            SpinEnsembleSpec spec =
                SpinEnsembleSpec::uniform(N, 2 * M_PI * mu_over_2pi, 2 * M_PI * delta_over_2pi);
            if (horizon <= 0) horizon = M_PI / collective_coupling(spec).mu_total;
            return validate_low_excitation(spec, excitations, horizon);
        },
        py::arg("N"), py::arg("mu_over_2pi") = 7e6, py::arg("delta_over_2pi") = 0.0,
        py::arg("excitations") = 1, py::arg("horizon") = 0.0,
        py::call_guard<py::gil_scoped_release>());
}
