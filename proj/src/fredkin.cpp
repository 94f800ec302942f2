#include "fsim/fredkin.hpp"

#include <cmath>
#include <limits>

namespace fsim {

ControlAmplitudes::ControlAmplitudes(Cx gamma, Cx eta) : gamma(gamma), eta(eta) {
    if (std::abs(std::norm(gamma) + std::norm(eta) - 1.0) > 1e-10)
        throw ConditionError("control amplitudes must satisfy |gamma|^2 + |eta|^2 = 1");
}

GateMode gate_mode_from_string(const std::string& s) {
    if (s == "full") return GateMode::Full;
    if (s == "effective") return GateMode::Effective;
    throw ConfigError("unknown gate mode '" + s + "' (expected full or effective)");
}

Timing timing_from_string(const std::string& s) {
    if (s == "nominal") return Timing::Nominal;
    if (s == "actual") return Timing::Actual;
    throw ConfigError("unknown timing '" + s + "' (expected nominal or actual)");
}

Ket initial_state(const InitialCase& c, const SpaceLayout& layout) {
    if (layout.factors() != 3 || layout.dims[0] != 3)
        throw LayoutError("initial_state expects a [qutrit, mode1, mode2] layout");
    int d1 = layout.dims[1], d2 = layout.dims[2];

    Vec ctrl(3);
    ctrl << c.control.gamma, 0.0, c.control.eta;
    Ket q = Ket(SpaceLayout::single(3), ctrl);

    struct Builder {
        int d1, d2;
        std::pair<Ket, Ket> operator()(const NoonInput& in) const {
            if (in.N >= d1)
                throw TruncationError("NOON photon number " + std::to_string(in.N) +
                                      " requires cutoff > N", in.N + 1);
            return {fock_state(in.N, d1), fock_state(0, d2)};
        }
        std::pair<Ket, Ket> operator()(const CoherentInput& in) const {
            return {coherent_state(in.alpha, d1), coherent_state(-in.beta, d2)};
        }
        std::pair<Ket, Ket> operator()(const CatInput& in) const {
            return {cat_state(in.alpha, CatParity::Even, d1),
                    cat_state(in.beta, CatParity::Odd, d2)};
        }
        std::pair<Ket, Ket> operator()(const CustomInput& in) const {
            if (in.psi1.layout.total() != d1 || in.phi2.layout.total() != d2)
                throw LayoutError("custom memory states do not match the layout cutoffs");
            return {Ket(SpaceLayout::single(d1), in.psi1.amps),
                    Ket(SpaceLayout::single(d2), in.phi2.amps)};
        }
    };
    auto [m1, m2] = std::visit(Builder{d1, d2}, c.input);
    return tensor(q, m1, m2);
}

LinOp ideal_fredkin(const SpaceLayout& layout) {
    if (layout.factors() != 3 || layout.dims[0] != 3)
        throw LayoutError("ideal_fredkin expects a [qutrit, mode1, mode2] layout");
    int d1 = layout.dims[1], d2 = layout.dims[2];
    if (d1 != d2) throw LayoutError("ideal_fredkin requires equal memory cutoffs");
    int dim = layout.total();
    Mat U = Mat::Zero(dim, dim);
    for (int q = 0; q < 3; ++q)
        for (int n = 0; n < d1; ++n)
            for (int m = 0; m < d2; ++m) {
                int col = (q * d1 + n) * d2 + m;
                int row = (q == static_cast<int>(Level::g)) ? (q * d1 + m) * d2 + n : col;
                U(row, col) = 1.0;
            }
    return LinOp(layout, std::move(U));
}

LinOp controlled_parity(const SpaceLayout& layout) {
    if (layout.factors() != 3 || layout.dims[0] != 3)
        throw LayoutError("controlled_parity expects a [qutrit, mode1, mode2] layout");
    int d1 = layout.dims[1], d2 = layout.dims[2];
    Vec diag(layout.total());
    for (int q = 0; q < 3; ++q)
        for (int n = 0; n < d1; ++n)
            for (int m = 0; m < d2; ++m)
                diag((q * d1 + n) * d2 + m) =
                    (q == static_cast<int>(Level::g) && (n + m) % 2) ? -1.0 : 1.0;
    return LinOp(layout, diag.asDiagonal(), true);
}

LinOp effective_gate_unitary(const PhysicalParams& p) {
    LinOp H = effective_hamiltonian(p, 0.0, /*reduced=*/true);
    return hermitian_propagator(H, derive(p).t_swap);
}

LinOp pulse_unitary(const PhysicalParams& p) {
    DerivedParams dp = derive(p);
    if (dp.t_pulse <= 0) throw ConditionError("pulse_unitary: no pulse configured (Omega = 0)");
    return hermitian_propagator(pulse_hamiltonian(p.Omega, p.theta, p.layout()), dp.t_pulse);
}

LinOp ideal_pulse_rotation(const SpaceLayout& layout) {
    Mat r = Mat::Identity(3, 3);
    r(0, 0) = M_SQRT1_2;
    r(2, 0) = M_SQRT1_2;
    r(0, 2) = -M_SQRT1_2;
    r(2, 2) = M_SQRT1_2;
    return embed(LinOp(SpaceLayout::single(3), std::move(r)), 0, layout);
}

namespace {

PhysicalParams symmetric_reference(const PhysicalParams& p) {
    PhysicalParams r = p;
    r.g2 = r.g1;
    r.delta2 = r.delta1;
    return r;
}

Ket apply_unitary(const LinOp& U, const Ket& psi) {
    return Ket::normalized(psi.layout, U.mat * psi.amps);
}

}  // namespace

ProtocolResult run_protocol(const PhysicalParams& params, const InitialCase& c,
                            const RunOptions& opts) {
    params.validate();
    SpaceLayout layout = params.layout();
    Ket psi0 = initial_state(c, layout);
    PhysicalParams ref_params = symmetric_reference(params);

    double t_gate = derive(opts.timing == Timing::Nominal ? ref_params : params).t_swap;
    bool has_pulse = opts.include_pulse && params.Omega > 0;
    double t_pulse = has_pulse ? derive(params).t_pulse : 0.0;

    double gate_dt_default = opts.lossy ? default_gate_dt(params) : default_closed_gate_dt(params);
    IntegratorConfig gate_cfg{opts.gate_dt > 0 ? opts.gate_dt : gate_dt_default, opts.method,
                              opts.tol};
    IntegratorConfig pulse_cfg{opts.pulse_dt > 0 ? opts.pulse_dt : default_pulse_dt(params),
                               opts.method, opts.tol};

    // g-branch sectors with n1 + n2 >= min cutoff rotate through states the
    // truncated space cannot hold
    int dmin = std::min(params.d1, params.d2);
    double unswappable = 0.0;
    for (int n = 0; n < params.d1; ++n)
        for (int m = 0; m < params.d2; ++m)
            if (n + m >= dmin) unswappable += std::norm(psi0.amps((0 * params.d1 + n) * params.d2 + m));
    if (unswappable > opts.truncation_tol)
        throw TruncationError(
            "input has mass " + std::to_string(unswappable) +
                " on total-excitation sectors above the cutoff; the swap rotation of those "
                "components is not representable; raise the cutoffs",
            dmin + 1);

    // --- gate stage ---
    std::optional<Ket> ket;
    std::optional<DensityOp> rho;
    EvolutionStats stats{};
    if (opts.mode == GateMode::Effective) {
        LinOp H = effective_hamiltonian(params, 0.0, /*reduced=*/true);
        if (opts.lossy) {
            HamiltonianSpec spec{layout, {{H, nullptr}}};
            rho = evolve_lindblad(spec, collapse_operators(params), DensityOp::pure(psi0), 0.0,
                                  t_gate, gate_cfg, &stats);
        } else {
            ket = apply_unitary(hermitian_propagator(H, t_gate), psi0);
        }
    } else {
        HamiltonianSpec H = full_hamiltonian(params);
        if (opts.lossy)
            rho = evolve_lindblad(H, collapse_operators(params), DensityOp::pure(psi0), 0.0,
                                  t_gate, gate_cfg, &stats);
        else
            ket = propagate_pure(H, psi0, 0.0, t_gate, gate_cfg, &stats);
    }

    // --- readout pulse stage ---
    if (has_pulse) {
        if (rho && opts.lossy_pulse) {
            HamiltonianSpec spec{layout,
                                 {{pulse_hamiltonian(params.Omega, params.theta, layout), nullptr}}};
            EvolutionStats ps{};
            rho = evolve_lindblad(spec, collapse_operators(params), *rho, 0.0, t_pulse, pulse_cfg,
                                  &ps);
            stats.drift += ps.drift;
        } else {
            LinOp U = pulse_unitary(params);
            if (rho)
                rho = DensityOp(layout, U.mat * rho->mat * U.mat.adjoint());
            else
                ket = apply_unitary(U, *ket);
        }
    }

    // --- diagnostics + references ---
    ProtocolResult res{layout,
                       !rho.has_value(),
                       ket,
                       rho ? *rho : DensityOp::pure(*ket),
                       t_gate,
                       t_pulse,
                       0, 0, stats.drift,
                       {},
                       0, 0,
                       std::nullopt,
                       std::nullopt};

    LeakReport leak = rho ? leakage_and_truncation(*rho) : leakage_and_truncation(*ket);
    res.leak_a = leak.leak_a;
    res.top_fock = leak.top_fock;
    res.trace_error = std::abs(res.final_rho.trace_real() - 1.0);

    // Lossless closed-model reference: exact effective gate (+ exact pulse).
    Ket ref = apply_unitary(effective_gate_unitary(ref_params), psi0);
    if (has_pulse) ref = apply_unitary(pulse_unitary(ref_params), ref);
    res.fidelity = state_fidelity(ref, res.final_rho);
    res.reference = ref;

    // Algebraic controlled-SWAP reference (differs by controlled parity).
    if (layout.dims[1] == layout.dims[2]) {
        Ket ref_gate = apply_unitary(ideal_fredkin(layout), psi0);
        if (has_pulse) ref_gate = apply_unitary(ideal_pulse_rotation(layout), ref_gate);
        res.fidelity_ideal_gate = state_fidelity(ref_gate, res.final_rho);
        res.reference_ideal_gate = ref_gate;
    } else {
        res.fidelity_ideal_gate = std::numeric_limits<double>::quiet_NaN();
    }

    return res;
}

namespace {

Measurement measure_impl(const DensityOp& rho) {
    const SpaceLayout& layout = rho.layout;
    if (layout.factors() != 3 || layout.dims[0] != 3)
        throw LayoutError("measure_control expects a [qutrit, mode1, mode2] layout");
    int d1 = layout.dims[1], d2 = layout.dims[2], dm = d1 * d2;
    SpaceLayout mem({d1, d2});

    Measurement out;
    auto branch = [&](Level lvl) {
        int q = static_cast<int>(lvl);
        Mat block = rho.mat.block(q * dm, q * dm, dm, dm);
        double p = block.trace().real();
        MeasurementBranch b;
        b.probability = std::max(0.0, p);
        if (b.probability > 1e-12) {
            b.present = true;
            b.memory_state = DensityOp(mem, block / p);
        }
        return b;
    };
    out.g = branch(Level::g);
    out.e = branch(Level::e);
    int qa = static_cast<int>(Level::a);
    out.leak_a = std::max(0.0, rho.mat.block(qa * dm, qa * dm, dm, dm).trace().real());
    return out;
}

}  // namespace

Measurement measure_control(const DensityOp& rho) { return measure_impl(rho); }

Measurement measure_control(const Ket& psi) { return measure_impl(DensityOp::pure(psi)); }

SwapTestInference swap_test_infer(double p_g, const ControlAmplitudes& control) {
    double cross = control.cross_term();
    if (std::abs(cross) < 1e-12)
        throw ConditionError("swap test not invertible: gamma* eta + gamma eta* vanishes");
    double f2 = (1.0 - 2.0 * p_g) / cross;
    bool clamped = f2 < 0.0 || f2 > 1.0;
    return {std::clamp(f2, 0.0, 1.0), clamped};
}

SwapTestRun run_swap_test(const Ket& psi1, const Ket& phi2, const ControlAmplitudes& control,
                          SwapGateRoute route, const PhysicalParams* params) {
    if (psi1.layout.factors() != 1 || phi2.layout.factors() != 1 ||
        psi1.layout.dims[0] != phi2.layout.dims[0])
        throw LayoutError("swap test expects two single-factor states of equal dimension");
    int d = psi1.layout.dims[0];
    SpaceLayout layout = SpaceLayout::qutrit_with_modes(d, d);
    InitialCase c{CustomInput{psi1, phi2}, control};
    Ket psi0 = initial_state(c, layout);

    Ket out = psi0;
    if (route == SwapGateRoute::IdealGate) {
        out = apply_unitary(ideal_fredkin(layout), psi0);
        out = apply_unitary(ideal_pulse_rotation(layout), out);
    } else {
        if (!params) throw ConditionError("effective-model swap test needs physical parameters");
        PhysicalParams p = *params;
        p.d1 = p.d2 = d;
        out = apply_unitary(effective_gate_unitary(p), psi0);
        if (p.Omega > 0)
            out = apply_unitary(pulse_unitary(p), out);
        else
            out = apply_unitary(ideal_pulse_rotation(layout), out);
    }

    Measurement m = measure_control(out);
    double p_g = m.g.probability;
    double overlap = std::abs(inner(phi2, psi1));
    return {p_g, swap_test_infer(p_g, control).F2, overlap * overlap};
}

Ket target_entangled_state(const TargetState& t, const SpaceLayout& memory_layout) {
    if (memory_layout.factors() != 2)
        throw LayoutError("target_entangled_state expects a [mode1, mode2] layout");
    int d1 = memory_layout.dims[0], d2 = memory_layout.dims[1];

    Ket u1 = fock_state(0, d1), u2 = fock_state(0, d2);  // placeholders
    Ket v1 = u1, v2 = u2;
    switch (t.kind) {
        case TargetKind::Noon:
            u1 = fock_state(t.N, d1);
            u2 = fock_state(0, d2);
            v1 = fock_state(0, d1);
            v2 = fock_state(t.N, d2);
            break;
        case TargetKind::EntCoherent:
            u1 = coherent_state(t.alpha, d1);
            u2 = coherent_state(-t.beta, d2);
            v1 = coherent_state(-t.beta, d1);
            v2 = coherent_state(t.alpha, d2);
            break;
        case TargetKind::EntCat:
            u1 = cat_state(t.alpha, CatParity::Even, d1);
            u2 = cat_state(t.beta, CatParity::Odd, d2);
            v1 = cat_state(t.beta, CatParity::Odd, d1);
            v2 = cat_state(t.alpha, CatParity::Even, d2);
            break;
    }
    double sign = t.branch == Branch::Plus ? 1.0 : -1.0;
    Vec raw = tensor(u1, u2).amps + sign * tensor(v1, v2).amps;
    if (raw.norm() < 1e-8)
        throw ConditionError("degenerate entangled target: the " + branch_label(t.branch) +
                             " branch vanishes for identical factor states");
    return Ket::normalized(memory_layout, std::move(raw));
}

}  // namespace fsim
