#include <doctest.h>

#include <random>

#include "fsim/fredkin.hpp"

using namespace fsim;

namespace {

PhysicalParams symmetric_params(double D = 16.0, int cutoff = 4) {
    PhysicalParams p;
    p.g1 = p.g2 = 2 * M_PI * 70e6;
    p.delta1 = p.delta2 = D * p.g1;
    p.Omega = 2 * M_PI * 100e6;
    p.theta = -M_PI / 2;
    p.d1 = p.d2 = cutoff;
    return p;
}

Ket basis_state(const SpaceLayout& L, int q, int n, int m) {
    Vec v = Vec::Zero(L.total());
    v((q * L.dims[1] + n) * L.dims[2] + m) = 1.0;
    return Ket(L, v);
}

Ket random_memory(int dim, std::mt19937& rng) {
    std::normal_distribution<double> g;
    Vec v(dim);
    for (int i = 0; i < dim; ++i) v(i) = Cx(g(rng), g(rng));
    return Ket::normalized(SpaceLayout::single(dim), v);
}

}  // namespace

TEST_CASE("ideal fredkin gate") {
    SpaceLayout L = SpaceLayout::qutrit_with_modes(4, 4);
    LinOp U = ideal_fredkin(L);

    CHECK((U.mat * basis_state(L, 0, 1, 0).amps - basis_state(L, 0, 0, 1).amps).norm() == 0.0);

    std::mt19937 rng(5);
    Ket psi = random_memory(4, rng), phi = random_memory(4, rng);
    Ket e_in = tensor(fock_state(2, 3), psi, phi);
    CHECK((U.mat * e_in.amps - e_in.amps).norm() == 0.0);

    CHECK((U.mat * U.mat - Mat::Identity(L.total(), L.total())).cwiseAbs().maxCoeff() < 1e-12);
    CHECK((U.mat.adjoint() * U.mat - Mat::Identity(L.total(), L.total())).cwiseAbs().maxCoeff() <
          1e-12);

    CHECK_THROWS_AS(ideal_fredkin(SpaceLayout::qutrit_with_modes(4, 5)), LayoutError);
}

TEST_CASE("one-step effective gate equals controlled-parity x fredkin on the faithful subspace") {
    PhysicalParams p = symmetric_params(16.0, 5);
    SpaceLayout L = p.layout();
    LinOp U = effective_gate_unitary(p);
    Mat expect = (controlled_parity(L) * ideal_fredkin(L)).mat;

    // The truncated beam splitter cannot represent the swap rotation above
    // n+m = d-1, so compare only where the identity holds in infinite dim.
    int d = p.d1;
    double worst = 0.0;
    for (int q = 0; q < 3; ++q)
        for (int n = 0; n < d; ++n)
            for (int m = 0; m < d; ++m) {
                if (n + m > d - 1) continue;
                int col = (q * d + n) * d + m;
                for (int q2 = 0; q2 < 3; ++q2)
                    for (int n2 = 0; n2 < d; ++n2)
                        for (int m2 = 0; m2 < d; ++m2) {
                            if (n2 + m2 > d - 1) continue;
                            int row = (q2 * d + n2) * d + m2;
                            worst = std::max(worst, std::abs(U.mat(row, col) - expect(row, col)));
                        }
            }
    CHECK(worst < 1e-12);
}

TEST_CASE("initial states") {
    SpaceLayout L = SpaceLayout::qutrit_with_modes(6, 6);
    InitialCase noon{NoonInput{5}, ControlAmplitudes::balanced()};
    Ket s = initial_state(noon, L);
    Vec want = M_SQRT1_2 * (basis_state(L, 0, 5, 0).amps + basis_state(L, 2, 5, 0).amps);
    CHECK((s.amps - want).norm() < 1e-12);
    CHECK(std::abs(s.norm() - 1.0) < 1e-10);

    SpaceLayout L12 = SpaceLayout::qutrit_with_modes(12, 12);
    InitialCase coh{CoherentInput{1.1, 1.1}, ControlAmplitudes::balanced()};
    Ket c = initial_state(coh, L12);
    CHECK(std::abs(c.norm() - 1.0) < 1e-10);
    // memory 2 carries coherent amplitude -1.1: overlap of the (g, n1=0)
    // block with |-1.1> equals gamma * c0(1.1)
    Ket m2 = coherent_state(-1.1, 12);
    Cx acc = 0.0;
    for (int m = 0; m < 12; ++m) acc += std::conj(m2.amps(m)) * c.amps((0 * 12 + 0) * 12 + m);
    CHECK(std::abs(acc - M_SQRT1_2 * coherent_state(1.1, 12).amps(0)) < 1e-10);

    InitialCase big{NoonInput{6}, ControlAmplitudes::balanced()};
    CHECK_THROWS_AS(initial_state(big, L), TruncationError);

    CHECK_THROWS_AS(ControlAmplitudes(Cx(1.0), Cx(0.5)), ConditionError);
}

TEST_CASE("closed effective protocol reproduces the lossless reference exactly") {
    PhysicalParams p = symmetric_params(16.0, 6);
    RunOptions opts;
    opts.mode = GateMode::Effective;
    opts.lossy = false;
    opts.include_pulse = true;

    for (const InitialCase& c :
         {InitialCase{NoonInput{5}, ControlAmplitudes::balanced()},
          InitialCase{CustomInput{coherent_state(0.5, 6), fock_state(1, 6)},
                      ControlAmplitudes(Cx(0.6), Cx(0.8))}}) {
        ProtocolResult res = run_protocol(p, c, opts);
        CHECK(res.pure);
        CHECK(res.fidelity >= 1.0 - 1e-8);
    }
}

TEST_CASE("e-branch is inert in closed runs") {
    PhysicalParams p = symmetric_params(16.0, 4);
    InitialCase c{CustomInput{fock_state(2, 4), fock_state(1, 4)}, ControlAmplitudes(0.0, 1.0)};
    for (GateMode mode : {GateMode::Effective, GateMode::Full}) {
        RunOptions opts;
        opts.mode = mode;
        opts.lossy = false;
        opts.include_pulse = false;
        ProtocolResult res = run_protocol(p, c, opts);
        Ket in = initial_state(c, p.layout());
        CHECK(std::abs(std::abs(inner(in, *res.final_ket)) - 1.0) < 1e-8);
    }
}

TEST_CASE("closed full-model runs conserve the excitation number") {
    PhysicalParams p = symmetric_params(12.0, 4);
    SpaceLayout L = p.layout();
    LinOp N = embed(number_operator(p.d1), 1, L) + embed(number_operator(p.d2), 2, L) +
              embed(level_projector(Level::a), 0, L);

    InitialCase c{CustomInput{fock_state(2, 4), fock_state(1, 4)}, ControlAmplitudes::balanced()};
    RunOptions opts;
    opts.mode = GateMode::Full;
    opts.lossy = false;
    opts.include_pulse = false;
    ProtocolResult res = run_protocol(p, c, opts);

    Ket in = initial_state(c, L);
    double n_in = (in.amps.adjoint() * N.mat * in.amps)(0).real();
    double n_out = (res.final_ket->amps.adjoint() * N.mat * res.final_ket->amps)(0).real();
    CHECK(std::abs(n_in - n_out) < 1e-8);
}

TEST_CASE("closed full-model single-photon gate is accurate at D=16") {
    PhysicalParams p = symmetric_params(16.0, 2);
    InitialCase c{CustomInput{fock_state(1, 2), fock_state(0, 2)}, ControlAmplitudes(1.0, 0.0)};
    RunOptions opts;
    opts.mode = GateMode::Full;
    opts.lossy = false;
    opts.include_pulse = false;
    ProtocolResult res = run_protocol(p, c, opts);
    CHECK(res.fidelity >= 0.99);
    CHECK(res.leak_a < 0.05);
}

TEST_CASE("measurement branches of the pulsed algebraic-gate output equal |psi+-_>") {
    std::mt19937 rng(17);
    SpaceLayout L = SpaceLayout::qutrit_with_modes(5, 5);
    Ket psi = random_memory(5, rng), phi = random_memory(5, rng);
    ControlAmplitudes ctrl(Cx(0.6, 0.0), Cx(0.48, 0.64));  // |g|^2 + |e|^2 = 1

    Ket in = initial_state(InitialCase{CustomInput{psi, phi}, ctrl}, L);
    Ket out = Ket::normalized(L, (ideal_pulse_rotation(L) * ideal_fredkin(L)).mat * in.amps);
    Measurement m = measure_control(out);

    SpaceLayout mem({5, 5});
    Vec plus = ctrl.gamma * tensor(phi, psi).amps + ctrl.eta * tensor(psi, phi).amps;
    Vec minus = ctrl.gamma * tensor(phi, psi).amps - ctrl.eta * tensor(psi, phi).amps;
    Ket kplus = Ket::normalized(mem, plus), kminus = Ket::normalized(mem, minus);

    REQUIRE(m.e.present);
    REQUIRE(m.g.present);
    CHECK(state_fidelity(kplus, *m.e.memory_state) >= 1.0 - 1e-10);
    CHECK(state_fidelity(kminus, *m.g.memory_state) >= 1.0 - 1e-10);
    CHECK(m.g.probability + m.e.probability + m.leak_a == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(m.leak_a < 1e-12);

    // p_g = 0.5 ||psi_minus||^2 = 0.5 [1 - (g*e + g e*) F^2] with F = |<phi|psi>|
    double F = std::abs(inner(phi, psi));
    CHECK(m.g.probability ==
          doctest::Approx(0.5 * (1.0 - ctrl.cross_term() * F * F)).epsilon(1e-10));
}

TEST_CASE("pure |e> density measurement") {
    SpaceLayout L = SpaceLayout::qutrit_with_modes(3, 3);
    Ket in = tensor(fock_state(2, 3), fock_state(1, 3), fock_state(0, 3));
    Measurement m = measure_control(in);
    CHECK(m.e.probability == doctest::Approx(1.0));
    CHECK(!m.g.present);
}

TEST_CASE("swap test inference endpoints and clamping") {
    ControlAmplitudes bal = ControlAmplitudes::balanced();
    CHECK(swap_test_infer(0.0, bal).F2 == doctest::Approx(1.0));
    CHECK(swap_test_infer(0.5, bal).F2 == doctest::Approx(0.0));
    CHECK(!swap_test_infer(0.25, bal).clamped);
    CHECK(swap_test_infer(0.6, bal).clamped);

    CHECK_THROWS_AS(swap_test_infer(0.2, ControlAmplitudes(1.0, 0.0)), ConditionError);
}

TEST_CASE("swap test round trip through the algebraic gate (property)") {
    std::mt19937 rng(23);
    for (int trial = 0; trial < 10; ++trial) {
        Ket psi = random_memory(6, rng), phi = random_memory(6, rng);
        SwapTestRun run =
            run_swap_test(psi, phi, ControlAmplitudes::balanced(), SwapGateRoute::IdealGate);
        CHECK(std::abs(run.inferred_F2 - run.true_F2) < 1e-10);
    }
}

TEST_CASE("effective-model swap test measures the parity-twisted overlap") {
    // identical coherent states: the physical one-step protocol reports
    // |<alpha|P|alpha>|^2 = e^{-4 alpha^2}, not 1
    PhysicalParams p = symmetric_params(16.0, 12);
    Ket a = coherent_state(1.1, 12), b = coherent_state(1.1, 12);
    SwapTestRun run =
        run_swap_test(a, b, ControlAmplitudes::balanced(), SwapGateRoute::EffectiveModel, &p);
    CHECK(run.true_F2 == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(run.inferred_F2 == doctest::Approx(std::exp(-4.84)).epsilon(1e-3));

    // parity eigenstates are immune: fock inputs agree between the routes
    Ket f2 = fock_state(2, 12), f3 = fock_state(3, 12);
    SwapTestRun fr =
        run_swap_test(f2, f3, ControlAmplitudes::balanced(), SwapGateRoute::EffectiveModel, &p);
    CHECK(fr.inferred_F2 == doctest::Approx(fr.true_F2).epsilon(1e-9));
}

TEST_CASE("entangled targets") {
    SpaceLayout mem({6, 6});
    Ket noon = target_entangled_state({TargetKind::Noon, Branch::Plus, 5, 0, 0}, mem);
    Vec want = Vec::Zero(36);
    want(5 * 6 + 0) = M_SQRT1_2;
    want(0 * 6 + 5) = M_SQRT1_2;
    CHECK((noon.amps - want).norm() < 1e-12);

    // entangled-coherent norm^2 = 2 (1 + e^{-2(a^2+b^2)}) for the plus branch
    SpaceLayout mem12({12, 12});
    double a = 1.1, b = 1.1;
    Vec raw = tensor(coherent_state(a, 12), coherent_state(-b, 12)).amps +
              tensor(coherent_state(-b, 12), coherent_state(a, 12)).amps;
    double norm2 = raw.squaredNorm();
    CHECK(norm2 == doctest::Approx(2.0 * (1.0 + std::exp(-4.84))).epsilon(1e-6));
    Ket ec = target_entangled_state({TargetKind::EntCoherent, Branch::Plus, 0, a, b}, mem12);
    CHECK((ec.amps - Vec(raw / std::sqrt(norm2))).norm() < 1e-10);

    // cat targets: |psi_e, phi_o> and |phi_o, psi_e> are orthogonal (parity)
    Ket t1 = tensor(cat_state(1.1, CatParity::Even, 12), cat_state(1.1, CatParity::Odd, 12));
    Ket t2 = tensor(cat_state(1.1, CatParity::Odd, 12), cat_state(1.1, CatParity::Even, 12));
    CHECK(std::abs(inner(t1, t2)) == 0.0);
    Ket cat_plus = target_entangled_state({TargetKind::EntCat, Branch::Plus, 0, 1.1, 1.1}, mem12);
    CHECK(std::abs(cat_plus.norm() - 1.0) < 1e-10);

    // minus branch with identical factor states is degenerate
    CHECK_THROWS_AS(target_entangled_state({TargetKind::EntCoherent, Branch::Minus, 0, 1.1, -1.1},
                                           mem12),
                    ConditionError);
}

TEST_CASE("measured branches of the algebraic-gate protocol hit the entangled targets") {
    SpaceLayout L = SpaceLayout::qutrit_with_modes(12, 12);
    InitialCase c{CoherentInput{1.1, 1.1}, ControlAmplitudes::balanced()};
    Ket in = initial_state(c, L);
    Ket out = Ket::normalized(L, (ideal_pulse_rotation(L) * ideal_fredkin(L)).mat * in.amps);
    Measurement m = measure_control(out);
    SpaceLayout mem({12, 12});

    Ket plus = target_entangled_state({TargetKind::EntCoherent, Branch::Plus, 0, 1.1, 1.1}, mem);
    Ket minus = target_entangled_state({TargetKind::EntCoherent, Branch::Minus, 0, 1.1, 1.1}, mem);
    REQUIRE(m.e.present);
    REQUIRE(m.g.present);
    CHECK(state_fidelity(plus, *m.e.memory_state) >= 1.0 - 1e-9);
    CHECK(state_fidelity(minus, *m.g.memory_state) >= 1.0 - 1e-9);
}

TEST_CASE("nominal and actual gate timing differ only off the symmetric point") {
    PhysicalParams p = symmetric_params(16.0, 3);
    InitialCase c{CustomInput{fock_state(1, 3), fock_state(0, 3)}, ControlAmplitudes::balanced()};
    RunOptions opts;
    opts.mode = GateMode::Effective;
    opts.lossy = false;
    opts.include_pulse = false;

    opts.timing = Timing::Nominal;
    double t_nom = run_protocol(p, c, opts).t_gate;
    opts.timing = Timing::Actual;
    double t_act = run_protocol(p, c, opts).t_gate;
    CHECK(t_nom == t_act);

    PhysicalParams q = p;
    q.g2 *= 1.02;  // asymmetric point
    RunOptions fopts = opts;
    fopts.mode = GateMode::Full;
    fopts.timing = Timing::Nominal;
    double ta = run_protocol(q, c, fopts).t_gate;
    fopts.timing = Timing::Actual;
    double tb = run_protocol(q, c, fopts).t_gate;
    CHECK(ta != tb);
    CHECK(ta == doctest::Approx(derive(p).t_swap));
}
