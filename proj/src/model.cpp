#include "fsim/model.hpp"

#include <cmath>

namespace fsim {

namespace {
constexpr Cx kI{0.0, 1.0};
}

void PhysicalParams::validate() const {
    if (g1 <= 0 || g2 <= 0) throw ConditionError("couplings g1, g2 must be > 0");
    if (delta1 <= 0 || delta2 <= 0)
        throw ConditionError("detunings delta1, delta2 must be > 0 (dispersive orientation)");
    if (Omega < 0) throw ConditionError("Omega must be >= 0");
    for (double r : {kappa1, kappa2, gamma_ag, gamma_ea, gamma_eg, gamma_phi_a, gamma_phi_e})
        if (r < 0) throw ConditionError("decoherence rates must be >= 0");
    if (d1 < 2 || d2 < 2) throw ConditionError("memory cutoffs must be >= 2");
}

bool PhysicalParams::dispersive_warning() const {
    return delta1 / g1 < 5.0 || delta2 / g2 < 5.0;
}

bool PhysicalParams::symmetric(double rel_tol) const {
    return std::abs(delta1 - delta2) <= rel_tol * std::abs(delta1) &&
           std::abs(g1 - g2) <= rel_tol * std::abs(g1);
}

DerivedParams derive(const PhysicalParams& p) {
    p.validate();
    DerivedParams d{};
    d.lambda = 0.5 * p.g1 * p.g2 * (1.0 / p.delta1 + 1.0 / p.delta2);
    d.omega_stark = p.g1 * p.g1 / p.delta1;
    d.delta_prime = p.delta2 - p.delta1;
    d.t_swap = M_PI / (2.0 * d.lambda);
    d.t_pulse = p.Omega > 0 ? M_PI / (4.0 * p.Omega) : 0.0;
    return d;
}

bool HamiltonianSpec::time_dependent() const {
    for (const auto& t : terms)
        if (t.coeff) return true;
    return false;
}

LinOp HamiltonianSpec::at(double t) const {
    Mat m = Mat::Zero(layout.total(), layout.total());
    for (const auto& term : terms) m += (term.coeff ? term.coeff(t) : Cx(1.0)) * term.op.mat;
    return LinOp(layout, std::move(m), true);
}

HamiltonianSpec full_hamiltonian(const PhysicalParams& p) {
    p.validate();
    SpaceLayout L = p.layout();
    LinOp sig_up = embed(transition_operator(Level::g, Level::a), 0, L);  // |a><g|
    LinOp a1 = embed(annihilation(p.d1), 1, L);
    LinOp a2 = embed(annihilation(p.d2), 2, L);
    LinOp A1 = a1 * sig_up;
    LinOp A2 = a2 * sig_up;

    double g1 = p.g1, g2 = p.g2, d1 = p.delta1, d2 = p.delta2;
    HamiltonianSpec H{L, {}};
    H.terms.push_back({A1, [g1, d1](double t) { return g1 * std::exp(kI * d1 * t); }});
    H.terms.push_back({A1.adjoint(), [g1, d1](double t) { return g1 * std::exp(-kI * d1 * t); }});
    H.terms.push_back({A2, [g2, d2](double t) { return g2 * std::exp(kI * d2 * t); }});
    H.terms.push_back({A2.adjoint(), [g2, d2](double t) { return g2 * std::exp(-kI * d2 * t); }});
    return H;
}

LinOp effective_hamiltonian(const PhysicalParams& p, double t, bool reduced) {
    p.validate();
    SpaceLayout L = p.layout();
    DerivedParams dp = derive(p);

    LinOp Pg = embed(level_projector(Level::g), 0, L);
    LinOp a1 = embed(annihilation(p.d1), 1, L);
    LinOp a2 = embed(annihilation(p.d2), 2, L);
    LinOp n1 = a1.adjoint() * a1;
    LinOp n2 = a2.adjoint() * a2;
    LinOp x12 = a1.adjoint() * a2;  // a1† a2

    if (reduced) {
        if (!p.symmetric())
            throw ConditionError(
                "reduced effective Hamiltonian requires delta1 = delta2 and g1 = g2");
        double w = dp.omega_stark;  // = lambda for symmetric params
        Mat m = -w * ((n1.mat + n2.mat) * Pg.mat) -
                dp.lambda * ((x12.mat + x12.mat.adjoint()) * Pg.mat);
        return LinOp(L, std::move(m), true);
    }

    LinOp Pa = embed(level_projector(Level::a), 0, L);
    double w1 = p.g1 * p.g1 / p.delta1;
    double w2 = p.g2 * p.g2 / p.delta2;
    Cx ph = std::exp(kI * dp.delta_prime * t);
    Mat m = (w1 * (a1.mat * a1.mat.adjoint()) + w2 * (a2.mat * a2.mat.adjoint())) * Pa.mat -
            (w1 * n1.mat + w2 * n2.mat) * Pg.mat +
            dp.lambda * (ph * x12.mat + std::conj(ph) * x12.mat.adjoint()) * Pa.mat -
            dp.lambda * (std::conj(ph) * x12.mat + ph * x12.mat.adjoint()) * Pg.mat;
    return LinOp(L, std::move(m), true);
}

LinOp pulse_hamiltonian(double Omega, double theta, const SpaceLayout& layout) {
    if (Omega <= 0) throw ConditionError("pulse requires Omega > 0");
    LinOp ge = embed(transition_operator(Level::e, Level::g), 0, layout);  // |g><e|
    Mat m = Omega * (std::exp(kI * theta) * ge.mat + std::exp(-kI * theta) * ge.mat.adjoint());
    return LinOp(layout, std::move(m), true);
}

HamiltonianSpec pulse_hamiltonian_spec(const PhysicalParams& p) {
    HamiltonianSpec H{p.layout(), {}};
    H.terms.push_back({pulse_hamiltonian(p.Omega, p.theta, p.layout()), nullptr});
    return H;
}

std::vector<LinOp> collapse_operators(const PhysicalParams& p) {
    p.validate();
    SpaceLayout L = p.layout();
    std::vector<LinOp> ops;
    auto add = [&](double rate, const LinOp& op) {
        if (rate > 0) ops.push_back(std::sqrt(rate) * op);
    };
    add(p.kappa1, embed(annihilation(p.d1), 1, L));
    add(p.kappa2, embed(annihilation(p.d2), 2, L));
    add(p.gamma_ag, embed(transition_operator(Level::a, Level::g), 0, L));   // |g><a|
    add(p.gamma_ea, embed(transition_operator(Level::e, Level::a), 0, L));   // |a><e|
    add(p.gamma_eg, embed(transition_operator(Level::e, Level::g), 0, L));   // |g><e|
    add(p.gamma_phi_a, embed(level_projector(Level::a), 0, L));
    add(p.gamma_phi_e, embed(level_projector(Level::e), 0, L));
    return ops;
}

}  // namespace fsim
