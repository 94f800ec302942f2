#include "fsim/analytics.hpp"

#include <algorithm>
#include <cmath>

namespace fsim {

double state_fidelity(const Ket& psi_id, const DensityOp& rho) {
    if (psi_id.layout != rho.layout) throw LayoutError("state_fidelity: layout mismatch");
    Cx q = psi_id.amps.dot(rho.mat * psi_id.amps);
    return std::sqrt(std::max(0.0, q.real()));
}

double overlap_fidelity(const Ket& psi, const Ket& phi) {
    if (psi.layout != phi.layout) throw LayoutError("overlap_fidelity: layout mismatch");
    return std::min(1.0, std::abs(inner(phi, psi)));
}

double concurrence_oracle(const Ket& psi) {
    if (psi.layout.factors() != 2)
        throw LayoutError("concurrence_oracle expects a bipartite state, layout " +
                          psi.layout.str());
    if (std::abs(psi.norm() - 1.0) > 1e-8)
        throw ConditionError("concurrence_oracle: state not normalized");
    DensityOp rho_r = partial_trace(DensityOp::pure(psi), {0});
    double purity = (rho_r.mat * rho_r.mat).trace().real();
    return std::sqrt(std::max(0.0, 2.0 * (1.0 - purity)));
}

Branch branch_from_string(const std::string& s) {
    if (s == "plus" || s == "+") return Branch::Plus;
    if (s == "minus" || s == "-") return Branch::Minus;
    throw ConditionError("unknown branch '" + s + "' (expected plus or minus)");
}

std::string branch_label(Branch b) { return b == Branch::Plus ? "plus" : "minus"; }

ClosedFormConcurrence concurrence_closed_form(Cx gamma, Cx eta, double F, Branch branch) {
    if (std::abs(std::norm(gamma) + std::norm(eta) - 1.0) > 1e-10)
        throw ConditionError("control amplitudes must satisfy |gamma|^2 + |eta|^2 = 1");
    if (F < 0.0 || F > 1.0) throw ConditionError("overlap F must lie in [0, 1]");
    double g2 = std::norm(gamma), e2 = std::norm(eta);
    double cross = (gamma * std::conj(eta) + std::conj(gamma) * eta).real();
    double quart = (gamma * gamma * std::conj(eta) * std::conj(eta) +
                    std::conj(gamma) * std::conj(gamma) * eta * eta)
                       .real();
    double sign = branch == Branch::Plus ? 1.0 : -1.0;
    double inner = g2 * g2 + e2 * e2 + 2.0 * (2.0 * g2 * e2 + sign * cross) * F * F +
                   quart * F * F * F * F;
    double radicand = 2.0 - 0.5 * inner;
    if (radicand < 0.0) return {0.0, radicand, true};
    return {std::sqrt(radicand), radicand, false};
}

double concurrence_from_overlap(Cx gamma, Cx eta, double F, Branch branch) {
    // |phi> = |0>, |psi> = F|0> + sqrt(1-F^2)|1> gives <phi|psi> = F exactly.
    Ket phi = fock_state(0, 2);
    Vec v(2);
    v << F, std::sqrt(std::max(0.0, 1.0 - F * F));
    Ket psi = Ket(SpaceLayout::single(2), v);
    Vec branch_vec = gamma * tensor(phi, psi).amps +
                     (branch == Branch::Plus ? eta : -eta) * tensor(psi, phi).amps;
    if (branch_vec.norm() < 1e-12)
        throw ConditionError("degenerate branch state (identical factors on the minus branch)");
    return concurrence_oracle(Ket::normalized(SpaceLayout({2, 2}), std::move(branch_vec)));
}

std::vector<DivergenceRow> concurrence_divergence_table(Cx gamma, Cx eta, Branch branch,
                                                        const std::vector<double>& F_grid) {
    std::vector<DivergenceRow> rows;
    for (double F : F_grid) {
        double oracle = concurrence_from_overlap(gamma, eta, F, branch);
        double closed = concurrence_closed_form(gamma, eta, F, branch).value;
        rows.push_back({F, oracle, closed, std::abs(oracle - closed)});
    }
    return rows;
}

namespace {

LeakReport leak_from_diagonal(const SpaceLayout& layout, const Vec& diag) {
    if (layout.factors() != 3 || layout.dims[0] != 3)
        throw LayoutError("leakage_and_truncation expects a [qutrit, mode1, mode2] layout");
    int d1 = layout.dims[1], d2 = layout.dims[2];
    LeakReport rep{0.0, {0.0, 0.0}};
    for (int q = 0; q < 3; ++q)
        for (int n = 0; n < d1; ++n)
            for (int m = 0; m < d2; ++m) {
                double p = diag((q * d1 + n) * d2 + m).real();
                if (q == static_cast<int>(Level::a)) rep.leak_a += p;
                if (n == d1 - 1) rep.top_fock[0] += p;
                if (m == d2 - 1) rep.top_fock[1] += p;
            }
    return rep;
}

}  // namespace

LeakReport leakage_and_truncation(const DensityOp& rho) {
    return leak_from_diagonal(rho.layout, rho.mat.diagonal());
}

LeakReport leakage_and_truncation(const Ket& psi) {
    return leak_from_diagonal(psi.layout, psi.amps.cwiseAbs2().cast<Cx>());
}

}  // namespace fsim
