#include "fsim/nv.hpp"

#include <cmath>

namespace fsim {

namespace {
constexpr Cx kI{0.0, 1.0};
}

SpinEnsembleSpec SpinEnsembleSpec::uniform(int N, double mu0, double Delta) {
    return SpinEnsembleSpec{N, std::vector<double>(size_t(N), mu0), Delta};
}

void SpinEnsembleSpec::validate() const {
    if (N < 1) throw ConditionError("spin ensemble needs N >= 1");
    if (static_cast<int>(mu.size()) != N)
        throw ConditionError("coupling list length does not match N");
    for (double m : mu)
        if (!std::isfinite(m)) throw ConditionError("couplings must be finite");
    if (!std::isfinite(Delta) || Delta < 0) throw ConditionError("Delta must be finite and >= 0");
}

CollectiveCoupling collective_coupling(const SpinEnsembleSpec& spec) {
    spec.validate();
    double sum2 = 0.0;
    for (double m : spec.mu) sum2 += m * m;
    double mu_bar = std::sqrt(sum2 / spec.N);
    return {mu_bar, std::sqrt(double(spec.N)) * mu_bar};
}

SpaceLayout spin_layout(int N) {
    std::vector<int> dims(size_t(N) + 1, 2);
    dims[0] = 3;
    return SpaceLayout(std::move(dims));
}

HamiltonianSpec spin_hamiltonian(const SpinEnsembleSpec& spec, int max_spins) {
    spec.validate();
    if (spec.N > max_spins)
        throw DimensionError("microscopic ensemble capped at " + std::to_string(max_spins) +
                             " spins (dimension 3*2^N); got N = " + std::to_string(spec.N));
    SpaceLayout L = spin_layout(spec.N);
    LinOp sig_up = embed(transition_operator(Level::g, Level::a), 0, L);  // |a><g|

    Mat drop = Mat::Zero(2, 2);
    drop(0, 1) = 1.0;  // tau^- = |ms=0><ms=+1|
    Mat acc = Mat::Zero(L.total(), L.total());
    for (int k = 0; k < spec.N; ++k) {
        LinOp tau_k = embed(LinOp(SpaceLayout::single(2), drop), k + 1, L);
        acc += spec.mu[size_t(k)] * (sig_up.mat * tau_k.mat);
    }
    LinOp T(L, std::move(acc));

    double Delta = spec.Delta;
    HamiltonianSpec H{L, {}};
    H.terms.push_back({T, [Delta](double t) { return std::exp(kI * Delta * t); }});
    H.terms.push_back({T.adjoint(), [Delta](double t) { return std::exp(-kI * Delta * t); }});
    return H;
}

PhysicalParams bosonic_equivalent(const SpinEnsembleSpec& e1, const SpinEnsembleSpec& e2,
                                  int d1, int d2) {
    PhysicalParams p;
    p.g1 = collective_coupling(e1).mu_total;
    p.g2 = collective_coupling(e2).mu_total;
    p.delta1 = e1.Delta;
    p.delta2 = e2.Delta;
    p.d1 = d1;
    p.d2 = d2;
    return p;
}

Ket dicke_state(int N, int n_excitations) {
    if (n_excitations < 0 || n_excitations > N)
        throw ConditionError("Dicke excitation count must lie in [0, N]");
    SpaceLayout L(std::vector<int>(size_t(N), 2));
    Vec v = Vec::Zero(L.total());
    for (int idx = 0; idx < L.total(); ++idx) {
        int bits = 0;
        for (int k = 0; k < N; ++k) bits += (idx >> k) & 1;
        if (bits == n_excitations) v(idx) = 1.0;
    }
    return Ket::normalized(L, std::move(v));
}

HamiltonianSpec bosonized_hamiltonian(double mu_total, double Delta, int cutoff) {
    SpaceLayout L({3, cutoff});
    LinOp sig_up = embed(transition_operator(Level::g, Level::a), 0, L);
    LinOp b = embed(annihilation(cutoff), 1, L);
    LinOp T = mu_total * (b * sig_up);  // b sigma^+
    HamiltonianSpec H{L, {}};
    H.terms.push_back({T, [Delta](double t) { return std::exp(kI * Delta * t); }});
    H.terms.push_back({T.adjoint(), [Delta](double t) { return std::exp(-kI * Delta * t); }});
    return H;
}

double validate_low_excitation(const SpinEnsembleSpec& spec, int max_excitation, double horizon,
                               const IntegratorConfig& cfg, int samples, int max_spins) {
    spec.validate();
    if (max_excitation < 1 || max_excitation > spec.N)
        throw ConditionError("max_excitation must lie in [1, N]");

    CollectiveCoupling cc = collective_coupling(spec);
    int cutoff = max_excitation + 1;

    HamiltonianSpec Hm = spin_hamiltonian(spec, max_spins);
    HamiltonianSpec Hb = bosonized_hamiltonian(cc.mu_total, spec.Delta, cutoff);

    // |g> x |Dicke_n|  <->  |g, n>
    Ket qg = fock_state(0, 3);
    Ket psi_m = tensor(qg, dicke_state(spec.N, max_excitation));
    Ket psi_b = tensor(qg, fock_state(max_excitation, cutoff));

    // Embedding of the bosonic state into the spin space through Dicke states
    // (the qutrit factor carries over unchanged).
    std::vector<Ket> dicke;
    for (int n = 0; n < cutoff; ++n) dicke.push_back(dicke_state(spec.N, n));

    IntegratorConfig c = cfg;
    if (c.dt <= 0) {
        double scale = std::max({spec.Delta, 2.0 * cc.mu_total, 2.0 * M_PI / horizon});
        c.dt = 2.0 * M_PI / scale / 1024.0;
    }

    double worst = 0.0;
    double t = 0.0;
    Ket cur_m = psi_m, cur_b = psi_b;
    for (int s = 1; s <= samples; ++s) {
        double t_next = horizon * double(s) / samples;
        cur_m = propagate_pure(Hm, cur_m, t, t_next, c);
        cur_b = propagate_pure(Hb, cur_b, t, t_next, c);
        t = t_next;

        // lift bosonic -> spin space
        Vec lifted = Vec::Zero(cur_m.amps.size());
        int spin_dim = dicke[0].layout.total();
        for (int q = 0; q < 3; ++q)
            for (int n = 0; n < cutoff; ++n) {
                Cx amp = cur_b.amps(q * cutoff + n);
                if (std::abs(amp) > 0)
                    lifted.segment(q * spin_dim, spin_dim) += amp * dicke[size_t(n)].amps;
            }
        double ov = std::min(1.0, std::abs(cur_m.amps.dot(lifted)));
        worst = std::max(worst, std::sqrt(std::max(0.0, 1.0 - ov * ov)));
    }
    return worst;
}

}  // namespace fsim
