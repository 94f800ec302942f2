#pragma once

#include "fsim/dynamics.hpp"

namespace fsim {

// Spin ensemble coupled to the g<->a transition: N two-level spins with
// per-spin couplings mu_k and common detuning Delta = omega_ag - omega_{0,+1}.
struct SpinEnsembleSpec {
    int N = 1;
    std::vector<double> mu;  // rad/s, one per spin
    double Delta = 0.0;      // rad/s

    static SpinEnsembleSpec uniform(int N, double mu0, double Delta);
    void validate() const;
};

struct CollectiveCoupling {
    double mu_bar;    // root mean square of the individual couplings
    double mu_total;  // sqrt(N) * mu_bar, the bosonized coupling
};

CollectiveCoupling collective_coupling(const SpinEnsembleSpec& spec);

// [qutrit, spin_1, ..., spin_N] with spin levels {m_s=0 -> 0, m_s=+1 -> 1}.
SpaceLayout spin_layout(int N);

// Microscopic Hamiltonian sum_k mu_k (sigma_ag^+ tau_k^- e^{i Delta t} + h.c.).
// Dimension 3 * 2^N; N above max_spins is rejected.
HamiltonianSpec spin_hamiltonian(const SpinEnsembleSpec& spec, int max_spins = 6);

// Map two ensembles onto the bosonic two-memory model: g_i = sqrt(N_i) mu_bar_i,
// delta_i = Delta_i. Everything downstream (gate, sweeps) is reused unchanged.
PhysicalParams bosonic_equivalent(const SpinEnsembleSpec& e1, const SpinEnsembleSpec& e2,
                                  int d1, int d2);

// Symmetric n-excitation Dicke state on (2)^N.
Ket dicke_state(int N, int n_excitations);

// Bosonized single-ensemble Hamiltonian mu (e^{i Delta t} b sigma_ag^+ + h.c.)
// on [qutrit, mode(cutoff)].
HamiltonianSpec bosonized_hamiltonian(double mu_total, double Delta, int cutoff);

// Max trace distance over the horizon between the microscopic evolution
// started in |g> x |Dicke_n> and the bosonized evolution started in |g, n>,
// compared through the Dicke embedding. Exact (up to integrator error) for a
// single excitation with uniform couplings.
double validate_low_excitation(const SpinEnsembleSpec& spec, int max_excitation, double horizon,
                               const IntegratorConfig& cfg = {}, int samples = 40,
                               int max_spins = 6);

}  // namespace fsim
