#pragma once

#include <functional>
#include <vector>

#include "fsim/hilbert.hpp"

namespace fsim {

// All angular frequencies (rad/s); decay/dephasing rates in 1/s. The
// interaction picture depends only on detunings, so absolute qutrit/mode
// frequencies never appear.
struct PhysicalParams {
    double g1 = 0, g2 = 0;          // memory-qutrit couplings
    double delta1 = 0, delta2 = 0;  // detunings (dispersive orientation: > 0)
    double Omega = 0;               // readout pulse Rabi frequency
    double theta = 0;               // readout pulse phase
    double kappa1 = 0, kappa2 = 0;  // memory decay rates
    double gamma_ag = 0, gamma_ea = 0, gamma_eg = 0;  // qutrit relaxation
    double gamma_phi_a = 0, gamma_phi_e = 0;          // qutrit dephasing
    int d1 = 2, d2 = 2;             // Fock cutoffs

    void validate() const;
    // true when either delta_i/g_i < 5 (dispersive approximation suspect)
    bool dispersive_warning() const;
    bool symmetric(double rel_tol = 1e-9) const;
    SpaceLayout layout() const { return SpaceLayout::qutrit_with_modes(d1, d2); }
};

struct DerivedParams {
    double lambda;       // (g1 g2 / 2)(1/delta1 + 1/delta2), memory-memory swap rate
    double omega_stark;  // g1^2 / delta1
    double delta_prime;  // delta2 - delta1
    double t_swap;       // pi / (2 lambda)
    double t_pulse;      // pi / (4 Omega); 0 when no pulse is configured
};

DerivedParams derive(const PhysicalParams& p);

// H(t) = sum_k z_k(t) * T_k with constant operators T_k. A null coeff means
// the term is constant. Built Hermitian term-by-term (each oscillating term
// comes with its adjoint partner).
struct HamiltonianTerm {
    LinOp op;
    std::function<Cx(double)> coeff;  // null -> 1
};

struct HamiltonianSpec {
    SpaceLayout layout;
    std::vector<HamiltonianTerm> terms;

    bool time_dependent() const;
    LinOp at(double t) const;
};

// Interaction-picture gate Hamiltonian:
//   g1 (e^{i delta1 t} a1 sigma_ag^+ + h.c.) + g2 (e^{i delta2 t} a2 sigma_ag^+ + h.c.)
// The |e> level is fully decoupled (its coupling to the memories is far
// detuned and dropped from the model).
HamiltonianSpec full_hamiltonian(const PhysicalParams& p);

// Second-order dispersive Hamiltonian. reduced=false: the full dispersive
// form with Stark shifts on |a> and |g> and the conditional mode-exchange
// terms (time-dependent when delta1 != delta2). reduced=true: the
// time-independent form
//   -omega (n1 + n2)|g><g| - lambda (a1†a2 + a1 a2†)|g><g|
// valid only for symmetric parameters with |a> unoccupied; throws
// ConditionError otherwise.
LinOp effective_hamiltonian(const PhysicalParams& p, double t, bool reduced);

// Readout pulse on the g<->e transition: Omega (e^{i theta}|g><e| + h.c.),
// identity on both modes.
LinOp pulse_hamiltonian(double Omega, double theta, const SpaceLayout& layout);
HamiltonianSpec pulse_hamiltonian_spec(const PhysicalParams& p);

// Rate-scaled collapse operators for the master equation, in fixed order:
// sqrt(kappa1) a1, sqrt(kappa2) a2, sqrt(gamma_ag)|g><a|, sqrt(gamma_ea)|a><e|,
// sqrt(gamma_eg)|g><e|, sqrt(gamma_phi_a)|a><a|, sqrt(gamma_phi_e)|e><e|.
// Zero-rate channels are omitted.
std::vector<LinOp> collapse_operators(const PhysicalParams& p);

}  // namespace fsim
