#pragma once

#include "fsim/model.hpp"

namespace fsim {

struct IntegratorConfig {
    enum class Method { FixedRK4, Adaptive };

    double dt = 0.0;       // fixed step (or initial step in adaptive mode)
    Method method = Method::FixedRK4;
    double tol = 1e-8;     // norm / trace drift budget over the whole interval
    long max_steps = 500000000;
};

// Default steps resolve the fastest interaction-picture oscillation with 40
// points per period (gate stage) resp. 40 points per pulse duration. Pure
// closed runs use 160 points per period: their norm-drift budget of 1e-8 over
// a full gate time needs the finer grid (density-matrix integration keeps the
// trace exactly regardless).
double default_gate_dt(const PhysicalParams& p);
double default_closed_gate_dt(const PhysicalParams& p);
double default_pulse_dt(const PhysicalParams& p);

struct EvolutionStats {
    double drift = 0.0;  // |norm - 1| (pure) or |trace - trace0| (lindblad)
    long steps = 0;
};

// Norm-preserving Schroedinger propagation, classical RK4 with the
// time-dependent Hamiltonian evaluated at stage midpoints. Renormalization is
// never applied; norm drift beyond cfg.tol raises IntegratorError carrying a
// suggested step.
Ket propagate_pure(const HamiltonianSpec& H, const Ket& psi0, double t0, double t1,
                   const IntegratorConfig& cfg, EvolutionStats* stats = nullptr);

// Lindblad master equation
//   drho/dt = -i[H(t), rho] + sum_k ( C_k rho C_k† - 1/2 {C_k† C_k, rho} ).
// The update is assembled from X - X† pieces, so Hermiticity is preserved
// structurally at every stage. Trace drift and final positivity are checked.
DensityOp evolve_lindblad(const HamiltonianSpec& H, const std::vector<LinOp>& collapse,
                          const DensityOp& rho0, double t0, double t1,
                          const IntegratorConfig& cfg, EvolutionStats* stats = nullptr);

// exp(-i H t) for a Hermitian operator, via eigendecomposition.
LinOp hermitian_propagator(const LinOp& H, double t);

}  // namespace fsim
