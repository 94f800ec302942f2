#pragma once

#include <optional>
#include <string>
#include <variant>

#include "fsim/analytics.hpp"
#include "fsim/dynamics.hpp"

namespace fsim {

// Control-qubit amplitudes gamma|g> + eta|e>.
struct ControlAmplitudes {
    Cx gamma, eta;

    ControlAmplitudes(Cx gamma, Cx eta);
    static ControlAmplitudes balanced() { return {Cx(M_SQRT1_2), Cx(M_SQRT1_2)}; }
    // gamma* eta + gamma eta*, the swap-test visibility
    double cross_term() const { return 2.0 * (std::conj(gamma) * eta).real(); }
};

struct NoonInput {
    int N;
};
struct CoherentInput {
    double alpha, beta;  // memory 1 in |alpha>, memory 2 in |-beta>
};
struct CatInput {
    double alpha, beta;  // memory 1 even cat(alpha), memory 2 odd cat(beta)
};
struct CustomInput {
    Ket psi1, phi2;  // single-factor kets for the two memories
};

struct InitialCase {
    std::variant<NoonInput, CoherentInput, CatInput, CustomInput> input;
    ControlAmplitudes control = ControlAmplitudes::balanced();
};

// |control> x |memory1> x |memory2> on [3, d1, d2].
Ket initial_state(const InitialCase& c, const SpaceLayout& layout);

// The algebraic controlled-SWAP: SWAP the two memories iff the control is in
// |g>, identity otherwise. Requires d1 == d2.
LinOp ideal_fredkin(const SpaceLayout& layout);

// (-1)^(n1+n2) on the |g> branch, identity elsewhere. The model's lossless
// one-step gate equals controlled_parity * ideal_fredkin: the Stark and
// beam-splitter quarter-period phases compound to i^(n+m) * i^(n+m).
LinOp controlled_parity(const SpaceLayout& layout);

// exp(-i H_e t_swap) with the reduced effective Hamiltonian: the model's own
// lossless one-step gate (exact, via eigendecomposition).
LinOp effective_gate_unitary(const PhysicalParams& p);

// exp(-i H_pulse t_pulse): the exact readout rotation.
LinOp pulse_unitary(const PhysicalParams& p);

// The theta = -pi/2, Omega t = pi/4 readout rotation in closed form:
// |g> -> (|e>+|g>)/sqrt2, |e> -> (|e>-|g>)/sqrt2, |a> untouched.
LinOp ideal_pulse_rotation(const SpaceLayout& layout);

enum class GateMode { Full, Effective };
enum class Timing { Nominal, Actual };

GateMode gate_mode_from_string(const std::string& s);
Timing timing_from_string(const std::string& s);

struct RunOptions {
    GateMode mode = GateMode::Full;
    bool lossy = true;
    bool include_pulse = true;
    bool lossy_pulse = true;   // decoherence stays on during the readout pulse
    Timing timing = Timing::Nominal;
    double gate_dt = 0.0;      // 0 -> (2 pi / delta_max) / 40
    double pulse_dt = 0.0;     // 0 -> t_pulse / 40
    IntegratorConfig::Method method = IntegratorConfig::Method::FixedRK4;
    double tol = 1e-8;
    // Cutoff-overflow guard. The gate conserves n1 + n2 + (a-occupancy), so
    // the only unrepresentable dynamics is the swap rotation of g-branch
    // sectors with n1 + n2 >= min(d1, d2), whose intermediate states exceed
    // the cutoff. Input mass on those sectors above this tolerance raises
    // TruncationError. (The 1e-6 tail audit lives in the state constructors.)
    double truncation_tol = 1e-4;
};

struct ProtocolResult {
    SpaceLayout layout;
    bool pure;                          // closed run, final_ket holds the state
    std::optional<Ket> final_ket;
    DensityOp final_rho;                // always populated
    double t_gate = 0, t_pulse = 0;
    double leak_a = 0, trace_error = 0, norm_drift = 0;
    std::vector<double> top_fock;
    // F = sqrt(<psi_id|rho|psi_id>) against the lossless closed-model output
    // (exact effective gate + exact pulse on the initial ket).
    double fidelity = 0;
    // Same against the algebraic ideal gate + exact pulse. Differs from the
    // above by the controlled-parity phases of the one-step scheme.
    double fidelity_ideal_gate = 0;
    std::optional<Ket> reference;             // lossless closed-model output
    std::optional<Ket> reference_ideal_gate;  // algebraic-gate output
};

// Gate stage (t = pi/2lambda under the chosen Hamiltonian) followed by the
// optional readout pulse. The ideal references are generated operationally
// from the initial ket, never assembled by hand.
ProtocolResult run_protocol(const PhysicalParams& params, const InitialCase& c,
                            const RunOptions& opts);

// Von Neumann measurement of the control in {|g>, |e>}; |a> population is
// reported as leakage. Conditional memory states are renormalized; a branch
// with ~zero probability is flagged absent instead of divided by zero.
struct MeasurementBranch {
    bool present = false;
    double probability = 0.0;
    std::optional<DensityOp> memory_state;  // on [d1, d2]
};

struct Measurement {
    MeasurementBranch g, e;
    double leak_a = 0.0;
};

Measurement measure_control(const DensityOp& rho);
Measurement measure_control(const Ket& psi);

// Invert p_g = 1/2 [1 - (gamma* eta + gamma eta*) F^2]. The result is clamped
// to [0, 1]; `clamped` records an out-of-range inversion.
struct SwapTestInference {
    double F2;
    bool clamped;
};

SwapTestInference swap_test_infer(double p_g, const ControlAmplitudes& control);

enum class SwapGateRoute {
    IdealGate,       // algebraic controlled-SWAP + exact pulse algebra
    EffectiveModel,  // exp(-i H_e t_swap) + exact pulse (closed effective model)
};

struct SwapTestRun {
    double p_g;
    double inferred_F2;
    double true_F2;  // |<phi|psi>|^2 computed directly
};

// Full swap-test protocol on two single-factor memory states of equal dim.
// The effective-model route needs physical parameters for H_e.
SwapTestRun run_swap_test(const Ket& psi1, const Ket& phi2, const ControlAmplitudes& control,
                          SwapGateRoute route, const PhysicalParams* params = nullptr);

// Entangled two-memory targets on a [d1, d2] layout, normalization computed
// from the actual truncated overlaps.
enum class TargetKind { Noon, EntCoherent, EntCat };

struct TargetState {
    TargetKind kind;
    Branch branch = Branch::Plus;
    int N = 0;            // Noon
    double alpha = 0.0;   // EntCoherent / EntCat
    double beta = 0.0;
};

Ket target_entangled_state(const TargetState& t, const SpaceLayout& memory_layout);

}  // namespace fsim
