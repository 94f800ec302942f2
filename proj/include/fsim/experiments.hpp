#pragma once

#include "fsim/config.hpp"
#include "fsim/fredkin.hpp"

namespace fsim {

enum class Scenario { Noon, Coherent, Cat };

Scenario scenario_from_string(const std::string& s);
std::string scenario_label(Scenario s);

// Reproduction defaults per scenario: cutoff and the anchor detuning ratio.
struct ScenarioDefaults {
    int cutoff;
    double base_D;
};
ScenarioDefaults scenario_defaults(Scenario s);

// Base parameters + grids for the detuning and inhomogeneity sweeps. Defaults
// are the reproduction values: g/2pi = 70 MHz, Omega/2pi = 100 MHz,
// theta = -pi/2, memory lifetimes 5 us, qutrit relaxation 5 us, dephasing 2 us,
// N = 5, alpha = beta = 1.1.
struct SweepSpec {
    Scenario scenario = Scenario::Noon;
    std::vector<double> D_grid = {16.0};
    std::vector<double> c_grid = {1.0};
    std::vector<double> d_grid = {1.0};
    double base_D = 0.0;  // 0 -> scenario default (16 / 10 / 22)
    Timing timing = Timing::Nominal;
    bool include_pulse = true;
    bool lossy = true;
    bool lossy_pulse = true;
    GateMode mode = GateMode::Full;

    double g_over_2pi = 70e6;
    double Omega_over_2pi = 100e6;
    double theta = -M_PI / 2.0;
    double kappa1 = 2e5, kappa2 = 2e5;
    double gamma_ag = 2e5, gamma_ea = 2e5, gamma_eg = 2e5;
    double gamma_phi_a = 5e5, gamma_phi_e = 5e5;
    int d1 = 0, d2 = 0;  // 0 -> scenario default cutoff
    int noon_n = 5;
    double alpha = 1.1, beta = 1.1;

    // gate-stage RK4 steps per 2pi/delta; 0 = auto (40 for lossy runs, 160
    // for closed pure runs, matching the integrator defaults)
    double steps_per_period = 0.0;
    double pulse_steps = 40.0;  // pulse-stage RK4 steps over t_pulse
    IntegratorConfig::Method method = IntegratorConfig::Method::FixedRK4;
    double tol = 1e-8;

    int jobs = 1;

    void validate() const;
};

// One sweep point. Column order of write_results is exactly this field order.
struct SweepRow {
    std::string scenario;
    double D = 0, c = 1, d = 1;
    double delta_over_2pi_hz = 0;   // delta1 / 2pi
    double lambda_over_2pi_hz = 0;  // actual swap coupling / 2pi
    double t_swap_s = 0;            // gate time used (nominal or actual)
    double fidelity = 0;            // vs the lossless closed-model reference
    double leak_a = 0;
    double trace_error = 0;
    double wall_time_s = 0;
};

PhysicalParams params_for_point(const SweepSpec& spec, double D, double c, double d);
InitialCase initial_case_for(const SweepSpec& spec);
RunOptions run_options_for(const SweepSpec& spec, const PhysicalParams& p);

// Fidelity vs D at c = d = 1 (one row per grid value). Per-point numerical
// failures leave NaN diagnostics in the row; the sweep continues.
std::vector<SweepRow> sweep_detuning(const SweepSpec& spec);

// Fidelity over the (c, d) grid at the scenario's base D, rows ordered c-outer
// d-inner. Uses the full time-dependent Hamiltonian with asymmetric parameters.
std::vector<SweepRow> sweep_inhomogeneity(const SweepSpec& spec);

// Header row + one line per SweepRow, full-precision scientific floats, UTF-8,
// LF. Optional comment lines (prefixed '#') carry the effective config.
void write_results(const std::vector<SweepRow>& rows, const std::string& path,
                   const std::vector<std::string>& comments = {});
std::string format_results(const std::vector<SweepRow>& rows,
                           const std::vector<std::string>& comments = {});
std::vector<SweepRow> read_results(const std::string& path);

// Typed extraction from a parsed config; unknown keys are rejected with the
// list of valid keys.
SweepSpec spec_from_config(const ConfigMap& cfg);
std::vector<std::string> config_key_listing();
// The effective configuration, one "section.key = value" per line.
std::vector<std::string> describe_spec(const SweepSpec& spec);

}  // namespace fsim
