#include "fsim/experiments.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <limits>
#include <sstream>
#include <thread>

namespace fsim {

Scenario scenario_from_string(const std::string& s) {
    if (s == "noon") return Scenario::Noon;
    if (s == "coherent") return Scenario::Coherent;
    if (s == "cat") return Scenario::Cat;
    throw ConfigError("unknown scenario '" + s + "' (expected noon, coherent or cat)");
}

std::string scenario_label(Scenario s) {
    switch (s) {
        case Scenario::Noon: return "noon";
        case Scenario::Coherent: return "coherent";
        case Scenario::Cat: return "cat";
    }
    return "?";
}

ScenarioDefaults scenario_defaults(Scenario s) {
    switch (s) {
        case Scenario::Noon: return {6, 16.0};
        case Scenario::Coherent: return {12, 10.0};
        case Scenario::Cat: return {12, 22.0};
    }
    return {6, 16.0};
}

void SweepSpec::validate() const {
    if (D_grid.empty() || c_grid.empty() || d_grid.empty())
        throw ConfigError("sweep grids must be nonempty");
    for (double D : D_grid)
        if (D < 1.0 || D > 1000.0) throw ConfigError("D grid value out of sane range [1, 1000]");
    for (double c : c_grid)
        if (c < 0.5 || c > 2.0) throw ConfigError("c grid value out of sane range [0.5, 2]");
    for (double d : d_grid)
        if (d < 0.5 || d > 2.0) throw ConfigError("d grid value out of sane range [0.5, 2]");
    if (g_over_2pi <= 0 || Omega_over_2pi < 0) throw ConfigError("frequencies must be positive");
    if (noon_n < 1) throw ConfigError("noon_n must be >= 1");
    if ((steps_per_period != 0.0 && steps_per_period < 4) || pulse_steps < 4)
        throw ConfigError("integrator steps settings must be >= 4 (steps_per_period 0 = auto)");
    if (jobs < 1) throw ConfigError("jobs must be >= 1");
}

PhysicalParams params_for_point(const SweepSpec& spec, double D, double c, double d) {
    ScenarioDefaults defs = scenario_defaults(spec.scenario);
    PhysicalParams p;
    p.g1 = 2.0 * M_PI * spec.g_over_2pi;
    p.g2 = d * p.g1;
    p.delta1 = D * p.g1;  // D = delta/g as a ratio of angular frequencies
    p.delta2 = c * p.delta1;
    p.Omega = 2.0 * M_PI * spec.Omega_over_2pi;
    p.theta = spec.theta;
    p.kappa1 = spec.kappa1;
    p.kappa2 = spec.kappa2;
    p.gamma_ag = spec.gamma_ag;
    p.gamma_ea = spec.gamma_ea;
    p.gamma_eg = spec.gamma_eg;
    p.gamma_phi_a = spec.gamma_phi_a;
    p.gamma_phi_e = spec.gamma_phi_e;
    p.d1 = spec.d1 > 0 ? spec.d1 : defs.cutoff;
    p.d2 = spec.d2 > 0 ? spec.d2 : defs.cutoff;
    return p;
}

InitialCase initial_case_for(const SweepSpec& spec) {
    switch (spec.scenario) {
        case Scenario::Noon:
            return {NoonInput{spec.noon_n}, ControlAmplitudes::balanced()};
        case Scenario::Coherent:
            return {CoherentInput{spec.alpha, spec.beta}, ControlAmplitudes::balanced()};
        case Scenario::Cat:
            return {CatInput{spec.alpha, spec.beta}, ControlAmplitudes::balanced()};
    }
    throw ConfigError("bad scenario");
}

RunOptions run_options_for(const SweepSpec& spec, const PhysicalParams& p) {
    RunOptions o;
    o.mode = spec.mode;
    o.lossy = spec.lossy;
    o.include_pulse = spec.include_pulse;
    o.lossy_pulse = spec.lossy_pulse;
    o.timing = spec.timing;
    double spp = spec.steps_per_period > 0 ? spec.steps_per_period : (spec.lossy ? 40.0 : 160.0);
    o.gate_dt = (2.0 * M_PI / std::max(p.delta1, p.delta2)) / spp;
    o.pulse_dt = p.Omega > 0 ? derive(p).t_pulse / spec.pulse_steps : 0.0;
    o.method = spec.method;
    o.tol = spec.tol;
    return o;
}

namespace {

SweepRow run_point(const SweepSpec& spec, double D, double c, double d) {
    SweepRow row;
    row.scenario = scenario_label(spec.scenario);
    row.D = D;
    row.c = c;
    row.d = d;

    PhysicalParams p = params_for_point(spec, D, c, d);
    DerivedParams dp = derive(p);
    row.delta_over_2pi_hz = p.delta1 / (2.0 * M_PI);
    row.lambda_over_2pi_hz = dp.lambda / (2.0 * M_PI);

    auto t0 = std::chrono::steady_clock::now();
    try {
        RunOptions opts = run_options_for(spec, p);
        ProtocolResult res = run_protocol(p, initial_case_for(spec), opts);
        row.t_swap_s = res.t_gate;
        row.fidelity = res.fidelity;
        row.leak_a = res.leak_a;
        row.trace_error = res.trace_error;
    } catch (const Error& err) {
        double nan = std::numeric_limits<double>::quiet_NaN();
        row.t_swap_s = nan;
        row.fidelity = nan;
        row.leak_a = nan;
        row.trace_error = nan;
        std::cerr << "[sweep] point " << row.scenario << " D=" << D << " c=" << c << " d=" << d
                  << " failed: " << err.what() << "\n";
    }
    row.wall_time_s =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return row;
}

// Independent deterministic jobs; rows land at their grid index regardless of
// completion order.
void run_pool(int jobs, int n, const std::function<void(int)>& work) {
    if (jobs <= 1 || n <= 1) {
        for (int i = 0; i < n; ++i) work(i);
        return;
    }
    std::atomic<int> next{0};
    std::vector<std::thread> threads;
    int workers = std::min(jobs, n);
    threads.reserve(size_t(workers));
    for (int w = 0; w < workers; ++w)
        threads.emplace_back([&] {
            for (;;) {
                int i = next.fetch_add(1);
                if (i >= n) break;
                work(i);
            }
        });
    for (auto& t : threads) t.join();
}

}  // namespace

std::vector<SweepRow> sweep_detuning(const SweepSpec& spec) {
    spec.validate();
    int n = int(spec.D_grid.size());
    std::vector<SweepRow> rows(static_cast<size_t>(n));
    run_pool(spec.jobs, n, [&](int i) { rows[size_t(i)] = run_point(spec, spec.D_grid[size_t(i)], 1.0, 1.0); });
    return rows;
}

std::vector<SweepRow> sweep_inhomogeneity(const SweepSpec& spec) {
    spec.validate();
    double D = spec.base_D > 0 ? spec.base_D : scenario_defaults(spec.scenario).base_D;
    int nc = int(spec.c_grid.size()), nd = int(spec.d_grid.size());
    std::vector<SweepRow> rows(size_t(nc) * size_t(nd));
    run_pool(spec.jobs, nc * nd, [&](int i) {
        int ic = i / nd, id = i % nd;
        rows[size_t(i)] = run_point(spec, D, spec.c_grid[size_t(ic)], spec.d_grid[size_t(id)]);
    });
    return rows;
}

static const char* kCsvHeader =
    "scenario,D,c,d,delta_over_2pi_hz,lambda_over_2pi_hz,t_swap_s,fidelity,leak_a,"
    "trace_error,wall_time_s";

std::string format_results(const std::vector<SweepRow>& rows,
                           const std::vector<std::string>& comments) {
    std::ostringstream out;
    for (const auto& cline : comments) out << "# " << cline << "\n";
    out << kCsvHeader << "\n";
    char buf[64];
    auto put = [&](double v, bool last = false) {
        std::snprintf(buf, sizeof(buf), "%.17e", v);
        out << buf << (last ? "\n" : ",");
    };
    for (const auto& r : rows) {
        out << r.scenario << ",";
        put(r.D);
        put(r.c);
        put(r.d);
        put(r.delta_over_2pi_hz);
        put(r.lambda_over_2pi_hz);
        put(r.t_swap_s);
        put(r.fidelity);
        put(r.leak_a);
        put(r.trace_error);
        put(r.wall_time_s, true);
    }
    return out.str();
}

void write_results(const std::vector<SweepRow>& rows, const std::string& path,
                   const std::vector<std::string>& comments) {
    std::ofstream out(path, std::ios::binary);  // LF line endings everywhere
    if (!out) throw ConfigError("cannot open output file '" + path + "' for writing");
    out << format_results(rows, comments);
    if (!out) throw ConfigError("write failed for '" + path + "'");
}

std::vector<SweepRow> read_results(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open results file '" + path + "'");
    std::vector<SweepRow> rows;
    std::string line;
    bool header_seen = false;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        if (!header_seen) {
            if (line != kCsvHeader)
                throw ConfigError("unexpected results header in '" + path + "'");
            header_seen = true;
            continue;
        }
        std::istringstream ls(line);
        std::string field;
        SweepRow r;
        std::getline(ls, r.scenario, ',');
        double* slots[] = {&r.D, &r.c, &r.d, &r.delta_over_2pi_hz, &r.lambda_over_2pi_hz,
                           &r.t_swap_s, &r.fidelity, &r.leak_a, &r.trace_error, &r.wall_time_s};
        for (double* slot : slots) {
            if (!std::getline(ls, field, ',')) throw ConfigError("short row in '" + path + "'");
            *slot = std::strtod(field.c_str(), nullptr);
        }
        rows.push_back(std::move(r));
    }
    if (!header_seen) throw ConfigError("no header in results file '" + path + "'");
    return rows;
}

namespace {

struct KeySpec {
    const char* key;
    const char* doc;
};

const KeySpec kParamKeys[] = {
    {"params.g_over_2pi", "memory-qutrit coupling g/2pi in Hz (g1 = g, g2 = d*g)"},
    {"params.Omega_over_2pi", "readout pulse Rabi frequency /2pi in Hz"},
    {"params.theta", "readout pulse phase in rad"},
    {"params.kappa1", "memory 1 decay rate in 1/s"},
    {"params.kappa2", "memory 2 decay rate in 1/s"},
    {"params.gamma_ag", "qutrit a->g relaxation rate in 1/s"},
    {"params.gamma_ea", "qutrit e->a relaxation rate in 1/s"},
    {"params.gamma_eg", "qutrit e->g relaxation rate in 1/s"},
    {"params.gamma_phi_a", "level-a dephasing rate in 1/s"},
    {"params.gamma_phi_e", "level-e dephasing rate in 1/s"},
    {"params.d1", "memory 1 Fock cutoff (0 = scenario default)"},
    {"params.d2", "memory 2 Fock cutoff (0 = scenario default)"},
};

const KeySpec kSweepKeys[] = {
    {"sweep.scenario", "noon | coherent | cat"},
    {"sweep.D_grid", "comma list of D = delta/g values"},
    {"sweep.c_grid", "comma list of c = delta2/delta1 values"},
    {"sweep.d_grid", "comma list of d = g2/g1 values"},
    {"sweep.base_D", "D used by sweep-cd (0 = scenario anchor 16/10/22)"},
    {"sweep.timing", "nominal | actual gate time for asymmetric points"},
    {"sweep.include_pulse", "apply the readout pulse stage"},
    {"sweep.lossy", "evolve with the Lindblad dissipators"},
    {"sweep.lossy_pulse", "keep dissipators on during the pulse stage"},
    {"sweep.mode", "full | effective gate Hamiltonian"},
    {"sweep.noon_n", "NOON photon number N"},
    {"sweep.alpha", "coherent/cat amplitude of memory 1"},
    {"sweep.beta", "coherent/cat amplitude of memory 2"},
    {"sweep.jobs", "worker threads for sweep points"},
};

const KeySpec kIntegratorKeys[] = {
    {"integrator.steps_per_period", "gate-stage RK4 steps per 2pi/delta"},
    {"integrator.pulse_steps", "pulse-stage RK4 steps over t_pulse"},
    {"integrator.method", "fixed4 | adaptive"},
    {"integrator.tol", "norm/trace drift budget"},
};

std::string valid_keys_message() {
    std::string msg = "valid keys:";
    for (const auto& k : kParamKeys) msg += std::string("\n  ") + k.key + "  - " + k.doc;
    for (const auto& k : kSweepKeys) msg += std::string("\n  ") + k.key + "  - " + k.doc;
    for (const auto& k : kIntegratorKeys) msg += std::string("\n  ") + k.key + "  - " + k.doc;
    return msg;
}

bool known_key(const std::string& key) {
    for (const auto& k : kParamKeys)
        if (key == k.key) return true;
    for (const auto& k : kSweepKeys)
        if (key == k.key) return true;
    for (const auto& k : kIntegratorKeys)
        if (key == k.key) return true;
    return false;
}

}  // namespace

std::vector<std::string> config_key_listing() {
    std::vector<std::string> out;
    for (const auto& k : kParamKeys) out.push_back(std::string(k.key) + "  - " + k.doc);
    for (const auto& k : kSweepKeys) out.push_back(std::string(k.key) + "  - " + k.doc);
    for (const auto& k : kIntegratorKeys) out.push_back(std::string(k.key) + "  - " + k.doc);
    return out;
}

SweepSpec spec_from_config(const ConfigMap& cfg) {
    for (const auto& [key, value] : cfg.values)
        if (!known_key(key))
            throw ConfigError("unknown config key '" + key + "'\n" + valid_keys_message());

    SweepSpec s;
    auto num = [&](const char* key, double& slot) {
        if (cfg.has(key)) slot = to_double(key, cfg.get(key));
    };
    auto integer = [&](const char* key, int& slot) {
        if (cfg.has(key)) slot = to_int(key, cfg.get(key));
    };
    auto boolean = [&](const char* key, bool& slot) {
        if (cfg.has(key)) slot = to_bool(key, cfg.get(key));
    };

    num("params.g_over_2pi", s.g_over_2pi);
    num("params.Omega_over_2pi", s.Omega_over_2pi);
    num("params.theta", s.theta);
    num("params.kappa1", s.kappa1);
    num("params.kappa2", s.kappa2);
    num("params.gamma_ag", s.gamma_ag);
    num("params.gamma_ea", s.gamma_ea);
    num("params.gamma_eg", s.gamma_eg);
    num("params.gamma_phi_a", s.gamma_phi_a);
    num("params.gamma_phi_e", s.gamma_phi_e);
    integer("params.d1", s.d1);
    integer("params.d2", s.d2);

    if (cfg.has("sweep.scenario")) s.scenario = scenario_from_string(cfg.get("sweep.scenario"));
    if (cfg.has("sweep.D_grid")) s.D_grid = to_double_list("sweep.D_grid", cfg.get("sweep.D_grid"));
    if (cfg.has("sweep.c_grid")) s.c_grid = to_double_list("sweep.c_grid", cfg.get("sweep.c_grid"));
    if (cfg.has("sweep.d_grid")) s.d_grid = to_double_list("sweep.d_grid", cfg.get("sweep.d_grid"));
    num("sweep.base_D", s.base_D);
    if (cfg.has("sweep.timing")) s.timing = timing_from_string(cfg.get("sweep.timing"));
    boolean("sweep.include_pulse", s.include_pulse);
    boolean("sweep.lossy", s.lossy);
    boolean("sweep.lossy_pulse", s.lossy_pulse);
    if (cfg.has("sweep.mode")) s.mode = gate_mode_from_string(cfg.get("sweep.mode"));
    integer("sweep.noon_n", s.noon_n);
    num("sweep.alpha", s.alpha);
    num("sweep.beta", s.beta);
    integer("sweep.jobs", s.jobs);

    num("integrator.steps_per_period", s.steps_per_period);
    num("integrator.pulse_steps", s.pulse_steps);
    if (cfg.has("integrator.method")) {
        std::string m = cfg.get("integrator.method");
        if (m == "fixed4")
            s.method = IntegratorConfig::Method::FixedRK4;
        else if (m == "adaptive")
            s.method = IntegratorConfig::Method::Adaptive;
        else
            throw ConfigError("integrator.method must be fixed4 or adaptive, got '" + m + "'");
    }
    num("integrator.tol", s.tol);

    s.validate();
    return s;
}

std::vector<std::string> describe_spec(const SweepSpec& s) {
    std::vector<std::string> out;
    char buf[256];
    auto add = [&](const char* key, const std::string& v) { out.push_back(std::string(key) + " = " + v); };
    auto addf = [&](const char* key, double v) {
        std::snprintf(buf, sizeof(buf), "%.17g", v);
        add(key, buf);
    };
    auto addlist = [&](const char* key, const std::vector<double>& vs) {
        std::string j;
        for (double v : vs) {
            std::snprintf(buf, sizeof(buf), "%.17g", v);
            j += (j.empty() ? "" : ",") + std::string(buf);
        }
        add(key, j);
    };
    add("sweep.scenario", scenario_label(s.scenario));
    addlist("sweep.D_grid", s.D_grid);
    addlist("sweep.c_grid", s.c_grid);
    addlist("sweep.d_grid", s.d_grid);
    addf("sweep.base_D", s.base_D > 0 ? s.base_D : scenario_defaults(s.scenario).base_D);
    add("sweep.timing", s.timing == Timing::Nominal ? "nominal" : "actual");
    add("sweep.include_pulse", s.include_pulse ? "true" : "false");
    add("sweep.lossy", s.lossy ? "true" : "false");
    add("sweep.lossy_pulse", s.lossy_pulse ? "true" : "false");
    add("sweep.mode", s.mode == GateMode::Full ? "full" : "effective");
    add("sweep.noon_n", std::to_string(s.noon_n));
    addf("sweep.alpha", s.alpha);
    addf("sweep.beta", s.beta);
    addf("params.g_over_2pi", s.g_over_2pi);
    addf("params.Omega_over_2pi", s.Omega_over_2pi);
    addf("params.theta", s.theta);
    addf("params.kappa1", s.kappa1);
    addf("params.kappa2", s.kappa2);
    addf("params.gamma_ag", s.gamma_ag);
    addf("params.gamma_ea", s.gamma_ea);
    addf("params.gamma_eg", s.gamma_eg);
    addf("params.gamma_phi_a", s.gamma_phi_a);
    addf("params.gamma_phi_e", s.gamma_phi_e);
    add("params.d1", std::to_string(s.d1 > 0 ? s.d1 : scenario_defaults(s.scenario).cutoff));
    add("params.d2", std::to_string(s.d2 > 0 ? s.d2 : scenario_defaults(s.scenario).cutoff));
    addf("integrator.steps_per_period",
         s.steps_per_period > 0 ? s.steps_per_period : (s.lossy ? 40.0 : 160.0));
    addf("integrator.pulse_steps", s.pulse_steps);
    add("integrator.method",
        s.method == IntegratorConfig::Method::FixedRK4 ? "fixed4" : "adaptive");
    addf("integrator.tol", s.tol);
    out.push_back("inhomogeneity reading: delta2 = c * delta1, g2 = d * g1 at fixed base D");
    return out;
}

}  // namespace fsim
