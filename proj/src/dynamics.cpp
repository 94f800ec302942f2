#include "fsim/dynamics.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/Sparse>

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace fsim {

namespace {

constexpr Cx kI{0.0, 1.0};

std::string format_sci(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.3e", v);
    return buf;
}

using SpMat = Eigen::SparseMatrix<Cx, Eigen::RowMajor>;

struct SparseTerm {
    SpMat op;
    std::function<Cx(double)> coeff;  // null -> 1
};

std::vector<SparseTerm> sparsify(const HamiltonianSpec& H) {
    std::vector<SparseTerm> out;
    out.reserve(H.terms.size());
    for (const auto& t : H.terms) {
        SpMat s = t.op.mat.sparseView(1.0, 1e-300);
        s.makeCompressed();
        out.push_back({std::move(s), t.coeff});
    }
    return out;
}

struct CollapseSet {
    std::vector<SpMat> ops;       // C_k
    std::vector<SpMat> ops_dag;   // C_k†
    SpMat half_cdc;               // 1/2 sum_k C_k† C_k
};

CollapseSet sparsify(const std::vector<LinOp>& collapse, int dim) {
    CollapseSet set;
    Mat acc = Mat::Zero(dim, dim);
    for (const auto& c : collapse) {
        SpMat s = c.mat.sparseView(1.0, 1e-300);
        s.makeCompressed();
        set.ops_dag.push_back(SpMat(s.adjoint()));
        set.ops.push_back(std::move(s));
        acc += 0.5 * (c.mat.adjoint() * c.mat);
    }
    set.half_cdc = acc.sparseView(1.0, 1e-300);
    set.half_cdc.makeCompressed();
    return set;
}

long step_count(double t0, double t1, double dt, long max_steps) {
    if (dt <= 0) throw ConditionError("integrator dt must be > 0");
    if (t1 < t0) throw ConditionError("integrator: t1 < t0");
    long n = static_cast<long>(std::ceil((t1 - t0) / dt - 1e-9));
    if (n < 1) n = 1;
    if (n > max_steps)
        throw IntegratorError("integration needs " + std::to_string(n) +
                              " steps, above max_steps", dt);
    return n;
}

// --- pure-state propagation ---------------------------------------------------

class PureRhs {
public:
    PureRhs(const HamiltonianSpec& H) : terms_(sparsify(H)) {}

    void operator()(double t, const Vec& psi, Vec& out) const {
        out.setZero();
        for (const auto& term : terms_) {
            Cx z = term.coeff ? term.coeff(t) : Cx(1.0);
            out.noalias() += z * (term.op * psi);
        }
        out *= -kI;
    }

private:
    std::vector<SparseTerm> terms_;
};

template <typename Rhs, typename State>
void rk4_step(const Rhs& rhs, double t, double dt, State& y, State& k1, State& k2, State& k3,
              State& k4, State& tmp) {
    rhs(t, y, k1);
    tmp = y + (dt / 2.0) * k1;
    rhs(t + dt / 2.0, tmp, k2);
    tmp = y + (dt / 2.0) * k2;
    rhs(t + dt / 2.0, tmp, k3);
    tmp = y + dt * k3;
    rhs(t + dt, tmp, k4);
    y += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

// Fixed-grid driver; the final step is shortened to land exactly on t1.
template <typename Rhs, typename State>
long rk4_drive(const Rhs& rhs, State& y, double t0, double t1, double dt, long max_steps) {
    long n = step_count(t0, t1, dt, max_steps);
    State k1 = y, k2 = y, k3 = y, k4 = y, tmp = y;
    double t = t0;
    for (long s = 0; s < n; ++s) {
        double h = std::min(dt, t1 - t);
        rk4_step(rhs, t, h, y, k1, k2, k3, k4, tmp);
        t = (s + 1 == n) ? t1 : t + h;
    }
    return n;
}

// Step-doubling error control on top of the same stage arithmetic.
template <typename Rhs, typename State>
long rk4_adaptive(const Rhs& rhs, State& y, double t0, double t1, double dt0, double tol,
                  long max_steps) {
    State k1 = y, k2 = y, k3 = y, k4 = y, tmp = y;
    double t = t0, dt = dt0;
    long steps = 0;
    double step_tol = tol / std::max(1.0, (t1 - t0) / dt0);
    while (t < t1 - 1e-15 * (t1 - t0 + 1.0)) {
        double h = std::min(dt, t1 - t);
        State big = y, half = y;
        rk4_step(rhs, t, h, big, k1, k2, k3, k4, tmp);
        rk4_step(rhs, t, h / 2.0, half, k1, k2, k3, k4, tmp);
        rk4_step(rhs, t + h / 2.0, h / 2.0, half, k1, k2, k3, k4, tmp);
        double err = (big - half).norm();
        if (err <= step_tol || h <= 1e-18) {
            y = half;
            t += h;
            ++steps;
            if (steps > max_steps)
                throw IntegratorError("adaptive integration exceeded max_steps", dt);
        }
        double scale = err > 0 ? 0.9 * std::pow(step_tol / err, 0.2) : 2.0;
        dt = h * std::clamp(scale, 0.2, 5.0);
    }
    return steps;
}

}  // namespace

double default_gate_dt(const PhysicalParams& p) {
    double dmax = std::max(p.delta1, p.delta2);
    return (2.0 * M_PI / dmax) / 40.0;
}

double default_closed_gate_dt(const PhysicalParams& p) {
    double dmax = std::max(p.delta1, p.delta2);
    return (2.0 * M_PI / dmax) / 160.0;
}

double default_pulse_dt(const PhysicalParams& p) {
    // 40 steps over the pi/4 pulse keeps RK4 norm drift ~1e-11, well inside
    // the 1e-8 budget (one step per 1/40 pulse *period* would not).
    return derive(p).t_pulse / 40.0;
}

Ket propagate_pure(const HamiltonianSpec& H, const Ket& psi0, double t0, double t1,
                   const IntegratorConfig& cfg, EvolutionStats* stats) {
    if (H.layout != psi0.layout) throw LayoutError("propagate_pure: layout mismatch");
    PureRhs rhs(H);
    Vec psi = psi0.amps;
    long steps;
    if (cfg.method == IntegratorConfig::Method::Adaptive)
        steps = rk4_adaptive(rhs, psi, t0, t1, cfg.dt, cfg.tol, cfg.max_steps);
    else
        steps = rk4_drive(rhs, psi, t0, t1, cfg.dt, cfg.max_steps);

    double drift = std::abs(psi.norm() - 1.0);
    if (stats) *stats = {drift, steps};
    if (drift > cfg.tol) {
        double suggested = cfg.dt * 0.7 * std::pow(cfg.tol / drift, 0.25);
        throw IntegratorError("norm drift " + format_sci(drift) + " above tolerance " +
                              format_sci(cfg.tol) + "; try dt = " + format_sci(suggested),
                              suggested);
    }
    return Ket::unchecked(psi0.layout, std::move(psi));
}

namespace {

class LindbladRhs {
public:
    LindbladRhs(const HamiltonianSpec& H, const std::vector<LinOp>& collapse)
        : terms_(sparsify(H)), collapse_(sparsify(collapse, H.layout.total())) {
        int d = H.layout.total();
        hrho_.resize(d, d);
        crho_.resize(d, d);
    }

    void operator()(double t, const Mat& rho, Mat& out) const {
        // -i[H, rho] as -i(H rho - (H rho)†), valid for Hermitian rho
        hrho_.setZero();
        for (const auto& term : terms_) {
            Cx z = term.coeff ? term.coeff(t) : Cx(1.0);
            hrho_.noalias() += z * (term.op * rho);
        }
        out = -kI * (hrho_ - hrho_.adjoint());

        for (size_t k = 0; k < collapse_.ops.size(); ++k) {
            crho_.noalias() = collapse_.ops[k] * rho;
            out.noalias() += crho_ * collapse_.ops_dag[k];
        }
        if (!collapse_.ops.empty()) {
            hrho_.noalias() = collapse_.half_cdc * rho;
            out -= hrho_;
            out -= hrho_.adjoint();
        }
    }

private:
    std::vector<SparseTerm> terms_;
    CollapseSet collapse_;
    mutable Mat hrho_, crho_;
};

}  // namespace

DensityOp evolve_lindblad(const HamiltonianSpec& H, const std::vector<LinOp>& collapse,
                          const DensityOp& rho0, double t0, double t1,
                          const IntegratorConfig& cfg, EvolutionStats* stats) {
    if (H.layout != rho0.layout) throw LayoutError("evolve_lindblad: layout mismatch");
    for (const auto& c : collapse)
        if (c.layout != rho0.layout) throw LayoutError("evolve_lindblad: collapse operator layout mismatch");

    LindbladRhs rhs(H, collapse);
    Mat rho = rho0.mat;
    double trace0 = rho.trace().real();
    long steps;
    if (cfg.method == IntegratorConfig::Method::Adaptive)
        steps = rk4_adaptive(rhs, rho, t0, t1, cfg.dt, cfg.tol, cfg.max_steps);
    else
        steps = rk4_drive(rhs, rho, t0, t1, cfg.dt, cfg.max_steps);

    double drift = std::abs(rho.trace().real() - trace0);
    if (stats) *stats = {drift, steps};
    if (drift > cfg.tol) {
        double suggested = cfg.dt * 0.7 * std::pow(cfg.tol / std::max(drift, 1e-300), 0.25);
        throw IntegratorError("trace drift " + format_sci(drift) + " above tolerance " +
                              format_sci(cfg.tol), suggested);
    }
    DensityOp out(rho0.layout, std::move(rho));
    double herm = out.hermiticity_error();
    if (herm > 1e-10)
        throw IntegratorError("density matrix asymmetry " + std::to_string(herm), cfg.dt / 2.0);
    double ev = out.min_eigenvalue();
    if (ev < -1e-8)
        throw IntegratorError("density matrix eigenvalue " + std::to_string(ev) + " < -1e-8",
                              cfg.dt / 2.0);
    return out;
}

LinOp hermitian_propagator(const LinOp& H, double t) {
    if (!H.is_hermitian(1e-10)) throw ConditionError("hermitian_propagator: operator not Hermitian");
    Eigen::SelfAdjointEigenSolver<Mat> es(H.mat);
    Vec phases(es.eigenvalues().size());
    for (int i = 0; i < phases.size(); ++i)
        phases(i) = std::exp(-kI * es.eigenvalues()(i) * t);
    Mat U = es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
    return LinOp(H.layout, std::move(U));
}

}  // namespace fsim
