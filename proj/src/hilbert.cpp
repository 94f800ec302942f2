#include "fsim/hilbert.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <numeric>
#include <sstream>

namespace fsim {

Level level_from_string(const std::string& s) {
    if (s == "g") return Level::g;
    if (s == "a") return Level::a;
    if (s == "e") return Level::e;
    throw ConditionError("unknown qutrit level '" + s + "' (expected g, a or e)");
}

std::string level_label(Level l) {
    switch (l) {
        case Level::g: return "g";
        case Level::a: return "a";
        case Level::e: return "e";
    }
    return "?";
}

SpaceLayout::SpaceLayout(std::vector<int> d) : dims(std::move(d)) {
    if (dims.empty()) throw DimensionError("layout needs at least one factor");
    for (int x : dims)
        if (x < 1) throw DimensionError("factor dimension must be >= 1, got " + std::to_string(x));
}

SpaceLayout SpaceLayout::qutrit_with_modes(int d1, int d2) {
    return SpaceLayout({3, d1, d2});
}

SpaceLayout SpaceLayout::single(int dim) { return SpaceLayout({dim}); }

int SpaceLayout::total() const {
    return std::accumulate(dims.begin(), dims.end(), 1, std::multiplies<int>());
}

std::string SpaceLayout::str() const {
    std::ostringstream os;
    os << "[";
    for (size_t i = 0; i < dims.size(); ++i) os << (i ? " x " : "") << dims[i];
    os << "]";
    return os.str();
}

LinOp::LinOp(SpaceLayout l, Mat m, bool hermitian)
    : layout(std::move(l)), mat(std::move(m)), hermitian_hint(hermitian) {
    if (mat.rows() != layout.total() || mat.cols() != layout.total())
        throw LayoutError("operator shape " + std::to_string(mat.rows()) + "x" +
                          std::to_string(mat.cols()) + " does not match layout " + layout.str());
}

LinOp LinOp::adjoint() const { return LinOp(layout, mat.adjoint(), hermitian_hint); }

bool LinOp::is_hermitian(double tol) const {
    return (mat - mat.adjoint()).cwiseAbs().maxCoeff() <= tol;
}

LinOp operator*(const LinOp& a, const LinOp& b) {
    if (a.layout != b.layout) throw LayoutError("operator product: layout mismatch");
    return LinOp(a.layout, a.mat * b.mat);
}

LinOp operator*(Cx s, const LinOp& a) {
    return LinOp(a.layout, s * a.mat, a.hermitian_hint && s.imag() == 0.0);
}

LinOp operator+(const LinOp& a, const LinOp& b) {
    if (a.layout != b.layout) throw LayoutError("operator sum: layout mismatch");
    return LinOp(a.layout, a.mat + b.mat, a.hermitian_hint && b.hermitian_hint);
}

LinOp operator-(const LinOp& a, const LinOp& b) {
    if (a.layout != b.layout) throw LayoutError("operator difference: layout mismatch");
    return LinOp(a.layout, a.mat - b.mat, a.hermitian_hint && b.hermitian_hint);
}

Ket::Ket(SpaceLayout l, Vec a) : layout(std::move(l)), amps(std::move(a)) {
    if (amps.size() != layout.total())
        throw LayoutError("ket length " + std::to_string(amps.size()) +
                          " does not match layout " + layout.str());
    if (std::abs(amps.norm() - 1.0) > 1e-10)
        throw ConditionError("ket is not normalized (norm = " + std::to_string(amps.norm()) +
                             "); use Ket::normalized for unnormalized input");
}

Ket Ket::normalized(SpaceLayout l, Vec a) {
    double n = a.norm();
    if (n < 1e-300) throw ConditionError("cannot normalize a zero vector");
    return Ket(std::move(l), a / n);
}

Ket::Ket(SpaceLayout l, Vec a, BypassCheck) : layout(std::move(l)), amps(std::move(a)) {
    if (amps.size() != layout.total())
        throw LayoutError("ket length does not match layout " + layout.str());
}

Ket Ket::unchecked(SpaceLayout l, Vec a) { return Ket(std::move(l), std::move(a), BypassCheck{}); }

Cx inner(const Ket& u, const Ket& v) {
    if (u.layout != v.layout) throw LayoutError("inner product: layout mismatch");
    return u.amps.dot(v.amps);  // Eigen dot conjugates the left argument
}

DensityOp::DensityOp(SpaceLayout l, Mat m) : layout(std::move(l)), mat(std::move(m)) {
    if (mat.rows() != layout.total() || mat.cols() != layout.total())
        throw LayoutError("density matrix shape does not match layout " + layout.str());
}

DensityOp DensityOp::pure(const Ket& psi) {
    return DensityOp(psi.layout, psi.amps * psi.amps.adjoint());
}

double DensityOp::min_eigenvalue() const {
    Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (mat + mat.adjoint()), Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff();
}

double DensityOp::hermiticity_error() const {
    return (mat - mat.adjoint()).cwiseAbs().maxCoeff();
}

void DensityOp::validate(double herm_tol, double trace_tol, double eig_tol) const {
    double h = hermiticity_error();
    if (h > herm_tol)
        throw ConditionError("density matrix not Hermitian (max assymmetry " + std::to_string(h) + ")");
    double tr = trace_real();
    if (std::abs(tr - 1.0) > trace_tol)
        throw ConditionError("density matrix trace " + std::to_string(tr) + " != 1");
    double ev = min_eigenvalue();
    if (ev < -eig_tol)
        throw ConditionError("density matrix has eigenvalue " + std::to_string(ev) + " < 0");
}

LinOp annihilation(int dim) {
    if (dim < 2) throw DimensionError("annihilation operator needs dim >= 2, got " + std::to_string(dim));
    Mat m = Mat::Zero(dim, dim);
    for (int n = 1; n < dim; ++n) m(n - 1, n) = std::sqrt(double(n));
    return LinOp(SpaceLayout::single(dim), std::move(m));
}

LinOp creation(int dim) { return annihilation(dim).adjoint(); }

LinOp number_operator(int dim) {
    Mat m = Mat::Zero(dim, dim);
    for (int n = 0; n < dim; ++n) m(n, n) = double(n);
    return LinOp(SpaceLayout::single(dim), std::move(m), true);
}

LinOp identity_op(int dim) {
    return LinOp(SpaceLayout::single(dim), Mat::Identity(dim, dim), true);
}

LinOp transition_operator(Level from, Level to) {
    Mat m = Mat::Zero(3, 3);
    m(static_cast<int>(to), static_cast<int>(from)) = 1.0;
    return LinOp(SpaceLayout::single(3), std::move(m), from == to);
}

LinOp level_projector(Level j) { return transition_operator(j, j); }

Ket fock_state(int n, int dim) {
    if (n < 0) throw DimensionError("fock index must be >= 0");
    if (n >= dim)
        throw TruncationError("fock index " + std::to_string(n) + " exceeds cutoff " +
                              std::to_string(dim), n + 1);
    Vec v = Vec::Zero(dim);
    v(n) = 1.0;
    return Ket(SpaceLayout::single(dim), std::move(v));
}

double coherent_tail(double alpha_abs2, int dim) {
    // 1 - sum_{n<dim} e^{-x} x^n / n!, summed stably in log space
    double head = 0.0, term = std::exp(-alpha_abs2);
    for (int n = 0; n < dim; ++n) {
        head += term;
        term *= alpha_abs2 / double(n + 1);
    }
    return std::max(0.0, 1.0 - head);
}

int required_coherent_dim(double alpha_abs2, double tol) {
    int dim = 1;
    while (coherent_tail(alpha_abs2, dim) > tol && dim < 4096) ++dim;
    return dim;
}

Ket coherent_state(Cx alpha, int dim, double tail_tol) {
    if (dim < 1) throw DimensionError("coherent state needs dim >= 1");
    double a2 = std::norm(alpha);
    double tail = coherent_tail(a2, dim);
    if (tail > tail_tol)
        throw TruncationError("coherent-state tail " + std::to_string(tail) + " above tolerance " +
                              std::to_string(tail_tol) + " at cutoff " + std::to_string(dim) +
                              "; need dim >= " + std::to_string(required_coherent_dim(a2, tail_tol)),
                              required_coherent_dim(a2, tail_tol));
    Vec v(dim);
    Cx c = 1.0;  // unnormalized: c_n = alpha^n / sqrt(n!)
    for (int n = 0; n < dim; ++n) {
        v(n) = c;
        c *= alpha / std::sqrt(double(n + 1));
    }
    return Ket::normalized(SpaceLayout::single(dim), std::move(v));
}

CatParity cat_parity_from_string(const std::string& s) {
    if (s == "even") return CatParity::Even;
    if (s == "odd") return CatParity::Odd;
    throw ConditionError("unknown cat parity '" + s + "' (expected even or odd)");
}

Ket cat_state(double alpha, CatParity parity, int dim, double tail_tol) {
    if (alpha < 0) throw ConditionError("cat state amplitude must be >= 0");
    if (parity == CatParity::Odd && alpha == 0.0)
        throw ConditionError("odd cat with alpha = 0 is degenerate (zero vector)");
    Ket plus = coherent_state(alpha, dim, tail_tol);
    Ket minus = coherent_state(-alpha, dim, tail_tol);
    // Same-magnitude amplitudes cancel exactly, so the wrong-parity Fock
    // amplitudes come out identically zero.
    Vec v = (parity == CatParity::Even) ? Vec(plus.amps + minus.amps)
                                        : Vec(plus.amps - minus.amps);
    return Ket::normalized(SpaceLayout::single(dim), std::move(v));
}

Ket tensor(const Ket& u, const Ket& v) {
    std::vector<int> dims = u.layout.dims;
    dims.insert(dims.end(), v.layout.dims.begin(), v.layout.dims.end());
    Vec out(u.amps.size() * v.amps.size());
    for (int i = 0; i < u.amps.size(); ++i)
        out.segment(i * v.amps.size(), v.amps.size()) = u.amps(i) * v.amps;
    return Ket(SpaceLayout(std::move(dims)), std::move(out));
}

Ket tensor(const Ket& u, const Ket& v, const Ket& w) { return tensor(tensor(u, v), w); }

LinOp tensor(const LinOp& a, const LinOp& b) {
    std::vector<int> dims = a.layout.dims;
    dims.insert(dims.end(), b.layout.dims.begin(), b.layout.dims.end());
    int ra = int(a.mat.rows()), rb = int(b.mat.rows());
    Mat out(ra * rb, ra * rb);
    for (int i = 0; i < ra; ++i)
        for (int j = 0; j < ra; ++j)
            out.block(i * rb, j * rb, rb, rb) = a.mat(i, j) * b.mat;
    return LinOp(SpaceLayout(std::move(dims)), std::move(out),
                 a.hermitian_hint && b.hermitian_hint);
}

LinOp embed(const LinOp& op, int slot, const SpaceLayout& layout) {
    if (slot < 0 || slot >= layout.factors())
        throw LayoutError("embed slot " + std::to_string(slot) + " out of range for layout " +
                          layout.str());
    if (op.layout.factors() != 1 || op.layout.dims[0] != layout.dims[slot])
        throw LayoutError("embed: operator dim " + op.layout.str() +
                          " does not match factor " + std::to_string(slot) + " of " + layout.str());
    LinOp acc = (slot == 0) ? op : identity_op(layout.dims[0]);
    for (int f = 1; f < layout.factors(); ++f)
        acc = tensor(acc, f == slot ? op : identity_op(layout.dims[f]));
    return acc;
}

DensityOp partial_trace(const DensityOp& rho, const std::vector<int>& keep) {
    if (keep.empty()) throw ConditionError("partial_trace: keep set must be nonempty");
    const auto& dims = rho.layout.dims;
    int f = rho.layout.factors();
    std::vector<bool> kept(f, false);
    for (int s : keep) {
        if (s < 0 || s >= f) throw LayoutError("partial_trace: slot " + std::to_string(s) + " out of range");
        if (kept[s]) throw ConditionError("partial_trace: duplicate slot in keep set");
        kept[s] = true;
    }
    for (size_t i = 1; i < keep.size(); ++i)
        if (keep[i] < keep[i - 1]) throw ConditionError("partial_trace: keep slots must be ascending");

    std::vector<int> kdims, tdims, kslots, tslots;
    for (int s = 0; s < f; ++s)
        (kept[s] ? kdims : tdims).push_back(dims[s]), (kept[s] ? kslots : tslots).push_back(s);

    // strides of each factor in the full index
    std::vector<long> stride(f, 1);
    for (int s = f - 2; s >= 0; --s) stride[s] = stride[s + 1] * dims[s + 1];

    auto full_index = [&](const std::vector<int>& kidx, const std::vector<int>& tidx) {
        long idx = 0;
        for (size_t i = 0; i < kslots.size(); ++i) idx += kidx[i] * stride[kslots[i]];
        for (size_t i = 0; i < tslots.size(); ++i) idx += tidx[i] * stride[tslots[i]];
        return idx;
    };

    auto advance = [](std::vector<int>& idx, const std::vector<int>& d) {
        for (int i = int(idx.size()) - 1; i >= 0; --i) {
            if (++idx[i] < d[i]) return true;
            idx[i] = 0;
        }
        return false;
    };

    SpaceLayout rlayout{kdims};
    int rdim = rlayout.total();
    Mat out = Mat::Zero(rdim, rdim);

    std::vector<int> ki(kdims.size(), 0), kj(kdims.size(), 0);
    int ri = 0;
    do {
        int rj = 0;
        std::fill(kj.begin(), kj.end(), 0);
        do {
            Cx sum = 0.0;
            std::vector<int> ti(tdims.size(), 0);
            if (tdims.empty()) {
                sum = rho.mat(full_index(ki, {}), full_index(kj, {}));
            } else {
                do {
                    sum += rho.mat(full_index(ki, ti), full_index(kj, ti));
                } while (advance(ti, tdims));
            }
            out(ri, rj) = sum;
            ++rj;
        } while (advance(kj, kdims));
        ++ri;
    } while (advance(ki, kdims));

    return DensityOp(rlayout, std::move(out));
}

}  // namespace fsim
