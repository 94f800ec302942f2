#pragma once

#include <complex>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "fsim/errors.hpp"

namespace fsim {

using Cx = std::complex<double>;
using Vec = Eigen::VectorXcd;
using Mat = Eigen::MatrixXcd;

// Qutrit levels. Ordering g < a < e is fixed: g and e encode the control
// qubit, a is the mediator (decay paths e->a, e->g, a->g).
enum class Level : int { g = 0, a = 1, e = 2 };

Level level_from_string(const std::string& s);
std::string level_label(Level l);

// Ordered list of tensor factors. Protocol spaces use the convention
// [qutrit(3), mode1(d1), mode2(d2)], first factor most significant:
// index = (q*d1 + n1)*d2 + n2.
struct SpaceLayout {
    std::vector<int> dims;

    explicit SpaceLayout(std::vector<int> d);
    static SpaceLayout qutrit_with_modes(int d1, int d2);
    static SpaceLayout single(int dim);

    int total() const;
    int factors() const { return static_cast<int>(dims.size()); }
    bool operator==(const SpaceLayout& o) const { return dims == o.dims; }
    bool operator!=(const SpaceLayout& o) const { return !(*this == o); }
    std::string str() const;
};

// Dense linear operator on a layout. hermitian_hint is bookkeeping only.
struct LinOp {
    SpaceLayout layout;
    Mat mat;
    bool hermitian_hint = false;

    LinOp(SpaceLayout l, Mat m, bool hermitian = false);

    LinOp adjoint() const;
    bool is_hermitian(double tol = 1e-12) const;
};

LinOp operator*(const LinOp& a, const LinOp& b);
LinOp operator*(Cx s, const LinOp& a);
LinOp operator+(const LinOp& a, const LinOp& b);
LinOp operator-(const LinOp& a, const LinOp& b);

// Pure state; constructors enforce unit norm to 1e-10. Unnormalized
// intermediates live in plain Eigen vectors until explicitly wrapped.
struct Ket {
    SpaceLayout layout;
    Vec amps;

    Ket(SpaceLayout l, Vec a);
    // Normalizes a (throwing on the zero vector), then wraps.
    static Ket normalized(SpaceLayout l, Vec a);
    // Skips the norm check; for integrator output whose drift is audited
    // separately (renormalization is forbidden there).
    static Ket unchecked(SpaceLayout l, Vec a);

    double norm() const { return amps.norm(); }

private:
    struct BypassCheck {};
    Ket(SpaceLayout l, Vec a, BypassCheck);
};

Cx inner(const Ket& u, const Ket& v);

struct DensityOp {
    SpaceLayout layout;
    Mat mat;

    DensityOp(SpaceLayout l, Mat m);
    static DensityOp pure(const Ket& psi);

    double trace_real() const { return mat.trace().real(); }
    double min_eigenvalue() const;
    double hermiticity_error() const;
    // Hermitian to herm_tol, unit trace to trace_tol, min eigenvalue >= -eig_tol.
    void validate(double herm_tol = 1e-10, double trace_tol = 1e-8,
                  double eig_tol = 1e-8) const;
};

// --- single-factor operators -------------------------------------------------

LinOp annihilation(int dim);   // <n-1|a|n> = sqrt(n)
LinOp creation(int dim);
LinOp number_operator(int dim);
LinOp identity_op(int dim);
LinOp transition_operator(Level from, Level to);  // |to><from| on the qutrit
LinOp level_projector(Level j);                   // |j><j|

// --- states ------------------------------------------------------------------

Ket fock_state(int n, int dim);
// Truncated coherent state, renormalized; throws TruncationError (naming the
// required dim) when the Poisson tail beyond the cutoff exceeds tail_tol.
Ket coherent_state(Cx alpha, int dim, double tail_tol = 1e-6);

enum class CatParity { Even, Odd };
CatParity cat_parity_from_string(const std::string& s);

// N(|alpha> +- |-alpha>); even cats have exactly zero odd-Fock amplitudes and
// vice versa. alpha > 0 required for odd parity.
Ket cat_state(double alpha, CatParity parity, int dim, double tail_tol = 1e-6);

// --- composition -------------------------------------------------------------

Ket tensor(const Ket& u, const Ket& v);
Ket tensor(const Ket& u, const Ket& v, const Ket& w);
LinOp tensor(const LinOp& a, const LinOp& b);

// identity x ... x op x ... x identity at the given factor slot
LinOp embed(const LinOp& op, int slot, const SpaceLayout& layout);

// Trace out every factor not listed in keep (keep indices in ascending order
// of the original layout; the reduced layout preserves that order).
DensityOp partial_trace(const DensityOp& rho, const std::vector<int>& keep);

// --- truncation bookkeeping ---------------------------------------------------

// Poisson tail sum_{n>=dim} e^{-|a|^2} |a|^(2n) / n!
double coherent_tail(double alpha_abs2, int dim);
int required_coherent_dim(double alpha_abs2, double tol);

}  // namespace fsim
