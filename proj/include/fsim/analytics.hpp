#pragma once

#include <optional>
#include <vector>

#include "fsim/hilbert.hpp"

namespace fsim {

// F = sqrt(<psi_id| rho |psi_id>), clamped at tiny negative round-off.
double state_fidelity(const Ket& psi_id, const DensityOp& rho);

// F = |<phi|psi>|
double overlap_fidelity(const Ket& psi, const Ket& phi);

// Pure bipartite concurrence C = sqrt(2 [1 - Tr(rho_r^2)]); psi must live on a
// two-factor layout.
double concurrence_oracle(const Ket& psi);

enum class Branch { Plus, Minus };
Branch branch_from_string(const std::string& s);
std::string branch_label(Branch b);

// The printed closed-form concurrence
//   C = sqrt(2 - 1/2 { |g|^4 + |e|^4 + 2[2|g|^2|e|^2 +- (g e* + g* e)] F^2
//                      + (g^2 e*^2 + g*^2 e^2) F^4 })
// evaluated verbatim. It disagrees with the partial-trace oracle away from a
// few anchor points; see concurrence_divergence_table. A negative radicand is
// flagged and the value clamped to 0.
struct ClosedFormConcurrence {
    double value;
    double radicand;
    bool negative_radicand;
};

ClosedFormConcurrence concurrence_closed_form(Cx gamma, Cx eta, double F, Branch branch);

// Oracle value for the normalized branch state gamma|phi>|psi> +- eta|psi>|phi>
// with a real overlap <phi|psi> = F, built on minimal two-level factors.
double concurrence_from_overlap(Cx gamma, Cx eta, double F, Branch branch);

struct DivergenceRow {
    double F;
    double oracle;
    double closed_form;
    double abs_diff;
};

// Machine-readable comparison of the printed formula vs the oracle on a grid
// of overlaps. Disagreements are reported, never reconciled.
std::vector<DivergenceRow> concurrence_divergence_table(Cx gamma, Cx eta, Branch branch,
                                                        const std::vector<double>& F_grid);

// Population on the mediator level |a> plus the per-mode population sitting at
// the top Fock level n = d-1 (finite-cutoff health check). Layout must be
// [qutrit, mode1, mode2].
struct LeakReport {
    double leak_a;
    std::vector<double> top_fock;  // one entry per mode factor
};

LeakReport leakage_and_truncation(const DensityOp& rho);
LeakReport leakage_and_truncation(const Ket& psi);

}  // namespace fsim
