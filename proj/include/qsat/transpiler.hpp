#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "qsat/circuit.hpp"

namespace qsat {

enum class Basis {
    U3_CX,         // u3 + cx
    DEVICE_1Q_CX,  // rz, sx, x + cx
};

std::string_view basis_name(Basis b);
Basis basis_from_name(std::string_view name);

/// C^kX on `controls` -> `target` as IR gates (U3, CX, CCX, RCCX, RC3X, plus H/X to
/// conjugate helpers). Each helper load and its mirror carry their own pair id.
///
/// phase_exact = true: equals C^kX up to global phase. With two or more controls and
/// at least one helper the controls are split: relative-phase gates load partial ANDs
/// into helpers, one exact Toffoli hits the target, and the loads are mirrored.
/// Without helpers the ancilla-free Gray-code network is used (2^(k+1) - 2 CX).
///
/// phase_exact = false: equals C^kX up to a diagonal phase. k = 2 is RCCX, k = 3 is
/// RC3X, larger k needs one helper per extra split (throws std::invalid_argument
/// when the helpers run out).
///
/// Helpers are returned in their original state; Minus/One helpers are conjugated
/// into |0> around their use.
std::vector<Gate> decompose_mct(std::span<const int> controls, int target, std::span<const Helper> helpers,
                                bool phase_exact);

/// Exact C^kX as a V-chain: k - 2 helpers hold running ANDs of the controls, one Toffoli
/// hits the target, then the chain is mirrored. Not used by optimize(), which prefers the
/// three-control split above. Throws std::invalid_argument with fewer than k - 2 helpers.
std::vector<Gate> decompose_mct_vchain(std::span<const int> controls, int target, std::span<const Helper> helpers);

/// Only basis gates remain. Multi-controlled gates use the ancilla-free exact network.
Circuit unroll_to_basis(const Circuit &c, Basis basis = Basis::U3_CX);

/// Cancels adjacent inverse pairs (CX.CX, X.X, H.H and any single-qubit pair whose
/// product is the identity) and merges runs of single-qubit gates into one U3.
/// Input must be in the U3_CX basis. Runs to a fixpoint.
Circuit simplify(const Circuit &c);

/// Throws InvariantError unless every tagged pair is well formed: compute gates all
/// precede uncompute gates, the uncompute block is the exact inverse of the compute
/// block, and no gate between them changes a qubit the compute block acts on
/// (diagonal gates are allowed). Helper annotations are not part of a block's support.
void check_pairs(const Circuit &c);

/// Throws InvariantError if a relative-phase gate lies outside a well-formed pair.
void lint_relative_phase(const Circuit &c);

/// Barriers stripped, pairs checked, MCX in compute blocks swapped for relative-phase
/// forms (uncompute blocks rebuilt as their exact inverse), remaining MCX decomposed
/// with their helpers, then unrolled and simplified.
Circuit optimize(const Circuit &c, Basis basis = Basis::U3_CX);

/// Unroll + simplify with no pair-based substitution or helper use.
Circuit baseline(const Circuit &c, Basis basis = Basis::U3_CX);

struct CostReport {
    std::uint64_t n_u3 = 0;
    std::uint64_t n_cx = 0;
    std::uint64_t cost = 0;  // n_u3 + 10 n_cx
    std::uint64_t depth = 0;
    int width = 0;
};

/// Requires a U3_CX circuit (barriers ignored).
CostReport cost_report(const Circuit &c);

nlohmann::ordered_json to_json(const CostReport &r);

/// 1 - optimized.cost / base.cost.
double cost_reduction(const CostReport &base, const CostReport &optimized);

}  // namespace qsat
