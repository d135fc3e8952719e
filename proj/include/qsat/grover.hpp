#pragma once

#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "qsat/circuit.hpp"
#include "qsat/formula.hpp"
#include "qsat/layout.hpp"

namespace qsat {

enum class KickbackMode { FlagMinusMcx, FlagOneMcz };
enum class MeasureSet { Variables, Flag };

std::string_view kickback_name(KickbackMode mode);
KickbackMode kickback_from_name(std::string_view name);

struct GroverPlan {
    Formula formula;
    RegisterLayout layout;
    int iterations = 1;
    KickbackMode mode = KickbackMode::FlagMinusMcx;
    MeasureSet measure = MeasureSet::Variables;
    std::uint64_t shots = 8192;
    std::uint64_t seed = 0;
};

/// Validates the formula and builds its layout. iterations must be >= 1 when measuring variables.
GroverPlan make_plan(const Formula &f, int iterations = 1, KickbackMode mode = KickbackMode::FlagMinusMcx,
                     MeasureSet measure = MeasureSet::Variables);

/// Pair id carried by the oracle's clause chain (compound clauses use 1..#clauses).
std::uint32_t oracle_pair_id(const Formula &f);

/// H on every variable qubit; flag X then H (|->) or X only (|1>).
Circuit build_initialization(const RegisterLayout &layout, KickbackMode mode = KickbackMode::FlagMinusMcx);

/// Every clause in order. Gates are offered idle qubits as helpers; the flag is offered
/// in `flag_state`.
Circuit build_clause_chain(const Formula &f, const RegisterLayout &layout, HelperState flag_state);

/// Clause chain, phase kickback onto the flag, then the exact inverse of the chain.
/// The chain is tagged as a compute block and its inverse as the matching uncompute block.
Circuit build_oracle(const Formula &f, const RegisterLayout &layout, KickbackMode mode = KickbackMode::FlagMinusMcx);

/// 2|psi><psi| - I on the given qubits (up to global phase).
Circuit build_diffusion(int width, std::span<const int> variable_qubits, std::span<const Helper> helpers = {});

/// Initialization followed by `iterations` rounds of oracle + diffusion. Pair ids of
/// round r are offset by r * 1000 so rounds never share a pair.
Circuit build_grover_circuit(const GroverPlan &plan);

/// Initialization without flag prep, clause chain, MCX(sat -> flag), chain undone. P(flag = 1) = M/N.
Circuit build_satcheck_circuit(const Formula &f, const RegisterLayout &layout);

/// Variable qubits (first variable first) or {flag}.
std::vector<int> measured_qubits(const GroverPlan &plan);

nlohmann::json to_json(const GroverPlan &plan);
GroverPlan plan_from_json(const nlohmann::json &j);

}  // namespace qsat
