#include "qsat/grover.hpp"

#include <algorithm>
#include <optional>
#include <stdexcept>
#include <string>

#include "qsat/comparators.hpp"

namespace qsat {

namespace {

constexpr std::uint32_t kRoundStride = 1000;

bool needs_ancilla(const Clause &c) {
    return c.rhs_is_variable() || (c.op != CmpOp::EQ && c.op != CmpOp::NE);
}

void add_zero(std::vector<Helper> &out, std::span<const int> qubits) {
    for (int q : qubits) out.push_back({q, HelperState::Zero});
}

void offset_pairs(Circuit &c, std::uint32_t offset) {
    for (auto &g : c.mutable_gates()) {
        if (g.pair) g.pair += offset;
    }
}

}  // namespace

std::string_view kickback_name(KickbackMode mode) {
    return mode == KickbackMode::FlagMinusMcx ? "flag-minus-mcx" : "flag-one-mcz";
}

KickbackMode kickback_from_name(std::string_view name) {
    if (name == "flag-minus-mcx" || name == "mcx") return KickbackMode::FlagMinusMcx;
    if (name == "flag-one-mcz" || name == "mcz") return KickbackMode::FlagOneMcz;
    throw std::invalid_argument("unknown kickback mode '" + std::string(name) + "'");
}

GroverPlan make_plan(const Formula &f, int iterations, KickbackMode mode, MeasureSet measure) {
    if (iterations < 0) {
        throw std::invalid_argument("iterations must be non-negative");
    }
    GroverPlan p;
    p.formula = f;
    p.layout = build_layout(f);
    p.iterations = iterations;
    p.mode = mode;
    p.measure = measure;
    return p;
}

std::uint32_t oracle_pair_id(const Formula &f) {
    return static_cast<std::uint32_t>(f.clauses.size() + 1);
}

Circuit build_initialization(const RegisterLayout &layout, KickbackMode mode) {
    Circuit c(layout.width);
    for (int q : layout.variable_qubits()) c.h(q);
    c.x(layout.flag);
    if (mode == KickbackMode::FlagMinusMcx) c.h(layout.flag);
    return c;
}

namespace {

Circuit clause_chain(const Formula &f, const RegisterLayout &layout, std::optional<HelperState> flag_state) {
    if (layout.sat.size() != f.clauses.size() || layout.bits != f.bits) {
        throw std::invalid_argument("layout does not belong to this formula");
    }
    Circuit chain(layout.width);
    for (std::size_t i = 0; i < f.clauses.size(); ++i) {
        const Clause &c = f.clauses[i];
        std::vector<Helper> spare;
        add_zero(spare, std::span<const int>(layout.sat).subspan(i + 1));
        if (!clause_uses_number_register(c, f.bits)) add_zero(spare, layout.number);
        if (!needs_ancilla(c)) add_zero(spare, layout.ancilla);
        if (!needs_scratch(c, f.bits)) add_zero(spare, layout.scratch);
        if (flag_state) spare.push_back({layout.flag, *flag_state});
        chain.append(compile_clause(f, layout, i, spare));
    }
    return chain;
}

}  // namespace

Circuit build_clause_chain(const Formula &f, const RegisterLayout &layout, HelperState flag_state) {
    return clause_chain(f, layout, flag_state);
}

Circuit build_oracle(const Formula &f, const RegisterLayout &layout, KickbackMode mode) {
    const HelperState flag_state = mode == KickbackMode::FlagMinusMcx ? HelperState::Minus : HelperState::One;
    Circuit chain = build_clause_chain(f, layout, flag_state);
    const std::uint32_t pair = oracle_pair_id(f);
    chain.tag(pair, Role::Compute);

    std::vector<Helper> spare;
    add_zero(spare, layout.number);
    add_zero(spare, layout.ancilla);
    add_zero(spare, layout.scratch);
    Circuit kick(layout.width);
    if (mode == KickbackMode::FlagMinusMcx) {
        kick.mcx(layout.sat, layout.flag);
    } else {
        std::vector<int> qs = layout.sat;
        qs.push_back(layout.flag);
        kick.mcz(qs);
    }
    kick.offer_helpers(spare, 3);

    Circuit out = chain;
    out.append(kick);
    out.append(inverse(chain));
    return out;
}

Circuit build_diffusion(int width, std::span<const int> variable_qubits, std::span<const Helper> helpers) {
    if (variable_qubits.empty()) throw std::invalid_argument("diffusion needs at least one qubit");
    Circuit c(width);
    const int last = variable_qubits.back();
    for (int q : variable_qubits) c.h(q);
    for (int q : variable_qubits) c.x(q);
    if (variable_qubits.size() == 1) {
        c.z(last);
    } else {
        c.h(last);
        c.mcx(variable_qubits.first(variable_qubits.size() - 1), last);
        c.h(last);
    }
    for (int q : variable_qubits) c.x(q);
    for (int q : variable_qubits) c.h(q);
    c.offer_helpers(helpers, 3);
    return c;
}

Circuit build_grover_circuit(const GroverPlan &plan) {
    const auto &layout = plan.layout;
    Circuit c = build_initialization(layout, plan.mode);
    if (plan.iterations == 0) return c;

    Circuit oracle = build_oracle(plan.formula, layout, plan.mode);
    std::vector<Helper> spare;
    add_zero(spare, layout.work_qubits());
    spare.push_back({layout.flag, plan.mode == KickbackMode::FlagMinusMcx ? HelperState::Minus : HelperState::One});
    const auto vars = layout.variable_qubits();
    Circuit diffusion = build_diffusion(layout.width, vars, spare);

    for (int r = 0; r < plan.iterations; ++r) {
        Circuit round = oracle;
        offset_pairs(round, static_cast<std::uint32_t>(r) * kRoundStride);
        c.append(round);
        c.append(diffusion);
    }
    return c;
}

Circuit build_satcheck_circuit(const Formula &f, const RegisterLayout &layout) {
    Circuit c(layout.width);
    for (int q : layout.variable_qubits()) c.h(q);
    // The flag changes between compute and uncompute, so it cannot be lent out.
    Circuit chain = clause_chain(f, layout, std::nullopt);
    chain.tag(oracle_pair_id(f), Role::Compute);
    c.append(chain);
    Circuit kick(layout.width);
    kick.mcx(layout.sat, layout.flag);
    std::vector<Helper> spare;
    add_zero(spare, layout.number);
    add_zero(spare, layout.ancilla);
    add_zero(spare, layout.scratch);
    kick.offer_helpers(spare, 3);
    c.append(kick);
    c.append(inverse(chain));
    return c;
}

std::vector<int> measured_qubits(const GroverPlan &plan) {
    if (plan.measure == MeasureSet::Flag) return {plan.layout.flag};
    return plan.layout.variable_qubits();
}

nlohmann::json to_json(const GroverPlan &plan) {
    return {{"formula", to_json(plan.formula)},
            {"iterations", plan.iterations},
            {"mode", kickback_name(plan.mode)},
            {"measure", plan.measure == MeasureSet::Flag ? "flag" : "variables"},
            {"shots", plan.shots},
            {"seed", plan.seed}};
}

GroverPlan plan_from_json(const nlohmann::json &j) {
    const std::string measure = j.value("measure", "variables");
    if (measure != "variables" && measure != "flag") {
        throw std::invalid_argument("unknown measure set '" + measure + "'");
    }
    GroverPlan p = make_plan(formula_from_json(j.at("formula")), j.value("iterations", 1),
                             kickback_from_name(j.value("mode", "flag-minus-mcx")),
                             measure == "flag" ? MeasureSet::Flag : MeasureSet::Variables);
    p.shots = j.value("shots", std::uint64_t{8192});
    p.seed = j.value("seed", std::uint64_t{0});
    return p;
}

}  // namespace qsat
