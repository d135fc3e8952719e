#include "qsat/layout.hpp"

#include <algorithm>

namespace qsat {

std::vector<int> RegisterLayout::variable_qubits() const {
    std::vector<int> out;
    for (const auto &reg : variables) out.insert(out.end(), reg.begin(), reg.end());
    return out;
}

std::vector<int> RegisterLayout::work_qubits() const {
    std::vector<int> out = number;
    out.insert(out.end(), ancilla.begin(), ancilla.end());
    out.insert(out.end(), sat.begin(), sat.end());
    out.insert(out.end(), scratch.begin(), scratch.end());
    return out;
}

std::string RegisterLayout::qubit_label(int q) const {
    auto find_in = [q](const std::vector<int> &reg) -> int {
        auto it = std::find(reg.begin(), reg.end(), q);
        return it == reg.end() ? -1 : static_cast<int>(it - reg.begin());
    };
    for (std::size_t v = 0; v < variables.size(); ++v) {
        if (int i = find_in(variables[v]); i >= 0) return "v" + std::to_string(v) + "[" + std::to_string(i) + "]";
    }
    if (int i = find_in(number); i >= 0) return "num[" + std::to_string(i) + "]";
    if (int i = find_in(ancilla); i >= 0) return "anc[" + std::to_string(i) + "]";
    if (int i = find_in(sat); i >= 0) return "sat[" + std::to_string(i) + "]";
    if (int i = find_in(scratch); i >= 0) return "scr[" + std::to_string(i) + "]";
    if (q == flag) return "flag";
    return "q[" + std::to_string(q) + "]";
}

bool needs_scratch(const Clause &c, int bits) {
    if (c.op != CmpOp::LE && c.op != CmpOp::GE) return false;
    if (c.rhs_is_variable()) return true;
    auto max = static_cast<std::int64_t>((std::uint64_t{1} << bits) - 1);
    return (c.op == CmpOp::LE && c.rhs_constant() >= max) || (c.op == CmpOp::GE && c.rhs_constant() <= 0);
}

RegisterLayout build_layout(const Formula &f) {
    validate(f);
    RegisterLayout layout;
    layout.bits = f.bits;
    int next = 0;
    auto take = [&next](int count) {
        std::vector<int> reg(static_cast<std::size_t>(count));
        for (auto &q : reg) q = next++;
        return reg;
    };
    for (std::size_t v = 0; v < f.variables.size(); ++v) {
        layout.variables.push_back(take(f.bits));
    }
    layout.number = take(f.bits);
    layout.ancilla = take(f.bits);
    layout.sat = take(static_cast<int>(f.clauses.size()));
    bool scratch = std::any_of(f.clauses.begin(), f.clauses.end(),
                               [&f](const Clause &c) { return needs_scratch(c, f.bits); });
    if (scratch) layout.scratch = take(2);
    layout.flag = next++;
    layout.width = next;
    return layout;
}

}  // namespace qsat
