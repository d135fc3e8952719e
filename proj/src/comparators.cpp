#include "qsat/comparators.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

#include "qsat/errors.hpp"

namespace qsat {

namespace {

bool contains(std::span<const int> reg, int q) {
    return std::find(reg.begin(), reg.end(), q) != reg.end();
}

bool disjoint(std::span<const int> x, std::span<const int> y) {
    return std::none_of(x.begin(), x.end(), [&](int q) { return contains(y, q); });
}

bool same_register(std::span<const int> x, std::span<const int> y) {
    return std::equal(x.begin(), x.end(), y.begin(), y.end());
}

void check_distinct(std::span<const int> reg, const char *name) {
    for (std::size_t i = 0; i < reg.size(); ++i) {
        for (std::size_t j = 0; j < i; ++j) {
            if (reg[i] == reg[j]) {
                throw std::invalid_argument(std::string(name) + " register repeats qubit " + std::to_string(reg[i]));
            }
        }
    }
}

// Operands may be the same register (X op X); any other overlap is an error.
void check_operands(std::span<const int> a, std::span<const int> b, std::span<const int> ancilla, int sat) {
    if (a.size() != b.size() || a.size() != ancilla.size()) {
        throw std::invalid_argument("comparator registers must share one width (got " + std::to_string(a.size()) +
                                    ", " + std::to_string(b.size()) + ", " + std::to_string(ancilla.size()) + ")");
    }
    if (a.empty()) {
        throw std::invalid_argument("comparator registers are empty");
    }
    check_distinct(a, "first operand");
    check_distinct(b, "second operand");
    check_distinct(ancilla, "ancilla");
    if (!same_register(a, b) && !disjoint(a, b)) {
        throw std::invalid_argument("operand registers partially overlap");
    }
    if (!disjoint(a, ancilla) || !disjoint(b, ancilla)) {
        throw std::invalid_argument("ancilla register overlaps an operand");
    }
    if (contains(a, sat) || contains(b, sat) || contains(ancilla, sat)) {
        throw std::invalid_argument("satisfiability qubit overlaps a register");
    }
}

void check_value(std::uint64_t value, std::size_t bits) {
    if (bits < 64 && value >> bits) {
        throw RangeError("constant " + std::to_string(value) + " does not fit in " + std::to_string(bits) + " bits");
    }
}

}  // namespace

Circuit encode_constant(int width, std::span<const int> number, std::uint64_t value) {
    check_value(value, number.size());
    Circuit c(width);
    for (std::size_t i = 0; i < number.size(); ++i) {
        if ((value >> i) & 1u) c.x(number[i]);
    }
    return c;
}

Circuit cmp_less(int width, std::span<const int> a, std::span<const int> b, std::span<const int> ancilla, int sat) {
    check_operands(a, b, ancilla, sat);
    const int n = static_cast<int>(a.size());
    Circuit compute(width);  // ancilla-only operations, mirrored afterwards
    Circuit out(width);
    for (int i = n - 1; i >= 0; --i) {
        Circuit step(width);
        step.cx(a[i], ancilla[i]);
        step.cx(b[i], ancilla[i]);
        out.append(step);
        compute.append(step);

        std::vector<int> controls;
        for (int j = n - 1; j > i; --j) controls.push_back(ancilla[j]);
        controls.push_back(ancilla[i]);
        controls.push_back(b[i]);
        out.mcx(controls, sat);

        if (i > 0) {
            out.x(ancilla[i]);
            compute.x(ancilla[i]);
        }
    }
    out.append(inverse(compute));
    return out;
}

Circuit cmp_equal(int width, std::span<const int> a, std::span<const int> b, std::span<const int> ancilla, int sat) {
    check_operands(a, b, ancilla, sat);
    Circuit compute(width);
    for (std::size_t i = 0; i < a.size(); ++i) {
        compute.cx(a[i], ancilla[i]);
        compute.cx(b[i], ancilla[i]);
    }
    for (int q : ancilla) compute.x(q);
    Circuit out = compute;
    out.mcx(ancilla, sat);
    out.append(inverse(compute));
    return out;
}

Circuit cmp_not_equal(int width, std::span<const int> a, std::span<const int> b, std::span<const int> ancilla,
                      int sat) {
    Circuit out = cmp_equal(width, a, b, ancilla, sat);
    out.x(sat);
    return out;
}

Circuit cmp_equal_const(int width, std::span<const int> reg, std::uint64_t value, int sat) {
    check_distinct(reg, "operand");
    if (reg.empty()) throw std::invalid_argument("comparator register is empty");
    if (contains(reg, sat)) throw std::invalid_argument("satisfiability qubit overlaps the operand");
    check_value(value, reg.size());
    Circuit flips(width);
    for (std::size_t i = 0; i < reg.size(); ++i) {
        if (!((value >> i) & 1u)) flips.x(reg[i]);
    }
    Circuit out = flips;
    out.mcx(reg, sat);
    out.append(flips);
    return out;
}

Circuit cmp_compound(int width, CmpOp op, std::span<const int> a, std::span<const int> b,
                     std::span<const int> ancilla, std::span<const int> scratch, int sat, std::uint32_t pair) {
    switch (op) {
        case CmpOp::GT:
            return cmp_less(width, b, a, ancilla, sat);
        case CmpOp::GE:
            return cmp_compound(width, CmpOp::LE, b, a, ancilla, scratch, sat, pair);
        case CmpOp::LE:
            break;
        default:
            throw std::invalid_argument("cmp_compound handles only >, <=, >=");
    }
    if (scratch.size() < 2) {
        throw std::invalid_argument("<= and >= need two scratch qubits");
    }
    const int lt = scratch[0];
    const int eq = scratch[1];
    if (lt == eq || lt == sat || eq == sat) {
        throw std::invalid_argument("scratch qubits must be distinct from each other and from sat");
    }
    for (int s : {lt, eq}) {
        if (contains(a, s) || contains(b, s) || contains(ancilla, s)) {
            throw std::invalid_argument("scratch qubit overlaps a register");
        }
    }
    // The De Morgan inversions belong to the compute block, so only sat is touched in between.
    Circuit compute = cmp_less(width, a, b, ancilla, lt);
    compute.append(cmp_equal(width, a, b, ancilla, eq));
    compute.x(lt);
    compute.x(eq);
    compute.tag(pair, Role::Compute);

    Circuit out = compute;
    out.mcx({lt, eq}, sat);
    out.x(sat);
    Circuit uncompute = inverse(compute);
    uncompute.tag(pair, Role::Uncompute);
    out.append(uncompute);
    return out;
}

bool clause_uses_number_register(const Clause &c, int) {
    if (c.rhs_is_variable()) return false;
    return c.op != CmpOp::EQ && c.op != CmpOp::NE;
}

Circuit compile_clause(const Formula &f, const RegisterLayout &layout, std::size_t clause_index,
                       std::span<const Helper> spare) {
    if (clause_index >= f.clauses.size() || clause_index >= layout.sat.size()) {
        throw std::invalid_argument("clause index out of range for formula/layout");
    }
    const Clause &c = f.clauses[clause_index];
    const int w = layout.width;
    const int sat = layout.sat[clause_index];
    const auto &lhs = layout.variables.at(f.variable_index(c.lhs));
    const auto &num = layout.number;
    const auto &anc = layout.ancilla;
    const auto max = static_cast<std::int64_t>(f.max_value());
    const auto pair = static_cast<std::uint32_t>(clause_index + 1);

    Circuit out(w);
    if (c.rhs_is_variable()) {
        const auto &rhs = layout.variables.at(f.variable_index(c.rhs_variable()));
        switch (c.op) {
            case CmpOp::LT:
                out = cmp_less(w, lhs, rhs, anc, sat);
                break;
            case CmpOp::EQ:
                out = cmp_equal(w, lhs, rhs, anc, sat);
                break;
            case CmpOp::NE:
                out = cmp_not_equal(w, lhs, rhs, anc, sat);
                break;
            case CmpOp::GT:
            case CmpOp::LE:
            case CmpOp::GE:
                out = cmp_compound(w, c.op, lhs, rhs, anc, layout.scratch, sat, pair);
                break;
        }
    } else {
        const std::int64_t k = c.rhs_constant();
        if (k < 0 || k > max) {
            throw RangeError("constant " + std::to_string(k) + " outside [0, " + std::to_string(max) + "]");
        }
        auto with_constant = [&](std::uint64_t value, const Circuit &body) {
            Circuit enc = encode_constant(w, num, value);
            Circuit r = enc;
            r.append(body);
            r.append(enc);
            return r;
        };
        switch (c.op) {
            case CmpOp::LT:
                out = with_constant(k, cmp_less(w, lhs, num, anc, sat));
                break;
            case CmpOp::GT:
                out = with_constant(k, cmp_less(w, num, lhs, anc, sat));
                break;
            case CmpOp::LE:
                if (k < max) {
                    out = with_constant(k + 1, cmp_less(w, lhs, num, anc, sat));
                } else {
                    out = with_constant(k, cmp_compound(w, CmpOp::LE, lhs, num, anc, layout.scratch, sat, pair));
                }
                break;
            case CmpOp::GE:
                if (k > 0) {
                    out = with_constant(k - 1, cmp_less(w, num, lhs, anc, sat));
                } else {
                    out = with_constant(k, cmp_compound(w, CmpOp::LE, num, lhs, anc, layout.scratch, sat, pair));
                }
                break;
            case CmpOp::EQ:
                out = cmp_equal_const(w, lhs, k, sat);
                break;
            case CmpOp::NE:
                out = cmp_equal_const(w, lhs, k, sat);
                out.x(sat);
                break;
        }
    }
    out.offer_helpers(spare, 3);
    return out;
}

}  // namespace qsat
