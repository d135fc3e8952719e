#include <functional>
#include <numeric>

#include <gtest/gtest.h>

#include "qsat/bruteforce.hpp"
#include "qsat/comparators.hpp"
#include "qsat/errors.hpp"
#include "qsat/layout.hpp"
#include "reference.hpp"

using namespace qsat;
using qsat::testing::compact;
using qsat::testing::read_register;

namespace {

std::vector<int> range(int from, int count) {
    std::vector<int> v(count);
    std::iota(v.begin(), v.end(), from);
    return v;
}

// Single-qubit X conjugations on an operand are allowed; the probe checks they are undone.
bool targets_any(const Circuit &c, const std::vector<int> &qubits) {
    for (const auto &g : c.gates()) {
        if (g.qubits.size() == 1) continue;
        if (std::find(qubits.begin(), qubits.end(), g.target()) != qubits.end()) return true;
    }
    return false;
}

// Runs `c` on the uniform superposition of `inputs` (all other qubits |0>) and checks that
// every branch ends with sat = predicate(a, b), the inputs untouched (no phase either) and
// every qubit in `clean` back at |0>.
void probe(const Circuit &c, const std::vector<int> &a, const std::vector<int> &b, int sat,
           const std::vector<int> &clean, const std::function<bool(std::uint64_t, std::uint64_t)> &predicate,
           const std::string &label) {
    std::vector<int> keep = a;
    keep.insert(keep.end(), b.begin(), b.end());
    keep.insert(keep.end(), clean.begin(), clean.end());
    keep.push_back(sat);
    const auto small = compact(c, keep);
    auto local = [&](const std::vector<int> &reg) {
        std::vector<int> out;
        for (int q : reg) out.push_back(small.local(q));
        return out;
    };
    const auto la = local(a), lb = local(b), lclean = local(clean);
    std::vector<int> inputs = la;
    inputs.insert(inputs.end(), lb.begin(), lb.end());
    StateVector s = qsat::testing::superposition(small.circuit.width(), inputs);
    s.apply(small.circuit);

    const double amp = 1.0 / std::sqrt(static_cast<double>(std::uint64_t{1} << inputs.size()));
    std::uint64_t branches = 0;
    const std::uint64_t clean_mask = mask_of(lclean);
    const int lsat = small.local(sat);
    for (std::uint64_t i = 0; i < s.dim(); ++i) {
        if (std::abs(s[i]) < 1e-9) continue;
        ++branches;
        const auto va = read_register(i, la), vb = read_register(i, lb);
        ASSERT_NEAR(std::abs(s[i] - amp), 0.0, 1e-9) << label << " phase at a=" << va << " b=" << vb;
        ASSERT_EQ((i & clean_mask), 0u) << label << " dirty work qubits at a=" << va << " b=" << vb;
        ASSERT_EQ(((i >> lsat) & 1u) != 0, predicate(va, vb)) << label << " a=" << va << " b=" << vb;
    }
    EXPECT_EQ(branches, std::uint64_t{1} << inputs.size()) << label;
}

}  // namespace

TEST(Comparators, RawTruthTables) {
    for (int n = 1; n <= 4; ++n) {
        const auto a = range(0, n), b = range(n, n), anc = range(2 * n, n), scr = range(3 * n + 1, 2);
        const int sat = 3 * n;
        const int w = 3 * n + 3;
        probe(cmp_less(w, a, b, anc, sat), a, b, sat, anc, std::less<>(), "lt");
        probe(cmp_equal(w, a, b, anc, sat), a, b, sat, anc, std::equal_to<>(), "eq");
        probe(cmp_not_equal(w, a, b, anc, sat), a, b, sat, anc, std::not_equal_to<>(), "ne");
        std::vector<int> work = anc;
        work.insert(work.end(), scr.begin(), scr.end());
        probe(cmp_compound(w, CmpOp::GT, a, b, anc, scr, sat), a, b, sat, work, std::greater<>(), "gt");
        probe(cmp_compound(w, CmpOp::LE, a, b, anc, scr, sat), a, b, sat, work, std::less_equal<>(), "le");
        probe(cmp_compound(w, CmpOp::GE, a, b, anc, scr, sat), a, b, sat, work, std::greater_equal<>(), "ge");
        for (std::uint64_t v = 0; v < (1u << n); ++v) {
            probe(cmp_equal_const(n + 1, a, v, n), a, {}, n, {}, [v](auto x, auto) { return x == v; },
                  "eqc " + std::to_string(v));
        }
    }
}

TEST(Comparators, CompiledClausesAllOperatorsAndConstants) {
    const char *ops[] = {"<", "<=", "=", "!=", ">=", ">"};
    for (int n = 1; n <= 4; ++n) {
        for (const char *op : ops) {
            std::vector<std::string> texts{std::string("(X ") + op + " Y)"};
            for (int k = 0; k < (1 << n); ++k) texts.push_back(std::string("(X ") + op + " " + std::to_string(k) + ")");
            for (const auto &text : texts) {
                const Formula f = parse_formula(text, n);
                const RegisterLayout layout = build_layout(f);
                const Circuit c = compile_clause(f, layout, 0);
                const auto &x = layout.variables[0];
                const std::vector<int> y = layout.variables.size() > 1 ? layout.variables[1] : std::vector<int>{};
                std::vector<int> clean = layout.work_qubits();
                clean.erase(std::find(clean.begin(), clean.end(), layout.sat[0]));
                clean.push_back(layout.flag);
                auto truth = [&](std::uint64_t a, std::uint64_t b) {
                    Assignment v{a};
                    if (!y.empty()) v.push_back(b);
                    return eval_formula(f, v);
                };
                probe(c, x, y, layout.sat[0], clean, truth, text + " n=" + std::to_string(n));
                std::vector<int> operands = x;
                operands.insert(operands.end(), y.begin(), y.end());
                EXPECT_FALSE(targets_any(c, operands)) << text;
            }
        }
    }
}

TEST(Comparators, OperandsOnlyControl) {
    const auto a = range(0, 4), b = range(4, 4), anc = range(8, 4), scr = range(13, 2);
    std::vector<int> ops = a;
    ops.insert(ops.end(), b.begin(), b.end());
    EXPECT_FALSE(targets_any(cmp_less(15, a, b, anc, 12), ops));
    EXPECT_FALSE(targets_any(cmp_equal(15, a, b, anc, 12), ops));
    EXPECT_FALSE(targets_any(cmp_compound(15, CmpOp::LE, a, b, anc, scr, 12), ops));
}

TEST(Comparators, GateBudget) {
    for (int n = 1; n <= 6; ++n) {
        const auto a = range(0, n), b = range(n, n), anc = range(2 * n, n);
        const int sat = 3 * n;
        const Circuit lt = cmp_less(3 * n + 1, a, b, anc, sat);
        std::size_t multi = 0, cx = 0, x = 0;
        std::vector<std::size_t> sizes;
        for (const auto &g : lt.gates()) {
            if (g.kind == GateKind::CX) {
                ++cx;
            } else if (g.kind == GateKind::X) {
                ++x;
            } else {
                ++multi;
                sizes.push_back(g.num_controls());
            }
        }
        // One MCX per bit position with 2, 3, ..., n + 1 controls; the ancilla xor and
        // its inverse take 4n CX; the agreement flips 2(n - 1) X.
        EXPECT_EQ(multi, static_cast<std::size_t>(n));
        EXPECT_EQ(cx, static_cast<std::size_t>(4 * n));
        EXPECT_EQ(x, static_cast<std::size_t>(2 * (n - 1)));
        for (std::size_t i = 0; i < sizes.size(); ++i) EXPECT_EQ(sizes[i], i + 2);

        const Circuit eq = cmp_equal(3 * n + 1, a, b, anc, sat);
        std::size_t on_sat = 0;
        for (const auto &g : eq.gates()) on_sat += g.target() == sat;
        EXPECT_EQ(on_sat, 1u);
    }
}

TEST(Comparators, ConstantEncodingSelfInverse) {
    const auto num = range(2, 4);
    const Circuit e = encode_constant(6, num, 0b1010);
    EXPECT_EQ(e.size(), 2u);
    EXPECT_EQ(e.gates()[0].target(), 3);
    EXPECT_EQ(e.gates()[1].target(), 5);
    EXPECT_THROW(encode_constant(6, num, 16), RangeError);
}

TEST(Comparators, CompoundTagsPairs) {
    const auto a = range(0, 2), b = range(2, 2), anc = range(4, 2), scr = range(7, 2);
    const Circuit c = cmp_compound(9, CmpOp::LE, a, b, anc, scr, 6, 7);
    std::size_t compute = 0, uncompute = 0, untagged = 0;
    for (const auto &g : c.gates()) {
        if (g.role == Role::Compute) {
            ++compute;
            EXPECT_EQ(g.pair, 7u);
        } else if (g.role == Role::Uncompute) {
            ++uncompute;
            EXPECT_EQ(g.pair, 7u);
        } else {
            ++untagged;
            EXPECT_EQ(g.target(), 6);
        }
    }
    EXPECT_EQ(compute, uncompute);
    EXPECT_EQ(untagged, 2u);
}

TEST(Comparators, Validation) {
    const auto a = range(0, 2), b = range(2, 2), anc = range(4, 2);
    EXPECT_THROW(cmp_less(7, a, range(2, 3), anc, 6), std::invalid_argument);
    EXPECT_THROW(cmp_less(7, a, b, range(3, 2), 6), std::invalid_argument);
    EXPECT_THROW(cmp_less(7, a, b, anc, 1), std::invalid_argument);
    EXPECT_THROW(cmp_compound(9, CmpOp::LE, a, b, anc, range(7, 1), 6), std::invalid_argument);
    EXPECT_THROW(cmp_compound(9, CmpOp::EQ, a, b, anc, range(7, 2), 6), std::invalid_argument);
    EXPECT_THROW(cmp_equal_const(3, a, 4, 2), RangeError);
    EXPECT_THROW(cmp_equal_const(3, a, 1, 0), std::invalid_argument);
}

TEST(Comparators, NumberRegisterUse) {
    EXPECT_TRUE(clause_uses_number_register({"X", CmpOp::LT, std::int64_t{3}}, 3));
    EXPECT_TRUE(clause_uses_number_register({"X", CmpOp::GE, std::int64_t{3}}, 3));
    EXPECT_FALSE(clause_uses_number_register({"X", CmpOp::EQ, std::int64_t{3}}, 3));
    EXPECT_FALSE(clause_uses_number_register({"X", CmpOp::NE, std::int64_t{3}}, 3));
    EXPECT_FALSE(clause_uses_number_register({"X", CmpOp::LT, std::string("Y")}, 3));
}

TEST(Layout, Widths) {
    EXPECT_EQ(build_layout(parse_formula("(X < 5) & (Y = 6)", 3)).width, 15);
    EXPECT_EQ(build_layout(parse_formula("(X < 5) & (Y = 6) & (X > Y)", 3)).width, 16);
    EXPECT_EQ(build_layout(parse_formula("(X < 5) & (Y = 6)", 4)).width, 19);
    EXPECT_EQ(build_layout(parse_formula("(X < 8) & (Y = 4) & (X > Y)", 4)).width, 20);
    EXPECT_EQ(build_layout(parse_formula("(X <= Y)", 3)).width, 16);
}

TEST(Layout, Order) {
    const RegisterLayout l = build_layout(parse_formula("(X <= Y) & (Y = 1)", 2));
    EXPECT_EQ(l.variables, (std::vector<std::vector<int>>{{0, 1}, {2, 3}}));
    EXPECT_EQ(l.number, (std::vector<int>{4, 5}));
    EXPECT_EQ(l.ancilla, (std::vector<int>{6, 7}));
    EXPECT_EQ(l.sat, (std::vector<int>{8, 9}));
    EXPECT_EQ(l.scratch, (std::vector<int>{10, 11}));
    EXPECT_EQ(l.flag, 12);
    EXPECT_EQ(l.width, 13);
    EXPECT_EQ(l.qubit_label(5), "num[1]");
    EXPECT_EQ(l.qubit_label(12), "flag");
}

TEST(Layout, ScratchOnlyWhenNeeded) {
    EXPECT_FALSE(needs_scratch({"X", CmpOp::LE, std::int64_t{3}}, 3));
    EXPECT_TRUE(needs_scratch({"X", CmpOp::LE, std::int64_t{7}}, 3));
    EXPECT_TRUE(needs_scratch({"X", CmpOp::GE, std::int64_t{0}}, 3));
    EXPECT_TRUE(needs_scratch({"X", CmpOp::GE, std::string("Y")}, 3));
    EXPECT_FALSE(needs_scratch({"X", CmpOp::GT, std::string("Y")}, 3));
}
