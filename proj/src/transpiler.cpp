#include "qsat/transpiler.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <map>
#include <numbers>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>

#include "qsat/errors.hpp"

namespace qsat {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kAngleTol = 1e-12;

Gate phase_gate(int q, double theta) {
    return make_u3(q, 0.0, 0.0, theta);
}

Gate hadamard(int q) {
    return make_u3(q, kPi / 2, 0.0, kPi);
}

Gate cnot(int c, int t) {
    return make_gate(GateKind::CX, {c, t});
}

bool is_relative_phase(const Gate &g) {
    return g.kind == GateKind::RCCX || g.kind == GateKind::RC3X;
}

// Diagonal C^(m-1)Z over all of `qubits` as a phase polynomial: each non-empty subset S
// contributes exp(i pi (-1)^(|S|-1) / 2^(m-1) * parity(S)). Subsets are grouped by their
// highest qubit j and visited in Gray-code order so each step costs one CX into q_j.
void gray_mcz(std::span<const int> qubits, std::vector<Gate> &out) {
    const int m = static_cast<int>(qubits.size());
    if (m > 30) throw ResourceError("multi-controlled gate too large for the exact network");
    const double unit = kPi / std::ldexp(1.0, m - 1);
    out.push_back(phase_gate(qubits[0], unit));
    for (int j = 1; j < m; ++j) {
        const int qj = qubits[j];
        out.push_back(phase_gate(qj, unit));
        std::uint32_t prev = 0;
        const std::uint32_t count = std::uint32_t{1} << j;
        for (std::uint32_t g = 1; g < count; ++g) {
            const std::uint32_t gray = g ^ (g >> 1);
            const int b = std::countr_zero(gray ^ prev);
            out.push_back(cnot(qubits[b], qj));
            const int size = 1 + std::popcount(gray);
            out.push_back(phase_gate(qj, (size % 2 == 1) ? unit : -unit));
            prev = gray;
        }
        out.push_back(cnot(qubits[j - 1], qj));
    }
}

void gray_mcx(std::span<const int> controls, int target, std::vector<Gate> &out) {
    if (controls.empty()) {
        out.push_back(make_u3(target, kPi, 0.0, kPi));
        return;
    }
    if (controls.size() == 1) {
        out.push_back(cnot(controls[0], target));
        return;
    }
    std::vector<int> all(controls.begin(), controls.end());
    all.push_back(target);
    out.push_back(hadamard(target));
    gray_mcz(all, out);
    out.push_back(hadamard(target));
}

void prepare_helper(const Helper &h, std::vector<Gate> &out) {
    if (h.state == HelperState::Minus) out.push_back(make_gate(GateKind::H, {h.qubit}));
    if (h.state != HelperState::Zero) out.push_back(make_gate(GateKind::X, {h.qubit}));
}

void restore_helper(const Helper &h, std::vector<Gate> &out) {
    if (h.state != HelperState::Zero) out.push_back(make_gate(GateKind::X, {h.qubit}));
    if (h.state == HelperState::Minus) out.push_back(make_gate(GateKind::H, {h.qubit}));
}

Gate relative_gate(std::span<const int> controls, int target) {
    std::vector<int> qs(controls.begin(), controls.end());
    qs.push_back(target);
    if (controls.size() == 2) return make_gate(GateKind::RCCX, std::move(qs));
    if (controls.size() == 3) return make_gate(GateKind::RC3X, std::move(qs));
    throw std::logic_error("relative-phase gate needs 2 or 3 controls");
}

// Local pair ids for helper loads emitted outside a tagged block.
constexpr std::uint32_t kLocalPairBase = std::uint32_t{1} << 30;

void emit_with_helper(const Helper &h, Gate load, std::vector<Gate> &body, std::vector<Gate> &out,
                      std::uint32_t &next_pair) {
    load.pair = next_pair++;
    load.role = Role::Compute;
    prepare_helper(h, out);
    out.push_back(load);
    out.insert(out.end(), body.begin(), body.end());
    out.push_back(inverse(load));
    restore_helper(h, out);
}

// Relative-phase C^kX. Returns false when the helpers run out.
bool relative_mcx(std::span<const int> controls, int target, std::span<const Helper> helpers,
                  std::vector<Gate> &out, std::uint32_t &next_pair) {
    const std::size_t k = controls.size();
    if (k <= 1) {
        gray_mcx(controls, target, out);
        return true;
    }
    if (k <= 3) {
        out.push_back(relative_gate(controls, target));
        return true;
    }
    if (helpers.empty()) return false;
    const Helper &h = helpers[0];
    const std::size_t a = k == 4 ? 2 : 3;
    std::vector<int> rest(controls.begin() + static_cast<std::ptrdiff_t>(a), controls.end());
    rest.push_back(h.qubit);
    std::vector<Gate> body;
    if (!relative_mcx(rest, target, helpers.subspan(1), body, next_pair)) return false;
    emit_with_helper(h, relative_gate(controls.first(a), h.qubit), body, out, next_pair);
    return true;
}

void exact_mcx(std::span<const int> controls, int target, std::span<const Helper> helpers, std::vector<Gate> &out,
               std::uint32_t &next_pair) {
    const std::size_t k = controls.size();
    if (k <= 2 || helpers.empty()) {
        if (k == 2) {
            out.push_back(make_gate(GateKind::CCX, {controls[0], controls[1], target}));
        } else {
            gray_mcx(controls, target, out);
        }
        return;
    }
    const Helper &h = helpers[0];
    const std::size_t a = std::min<std::size_t>(3, k - 1);
    std::vector<int> rest(controls.begin() + static_cast<std::ptrdiff_t>(a), controls.end());
    rest.push_back(h.qubit);
    std::vector<Gate> body;
    exact_mcx(rest, target, helpers.subspan(1), body, next_pair);
    emit_with_helper(h, relative_gate(controls.first(a), h.qubit), body, out, next_pair);
}

// V-chain: one helper per control beyond the second, loaded two at a time.
void vchain_mcx(std::span<const int> controls, int target, std::span<const Helper> helpers, std::vector<Gate> &out,
                std::uint32_t &next_pair) {
    const std::size_t k = controls.size();
    if (k <= 2) {
        exact_mcx(controls, target, {}, out, next_pair);
        return;
    }
    if (helpers.empty()) throw std::invalid_argument("v-chain C^" + std::to_string(k) + "X needs more helper qubits");
    const Helper &h = helpers[0];
    std::vector<int> rest{h.qubit};
    rest.insert(rest.end(), controls.begin() + 2, controls.end());
    std::vector<Gate> body;
    vchain_mcx(rest, target, helpers.subspan(1), body, next_pair);
    emit_with_helper(h, relative_gate(controls.first(2), h.qubit), body, out, next_pair);
}

// Exact multi-controlled Z: H-conjugated MCX on the last qubit.
void exact_mcz(std::span<const int> qubits, std::span<const Helper> helpers, std::vector<Gate> &out,
               std::uint32_t &next_pair) {
    const int t = qubits.back();
    out.push_back(make_gate(GateKind::H, {t}));
    exact_mcx(qubits.first(qubits.size() - 1), t, helpers, out, next_pair);
    out.push_back(make_gate(GateKind::H, {t}));
}

void unroll_gate(const Gate &g, std::vector<Gate> &out) {
    switch (g.kind) {
        case GateKind::Barrier:
            return;
        case GateKind::U3:
        case GateKind::CX:
            out.push_back(make_gate(g.kind, g.qubits, g.params));
            return;
        case GateKind::X:
            out.push_back(make_u3(g.qubits[0], kPi, 0.0, kPi));
            return;
        case GateKind::H:
            out.push_back(hadamard(g.qubits[0]));
            return;
        case GateKind::Z:
            out.push_back(phase_gate(g.qubits[0], kPi));
            return;
        case GateKind::RZ:
            out.push_back(phase_gate(g.qubits[0], g.params[0]));
            return;
        case GateKind::SX:
            out.push_back(g.adjoint ? make_u3(g.qubits[0], -kPi / 2, -kPi / 2, kPi / 2)
                                    : make_u3(g.qubits[0], kPi / 2, -kPi / 2, kPi / 2));
            return;
        case GateKind::CZ:
            out.push_back(hadamard(g.qubits[1]));
            out.push_back(cnot(g.qubits[0], g.qubits[1]));
            out.push_back(hadamard(g.qubits[1]));
            return;
        case GateKind::CH:
        case GateKind::RCCX:
        case GateKind::RC3X:
            for (const auto &sub : gate_definition(g)) unroll_gate(sub, out);
            return;
        case GateKind::CCX:
        case GateKind::C3X:
        case GateKind::C4X:
        case GateKind::MCX:
            gray_mcx(g.controls(), g.target(), out);
            return;
        case GateKind::MCZ:
            gray_mcz(g.qubits, out);
            return;
    }
    throw std::invalid_argument("no decomposition for gate '" + std::string(gate_name(g.kind)) + "'");
}

Mat2 mul(const Mat2 &a, const Mat2 &b) {
    return {a[0] * b[0] + a[1] * b[2], a[0] * b[1] + a[1] * b[3], a[2] * b[0] + a[3] * b[2],
            a[2] * b[1] + a[3] * b[3]};
}

double wrap_angle(double a) {
    a = std::remainder(a, 2 * kPi);
    return std::abs(a) < kAngleTol ? 0.0 : a;
}

// U3 parameters of a 2x2 unitary, global phase discarded. nullopt for the identity.
std::optional<std::array<double, 3>> u3_params(const Mat2 &m) {
    const double c = std::abs(m[0]);
    const double s = std::abs(m[2]);
    const double theta = 2 * std::atan2(s, c);
    double phi = 0.0, lambda = 0.0;
    if (c > 1e-9) {
        const cplx norm = std::conj(m[0]) / c;  // removes the phase of m00
        if (s > 1e-9) {
            phi = std::arg(m[2] * norm);
            lambda = std::arg(-m[1] * norm);
        } else {
            lambda = std::arg(m[3] * norm);
        }
    } else {
        const cplx norm = std::conj(m[2]) / s;  // phi = 0
        lambda = std::arg(-m[1] * norm);
    }
    if (std::abs(theta) < 1e-10 && std::abs(wrap_angle(phi + lambda)) < 1e-10) return std::nullopt;
    return std::array<double, 3>{wrap_angle(theta), wrap_angle(phi), wrap_angle(lambda)};
}

void to_device(const Gate &g, std::vector<Gate> &out) {
    if (g.kind != GateKind::U3) {
        out.push_back(g);
        return;
    }
    const int q = g.qubits[0];
    const double theta = g.params[0], phi = g.params[1], lambda = g.params[2];
    if (std::abs(wrap_angle(theta)) < 1e-10) {
        double a = wrap_angle(phi + lambda);
        if (a != 0.0) out.push_back(make_rz(q, a));
        return;
    }
    if (std::abs(std::abs(wrap_angle(theta)) - kPi) < 1e-10 && std::abs(wrap_angle(lambda - phi - kPi)) < 1e-10) {
        out.push_back(make_gate(GateKind::X, {q}));
        return;
    }
    // U3(t, p, l) = RZ(p + pi) SX RZ(t + pi) SX RZ(l) up to global phase.
    auto rz = [&](double a) {
        a = wrap_angle(a);
        if (a != 0.0) out.push_back(make_rz(q, a));
    };
    rz(lambda);
    out.push_back(make_gate(GateKind::SX, {q}));
    rz(theta + kPi);
    out.push_back(make_gate(GateKind::SX, {q}));
    rz(phi + kPi);
}

Circuit from_gates(int width, std::vector<Gate> gates) {
    Circuit c(width);
    c.mutable_gates() = std::move(gates);
    return c;
}

struct PairBlocks {
    std::vector<std::size_t> compute;
    std::vector<std::size_t> uncompute;
};

std::map<std::uint32_t, PairBlocks> collect_pairs(const Circuit &c) {
    std::map<std::uint32_t, PairBlocks> pairs;
    const auto &gates = c.gates();
    for (std::size_t i = 0; i < gates.size(); ++i) {
        const Gate &g = gates[i];
        if (g.role == Role::None) continue;
        if (g.pair == 0) throw InvariantError("gate " + std::to_string(i) + " has a role but no pair id");
        auto &p = pairs[g.pair];
        (g.role == Role::Compute ? p.compute : p.uncompute).push_back(i);
    }
    return pairs;
}

void check_structure(const Circuit &c, bool check_middle) {
    const auto &gates = c.gates();
    for (const auto &[id, p] : collect_pairs(c)) {
        const std::string name = "pair " + std::to_string(id);
        if (p.compute.empty() || p.uncompute.empty()) {
            throw InvariantError(name + " has no " + (p.compute.empty() ? "compute" : "uncompute") + " block");
        }
        if (p.compute.back() - p.compute.front() + 1 != p.compute.size() ||
            p.uncompute.back() - p.uncompute.front() + 1 != p.uncompute.size()) {
            throw InvariantError(name + " is not contiguous");
        }
        if (p.compute.back() > p.uncompute.front()) {
            throw InvariantError(name + " uncomputes before computing");
        }
        if (p.compute.size() != p.uncompute.size()) {
            throw InvariantError(name + " uncompute block is not the inverse of its compute block");
        }
        const std::size_t n = p.compute.size();
        for (std::size_t i = 0; i < n; ++i) {
            const Gate inv = inverse(gates[p.compute[n - 1 - i]]);
            if (!inv.same_operation(gates[p.uncompute[i]])) {
                throw InvariantError(name + " uncompute block is not the inverse of its compute block (gate " +
                                     std::to_string(p.uncompute[i]) + ")");
            }
        }
        if (!check_middle) continue;
        std::set<int> support;
        for (std::size_t i : p.compute) support.insert(gates[i].qubits.begin(), gates[i].qubits.end());
        for (std::size_t i = p.compute.back() + 1; i < p.uncompute.front(); ++i) {
            const Gate &g = gates[i];
            if (g.is_diagonal()) continue;
            if (support.count(g.target())) {
                throw InvariantError(name + ": gate " + std::to_string(i) + " (" + std::string(gate_name(g.kind)) +
                                     ") changes qubit " + std::to_string(g.target()) +
                                     " between compute and uncompute");
            }
        }
    }
}

}  // namespace

std::string_view basis_name(Basis b) {
    return b == Basis::U3_CX ? "u3_cx" : "device";
}

Basis basis_from_name(std::string_view name) {
    if (name == "u3_cx" || name == "u3") return Basis::U3_CX;
    if (name == "device" || name == "rz_sx_x_cx") return Basis::DEVICE_1Q_CX;
    throw std::invalid_argument("unknown basis '" + std::string(name) + "'");
}

std::vector<Gate> decompose_mct(std::span<const int> controls, int target, std::span<const Helper> helpers,
                                bool phase_exact) {
    for (const auto &h : helpers) {
        if (h.qubit == target || std::find(controls.begin(), controls.end(), h.qubit) != controls.end()) {
            throw std::invalid_argument("helper qubit " + std::to_string(h.qubit) + " is an operand of the gate");
        }
    }
    std::vector<Gate> out;
    std::uint32_t next_pair = kLocalPairBase;
    if (phase_exact) {
        exact_mcx(controls, target, helpers, out, next_pair);
    } else if (!relative_mcx(controls, target, helpers, out, next_pair)) {
        throw std::invalid_argument("relative-phase C^" + std::to_string(controls.size()) +
                                    "X needs more helper qubits than were given");
    }
    return out;
}

std::vector<Gate> decompose_mct_vchain(std::span<const int> controls, int target, std::span<const Helper> helpers) {
    for (const auto &h : helpers) {
        if (h.qubit == target || std::find(controls.begin(), controls.end(), h.qubit) != controls.end()) {
            throw std::invalid_argument("helper qubit " + std::to_string(h.qubit) + " is an operand of the gate");
        }
    }
    std::vector<Gate> out;
    std::uint32_t next_pair = kLocalPairBase;
    vchain_mcx(controls, target, helpers, out, next_pair);
    return out;
}

Circuit unroll_to_basis(const Circuit &c, Basis basis) {
    std::vector<Gate> u3cx;
    u3cx.reserve(c.size() * 2);
    for (const auto &g : c.gates()) unroll_gate(g, u3cx);
    if (basis == Basis::U3_CX) return from_gates(c.width(), std::move(u3cx));
    std::vector<Gate> device;
    for (const auto &g : u3cx) to_device(g, device);
    return from_gates(c.width(), std::move(device));
}

Circuit simplify(const Circuit &c) {
    std::vector<Gate> current;
    for (const auto &g : c.gates()) {
        if (g.kind == GateKind::Barrier) continue;
        if (g.is_single_qubit()) {
            auto p = u3_params(single_qubit_matrix(g));
            if (!p) continue;
            // Existing u3 angles are kept so that a second pass is a no-op.
            if (g.kind == GateKind::U3) p = g.params;
            current.push_back(make_u3(g.qubits[0], (*p)[0], (*p)[1], (*p)[2]));
        } else if (g.kind == GateKind::CX) {
            current.push_back(make_gate(GateKind::CX, g.qubits));
        } else {
            throw std::invalid_argument("simplify expects u3/cx gates, found '" + std::string(gate_name(g.kind)) + "'");
        }
    }
    for (;;) {
        std::vector<std::optional<Gate>> out;
        std::vector<std::vector<std::size_t>> last(static_cast<std::size_t>(c.width()));
        bool changed = false;
        for (auto &g : current) {
            std::optional<std::size_t> prev;
            bool same = true;
            for (int q : g.qubits) {
                if (last[q].empty()) {
                    same = false;
                    break;
                }
                if (!prev) prev = last[q].back();
                if (last[q].back() != *prev) same = false;
            }
            if (same && prev && out[*prev]->qubits.size() == g.qubits.size()) {
                Gate &p = *out[*prev];
                if (g.is_single_qubit()) {
                    auto m = u3_params(mul(single_qubit_matrix(g), single_qubit_matrix(p)));
                    changed = true;
                    if (m) {
                        p.params = *m;
                    } else {
                        out[*prev].reset();
                        last[g.qubits[0]].pop_back();
                    }
                    continue;
                }
                if (p.qubits == g.qubits) {  // CX . CX
                    out[*prev].reset();
                    for (int q : g.qubits) last[q].pop_back();
                    changed = true;
                    continue;
                }
            }
            for (int q : g.qubits) last[q].push_back(out.size());
            out.push_back(std::move(g));
        }
        current.clear();
        for (auto &g : out) {
            if (g) current.push_back(std::move(*g));
        }
        if (!changed) break;
    }
    return from_gates(c.width(), std::move(current));
}

void check_pairs(const Circuit &c) {
    check_structure(c, true);
}

void lint_relative_phase(const Circuit &c) {
    for (std::size_t i = 0; i < c.size(); ++i) {
        const Gate &g = c.gates()[i];
        if (is_relative_phase(g) && (g.pair == 0 || g.role == Role::None)) {
            throw InvariantError("relative-phase gate " + std::to_string(i) + " (" + std::string(gate_name(g.kind)) +
                                 ") is not part of a compute/uncompute pair");
        }
    }
    check_structure(c, false);
}

Circuit optimize(const Circuit &c, Basis basis) {
    Circuit s = strip_barriers(c);
    check_pairs(s);

    std::vector<Gate> out;
    std::map<std::uint32_t, std::vector<Gate>> expanded;
    std::set<std::uint32_t> emitted;
    std::uint32_t next_pair = kLocalPairBase;
    for (const auto &g : s.gates()) {
        if (g.role == Role::Uncompute) {
            if (emitted.insert(g.pair).second) {
                const auto &fwd = expanded[g.pair];
                for (auto it = fwd.rbegin(); it != fwd.rend(); ++it) out.push_back(inverse(*it));
            }
            continue;
        }
        std::vector<Gate> seq;
        if (g.is_mcx() && g.num_controls() >= 2) {
            if (g.role != Role::Compute || !relative_mcx(g.controls(), g.target(), g.helpers, seq, next_pair)) {
                seq.clear();
                exact_mcx(g.controls(), g.target(), g.helpers, seq, next_pair);
            }
        } else if (g.kind == GateKind::MCZ) {
            exact_mcz(g.qubits, g.helpers, seq, next_pair);
        } else {
            seq.push_back(g);
        }
        for (auto &x : seq) {
            if (g.role != Role::None) {
                x.pair = g.pair;
                x.role = g.role;
            }
            x.helpers.clear();
        }
        if (g.role == Role::Compute) expanded[g.pair].insert(expanded[g.pair].end(), seq.begin(), seq.end());
        out.insert(out.end(), seq.begin(), seq.end());
    }
    Circuit expanded_circuit = from_gates(s.width(), std::move(out));
    lint_relative_phase(expanded_circuit);

    Circuit reduced = simplify(unroll_to_basis(expanded_circuit, Basis::U3_CX));
    return basis == Basis::U3_CX ? reduced : unroll_to_basis(reduced, basis);
}

Circuit baseline(const Circuit &c, Basis basis) {
    Circuit reduced = simplify(unroll_to_basis(strip_barriers(c), Basis::U3_CX));
    return basis == Basis::U3_CX ? reduced : unroll_to_basis(reduced, basis);
}

CostReport cost_report(const Circuit &c) {
    CostReport r;
    r.width = c.width();
    std::vector<std::uint64_t> level(static_cast<std::size_t>(c.width()), 0);
    for (const auto &g : c.gates()) {
        if (g.kind == GateKind::Barrier) continue;
        if (g.kind == GateKind::U3) {
            ++r.n_u3;
        } else if (g.kind == GateKind::CX) {
            ++r.n_cx;
        } else {
            throw std::invalid_argument("cost_report expects a u3/cx circuit, found '" + std::string(gate_name(g.kind)) +
                                        "'");
        }
        std::uint64_t d = 0;
        for (int q : g.qubits) d = std::max(d, level[q]);
        for (int q : g.qubits) level[q] = d + 1;
        r.depth = std::max(r.depth, d + 1);
    }
    r.cost = r.n_u3 + 10 * r.n_cx;
    return r;
}

nlohmann::ordered_json to_json(const CostReport &r) {
    return {{"n_u3", r.n_u3}, {"n_cx", r.n_cx}, {"cost", r.cost}, {"depth", r.depth}, {"width", r.width}};
}

double cost_reduction(const CostReport &base, const CostReport &optimized) {
    if (base.cost == 0) return 0.0;
    return 1.0 - static_cast<double>(optimized.cost) / static_cast<double>(base.cost);
}

}  // namespace qsat
