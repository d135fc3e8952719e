#include "qsat/circuit.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace qsat {

namespace {

using std::numbers::pi;

constexpr std::pair<GateKind, std::string_view> kNames[] = {
    {GateKind::X, "x"},       {GateKind::H, "h"},       {GateKind::Z, "z"},         {GateKind::U3, "u3"},
    {GateKind::RZ, "rz"},     {GateKind::SX, "sx"},     {GateKind::CX, "cx"},       {GateKind::CZ, "cz"},
    {GateKind::CH, "ch"},     {GateKind::CCX, "ccx"},   {GateKind::RCCX, "rccx"},   {GateKind::RC3X, "rcccx"},
    {GateKind::C3X, "c3x"},   {GateKind::C4X, "c4x"},   {GateKind::MCX, "mcx"},     {GateKind::MCZ, "mcz"},
    {GateKind::Barrier, "barrier"},
};

/// Fixed arity, or 0 for variable-arity kinds.
std::size_t arity(GateKind kind) {
    switch (kind) {
        case GateKind::X:
        case GateKind::H:
        case GateKind::Z:
        case GateKind::U3:
        case GateKind::RZ:
        case GateKind::SX:
            return 1;
        case GateKind::CX:
        case GateKind::CZ:
        case GateKind::CH:
            return 2;
        case GateKind::CCX:
        case GateKind::RCCX:
            return 3;
        case GateKind::RC3X:
        case GateKind::C3X:
            return 4;
        case GateKind::C4X:
            return 5;
        case GateKind::MCX:
        case GateKind::MCZ:
        case GateKind::Barrier:
            return 0;
    }
    return 0;
}

Gate phase(int q, double angle) {
    return make_u3(q, 0.0, 0.0, angle);
}

Gate hadamard(int q) {
    return make_u3(q, pi / 2, 0.0, pi);
}

Gate cnot(int c, int t) {
    return make_gate(GateKind::CX, {c, t});
}

std::string role_name(Role r) {
    switch (r) {
        case Role::Compute:
            return "compute";
        case Role::Uncompute:
            return "uncompute";
        case Role::None:
            break;
    }
    return "none";
}

Role role_from_name(std::string_view s) {
    if (s == "compute") return Role::Compute;
    if (s == "uncompute") return Role::Uncompute;
    return Role::None;
}

}  // namespace

std::string_view gate_name(GateKind kind) {
    for (auto [k, n] : kNames) {
        if (k == kind) return n;
    }
    return "?";
}

std::optional<GateKind> gate_kind_from_name(std::string_view name) {
    for (auto [k, n] : kNames) {
        if (n == name) return k;
    }
    return std::nullopt;
}

bool Gate::is_single_qubit() const {
    return arity(kind) == 1;
}

bool Gate::is_mcx() const {
    switch (kind) {
        case GateKind::CX:
        case GateKind::CCX:
        case GateKind::C3X:
        case GateKind::C4X:
        case GateKind::MCX:
            return true;
        default:
            return false;
    }
}

bool Gate::is_diagonal() const {
    switch (kind) {
        case GateKind::Z:
        case GateKind::RZ:
        case GateKind::CZ:
        case GateKind::MCZ:
        case GateKind::Barrier:
            return true;
        case GateKind::U3:
            return std::abs(params[0]) < 1e-15;
        default:
            return false;
    }
}

std::size_t Gate::num_controls() const {
    switch (kind) {
        case GateKind::CX:
        case GateKind::CZ:
        case GateKind::CH:
        case GateKind::CCX:
        case GateKind::RCCX:
        case GateKind::RC3X:
        case GateKind::C3X:
        case GateKind::C4X:
        case GateKind::MCX:
        case GateKind::MCZ:
            return qubits.size() - 1;
        default:
            return 0;
    }
}

bool Gate::same_operation(const Gate &other) const {
    return kind == other.kind && qubits == other.qubits && params == other.params && adjoint == other.adjoint;
}

Gate make_gate(GateKind kind, std::vector<int> qubits, std::array<double, 3> params) {
    Gate g;
    g.kind = kind;
    g.qubits = std::move(qubits);
    g.params = params;
    return g;
}

Gate make_u3(int q, double theta, double phi, double lambda) {
    return make_gate(GateKind::U3, {q}, {theta, phi, lambda});
}

Gate make_rz(int q, double theta) {
    return make_gate(GateKind::RZ, {q}, {theta, 0.0, 0.0});
}

Gate make_mcx(std::span<const int> controls, int target) {
    std::vector<int> qubits(controls.begin(), controls.end());
    qubits.push_back(target);
    switch (controls.size()) {
        case 0:
            return make_gate(GateKind::X, std::move(qubits));
        case 1:
            return make_gate(GateKind::CX, std::move(qubits));
        case 2:
            return make_gate(GateKind::CCX, std::move(qubits));
        default:
            return make_gate(GateKind::MCX, std::move(qubits));
    }
}

Gate make_mcz(std::span<const int> qubits) {
    std::vector<int> q(qubits.begin(), qubits.end());
    switch (q.size()) {
        case 1:
            return make_gate(GateKind::Z, std::move(q));
        case 2:
            return make_gate(GateKind::CZ, std::move(q));
        default:
            return make_gate(GateKind::MCZ, std::move(q));
    }
}

Gate inverse(const Gate &g) {
    Gate out = g;
    switch (g.kind) {
        case GateKind::U3:
            out.params = {-g.params[0], -g.params[2], -g.params[1]};
            break;
        case GateKind::RZ:
            out.params[0] = -g.params[0];
            break;
        case GateKind::SX:
        case GateKind::RC3X:
            out.adjoint = !g.adjoint;
            break;
        default:
            break;
    }
    if (g.role == Role::Compute) out.role = Role::Uncompute;
    if (g.role == Role::Uncompute) out.role = Role::Compute;
    return out;
}

Mat2 u3_matrix(double theta, double phi, double lambda) {
    double c = std::cos(theta / 2);
    double s = std::sin(theta / 2);
    return {cplx(c, 0), -std::polar(s, lambda), std::polar(s, phi), std::polar(c, phi + lambda)};
}

Mat2 single_qubit_matrix(const Gate &g) {
    const double r = std::numbers::sqrt2 / 2;
    switch (g.kind) {
        case GateKind::X:
            return {0, 1, 1, 0};
        case GateKind::H:
            return {r, r, r, -r};
        case GateKind::Z:
            return {1, 0, 0, -1};
        case GateKind::U3:
            return u3_matrix(g.params[0], g.params[1], g.params[2]);
        case GateKind::RZ:
            return {std::polar(1.0, -g.params[0] / 2), 0, 0, std::polar(1.0, g.params[0] / 2)};
        case GateKind::SX: {
            cplx a(0.5, 0.5), b(0.5, -0.5);
            if (g.adjoint) std::swap(a, b);
            return {a, b, b, a};
        }
        default:
            throw std::invalid_argument("not a single-qubit gate: " + std::string(gate_name(g.kind)));
    }
}

std::vector<Gate> gate_definition(const Gate &g) {
    std::vector<Gate> seq;
    const auto &q = g.qubits;
    switch (g.kind) {
        case GateKind::RCCX: {
            // Margolus gate: CCX up to a sign on one control pattern; self-inverse.
            int a = q[0], b = q[1], t = q[2];
            seq = {hadamard(t), phase(t, pi / 4),  cnot(b, t),  phase(t, -pi / 4), cnot(a, t),
                   phase(t, pi / 4), cnot(b, t), phase(t, -pi / 4), hadamard(t)};
            break;
        }
        case GateKind::RC3X: {
            int a = q[0], b = q[1], c = q[2], t = q[3];
            seq = {hadamard(t),        phase(t, pi / 4), cnot(c, t),  phase(t, -pi / 4), hadamard(t),
                   cnot(a, t),         phase(t, pi / 4), cnot(b, t),  phase(t, -pi / 4), cnot(a, t),
                   phase(t, pi / 4),   cnot(b, t),       phase(t, -pi / 4), hadamard(t),  phase(t, pi / 4),
                   cnot(c, t),         phase(t, -pi / 4), hadamard(t)};
            if (g.adjoint) {
                std::reverse(seq.begin(), seq.end());
                for (auto &s : seq) s = inverse(s);
            }
            break;
        }
        case GateKind::CH: {
            int c = q[0], t = q[1];
            seq = {phase(t, pi / 2), hadamard(t), phase(t, pi / 4), cnot(c, t),
                   phase(t, -pi / 4), hadamard(t), phase(t, -pi / 2)};
            break;
        }
        default:
            break;
    }
    return seq;
}

Circuit::Circuit(int width) : width_(width) {
    if (width < 0) {
        throw std::invalid_argument("negative circuit width");
    }
}

void Circuit::append(Gate g) {
    if (g.kind == GateKind::Barrier) {
        if (g.qubits.empty()) {
            for (int i = 0; i < width_; ++i) g.qubits.push_back(i);
        }
    } else {
        std::size_t n = arity(g.kind);
        if (n != 0 && g.qubits.size() != n) {
            throw std::invalid_argument(std::string(gate_name(g.kind)) + " expects " + std::to_string(n) +
                                        " qubits, got " + std::to_string(g.qubits.size()));
        }
        if (g.qubits.empty()) {
            throw std::invalid_argument(std::string(gate_name(g.kind)) + " with no qubits");
        }
    }
    for (std::size_t i = 0; i < g.qubits.size(); ++i) {
        int qb = g.qubits[i];
        if (qb < 0 || qb >= width_) {
            throw std::invalid_argument("qubit " + std::to_string(qb) + " outside circuit width " +
                                        std::to_string(width_));
        }
        for (std::size_t j = 0; j < i; ++j) {
            if (g.qubits[j] == qb) {
                throw std::invalid_argument("repeated qubit " + std::to_string(qb) + " in " +
                                            std::string(gate_name(g.kind)));
            }
        }
    }
    if (g.kind == GateKind::MCX && g.qubits.size() <= 3) {
        auto target = g.qubits.back();
        auto normalized = make_mcx(std::span<const int>(g.qubits.data(), g.qubits.size() - 1), target);
        g.kind = normalized.kind;
    } else if (g.kind == GateKind::MCZ && g.qubits.size() <= 2) {
        g.kind = make_mcz(g.qubits).kind;
    }
    gates_.push_back(std::move(g));
}

void Circuit::append(const Circuit &other) {
    if (other.width_ != width_) {
        throw std::invalid_argument("width mismatch: " + std::to_string(width_) + " vs " +
                                    std::to_string(other.width_));
    }
    gates_.insert(gates_.end(), other.gates_.begin(), other.gates_.end());
}

void Circuit::x(int q) {
    append(make_gate(GateKind::X, {q}));
}
void Circuit::h(int q) {
    append(make_gate(GateKind::H, {q}));
}
void Circuit::z(int q) {
    append(make_gate(GateKind::Z, {q}));
}
void Circuit::u3(int q, double theta, double phi, double lambda) {
    append(make_u3(q, theta, phi, lambda));
}
void Circuit::cx(int control, int target) {
    append(make_gate(GateKind::CX, {control, target}));
}
void Circuit::cz(int a, int b) {
    append(make_gate(GateKind::CZ, {a, b}));
}
void Circuit::mcx(std::span<const int> controls, int target) {
    append(make_mcx(controls, target));
}
void Circuit::mcx(std::initializer_list<int> controls, int target) {
    mcx(std::span<const int>(controls.begin(), controls.size()), target);
}
void Circuit::mcz(std::span<const int> qubits) {
    append(make_mcz(qubits));
}
void Circuit::barrier() {
    append(make_gate(GateKind::Barrier, {}));
}

void Circuit::tag(std::uint32_t pair, Role role) {
    for (auto &g : gates_) {
        g.pair = pair;
        g.role = role;
    }
}

void Circuit::offer_helpers(std::span<const Helper> helpers, std::size_t min_controls) {
    for (auto &g : gates_) {
        if (!(g.is_mcx() || g.kind == GateKind::MCZ) || g.num_controls() < min_controls) continue;
        for (const auto &h : helpers) {
            if (std::find(g.qubits.begin(), g.qubits.end(), h.qubit) != g.qubits.end()) continue;
            if (std::find(g.helpers.begin(), g.helpers.end(), h) != g.helpers.end()) continue;
            g.helpers.push_back(h);
        }
    }
}

bool Circuit::operator==(const Circuit &other) const {
    if (width_ != other.width_ || gates_.size() != other.gates_.size()) return false;
    for (std::size_t i = 0; i < gates_.size(); ++i) {
        if (!gates_[i].same_operation(other.gates_[i])) return false;
    }
    return true;
}

Circuit compose(const Circuit &a, const Circuit &b) {
    Circuit out = a;
    out.append(b);
    return out;
}

Circuit inverse(const Circuit &c) {
    Circuit out(c.width());
    auto &gates = out.mutable_gates();
    gates.reserve(c.size());
    for (auto it = c.gates().rbegin(); it != c.gates().rend(); ++it) {
        gates.push_back(inverse(*it));
    }
    return out;
}

Circuit strip_barriers(const Circuit &c) {
    Circuit out(c.width());
    auto &gates = out.mutable_gates();
    for (const auto &g : c.gates()) {
        if (g.kind != GateKind::Barrier) gates.push_back(g);
    }
    return out;
}

nlohmann::json to_json(const Circuit &c) {
    nlohmann::json gates = nlohmann::json::array();
    for (const auto &g : c.gates()) {
        nlohmann::json jg{{"kind", std::string(gate_name(g.kind))}, {"qubits", g.qubits}};
        if (g.kind == GateKind::U3) {
            jg["params"] = g.params;
        } else if (g.kind == GateKind::RZ) {
            jg["params"] = {g.params[0]};
        }
        if (g.adjoint) jg["adjoint"] = true;
        if (g.role != Role::None) {
            jg["pair"] = g.pair;
            jg["role"] = role_name(g.role);
        }
        gates.push_back(std::move(jg));
    }
    return {{"width", c.width()}, {"gates", gates}};
}

Circuit circuit_from_json(const nlohmann::json &j) {
    Circuit c(j.at("width").get<int>());
    for (const auto &jg : j.at("gates")) {
        auto name = jg.at("kind").get<std::string>();
        auto kind = gate_kind_from_name(name);
        if (!kind) {
            throw std::invalid_argument("unknown gate kind '" + name + "'");
        }
        Gate g = make_gate(*kind, jg.at("qubits").get<std::vector<int>>());
        if (jg.contains("params")) {
            auto p = jg.at("params").get<std::vector<double>>();
            for (std::size_t i = 0; i < p.size() && i < 3; ++i) g.params[i] = p[i];
        }
        g.adjoint = jg.value("adjoint", false);
        g.pair = jg.value("pair", std::uint32_t{0});
        g.role = role_from_name(jg.value("role", std::string("none")));
        c.append(std::move(g));
    }
    return c;
}

}  // namespace qsat
