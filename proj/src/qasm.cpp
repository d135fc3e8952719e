#include <cctype>
#include <cmath>
#include <iomanip>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "qsat/circuit.hpp"

namespace qsat {

namespace {

std::string format_angle(double a) {
    std::ostringstream out;
    out << std::setprecision(17) << a;
    return out.str();
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

// Angles are plain decimals, optionally written as [-]pi[/k] or k*pi[/m].
double parse_angle(std::string_view s) {
    s = trim(s);
    double sign = 1.0;
    if (!s.empty() && s.front() == '-') {
        sign = -1.0;
        s.remove_prefix(1);
    }
    auto pos = s.find("pi");
    if (pos == std::string_view::npos) {
        return sign * std::stod(std::string(s));
    }
    double factor = 1.0;
    if (pos > 0) {
        auto head = trim(s.substr(0, pos));
        if (!head.empty() && head.back() == '*') head.remove_suffix(1);
        factor = std::stod(std::string(head));
    }
    double value = factor * std::numbers::pi;
    auto tail = trim(s.substr(pos + 2));
    if (!tail.empty()) {
        if (tail.front() != '/') throw std::invalid_argument("bad angle '" + std::string(s) + "'");
        value /= std::stod(std::string(tail.substr(1)));
    }
    return sign * value;
}

int parse_qubit(std::string_view s) {
    s = trim(s);
    if (s.size() < 4 || s.substr(0, 2) != "q[" || s.back() != ']') {
        throw std::invalid_argument("expected q[i], got '" + std::string(s) + "'");
    }
    return std::stoi(std::string(s.substr(2, s.size() - 3)));
}

std::vector<std::string_view> split(std::string_view s, char sep) {
    std::vector<std::string_view> parts;
    std::size_t start = 0;
    for (std::size_t i = 0; i <= s.size(); ++i) {
        if (i == s.size() || s[i] == sep) {
            parts.push_back(s.substr(start, i - start));
            start = i + 1;
        }
    }
    return parts;
}

}  // namespace

std::string to_qasm(const Circuit &c) {
    std::ostringstream out;
    out << "OPENQASM 2.0;\ninclude \"qelib1.inc\";\nqreg q[" << c.width() << "];\n";
    for (const auto &g : c.gates()) {
        const auto &q = g.qubits;
        switch (g.kind) {
            case GateKind::U3:
                out << "u3(" << format_angle(g.params[0]) << "," << format_angle(g.params[1]) << ","
                    << format_angle(g.params[2]) << ") q[" << q[0] << "];\n";
                break;
            case GateKind::RZ:
                out << "rz(" << format_angle(g.params[0]) << ") q[" << q[0] << "];\n";
                break;
            case GateKind::SX:
                out << (g.adjoint ? "sxdg" : "sx") << " q[" << q[0] << "];\n";
                break;
            case GateKind::X:
            case GateKind::H:
            case GateKind::Z:
            case GateKind::CX:
            case GateKind::CZ:
            case GateKind::CCX:
                out << gate_name(g.kind);
                for (std::size_t i = 0; i < q.size(); ++i) {
                    out << (i ? "," : " ") << "q[" << q[i] << "]";
                }
                out << ";\n";
                break;
            case GateKind::Barrier:
                break;
            default:
                throw std::invalid_argument("gate '" + std::string(gate_name(g.kind)) +
                                            "' has no OpenQASM 2.0 form here; unroll the circuit first");
        }
    }
    return out.str();
}

Circuit circuit_from_qasm(std::string_view text) {
    std::optional<Circuit> circuit;
    for (auto raw : split(text, ';')) {
        auto stmt = trim(raw);
        while (stmt.substr(0, 2) == "//") {
            auto nl = stmt.find('\n');
            stmt = nl == std::string_view::npos ? std::string_view{} : trim(stmt.substr(nl));
        }
        if (stmt.empty() || stmt.substr(0, 8) == "OPENQASM" || stmt.substr(0, 7) == "include") continue;
        if (stmt.substr(0, 4) == "qreg") {
            auto open = stmt.find('[');
            auto close = stmt.find(']');
            if (open == std::string_view::npos || close == std::string_view::npos) {
                throw std::invalid_argument("malformed qreg declaration");
            }
            circuit.emplace(std::stoi(std::string(stmt.substr(open + 1, close - open - 1))));
            continue;
        }
        if (!circuit) throw std::invalid_argument("gate before qreg declaration");

        std::size_t name_end = 0;
        while (name_end < stmt.size() && (std::isalnum(static_cast<unsigned char>(stmt[name_end])))) ++name_end;
        auto name = stmt.substr(0, name_end);
        auto rest = trim(stmt.substr(name_end));
        std::vector<double> angles;
        if (!rest.empty() && rest.front() == '(') {
            auto close = rest.find(')');
            for (auto a : split(rest.substr(1, close - 1), ',')) angles.push_back(parse_angle(a));
            rest = trim(rest.substr(close + 1));
        }
        std::vector<int> qubits;
        for (auto a : split(rest, ',')) qubits.push_back(parse_qubit(a));

        Gate g;
        if (name == "sxdg") {
            g = make_gate(GateKind::SX, qubits);
            g.adjoint = true;
        } else if (name == "barrier") {
            continue;
        } else {
            auto kind = gate_kind_from_name(name);
            if (!kind) throw std::invalid_argument("unsupported gate '" + std::string(name) + "'");
            g = make_gate(*kind, qubits);
            for (std::size_t i = 0; i < angles.size() && i < 3; ++i) g.params[i] = angles[i];
        }
        circuit->append(std::move(g));
    }
    if (!circuit) throw std::invalid_argument("no qreg declaration");
    return *circuit;
}

}  // namespace qsat
