#pragma once

#include <array>
#include <complex>
#include <cstdint>
#include <initializer_list>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace qsat {

using cplx = std::complex<double>;
using Mat2 = std::array<cplx, 4>;  // row-major [[a, b], [c, d]]

enum class GateKind {
    X,
    H,
    Z,
    U3,
    RZ,
    SX,
    CX,
    CZ,
    CH,
    CCX,
    RCCX,
    RC3X,
    C3X,
    C4X,
    MCX,
    MCZ,
    Barrier,
};

std::string_view gate_name(GateKind kind);
std::optional<GateKind> gate_kind_from_name(std::string_view name);

/// Marks a gate as part of a compute block or its mirrored uncompute block. Builders
/// emit these so the optimizer can substitute relative-phase forms safely.
enum class Role : std::uint8_t { None, Compute, Uncompute };

/// Known state of a qubit a decomposition may borrow and must return untouched.
enum class HelperState : std::uint8_t { Zero, One, Minus };

struct Helper {
    int qubit = 0;
    HelperState state = HelperState::Zero;
    bool operator==(const Helper &) const = default;
};

struct Gate {
    GateKind kind = GateKind::X;
    std::vector<int> qubits;  // controls first, target last
    std::array<double, 3> params{};
    bool adjoint = false;  // inverse form for SX and RC3X
    std::uint32_t pair = 0;
    Role role = Role::None;
    std::vector<Helper> helpers;

    int target() const {
        return qubits.back();
    }
    std::span<const int> controls() const {
        return {qubits.data(), qubits.size() - 1};
    }
    bool is_single_qubit() const;
    /// Multi-controlled X of any spelling (CX, CCX, C3X, C4X, MCX).
    bool is_mcx() const;
    /// True when the unitary is diagonal in the computational basis.
    bool is_diagonal() const;
    /// Number of controls for controlled kinds, 0 otherwise.
    std::size_t num_controls() const;

    bool same_operation(const Gate &other) const;
};

Gate make_gate(GateKind kind, std::vector<int> qubits, std::array<double, 3> params = {});
Gate make_u3(int q, double theta, double phi, double lambda);
Gate make_rz(int q, double theta);
/// Multi-controlled X; normalizes 0/1/2 controls to X/CX/CCX.
Gate make_mcx(std::span<const int> controls, int target);
/// Multi-controlled Z over all listed qubits (symmetric); normalizes 1/2 qubits to Z/CZ.
Gate make_mcz(std::span<const int> qubits);

Gate inverse(const Gate &g);

/// 2x2 unitary of a single-qubit gate.
Mat2 single_qubit_matrix(const Gate &g);
Mat2 u3_matrix(double theta, double phi, double lambda);

/// Basis-level expansion of the relative-phase Toffolis and CH; empty for gates the
/// simulator applies natively.
std::vector<Gate> gate_definition(const Gate &g);

class Circuit {
   public:
    Circuit() = default;
    explicit Circuit(int width);

    int width() const {
        return width_;
    }
    const std::vector<Gate> &gates() const {
        return gates_;
    }
    std::size_t size() const {
        return gates_.size();
    }
    bool empty() const {
        return gates_.empty();
    }

    /// Validates indices and arity, then appends. Throws std::invalid_argument.
    void append(Gate g);
    void append(const Circuit &other);

    void x(int q);
    void h(int q);
    void z(int q);
    void u3(int q, double theta, double phi, double lambda);
    void cx(int control, int target);
    void cz(int a, int b);
    void mcx(std::span<const int> controls, int target);
    void mcx(std::initializer_list<int> controls, int target);
    void mcz(std::span<const int> qubits);
    void barrier();

    /// Tags every gate with a pair id and role (overwriting earlier tags).
    void tag(std::uint32_t pair, Role role);
    /// Adds borrowable helpers to every multi-controlled gate with at least `min_controls` controls.
    void offer_helpers(std::span<const Helper> helpers, std::size_t min_controls = 2);

    std::vector<Gate> &mutable_gates() {
        return gates_;
    }

    bool operator==(const Circuit &other) const;

   private:
    int width_ = 0;
    std::vector<Gate> gates_;
};

/// Concatenation; throws std::invalid_argument on width mismatch.
Circuit compose(const Circuit &a, const Circuit &b);

/// Reversed gate order with each gate inverted; compute/uncompute roles swap.
Circuit inverse(const Circuit &c);

/// Gate list with barriers removed.
Circuit strip_barriers(const Circuit &c);

nlohmann::json to_json(const Circuit &c);
Circuit circuit_from_json(const nlohmann::json &j);

/// OpenQASM 2.0 text. Only u3, rz, sx, x, h, z, cx, cz, ccx are emitted; anything
/// else must be unrolled first (throws std::invalid_argument).
std::string to_qasm(const Circuit &c);
/// Reads the subset written by to_qasm (single `q` register, no measurement).
Circuit circuit_from_qasm(std::string_view text);

}  // namespace qsat
