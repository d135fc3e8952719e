#pragma once

#include <cstdint>
#include <span>

#include "qsat/circuit.hpp"
#include "qsat/formula.hpp"
#include "qsat/layout.hpp"

namespace qsat {

// Elementary comparison circuits. Each one XORs its predicate into a satisfiability
// qubit and leaves every other qubit as it found it: operand registers are only ever
// used as controls, and the ancilla register is restored by a mirrored uncompute
// sequence built into the comparator. Registers are little-endian (qubit i = bit 2^i).

/// X on each number-register qubit whose bit of `value` is 1. Self-inverse.
Circuit encode_constant(int width, std::span<const int> number, std::uint64_t value);

/// sat ^= [A < B]. MSB-first scan: ancilla i holds A_i xor B_i, and the MCX at
/// position i fires when all higher positions agreed (their ancillas inverted to 1),
/// position i differs, and B_i = 1.
Circuit cmp_less(int width, std::span<const int> a, std::span<const int> b, std::span<const int> ancilla, int sat);

/// sat ^= [A = B].
Circuit cmp_equal(int width, std::span<const int> a, std::span<const int> b, std::span<const int> ancilla, int sat);

/// sat ^= [A != B]: equality followed by X on sat.
Circuit cmp_not_equal(int width, std::span<const int> a, std::span<const int> b, std::span<const int> ancilla,
                      int sat);

/// sat ^= [reg = value] without a number register: flip the zero bits, MCX, flip back.
Circuit cmp_equal_const(int width, std::span<const int> reg, std::uint64_t value, int sat);

/// GT is LT with swapped operands. LE computes LT and EQ into the two scratch qubits,
/// ORs them into sat (X, X, MCX, X, X, then X on sat), and uncomputes the scratch
/// pair. GE is LE with swapped operands. Scratch compute/uncompute carry `pair` tags.
Circuit cmp_compound(int width, CmpOp op, std::span<const int> a, std::span<const int> b,
                     std::span<const int> ancilla, std::span<const int> scratch, int sat, std::uint32_t pair = 1);

/// One clause of a formula into layout.sat[clause_index], including number-register
/// encode/unencode. (X <= c) with c < 2^n - 1 becomes (X < c + 1) and (X >= c) with
/// c > 0 becomes (c - 1 < X). `spare` lists qubits known to be idle at this point,
/// offered to multi-controlled gates as decomposition helpers. Scratch compute/uncompute
/// blocks are tagged with pair id clause_index + 1.
Circuit compile_clause(const Formula &f, const RegisterLayout &layout, std::size_t clause_index,
                       std::span<const Helper> spare = {});

/// True when the compiled clause uses the number register.
bool clause_uses_number_register(const Clause &c, int bits);

}  // namespace qsat
