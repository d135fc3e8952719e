#pragma once

#include <string>
#include <vector>

#include "qsat/formula.hpp"

namespace qsat {

/// Qubit roles for a compiled formula. Register qubit i carries bit 2^i.
///
/// Order: variable registers (declaration order), number register, ancilla register,
/// one satisfiability qubit per clause, two scratch qubits when some clause needs
/// the two-comparator <=/>= form, and the flag qubit last.
struct RegisterLayout {
    int bits = 0;
    std::vector<std::vector<int>> variables;
    std::vector<int> number;
    std::vector<int> ancilla;
    std::vector<int> sat;
    std::vector<int> scratch;
    int flag = 0;
    int width = 0;

    /// All variable-register qubits, first variable first.
    std::vector<int> variable_qubits() const;
    /// Everything except variable registers and the flag.
    std::vector<int> work_qubits() const;
    /// "v0[2]", "num[0]", "anc[1]", "sat[0]", "scr[1]", "flag"; v0 is the first variable.
    std::string qubit_label(int q) const;
};

/// True when the clause compiles to the two-comparator OR form (needs scratch qubits):
/// variable-vs-variable <=/>=, (X <= 2^n - 1) and (X >= 0).
bool needs_scratch(const Clause &c, int bits);

RegisterLayout build_layout(const Formula &f);

}  // namespace qsat
