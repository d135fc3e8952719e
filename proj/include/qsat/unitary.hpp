#pragma once

#include <Eigen/Dense>

#include "qsat/circuit.hpp"

namespace qsat {

inline constexpr int kMaxUnitaryWidth = 10;

/// Full 2^w x 2^w matrix; column j is the circuit applied to basis state |j>.
/// Throws ResourceError above kMaxUnitaryWidth qubits.
Eigen::MatrixXcd unitary_of(const Circuit &c);

/// max |a_ij - e^{i phi} b_ij| with phi chosen from the largest entry of b.
double distance_up_to_global_phase(const Eigen::MatrixXcd &a, const Eigen::MatrixXcd &b);

}  // namespace qsat
