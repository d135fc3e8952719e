#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "qsat/circuit.hpp"

namespace qsat {

inline constexpr int kMaxStatevectorWidth = 26;

/// Dense 2^width amplitude vector; qubit q is bit q of the basis index.
class StateVector {
   public:
    /// |0...0>. Throws ResourceError above kMaxStatevectorWidth.
    explicit StateVector(int width);
    static StateVector basis(int width, std::uint64_t index);

    int width() const {
        return width_;
    }
    std::size_t dim() const {
        return amps_.size();
    }
    std::span<const cplx> amplitudes() const {
        return amps_;
    }
    std::span<cplx> amplitudes() {
        return amps_;
    }
    cplx operator[](std::uint64_t i) const {
        return amps_[i];
    }

    void apply(const Gate &g);
    void apply(const Circuit &c);

    void apply_matrix(int q, const Mat2 &m);
    void apply_controlled_matrix(std::uint64_t control_mask, int q, const Mat2 &m);
    void apply_mcx(std::uint64_t control_mask, int target);
    /// Negates amplitudes whose bits are all set in `mask`.
    void apply_phase_flip(std::uint64_t mask);

    double norm_squared() const;
    /// Probability that qubit q reads 1.
    double probability_one(int q) const;
    /// Probability that every listed qubit reads 0.
    double probability_all_zero(std::span<const int> qubits) const;

   private:
    int width_;
    std::vector<cplx> amps_;
};

StateVector run_statevector(const Circuit &c);
StateVector run_statevector(const Circuit &c, StateVector initial);

/// Marginal distribution over `measured`; entry k has bit j equal to the value of measured[j].
std::vector<double> marginal_probabilities(const StateVector &s, std::span<const int> measured);

std::uint64_t mask_of(std::span<const int> qubits);

}  // namespace qsat
