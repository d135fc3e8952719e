#include "qsat/statevector.hpp"

#include <stdexcept>
#include <string>

#include "qsat/errors.hpp"

namespace qsat {

std::uint64_t mask_of(std::span<const int> qubits) {
    std::uint64_t m = 0;
    for (int q : qubits) m |= std::uint64_t{1} << q;
    return m;
}

StateVector::StateVector(int width) : width_(width) {
    if (width < 0 || width > kMaxStatevectorWidth) {
        throw ResourceError("statevector width " + std::to_string(width) + " exceeds the limit of " +
                            std::to_string(kMaxStatevectorWidth) + " qubits");
    }
    amps_.assign(std::size_t{1} << width, cplx(0.0, 0.0));
    amps_[0] = 1.0;
}

StateVector StateVector::basis(int width, std::uint64_t index) {
    StateVector s(width);
    if (index >= s.dim()) {
        throw std::out_of_range("basis index outside state dimension");
    }
    s.amps_[0] = 0.0;
    s.amps_[index] = 1.0;
    return s;
}

void StateVector::apply_matrix(int q, const Mat2 &m) {
    const std::size_t stride = std::size_t{1} << q;
    const std::size_t n = amps_.size();
    cplx *a = amps_.data();
    for (std::size_t base = 0; base < n; base += 2 * stride) {
        for (std::size_t j = base; j < base + stride; ++j) {
            cplx a0 = a[j];
            cplx a1 = a[j + stride];
            a[j] = m[0] * a0 + m[1] * a1;
            a[j + stride] = m[2] * a0 + m[3] * a1;
        }
    }
}

void StateVector::apply_controlled_matrix(std::uint64_t control_mask, int q, const Mat2 &m) {
    const std::size_t stride = std::size_t{1} << q;
    const std::size_t n = amps_.size();
    cplx *a = amps_.data();
    for (std::size_t base = 0; base < n; base += 2 * stride) {
        for (std::size_t j = base; j < base + stride; ++j) {
            if ((j & control_mask) != control_mask) continue;
            cplx a0 = a[j];
            cplx a1 = a[j + stride];
            a[j] = m[0] * a0 + m[1] * a1;
            a[j + stride] = m[2] * a0 + m[3] * a1;
        }
    }
}

void StateVector::apply_mcx(std::uint64_t control_mask, int target) {
    const std::size_t stride = std::size_t{1} << target;
    const std::size_t n = amps_.size();
    cplx *a = amps_.data();
    for (std::size_t base = 0; base < n; base += 2 * stride) {
        for (std::size_t j = base; j < base + stride; ++j) {
            if ((j & control_mask) == control_mask) std::swap(a[j], a[j + stride]);
        }
    }
}

void StateVector::apply_phase_flip(std::uint64_t mask) {
    const std::size_t n = amps_.size();
    for (std::size_t j = 0; j < n; ++j) {
        if ((j & mask) == mask) amps_[j] = -amps_[j];
    }
}

void StateVector::apply(const Gate &g) {
    switch (g.kind) {
        case GateKind::Barrier:
            return;
        case GateKind::X:
            apply_mcx(0, g.qubits[0]);
            return;
        case GateKind::Z:
            apply_phase_flip(mask_of(g.qubits));
            return;
        case GateKind::H:
        case GateKind::U3:
        case GateKind::RZ:
        case GateKind::SX:
            apply_matrix(g.qubits[0], single_qubit_matrix(g));
            return;
        case GateKind::CX:
        case GateKind::CCX:
        case GateKind::C3X:
        case GateKind::C4X:
        case GateKind::MCX:
            apply_mcx(mask_of(g.controls()), g.target());
            return;
        case GateKind::CZ:
        case GateKind::MCZ:
            apply_phase_flip(mask_of(g.qubits));
            return;
        case GateKind::CH:
        case GateKind::RCCX:
        case GateKind::RC3X:
            for (const auto &sub : gate_definition(g)) apply(sub);
            return;
    }
    throw std::invalid_argument("unsupported gate kind");
}

void StateVector::apply(const Circuit &c) {
    if (c.width() != width_) {
        throw std::invalid_argument("circuit width " + std::to_string(c.width()) + " does not match state width " +
                                    std::to_string(width_));
    }
    for (const auto &g : c.gates()) apply(g);
}

double StateVector::norm_squared() const {
    double s = 0.0;
    for (const auto &a : amps_) s += std::norm(a);
    return s;
}

double StateVector::probability_one(int q) const {
    const std::uint64_t bit = std::uint64_t{1} << q;
    double p = 0.0;
    for (std::size_t j = 0; j < amps_.size(); ++j) {
        if (j & bit) p += std::norm(amps_[j]);
    }
    return p;
}

double StateVector::probability_all_zero(std::span<const int> qubits) const {
    const std::uint64_t mask = mask_of(qubits);
    double p = 0.0;
    for (std::size_t j = 0; j < amps_.size(); ++j) {
        if ((j & mask) == 0) p += std::norm(amps_[j]);
    }
    return p;
}

StateVector run_statevector(const Circuit &c) {
    return run_statevector(c, StateVector(c.width()));
}

StateVector run_statevector(const Circuit &c, StateVector initial) {
    initial.apply(c);
    return initial;
}

std::vector<double> marginal_probabilities(const StateVector &s, std::span<const int> measured) {
    if (measured.size() > 30) {
        throw ResourceError("too many measured qubits");
    }
    std::vector<double> probs(std::size_t{1} << measured.size(), 0.0);
    auto amps = s.amplitudes();
    for (std::size_t j = 0; j < amps.size(); ++j) {
        double p = std::norm(amps[j]);
        if (p == 0.0) continue;
        std::size_t k = 0;
        for (std::size_t b = 0; b < measured.size(); ++b) {
            k |= ((j >> measured[b]) & 1u) << b;
        }
        probs[k] += p;
    }
    return probs;
}

}  // namespace qsat
