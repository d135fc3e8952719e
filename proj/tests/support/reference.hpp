#pragma once

// Independent reference models used by the unit and acceptance tests.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <set>
#include <vector>

#include <Eigen/Dense>

#include "qsat/circuit.hpp"
#include "qsat/grover.hpp"
#include "qsat/statevector.hpp"
#include "qsat/unitary.hpp"

namespace qsat::testing {

// Keeps only the qubits some gate touches (helpers included), renumbered densely.
struct Compacted {
    Circuit circuit;
    std::map<int, int> to_local;
    std::vector<int> to_global;

    int local(int q) const {
        return to_local.at(q);
    }
};

inline Compacted compact(const Circuit &c, std::vector<int> keep = {}) {
    std::set<int> used(keep.begin(), keep.end());
    for (const auto &g : c.gates()) {
        used.insert(g.qubits.begin(), g.qubits.end());
        for (const auto &h : g.helpers) used.insert(h.qubit);
    }
    Compacted out;
    for (int q : used) {
        out.to_local[q] = static_cast<int>(out.to_global.size());
        out.to_global.push_back(q);
    }
    out.circuit = Circuit(static_cast<int>(out.to_global.size()));
    for (Gate g : c.gates()) {
        for (int &q : g.qubits) q = out.to_local.at(q);
        for (auto &h : g.helpers) h.qubit = out.to_local.at(h.qubit);
        out.circuit.append(std::move(g));
    }
    return out;
}

// Equal superposition over the listed qubits, everything else |0>.
inline StateVector superposition(int width, const std::vector<int> &qubits) {
    StateVector s(width);
    for (int q : qubits) s.apply(make_gate(GateKind::H, {q}));
    return s;
}

inline std::uint64_t read_register(std::uint64_t index, const std::vector<int> &reg) {
    std::uint64_t v = 0;
    for (std::size_t i = 0; i < reg.size(); ++i) v |= ((index >> reg[i]) & 1u) << i;
    return v;
}

// Exact density-matrix evolution with per-gate noise written straight from the channel
// definitions: depolarizing rho -> (1 - l) rho + l (I/d (x) Tr_S rho) on the gate's
// qubits S, then amplitude damping and pure dephasing on each of them.
class DensityMatrix {
   public:
    explicit DensityMatrix(int width) : width_(width), rho_(Eigen::MatrixXcd::Zero(dim(), dim())) {
        rho_(0, 0) = 1.0;
    }

    std::size_t dim() const {
        return std::size_t{1} << width_;
    }

    void unitary(const Gate &g) {
        Circuit one(width_);
        one.append(g);
        const Eigen::MatrixXcd u = unitary_of(one);
        rho_ = u * rho_ * u.adjoint();
    }

    void depolarize(const std::vector<int> &qubits, double lambda) {
        if (lambda == 0) return;
        std::uint64_t mask = 0;
        for (int q : qubits) mask |= std::uint64_t{1} << q;
        const double d = static_cast<double>(std::uint64_t{1} << qubits.size());
        Eigen::MatrixXcd mixed = Eigen::MatrixXcd::Zero(dim(), dim());
        for (std::size_t i = 0; i < dim(); ++i) {
            for (std::size_t j = 0; j < dim(); ++j) {
                if ((i & mask) != (j & mask)) continue;
                cplx sum = 0.0;
                for (std::uint64_t s = 0; s < dim(); ++s) {
                    if (s & ~mask) continue;
                    sum += rho_((i & ~mask) | s, (j & ~mask) | s);
                }
                mixed(i, j) = sum / d;
            }
        }
        rho_ = (1 - lambda) * rho_ + lambda * mixed;
    }

    void amplitude_damp(int q, double gamma) {
        const Eigen::Matrix2cd k0{{1.0, 0.0}, {0.0, std::sqrt(1 - gamma)}};
        const Eigen::Matrix2cd k1{{0.0, std::sqrt(gamma)}, {0.0, 0.0}};
        kraus(q, {k0, k1});
    }

    void dephase(int q, double p) {
        const Eigen::Matrix2cd i = Eigen::Matrix2cd::Identity() * std::sqrt(1 - p);
        const Eigen::Matrix2cd z{{std::sqrt(p), 0.0}, {0.0, -std::sqrt(p)}};
        kraus(q, {i, z});
    }

    void kraus(int q, const std::vector<Eigen::Matrix2cd> &ks) {
        Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(dim(), dim());
        for (const auto &k : ks) {
            const Eigen::MatrixXcd full = embed(q, k);
            out += full * rho_ * full.adjoint();
        }
        rho_ = out;
    }

    double probability(std::uint64_t index) const {
        return rho_(index, index).real();
    }
    double trace() const {
        return rho_.trace().real();
    }

   private:
    Eigen::MatrixXcd embed(int q, const Eigen::Matrix2cd &k) const {
        Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(dim(), dim());
        const std::uint64_t bit = std::uint64_t{1} << q;
        for (std::size_t col = 0; col < dim(); ++col) {
            const int b = (col & bit) ? 1 : 0;
            for (int r = 0; r < 2; ++r) m((col & ~bit) | (r ? bit : 0), col) += k(r, b);
        }
        return m;
    }

    int width_;
    Eigen::MatrixXcd rho_;
};

// Largest deviation (up to global phase) of init + oracle from (-1)^[x solves f] |x>|flag>
// with every work qubit at |0>.
// `solutions` holds packed variable values; variable qubits are 0 .. m n - 1.
inline double oracle_phase_error(const Formula &f, const RegisterLayout &layout, const Circuit &oracle,
                                 const std::set<std::uint64_t> &solutions, KickbackMode mode) {
    Circuit c = build_initialization(layout, mode);
    c.append(oracle);
    const StateVector s = run_statevector(c);
    const std::uint64_t space = std::uint64_t{1} << (f.bits * f.variables.size());
    const std::uint64_t flag = std::uint64_t{1} << layout.flag;
    std::vector<cplx> expected(s.dim(), 0.0);
    for (std::uint64_t x = 0; x < space; ++x) {
        const double sign = solutions.count(x) ? -1.0 : 1.0;
        if (mode == KickbackMode::FlagMinusMcx) {
            const double a = sign / std::sqrt(2.0 * static_cast<double>(space));
            expected[x] = a;
            expected[x | flag] = -a;
        } else {
            expected[x | flag] = sign / std::sqrt(static_cast<double>(space));
        }
    }
    cplx overlap = 0.0;
    for (std::uint64_t i = 0; i < s.dim(); ++i) overlap += std::conj(expected[i]) * s[i];
    const cplx phase = std::abs(overlap) > 0 ? overlap / std::abs(overlap) : cplx(1.0);
    double worst = 0.0;
    for (std::uint64_t i = 0; i < s.dim(); ++i) worst = std::max(worst, std::abs(s[i] - phase * expected[i]));
    return worst;
}

struct ChannelParams {
    double t1_us, t2_us, t1q_ns, t2q_ns, lambda1, lambda2;
};

// Runs a single-qubit + CX circuit through DensityMatrix with the noise model above.
inline DensityMatrix evolve_noisy(const Circuit &c, const ChannelParams &p) {
    DensityMatrix rho(c.width());
    for (const auto &g : c.gates()) {
        if (g.kind == GateKind::Barrier) continue;
        const bool two = g.kind == GateKind::CX;
        const double t = two ? p.t2q_ns : p.t1q_ns;
        const double gamma = 1 - std::exp(-t * 1e-3 / p.t1_us);
        const double tphi_rate = 1 / p.t2_us - 1 / (2 * p.t1_us);
        const double pz = (1 - std::exp(-t * 1e-3 * tphi_rate)) / 2;
        rho.unitary(g);
        rho.depolarize(g.qubits, two ? p.lambda2 : p.lambda1);
        for (int q : g.qubits) {
            rho.amplitude_damp(q, gamma);
            rho.dephase(q, pz);
        }
    }
    return rho;
}

}  // namespace qsat::testing
