#include <cmath>
#include <numbers>
#include <numeric>
#include <random>

#include <gtest/gtest.h>

#include "qsat/circuit.hpp"
#include "qsat/errors.hpp"
#include "qsat/unitary.hpp"

using namespace qsat;
using std::numbers::pi;

namespace {

Eigen::MatrixXcd mcx_permutation(int width, const std::vector<int> &controls, int target) {
    const std::size_t dim = std::size_t{1} << width;
    std::uint64_t mask = 0;
    for (int c : controls) mask |= std::uint64_t{1} << c;
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(dim, dim);
    for (std::size_t j = 0; j < dim; ++j) {
        const std::size_t i = (j & mask) == mask ? j ^ (std::size_t{1} << target) : j;
        m(i, j) = 1.0;
    }
    return m;
}

Eigen::MatrixXcd of(int width, const Gate &g) {
    Circuit c(width);
    c.append(g);
    return unitary_of(c);
}

Circuit random_circuit(int width, int gates, std::mt19937 &gen) {
    Circuit c(width);
    std::uniform_real_distribution<double> angle(-pi, pi);
    for (int i = 0; i < gates; ++i) {
        std::vector<int> q(width);
        std::iota(q.begin(), q.end(), 0);
        std::shuffle(q.begin(), q.end(), gen);
        switch (gen() % 9) {
            case 0: c.h(q[0]); break;
            case 1: c.x(q[0]); break;
            case 2: c.u3(q[0], angle(gen), angle(gen), angle(gen)); break;
            case 3: c.cx(q[0], q[1]); break;
            case 4: c.append(make_gate(GateKind::RCCX, {q[0], q[1], q[2]})); break;
            case 5: c.append(make_gate(GateKind::RC3X, {q[0], q[1], q[2], q[3]})); break;
            case 6: c.mcx({q[0], q[1], q[2]}, q[3]); break;
            case 7: c.append(make_rz(q[0], angle(gen))); break;
            default: c.append(make_gate(GateKind::SX, {q[0]})); break;
        }
    }
    return c;
}

}  // namespace

TEST(Gates, SingleQubitMatrices) {
    const Mat2 h = single_qubit_matrix(make_gate(GateKind::H, {0}));
    const Mat2 hu = u3_matrix(pi / 2, 0, pi);
    for (int i = 0; i < 4; ++i) EXPECT_NEAR(std::abs(h[i] - hu[i]), 0.0, 1e-12);
    const Mat2 sx = single_qubit_matrix(make_gate(GateKind::SX, {0}));
    const Mat2 x = single_qubit_matrix(make_gate(GateKind::X, {0}));
    // sx * sx = x
    const cplx a = sx[0] * sx[0] + sx[1] * sx[2], b = sx[0] * sx[1] + sx[1] * sx[3];
    EXPECT_NEAR(std::abs(a - x[0]), 0.0, 1e-12);
    EXPECT_NEAR(std::abs(b - x[1]), 0.0, 1e-12);
}

TEST(Gates, McxUpToFiveControls) {
    for (int k = 1; k <= 5; ++k) {
        const int width = k + 1;
        std::vector<int> controls(k);
        std::iota(controls.begin(), controls.end(), 0);
        const Gate g = make_mcx(controls, k);
        EXPECT_LT(distance_up_to_global_phase(of(width, g), mcx_permutation(width, controls, k)), 1e-12) << k;
    }
    // Scattered qubit order.
    EXPECT_LT(distance_up_to_global_phase(of(5, make_mcx(std::vector<int>{4, 0, 2}, 1)),
                                          mcx_permutation(5, {4, 0, 2}, 1)),
              1e-12);
}

TEST(Gates, McxNormalization) {
    EXPECT_EQ(make_mcx(std::vector<int>{}, 0).kind, GateKind::X);
    EXPECT_EQ(make_mcx(std::vector<int>{1}, 0).kind, GateKind::CX);
    EXPECT_EQ(make_mcx(std::vector<int>{1, 2}, 0).kind, GateKind::CCX);
    EXPECT_TRUE(make_mcx(std::vector<int>{1, 2, 3, 4, 5}, 0).is_mcx());
    EXPECT_EQ(make_mcz(std::vector<int>{3}).kind, GateKind::Z);
    EXPECT_EQ(make_mcz(std::vector<int>{3, 1}).kind, GateKind::CZ);
}

TEST(Gates, McxAndMczRelatedByHadamard) {
    Circuit c(4);
    c.h(3);
    c.mcz(std::vector<int>{0, 1, 2, 3});
    c.h(3);
    EXPECT_LT(distance_up_to_global_phase(unitary_of(c), mcx_permutation(4, {0, 1, 2}, 3)), 1e-12);
}

TEST(RelativePhase, ModulusMatchesExact) {
    const auto rccx = of(3, make_gate(GateKind::RCCX, {0, 1, 2}));
    const auto ccx = mcx_permutation(3, {0, 1}, 2);
    EXPECT_LT((rccx.cwiseAbs() - ccx.cwiseAbs()).cwiseAbs().maxCoeff(), 1e-12);
    EXPECT_GT(distance_up_to_global_phase(rccx, ccx), 0.5);

    const auto rc3x = of(4, make_gate(GateKind::RC3X, {0, 1, 2, 3}));
    const auto c3x = mcx_permutation(4, {0, 1, 2}, 3);
    EXPECT_LT((rc3x.cwiseAbs() - c3x.cwiseAbs()).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(RelativePhase, DiagonalFactor) {
    // R = D * exact with D diagonal.
    for (auto [kind, k] : {std::pair{GateKind::RCCX, 2}, std::pair{GateKind::RC3X, 3}}) {
        std::vector<int> q(k + 1);
        std::iota(q.begin(), q.end(), 0);
        const auto r = of(k + 1, make_gate(kind, q));
        const auto exact = mcx_permutation(k + 1, std::vector<int>(q.begin(), q.end() - 1), k);
        const Eigen::MatrixXcd d = r * exact.adjoint();
        const Eigen::MatrixXcd off = d - Eigen::MatrixXcd(d.diagonal().asDiagonal());
        EXPECT_LT(off.cwiseAbs().maxCoeff(), 1e-12);
    }
}

TEST(RelativePhase, PairCancels) {
    Circuit c(4);
    c.append(make_gate(GateKind::RC3X, {0, 1, 2, 3}));
    c.append(inverse(make_gate(GateKind::RC3X, {0, 1, 2, 3})));
    c.append(make_gate(GateKind::RCCX, {2, 0, 1}));
    c.append(inverse(make_gate(GateKind::RCCX, {2, 0, 1})));
    EXPECT_LT(distance_up_to_global_phase(unitary_of(c), Eigen::MatrixXcd::Identity(16, 16)), 1e-12);
}

TEST(RelativePhase, DefinitionsMatchNativeSimulation) {
    for (const Gate &g : {make_gate(GateKind::RCCX, {2, 0, 1}), make_gate(GateKind::RC3X, {3, 1, 0, 2}),
                          inverse(make_gate(GateKind::RC3X, {3, 1, 0, 2})), make_gate(GateKind::CH, {1, 3})}) {
        Circuit expanded(4);
        for (const auto &s : gate_definition(g)) expanded.append(s);
        ASSERT_FALSE(expanded.empty());
        EXPECT_LT(distance_up_to_global_phase(unitary_of(expanded), of(4, g)), 1e-12) << gate_name(g.kind);
    }
}

TEST(Inverse, RandomCircuits) {
    std::mt19937 gen(11);
    for (int trial = 0; trial < 20; ++trial) {
        const Circuit c = random_circuit(5, 25, gen);
        const Circuit round = compose(c, inverse(c));
        EXPECT_LT(distance_up_to_global_phase(unitary_of(round), Eigen::MatrixXcd::Identity(32, 32)), 1e-10);
        EXPECT_EQ(inverse(inverse(c)), c);
    }
}

TEST(Inverse, SwapsRoles) {
    Circuit c(3);
    c.cx(0, 1);
    c.tag(5, Role::Compute);
    const Circuit inv = inverse(c);
    EXPECT_EQ(inv.gates()[0].role, Role::Uncompute);
    EXPECT_EQ(inv.gates()[0].pair, 5u);
}

TEST(Append, Validation) {
    Circuit c(3);
    EXPECT_THROW(c.cx(0, 3), std::invalid_argument);
    EXPECT_THROW(c.cx(1, 1), std::invalid_argument);
    EXPECT_THROW(c.append(make_gate(GateKind::CCX, {0, 1})), std::invalid_argument);
    EXPECT_THROW(c.h(-1), std::invalid_argument);
    EXPECT_TRUE(c.empty());
    Circuit d(4);
    EXPECT_THROW(compose(c, d), std::invalid_argument);
}

TEST(Helpers, OfferedToLargeGatesOnly) {
    Circuit c(6);
    c.cx(0, 1);
    c.mcx({0, 1}, 2);
    c.mcx({0, 1, 2}, 3);
    const Helper h{5, HelperState::Zero};
    c.offer_helpers(std::vector<Helper>{h}, 3);
    EXPECT_TRUE(c.gates()[0].helpers.empty());
    EXPECT_TRUE(c.gates()[1].helpers.empty());
    EXPECT_EQ(c.gates()[2].helpers, std::vector<Helper>{h});
}

TEST(Serialization, JsonRoundTrip) {
    std::mt19937 gen(3);
    Circuit c = random_circuit(5, 30, gen);
    c.tag(2, Role::Compute);
    c.offer_helpers(std::vector<Helper>{{4, HelperState::Minus}}, 3);
    c.barrier();
    EXPECT_EQ(circuit_from_json(to_json(c)), c);
}

TEST(Serialization, QasmRoundTrip) {
    Circuit c(3);
    c.h(0);
    c.u3(1, 0.1, 0.2, 0.3);
    c.append(make_rz(2, -0.7));
    c.append(make_gate(GateKind::SX, {2}));
    c.cx(0, 2);
    c.cz(1, 2);
    c.mcx({0, 1}, 2);
    c.x(1);
    c.z(0);
    const std::string text = to_qasm(c);
    EXPECT_NE(text.find("OPENQASM 2.0;"), std::string::npos);
    const Circuit back = circuit_from_qasm(text);
    EXPECT_EQ(back.width(), 3);
    EXPECT_LT(distance_up_to_global_phase(unitary_of(back), unitary_of(c)), 1e-9);
}

TEST(Serialization, QasmRejectsUnrolledKinds) {
    Circuit c(4);
    c.mcx({0, 1, 2}, 3);
    EXPECT_THROW(to_qasm(c), std::invalid_argument);
}

TEST(Unitary, WidthGuard) {
    EXPECT_THROW(unitary_of(Circuit(kMaxUnitaryWidth + 1)), ResourceError);
}
