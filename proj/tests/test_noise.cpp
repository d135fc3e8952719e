#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "qsat/errors.hpp"
#include "qsat/noise.hpp"
#include "qsat/statevector.hpp"
#include "reference.hpp"

using namespace qsat;
using std::numbers::pi;

namespace {

double completeness_error(const Kraus &ks) {
    Eigen::Matrix2cd sum = Eigen::Matrix2cd::Zero();
    for (const auto &k : ks) {
        Eigen::Matrix2cd m;
        m << k[0], k[1], k[2], k[3];
        sum += m.adjoint() * m;
    }
    return (sum - Eigen::Matrix2cd::Identity()).cwiseAbs().maxCoeff();
}

Circuit test_circuit() {
    Circuit c(3);
    c.u3(0, pi / 2, 0, pi);
    c.cx(0, 1);
    c.u3(2, 1.1, 0.3, -0.4);
    c.cx(1, 2);
    c.u3(1, 0.7, -1.2, 0.5);
    c.cx(2, 0);
    c.u3(0, 2.0, 0.1, 0.0);
    c.cx(0, 2);
    return c;
}

void expect_matches_density_matrix(const Circuit &c, const NoiseModel &m, std::uint64_t trajectories) {
    const auto rho = qsat::testing::evolve_noisy(
        c, {m.t1_us, m.t2_us, m.gate_time_1q_ns, m.gate_time_2q_ns, m.lambda1, m.lambda2});
    EXPECT_NEAR(rho.trace(), 1.0, 1e-12);
    std::vector<int> measured(c.width());
    std::iota(measured.begin(), measured.end(), 0);
    const auto h = run_noisy_trajectories(c, m, measured, {trajectories, trajectories, 99});
    for (std::uint64_t k = 0; k < (std::uint64_t{1} << c.width()); ++k) {
        const double p = rho.probability(k);
        const double sigma = std::sqrt(std::max(p * (1 - p), 1e-12) / static_cast<double>(trajectories));
        EXPECT_NEAR(h.frequency(k), p, 4 * sigma + 1e-9) << "outcome " << k;
    }
}

}  // namespace

TEST(Channels, KrausCompleteness) {
    for (auto [t1, t2, t] : {std::tuple{55.72, 60.51, 928.0}, std::tuple{50.0, 100.0, 50.0},
                             std::tuple{1.0, 0.3, 2000.0}, std::tuple{1155.72, 1160.51, 598.0}}) {
        EXPECT_LT(completeness_error(thermal_relaxation_kraus(t1, t2, t)), 1e-12);
    }
    for (double l : {0.0, 1e-3, 0.3, 1.0}) EXPECT_LT(completeness_error(depolarizing_kraus(l)), 1e-12);
}

TEST(Channels, DampingProbability) {
    EXPECT_NEAR(damping_probability(55.72, 928), 0.0165168, 5e-8);
    EXPECT_DOUBLE_EQ(damping_probability(std::numeric_limits<double>::infinity(), 928), 0.0);
    EXPECT_DOUBLE_EQ(damping_probability(10, 0), 0.0);
}

TEST(Channels, DephasingProbability) {
    // T2 = 2 T1 leaves no pure dephasing.
    EXPECT_DOUBLE_EQ(dephasing_probability(50, 100, 500), 0.0);
    const double rate = 1 / 60.51 - 1 / (2 * 55.72);
    EXPECT_NEAR(dephasing_probability(55.72, 60.51, 928), (1 - std::exp(-0.928 * rate)) / 2, 1e-15);
    EXPECT_THROW(dephasing_probability(10, 30, 5), std::invalid_argument);
}

TEST(Channels, CoherenceDecaysAsT2) {
    // Off-diagonal of |+><+| after relaxation for time t shrinks by exp(-t / T2).
    const double t1 = 40, t2 = 55, t = 3000;
    const Kraus ks = thermal_relaxation_kraus(t1, t2, t);
    cplx off = 0;
    for (const auto &k : ks) {
        // (K rho K^dag)_{01} with rho = 1/2 [[1, 1], [1, 1]]
        const cplx a = k[0] + k[1], b = k[2] + k[3];
        off += a * std::conj(b) / 2.0;
    }
    EXPECT_NEAR(std::abs(off), 0.5 * std::exp(-t * 1e-3 / t2), 1e-12);
}

TEST(Model, ParseAndValidate) {
    const auto m = NoiseModel::parse("55.72,60.51,928,928,1e-3,1e-2");
    EXPECT_DOUBLE_EQ(m.t1_us, 55.72);
    EXPECT_DOUBLE_EQ(m.lambda2, 1e-2);
    EXPECT_TRUE(NoiseModel::parse("inf,inf,0,0,0,0").is_noiseless());
    EXPECT_TRUE(NoiseModel::noiseless().is_noiseless());
    EXPECT_FALSE(device_noise().is_noiseless());
    EXPECT_THROW(NoiseModel::parse("1,2,3"), ParseError);
    EXPECT_THROW(NoiseModel::parse("1,2,3,4,5,x"), ParseError);
    EXPECT_THROW(NoiseModel::parse("10,30,1,1,0,0"), std::invalid_argument);
    EXPECT_THROW(NoiseModel::parse("10,10,1,1,0,1.5"), std::invalid_argument);
    EXPECT_THROW(NoiseModel::parse("-1,1,1,1,0,0"), std::invalid_argument);
}

TEST(Model, Presets) {
    const auto d = device_noise();
    EXPECT_DOUBLE_EQ(d.t2_us, 60.51);
    EXPECT_DOUBLE_EQ(d.gate_time_2q_ns, 928);
    const auto t = threshold_noise();
    EXPECT_DOUBLE_EQ(t.t1_us, 1155.72);
    EXPECT_DOUBLE_EQ(t.lambda1, 2.7e-4);
    EXPECT_EQ(to_json(NoiseModel::noiseless())["t1_us"], "inf");
}

TEST(Trajectories, NoiselessMatchesIdealSampling) {
    const Circuit c = test_circuit();
    const std::vector<int> measured{0, 2};
    const auto a = run_noisy_trajectories(c, NoiseModel::noiseless(), measured, {4096, 64, 3});
    const auto b = sample_counts(run_statevector(c), measured, 4096, 3);
    EXPECT_EQ(a.counts, b.counts);
}

TEST(Trajectories, DampingOnlyMatchesDensityMatrix) {
    expect_matches_density_matrix(test_circuit(), {20, 40, 2000, 4000, 0, 0}, 40000);
}

TEST(Trajectories, DephasingAndDepolarizingMatchDensityMatrix) {
    expect_matches_density_matrix(test_circuit(), {30, 20, 1500, 3000, 0.05, 0.2}, 40000);
}

TEST(Trajectories, MultipleShotsPerTrajectory) {
    const Circuit c = test_circuit();
    const auto h = run_noisy_trajectories(c, {20, 30, 1000, 2000, 0.02, 0.1}, {0, 1, 2}, {10000, 1000, 4});
    EXPECT_EQ(h.total(), 10000u);
    EXPECT_EQ(h.shots, 10000u);
}

TEST(Trajectories, Deterministic) {
    const Circuit c = test_circuit();
    const NoiseModel m{20, 30, 1000, 2000, 0.02, 0.1};
    const auto a = run_noisy_trajectories(c, m, {0, 1, 2}, {2000, 2000, 8});
    const auto b = run_noisy_trajectories(c, m, {0, 1, 2}, {2000, 2000, 8});
    const auto d = run_noisy_trajectories(c, m, {0, 1, 2}, {2000, 2000, 9});
    EXPECT_EQ(a.counts, b.counts);
    EXPECT_NE(a.counts, d.counts);
}

TEST(Trajectories, Errors) {
    Circuit c(3);
    c.mcx({0, 1}, 2);
    const NoiseModel m = device_noise();
    EXPECT_THROW(run_noisy_trajectories(c, m, {0}, {10, 10, 0}), std::invalid_argument);
    const Circuit ok = test_circuit();
    EXPECT_THROW(run_noisy_trajectories(ok, m, {0}, {10, 20, 0}), std::invalid_argument);
    EXPECT_THROW(run_noisy_trajectories(ok, m, {}, {10, 10, 0}), std::invalid_argument);
    EXPECT_THROW(run_noisy_trajectories(ok, m, {5}, {10, 10, 0}), std::invalid_argument);
}
