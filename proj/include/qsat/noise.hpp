#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "qsat/circuit.hpp"
#include "qsat/sampling.hpp"

namespace qsat {

/// Thermal relaxation plus depolarizing noise attached to gates. Times in microseconds
/// (T1, T2) and nanoseconds (gate times). Depolarizing convention: rho -> (1 - l) rho + l I/d.
struct NoiseModel {
    double t1_us = 0.0;
    double t2_us = 0.0;
    double gate_time_1q_ns = 0.0;
    double gate_time_2q_ns = 0.0;
    double lambda1 = 0.0;
    double lambda2 = 0.0;

    /// T1 = T2 = infinity, zero gate times, no depolarizing.
    static NoiseModel noiseless();
    /// "t1,t2,t1q,t2q,l1,l2"; "inf" allowed for T1/T2.
    static NoiseModel parse(const std::string &text);

    /// Throws std::invalid_argument when T2 > 2 T1, a time is not positive, or a lambda is outside [0, 1].
    void validate() const;
    bool is_noiseless() const;
};

/// Measured device calibration, and the improved regime where 3-bit problems become solvable.
NoiseModel device_noise();
NoiseModel threshold_noise();

nlohmann::ordered_json to_json(const NoiseModel &m);

using Kraus = std::vector<Mat2>;

/// Amplitude damping (gamma = 1 - exp(-t/T1)) followed by pure dephasing with
/// p = (1 - exp(-t/T_phi)) / 2, 1/T_phi = 1/T2 - 1/(2 T1). t in ns, T1/T2 in us.
Kraus thermal_relaxation_kraus(double t1_us, double t2_us, double t_ns);
double damping_probability(double t1_us, double t_ns);
double dephasing_probability(double t1_us, double t2_us, double t_ns);

/// Single-qubit depolarizing channel as {sqrt(1 - 3l/4) I, sqrt(l/4) X, Y, Z}.
Kraus depolarizing_kraus(double lambda);

struct TrajectoryOptions {
    std::uint64_t shots = 8192;
    std::uint64_t trajectories = 8192;  // shots are spread evenly over trajectories
    std::uint64_t seed = 0;
};

/// Monte Carlo wave-function simulation. Every single-qubit gate gets single-qubit
/// depolarizing then thermal relaxation; every CX gets two-qubit depolarizing then
/// relaxation on both qubits. Other gate kinds are rejected. Trajectory t draws from
/// Philox stream 1 + t, so results do not depend on scheduling.
Histogram run_noisy_trajectories(const Circuit &c, const NoiseModel &model, std::vector<int> measured,
                                 const TrajectoryOptions &options);

}  // namespace qsat
