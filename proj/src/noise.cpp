#include "qsat/noise.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "qsat/errors.hpp"
#include "qsat/rng.hpp"
#include "qsat/statevector.hpp"

namespace qsat {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Pauli index: 0 = I, 1 = X, 2 = Y, 3 = Z.
const Mat2 kPauli[4] = {
    {1.0, 0.0, 0.0, 1.0},
    {0.0, 1.0, 1.0, 0.0},
    {0.0, cplx(0, -1), cplx(0, 1), 0.0},
    {1.0, 0.0, 0.0, -1.0},
};

Mat2 mul(const Mat2 &a, const Mat2 &b) {
    return {a[0] * b[0] + a[1] * b[2], a[0] * b[1] + a[1] * b[3], a[2] * b[0] + a[3] * b[2],
            a[2] * b[1] + a[3] * b[3]};
}

struct Step {
    bool two_qubit = false;
    int a = 0;  // qubit (1q) or control (CX)
    int b = 0;  // target (CX)
    Mat2 u{};   // 1q unitary
};

struct Channel {
    double s = 1.0;      // sqrt(1 - gamma)
    double jump = 0.0;   // sqrt(gamma) / sqrt(1 - gamma): K1 K0^-1 on |1>
    double p_z = 0.0;    // dephasing probability
    double lambda = 0.0;
};

// Noise drawn ahead of time for one gate.
struct Events {
    int pauli = 0;  // 1q: 0..3; CX: 4 * pauli(control) + pauli(target)
    bool z_a = false;
    bool z_b = false;
    bool any() const {
        return pauli != 0 || z_a || z_b;
    }
};

class Trajectory {
   public:
    Trajectory(const std::vector<Step> &steps, const Channel &c1, const Channel &c2)
        : steps_(steps), c1_(c1), c2_(c2) {
    }

    // Applies gate i with its events and the K0 half of the relaxation channels. Returns
    // the squared norm after the first channel and after all channels.
    std::pair<double, double> apply(StateVector &s, std::size_t i, const Events &ev) const {
        const Step &st = steps_[i];
        if (!st.two_qubit) return apply_1q(s, st, c1_, ev);
        return apply_cx(s, st, c2_, ev);
    }

    // K1 on qubit q of a state whose relaxation K0 was already applied on q; renormalizes.
    static void jump(StateVector &s, int q, double factor) {
        const std::size_t stride = std::size_t{1} << q;
        auto a = s.amplitudes();
        double norm = 0.0;
        for (std::size_t base = 0; base < a.size(); base += 2 * stride) {
            for (std::size_t j = base; j < base + stride; ++j) {
                a[j] = a[j + stride] * factor;
                a[j + stride] = 0.0;
                norm += std::norm(a[j]);
            }
        }
        scale(s, 1.0 / std::sqrt(norm));
    }

    static void scale(StateVector &s, double f) {
        for (auto &x : s.amplitudes()) x *= f;
    }

    // Multiplies the |1> half of qubit q by f; returns the new squared norm.
    static double scale_one(StateVector &s, int q, double f) {
        const std::uint64_t bit = std::uint64_t{1} << q;
        auto a = s.amplitudes();
        double norm = 0.0;
        for (std::size_t j = 0; j < a.size(); ++j) {
            if (j & bit) a[j] *= f;
            norm += std::norm(a[j]);
        }
        return norm;
    }

   private:
    static std::pair<double, double> apply_1q(StateVector &s, const Step &st, const Channel &ch, const Events &ev) {
        Mat2 m = mul(kPauli[ev.pauli], st.u);
        if (ev.z_a) m = mul(kPauli[3], m);
        m[2] *= ch.s;
        m[3] *= ch.s;
        const std::size_t stride = std::size_t{1} << st.a;
        auto a = s.amplitudes();
        double norm = 0.0;
        for (std::size_t base = 0; base < a.size(); base += 2 * stride) {
            for (std::size_t j = base; j < base + stride; ++j) {
                const cplx a0 = a[j], a1 = a[j + stride];
                a[j] = m[0] * a0 + m[1] * a1;
                a[j + stride] = m[2] * a0 + m[3] * a1;
                norm += std::norm(a[j]) + std::norm(a[j + stride]);
            }
        }
        return {norm, norm};
    }

    // CX, Pauli pair, dephasing and both K0 factors fused into one monomial map on
    // each 4-amplitude block. Local index bit 0 = control, bit 1 = target.
    static std::pair<double, double> apply_cx(StateVector &s, const Step &st, const Channel &ch, const Events &ev) {
        int dest[4];
        cplx coef[4];
        for (int i = 0; i < 4; ++i) {
            int d = (i & 1) ? (i ^ 2) : i;
            cplx c = 1.0;
            const int pa = ev.pauli >> 2, pb = ev.pauli & 3;
            for (int k = 0; k < 2; ++k) {
                const int p = k == 0 ? pa : pb;
                const int bit = 1 << k;
                const bool one = d & bit;
                if (p == 1) {
                    d ^= bit;
                } else if (p == 2) {
                    c *= one ? cplx(0, -1) : cplx(0, 1);
                    d ^= bit;
                } else if (p == 3 && one) {
                    c = -c;
                }
            }
            if (ev.z_a && (d & 1)) c = -c;
            if (ev.z_b && (d & 2)) c = -c;
            dest[i] = d;
            coef[i] = c;
        }
        double fa[4], fab[4];
        for (int i = 0; i < 4; ++i) {
            const double ka = (dest[i] & 1) ? ch.s : 1.0;
            const double kb = (dest[i] & 2) ? ch.s : 1.0;
            fa[i] = ka * ka;
            fab[i] = ka * ka * kb * kb;
            coef[i] *= ka * kb;
        }
        const std::uint64_t ma = std::uint64_t{1} << st.a, mb = std::uint64_t{1} << st.b;
        const std::uint64_t off[4] = {0, ma, mb, ma | mb};
        const int lo = std::min(st.a, st.b), hi = std::max(st.a, st.b);
        auto a = s.amplitudes();
        double na = 0.0, nab = 0.0;
        const std::size_t blocks = a.size() >> 2;
        for (std::size_t r = 0; r < blocks; ++r) {
            // Spread r around zero bits at positions lo and hi.
            std::size_t j = ((r >> lo) << (lo + 1)) | (r & ((std::size_t{1} << lo) - 1));
            j = ((j >> hi) << (hi + 1)) | (j & ((std::size_t{1} << hi) - 1));
            cplx in[4];
            for (int i = 0; i < 4; ++i) in[i] = a[j | off[i]];
            for (int i = 0; i < 4; ++i) {
                const double p = std::norm(in[i]);
                na += p * fa[i];
                nab += p * fab[i];
                a[j | off[dest[i]]] = coef[i] * in[i];
            }
        }
        return {na, nab};
    }

    const std::vector<Step> &steps_;
    Channel c1_, c2_;
};

std::vector<Step> compile_steps(const Circuit &c) {
    std::vector<Step> steps;
    for (const auto &g : c.gates()) {
        if (g.kind == GateKind::Barrier) continue;
        Step st;
        if (g.kind == GateKind::CX) {
            st.two_qubit = true;
            st.a = g.qubits[0];
            st.b = g.qubits[1];
        } else if (g.is_single_qubit()) {
            st.a = g.qubits[0];
            st.u = single_qubit_matrix(g);
        } else {
            throw std::invalid_argument("gate '" + std::string(gate_name(g.kind)) +
                                        "' is outside the noisy basis (single-qubit gates and cx); unroll first");
        }
        steps.push_back(st);
    }
    return steps;
}

Channel make_channel(const NoiseModel &m, double t_ns, double lambda) {
    Channel ch;
    const double gamma = damping_probability(m.t1_us, t_ns);
    ch.s = std::sqrt(1.0 - gamma);
    ch.jump = ch.s > 0 ? std::sqrt(gamma) / ch.s : 0.0;
    ch.p_z = dephasing_probability(m.t1_us, m.t2_us, t_ns);
    ch.lambda = lambda;
    return ch;
}

Events draw_events(const Step &st, const Channel &ch, Philox4x32 &rng) {
    Events ev;
    if (ch.lambda > 0) {
        const int paulis = st.two_qubit ? 16 : 4;
        const double each = ch.lambda / paulis;
        const double u = rng.uniform();
        const double keep = 1.0 - each * (paulis - 1);
        if (u >= keep) ev.pauli = std::min(paulis - 1, 1 + static_cast<int>((u - keep) / each));
    }
    if (ch.p_z > 0) {
        ev.z_a = rng.uniform() < ch.p_z;
        if (st.two_qubit) ev.z_b = rng.uniform() < ch.p_z;
    }
    return ev;
}

void sample_into(Histogram &h, const std::vector<double> &probs, std::uint64_t shots, Philox4x32 &rng) {
    if (shots == 0) return;
    std::vector<double> cdf(probs.size());
    double acc = 0.0;
    for (std::size_t i = 0; i < probs.size(); ++i) cdf[i] = (acc += probs[i]);
    for (std::uint64_t k = 0; k < shots; ++k) {
        const double u = rng.uniform() * acc;
        auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
        std::size_t idx = std::min<std::size_t>(static_cast<std::size_t>(it - cdf.begin()), cdf.size() - 1);
        while (idx > 0 && probs[idx] == 0.0) --idx;
        ++h.counts[idx];
    }
}

std::vector<double> normalized_marginal(const StateVector &s, std::span<const int> measured) {
    auto p = marginal_probabilities(s, measured);
    double t = 0.0;
    for (double x : p) t += x;
    for (double &x : p) x /= t;
    return p;
}

}  // namespace

NoiseModel NoiseModel::noiseless() {
    NoiseModel m;
    m.t1_us = kInf;
    m.t2_us = kInf;
    return m;
}

NoiseModel NoiseModel::parse(const std::string &text) {
    std::vector<double> v;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item == "inf") {
            v.push_back(kInf);
            continue;
        }
        std::size_t used = 0;
        double x = 0;
        try {
            x = std::stod(item, &used);
        } catch (const std::exception &) {
            used = 0;
        }
        if (used == 0 || used != item.size()) {
            throw ParseError("noise parameter '" + item + "' is not a number", v.size());
        }
        v.push_back(x);
    }
    if (v.size() != 6) {
        throw ParseError("noise needs 6 comma-separated values t1,t2,t1q,t2q,l1,l2 (got " + std::to_string(v.size()) +
                             ")",
                         0);
    }
    NoiseModel m{v[0], v[1], v[2], v[3], v[4], v[5]};
    m.validate();
    return m;
}

void NoiseModel::validate() const {
    if (!(t1_us > 0) || !(t2_us > 0)) throw std::invalid_argument("T1 and T2 must be positive");
    if (!(gate_time_1q_ns >= 0) || !(gate_time_2q_ns >= 0)) throw std::invalid_argument("gate times must be >= 0");
    if (t2_us > 2 * t1_us) throw std::invalid_argument("T2 must not exceed 2 T1");
    for (double l : {lambda1, lambda2}) {
        if (!(l >= 0 && l <= 1)) throw std::invalid_argument("depolarizing parameters must lie in [0, 1]");
    }
}

bool NoiseModel::is_noiseless() const {
    return lambda1 == 0 && lambda2 == 0 && damping_probability(t1_us, gate_time_1q_ns) == 0 &&
           damping_probability(t1_us, gate_time_2q_ns) == 0 &&
           dephasing_probability(t1_us, t2_us, gate_time_1q_ns) == 0 &&
           dephasing_probability(t1_us, t2_us, gate_time_2q_ns) == 0;
}

NoiseModel device_noise() {
    return {55.72, 60.51, 928.0, 928.0, 1e-3, 1e-2};
}

NoiseModel threshold_noise() {
    return {1155.72, 1160.51, 598.0, 598.0, 2.7e-4, 2.7e-3};
}

nlohmann::ordered_json to_json(const NoiseModel &m) {
    auto num = [](double x) -> nlohmann::ordered_json {
        if (std::isinf(x)) return "inf";
        return x;
    };
    return {{"t1_us", num(m.t1_us)},         {"t2_us", num(m.t2_us)},     {"gate_time_1q_ns", m.gate_time_1q_ns},
            {"gate_time_2q_ns", m.gate_time_2q_ns}, {"lambda1", m.lambda1}, {"lambda2", m.lambda2}};
}

double damping_probability(double t1_us, double t_ns) {
    if (std::isinf(t1_us) || t_ns == 0) return 0.0;
    return -std::expm1(-(t_ns * 1e-3) / t1_us);
}

double dephasing_probability(double t1_us, double t2_us, double t_ns) {
    if (t2_us > 2 * t1_us) throw std::invalid_argument("T2 must not exceed 2 T1");
    if (t_ns == 0 || std::isinf(t2_us)) return 0.0;
    const double rate = 1.0 / t2_us - (std::isinf(t1_us) ? 0.0 : 1.0 / (2 * t1_us));
    if (rate <= 0) return 0.0;
    return -std::expm1(-(t_ns * 1e-3) * rate) / 2;
}

Kraus thermal_relaxation_kraus(double t1_us, double t2_us, double t_ns) {
    if (!(t1_us > 0) || !(t2_us > 0) || t_ns < 0) throw std::invalid_argument("invalid relaxation parameters");
    const double g = damping_probability(t1_us, t_ns);
    const double p = dephasing_probability(t1_us, t2_us, t_ns);
    const Mat2 k0{1.0, 0.0, 0.0, std::sqrt(1 - g)};
    const Mat2 k1{0.0, std::sqrt(g), 0.0, 0.0};
    Kraus out;
    for (const Mat2 &k : {k0, k1}) {
        Mat2 a = k, b = mul(kPauli[3], k);
        for (auto &x : a) x *= std::sqrt(1 - p);
        for (auto &x : b) x *= std::sqrt(p);
        out.push_back(a);
        out.push_back(b);
    }
    return out;
}

Kraus depolarizing_kraus(double lambda) {
    if (!(lambda >= 0 && lambda <= 1)) throw std::invalid_argument("lambda outside [0, 1]");
    Kraus out;
    for (int p = 0; p < 4; ++p) {
        Mat2 k = kPauli[p];
        const double w = p == 0 ? std::sqrt(1 - 3 * lambda / 4) : std::sqrt(lambda / 4);
        for (auto &x : k) x *= w;
        out.push_back(k);
    }
    return out;
}

Histogram run_noisy_trajectories(const Circuit &c, const NoiseModel &model, std::vector<int> measured,
                                 const TrajectoryOptions &opt) {
    model.validate();
    if (measured.empty()) throw std::invalid_argument("measurement set is empty");
    for (int q : measured) {
        if (q < 0 || q >= c.width()) throw std::invalid_argument("measured qubit outside circuit width");
    }
    if (opt.shots == 0 || opt.trajectories == 0) throw std::invalid_argument("shots and trajectories must be >= 1");
    if (opt.trajectories > opt.shots) throw std::invalid_argument("trajectories must not exceed shots");
    const auto steps = compile_steps(c);

    Histogram h;
    h.measured = measured;
    h.shots = opt.shots;
    h.seed = opt.seed;

    if (model.is_noiseless()) {
        StateVector s = run_statevector(c);
        auto probs = marginal_probabilities(s, measured);
        Histogram ideal = sample_distribution(probs, measured, opt.shots, opt.seed, 0);
        return ideal;
    }

    const Channel c1 = make_channel(model, model.gate_time_1q_ns, model.lambda1);
    const Channel c2 = make_channel(model, model.gate_time_2q_ns, model.lambda2);
    const Trajectory traj(steps, c1, c2);
    const std::size_t n = steps.size();

    // Event-free path, shared by every trajectory up to its first event: squared norm
    // after each gate plus periodic state checkpoints.
    const std::size_t state_bytes = (std::size_t{1} << c.width()) * sizeof(cplx);
    const std::size_t max_checkpoints = std::clamp<std::size_t>((std::size_t{256} << 20) / state_bytes, 1, 64);
    const std::size_t stride = std::max<std::size_t>(1, (n + max_checkpoints - 1) / max_checkpoints);
    std::vector<StateVector> checkpoints;
    std::vector<double> path_norm(n);
    const Events none;
    StateVector clean(c.width());
    for (std::size_t i = 0; i < n; ++i) {
        if (i % stride == 0) checkpoints.push_back(clean);
        path_norm[i] = traj.apply(clean, i, none).second;
    }
    const std::vector<double> clean_probs = normalized_marginal(clean, measured);

    const std::uint64_t base = opt.shots / opt.trajectories;
    const std::uint64_t extra = opt.shots % opt.trajectories;
    std::vector<Events> events(n);
    for (std::uint64_t t = 0; t < opt.trajectories; ++t) {
        Philox4x32 rng(opt.seed, 1 + t);
        const std::uint64_t shots = base + (t < extra ? 1 : 0);
        std::size_t first = n;
        for (std::size_t i = 0; i < n; ++i) {
            events[i] = draw_events(steps[i], steps[i].two_qubit ? c2 : c1, rng);
            if (first == n && events[i].any()) first = i;
        }
        double r = rng.uniform();
        // First gate whose relaxation would jump on the event-free path.
        auto it = std::find_if(path_norm.begin(), path_norm.end(), [&](double v) { return v < r; });
        first = std::min(first, static_cast<std::size_t>(it - path_norm.begin()));
        if (first == n) {
            sample_into(h, clean_probs, shots, rng);
            continue;
        }
        const std::size_t cp = first / stride;
        StateVector s = checkpoints[cp];
        for (std::size_t i = cp * stride; i < first; ++i) traj.apply(s, i, none);
        for (std::size_t i = first; i < n; ++i) {
            const Step &st = steps[i];
            const Channel &ch = st.two_qubit ? c2 : c1;
            auto [na, nab] = traj.apply(s, i, events[i]);
            if (nab >= r) continue;
            if (!st.two_qubit) {
                Trajectory::jump(s, st.a, ch.jump);
                r = rng.uniform();
                continue;
            }
            if (na < r) {
                // Jump on the control; the target channel then runs on the renormalized state.
                Trajectory::scale_one(s, st.b, 1.0 / ch.s);
                Trajectory::jump(s, st.a, ch.jump);
                r = rng.uniform();
                if (Trajectory::scale_one(s, st.b, ch.s) < r) {
                    Trajectory::jump(s, st.b, ch.jump);
                    r = rng.uniform();
                }
            } else {
                Trajectory::jump(s, st.b, ch.jump);
                r = rng.uniform();
            }
        }
        sample_into(h, normalized_marginal(s, measured), shots, rng);
    }
    return h;
}

}  // namespace qsat
