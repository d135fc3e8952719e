#include "qsat/sampling.hpp"

#include <algorithm>
#include <stdexcept>

#include "qsat/rng.hpp"

namespace qsat {

namespace {

inline std::uint32_t mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t &hi) {
    std::uint64_t p = static_cast<std::uint64_t>(a) * b;
    hi = static_cast<std::uint32_t>(p >> 32);
    return static_cast<std::uint32_t>(p);
}

}  // namespace

Philox4x32::Block Philox4x32::generate(Block ctr, std::array<std::uint32_t, 2> key) {
    constexpr std::uint32_t kM0 = 0xD2511F53u, kM1 = 0xCD9E8D57u;
    constexpr std::uint32_t kW0 = 0x9E3779B9u, kW1 = 0xBB67AE85u;
    for (int round = 0; round < 10; ++round) {
        std::uint32_t hi0, hi1;
        std::uint32_t lo0 = mulhilo(kM0, ctr[0], hi0);
        std::uint32_t lo1 = mulhilo(kM1, ctr[2], hi1);
        ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
        key[0] += kW0;
        key[1] += kW1;
    }
    return ctr;
}

std::uint32_t Philox4x32::next_u32() {
    if (used_ == 4) {
        Block ctr = {static_cast<std::uint32_t>(index_), static_cast<std::uint32_t>(index_ >> 32),
                     static_cast<std::uint32_t>(stream_), static_cast<std::uint32_t>(stream_ >> 32)};
        buffer_ = generate(ctr, {static_cast<std::uint32_t>(seed_), static_cast<std::uint32_t>(seed_ >> 32)});
        ++index_;
        used_ = 0;
    }
    return buffer_[used_++];
}

std::uint64_t Philox4x32::next_u64() {
    std::uint64_t lo = next_u32();
    std::uint64_t hi = next_u32();
    return (hi << 32) | lo;
}

double Philox4x32::uniform() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

std::string Histogram::bitstring(std::uint64_t outcome) const {
    std::string s(measured.size(), '0');
    for (std::size_t j = 0; j < measured.size(); ++j) {
        if ((outcome >> j) & 1u) s[measured.size() - 1 - j] = '1';
    }
    return s;
}

double Histogram::frequency(std::uint64_t outcome) const {
    auto it = counts.find(outcome);
    if (it == counts.end() || shots == 0) return 0.0;
    return static_cast<double>(it->second) / static_cast<double>(shots);
}

std::vector<std::pair<std::uint64_t, std::uint64_t>> Histogram::ranked() const {
    std::vector<std::pair<std::uint64_t, std::uint64_t>> out(counts.begin(), counts.end());
    std::stable_sort(out.begin(), out.end(), [](const auto &a, const auto &b) { return a.second > b.second; });
    return out;
}

std::uint64_t Histogram::total() const {
    std::uint64_t t = 0;
    for (const auto &[k, v] : counts) t += v;
    return t;
}

void Histogram::merge(const Histogram &other) {
    if (other.measured != measured) {
        throw std::invalid_argument("cannot merge histograms over different qubits");
    }
    for (const auto &[k, v] : other.counts) counts[k] += v;
    shots += other.shots;
}

Histogram sample_distribution(std::span<const double> probabilities, std::vector<int> measured, std::uint64_t shots,
                              std::uint64_t seed, std::uint64_t stream) {
    if (measured.empty()) {
        throw std::invalid_argument("measurement set is empty");
    }
    if (shots == 0) {
        throw std::invalid_argument("shots must be at least 1");
    }
    std::vector<double> cdf(probabilities.size());
    double acc = 0.0;
    for (std::size_t i = 0; i < probabilities.size(); ++i) {
        acc += probabilities[i];
        cdf[i] = acc;
    }
    Histogram h;
    h.measured = std::move(measured);
    h.shots = shots;
    h.seed = seed;
    Philox4x32 rng(seed, stream);
    for (std::uint64_t s = 0; s < shots; ++s) {
        double u = rng.uniform() * acc;
        auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
        std::size_t k = std::min<std::size_t>(static_cast<std::size_t>(it - cdf.begin()), cdf.size() - 1);
        // Never report an outcome of zero probability because of rounding at the top of the CDF.
        while (k > 0 && probabilities[k] == 0.0) --k;
        ++h.counts[k];
    }
    return h;
}

Histogram sample_counts(const StateVector &s, std::vector<int> measured, std::uint64_t shots, std::uint64_t seed) {
    for (int q : measured) {
        if (q < 0 || q >= s.width()) throw std::invalid_argument("measured qubit outside state width");
    }
    auto probs = marginal_probabilities(s, measured);
    return sample_distribution(probs, std::move(measured), shots, seed, 0);
}

double solution_probability(const Histogram &h, const std::set<std::uint64_t> &solutions) {
    std::uint64_t hits = 0;
    for (const auto &[k, v] : h.counts) {
        if (solutions.count(k)) hits += v;
    }
    return h.shots ? static_cast<double>(hits) / static_cast<double>(h.shots) : 0.0;
}

nlohmann::ordered_json to_json(const Histogram &h, const Decoding *decoding) {
    nlohmann::ordered_json counts = nlohmann::ordered_json::object();
    for (const auto &[k, v] : h.ranked()) counts[h.bitstring(k)] = v;
    nlohmann::ordered_json out{{"shots", h.shots}, {"seed", h.seed}, {"measured", h.measured}, {"counts", counts}};
    if (decoding) {
        nlohmann::ordered_json decoded = nlohmann::ordered_json::array();
        const std::uint64_t mask = (std::uint64_t{1} << decoding->bits) - 1;
        for (const auto &[k, v] : h.ranked()) {
            nlohmann::ordered_json row;
            for (std::size_t i = decoding->variables.size(); i-- > 0;) {
                auto value = static_cast<std::int64_t>((k >> (i * decoding->bits)) & mask) + decoding->offset;
                row[decoding->variables[i]] = value;
            }
            row["count"] = v;
            row["is_solution"] = decoding->solutions.count(k) > 0;
            decoded.push_back(row);
        }
        out["decoded"] = decoded;
        out["p_total_solutions"] = solution_probability(h, decoding->solutions);
    }
    return out;
}

}  // namespace qsat
