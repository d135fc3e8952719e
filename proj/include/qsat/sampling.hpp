#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "qsat/statevector.hpp"

namespace qsat {

/// Sampled outcomes over a subset of qubits. Outcome bit j is the value read on measured[j].
struct Histogram {
    std::vector<int> measured;
    std::map<std::uint64_t, std::uint64_t> counts;
    std::uint64_t shots = 0;
    std::uint64_t seed = 0;

    /// Highest measured qubit first, so multi-register outcomes read (last register, ..., first).
    std::string bitstring(std::uint64_t outcome) const;
    double frequency(std::uint64_t outcome) const;
    /// Outcomes by descending count, ties by ascending outcome.
    std::vector<std::pair<std::uint64_t, std::uint64_t>> ranked() const;
    std::uint64_t total() const;
    void merge(const Histogram &other);
};

/// Inverse-CDF multinomial sampling with Philox stream `stream`; deterministic in (seed, stream).
Histogram sample_distribution(std::span<const double> probabilities, std::vector<int> measured, std::uint64_t shots,
                              std::uint64_t seed, std::uint64_t stream = 0);

/// Shot sampling of the marginal over `measured` (stream 0).
Histogram sample_counts(const StateVector &s, std::vector<int> measured, std::uint64_t shots, std::uint64_t seed);

/// How to read an outcome as variable values: measured bits are consecutive `bits`-wide
/// registers for `variables` in order.
struct Decoding {
    std::vector<std::string> variables;
    int bits = 1;
    std::int64_t offset = 0;
    std::set<std::uint64_t> solutions;  // packed outcomes
};

double solution_probability(const Histogram &h, const std::set<std::uint64_t> &solutions);

/// {"shots", "seed", "counts": {bitstring: k}, "decoded": [{<var>: v, ..., "count": k, "is_solution": b}],
///  "p_total_solutions"}; "decoded" lists variables last-first, e.g. Y before X.
nlohmann::ordered_json to_json(const Histogram &h, const Decoding *decoding = nullptr);

}  // namespace qsat
