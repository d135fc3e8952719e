#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "qsat/formula.hpp"

namespace qsat {

/// Values indexed by position in Formula::variables.
using Assignment = std::vector<std::uint64_t>;

struct SolutionSet {
    std::vector<std::string> variables;
    std::vector<Assignment> assignments;  // lexicographic in variable order
    std::uint64_t total_space = 0;        // (2^n)^m
    std::int64_t offset = 0;

    std::uint64_t count() const {
        return assignments.size();
    }
    /// Packs an assignment into the measured-register integer (variable i occupies bits [i*n, (i+1)*n)).
    static std::uint64_t pack(const Assignment &a, int bits);
};

inline constexpr std::uint64_t kEnumerationLimit = std::uint64_t{1} << 24;

bool eval_clause(const Clause &c, const std::map<std::string, std::int64_t> &env);
bool eval_formula(const Formula &f, const Assignment &values);

/// Exhaustive scan of the (2^n)^m assignment space; throws ResourceError beyond 2^24 points.
SolutionSet enumerate_solutions(const Formula &f);

/// sin^2((2k+1) asin(sqrt(M/N))): probability of measuring a solution after k Grover iterations.
double grover_success_probability(std::uint64_t total, std::uint64_t solutions, int iterations);

/// max(1, floor((pi/4) sqrt(N/M))).
int iteration_count(std::uint64_t total, std::uint64_t solutions);

/// Solutions printed in the (last variable, ..., first variable) order used by the CLI,
/// e.g. (Y, X) for a formula that mentions X first. Values include the domain offset.
nlohmann::json to_json(const SolutionSet &s);

}  // namespace qsat
