#include "qsat/bruteforce.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "qsat/errors.hpp"

namespace qsat {

namespace {

bool compare(CmpOp op, std::int64_t a, std::int64_t b) {
    switch (op) {
        case CmpOp::LT:
            return a < b;
        case CmpOp::LE:
            return a <= b;
        case CmpOp::EQ:
            return a == b;
        case CmpOp::NE:
            return a != b;
        case CmpOp::GE:
            return a >= b;
        case CmpOp::GT:
            return a > b;
    }
    return false;
}

std::int64_t lookup(const std::map<std::string, std::int64_t> &env, const std::string &name) {
    auto it = env.find(name);
    if (it == env.end()) {
        throw std::invalid_argument("unbound variable '" + name + "'");
    }
    return it->second;
}

void check_counts(std::uint64_t total, std::uint64_t solutions) {
    if (solutions == 0) {
        throw std::domain_error("Grover predictions are undefined for M = 0");
    }
    if (solutions > total) {
        throw std::domain_error("M exceeds N");
    }
}

}  // namespace

std::uint64_t SolutionSet::pack(const Assignment &a, int bits) {
    std::uint64_t packed = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        packed |= a[i] << (i * bits);
    }
    return packed;
}

bool eval_clause(const Clause &c, const std::map<std::string, std::int64_t> &env) {
    std::int64_t lhs = lookup(env, c.lhs);
    std::int64_t rhs = c.rhs_is_variable() ? lookup(env, c.rhs_variable()) : c.rhs_constant();
    return compare(c.op, lhs, rhs);
}

bool eval_formula(const Formula &f, const Assignment &values) {
    for (const auto &c : f.clauses) {
        auto lhs = static_cast<std::int64_t>(values[f.variable_index(c.lhs)]);
        auto rhs = c.rhs_is_variable() ? static_cast<std::int64_t>(values[f.variable_index(c.rhs_variable())])
                                       : c.rhs_constant();
        if (!compare(c.op, lhs, rhs)) return false;
    }
    return true;
}

SolutionSet enumerate_solutions(const Formula &f) {
    const auto m = f.variables.size();
    const auto space_bits = static_cast<std::uint64_t>(m) * static_cast<std::uint64_t>(f.bits);
    if (space_bits > 24) {
        throw ResourceError("search space of 2^" + std::to_string(space_bits) + " points exceeds the 2^24 limit");
    }
    SolutionSet s;
    s.variables = f.variables;
    s.offset = f.offset;
    s.total_space = std::uint64_t{1} << space_bits;

    // Odometer with the first variable as the most significant digit, so results come
    // out lexicographic in variable order.
    Assignment values(m, 0);
    const std::uint64_t max = f.max_value();
    for (std::uint64_t step = 0; step < s.total_space; ++step) {
        if (eval_formula(f, values)) {
            s.assignments.push_back(values);
        }
        for (std::size_t i = m; i-- > 0;) {
            if (values[i] < max) {
                ++values[i];
                break;
            }
            values[i] = 0;
        }
    }
    return s;
}

double grover_success_probability(std::uint64_t total, std::uint64_t solutions, int iterations) {
    check_counts(total, solutions);
    if (iterations < 0) {
        throw std::domain_error("iteration count must be non-negative");
    }
    if (iterations == 0) {
        return static_cast<double>(solutions) / static_cast<double>(total);
    }
    double theta = std::asin(std::sqrt(static_cast<double>(solutions) / static_cast<double>(total)));
    double s = std::sin((2.0 * iterations + 1.0) * theta);
    return s * s;
}

int iteration_count(std::uint64_t total, std::uint64_t solutions) {
    check_counts(total, solutions);
    double k = std::numbers::pi / 4.0 * std::sqrt(static_cast<double>(total) / static_cast<double>(solutions));
    return std::max(1, static_cast<int>(std::floor(k)));
}

nlohmann::json to_json(const SolutionSet &s) {
    nlohmann::json order = nlohmann::json::array();
    for (std::size_t i = s.variables.size(); i-- > 0;) {
        order.push_back(s.variables[i]);
    }
    nlohmann::json rows = nlohmann::json::array();
    for (const auto &a : s.assignments) {
        nlohmann::json row = nlohmann::json::object();
        for (std::size_t i = 0; i < a.size(); ++i) {
            row[s.variables[i]] = static_cast<std::int64_t>(a[i]) + s.offset;
        }
        rows.push_back(std::move(row));
    }
    return {{"order", order}, {"total_space", s.total_space}, {"count", s.count()}, {"assignments", rows}};
}

}  // namespace qsat
