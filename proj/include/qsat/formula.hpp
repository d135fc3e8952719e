#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <json.hpp>

namespace qsat {

enum class CmpOp { LT, LE, EQ, NE, GE, GT };

std::string_view op_symbol(CmpOp op);
std::optional<CmpOp> op_from_symbol(std::string_view symbol);

/// Right-hand side of a clause: a variable name or an integer constant.
using Operand = std::variant<std::string, std::int64_t>;

struct Clause {
    std::string lhs;
    CmpOp op = CmpOp::LT;
    Operand rhs;

    bool rhs_is_variable() const {
        return std::holds_alternative<std::string>(rhs);
    }
    const std::string &rhs_variable() const {
        return std::get<std::string>(rhs);
    }
    std::int64_t rhs_constant() const {
        return std::get<std::int64_t>(rhs);
    }

    bool operator==(const Clause &) const = default;
};

/// A conjunction of comparisons over unsigned integers that all share one bit width.
///
/// Variables are kept in order of first appearance; that order fixes the register
/// layout. `offset` records a domain shift applied by normalize_domain: a solution
/// value v of the stored formula corresponds to v + offset in the original problem.
struct Formula {
    int bits = 1;
    std::vector<std::string> variables;
    std::vector<Clause> clauses;
    std::int64_t offset = 0;

    std::size_t variable_index(std::string_view name) const;
    std::uint64_t max_value() const {
        return (std::uint64_t{1} << bits) - 1;
    }

    bool operator==(const Formula &) const = default;
};

struct ParseOptions {
    /// Accept negative constants and skip the [0, 2^n) range check. Such a formula
    /// must go through normalize_domain before it can be compiled.
    bool signed_constants = false;
};

inline constexpr int kMaxBits = 16;

/// Grammar (whitespace-insensitive):
///   formula := clause ('&' clause)*
///   clause  := '(' ident op (ident | uint) ')'
///   op      := '<' | '<=' | '=' | '!=' | '>=' | '>'
Formula parse_formula(std::string_view text, int bits, ParseOptions options = {});

/// Canonical text form; parse_formula(render_formula(f), f.bits) == f (offset aside).
std::string render_formula(const Formula &f);

/// Throws RangeError/std::invalid_argument if `f` breaks a structural invariant.
void validate(const Formula &f);

/// Shift a problem over [lo, hi] onto [0, hi - lo]. Constants move by -lo,
/// variable-vs-variable clauses are unchanged, and offset becomes lo. When hi - lo
/// is below 2^n - 1, a bound clause (V <= hi - lo) is appended per variable.
Formula normalize_domain(const Formula &f, std::int64_t lo, std::int64_t hi);

struct ClauseWarning {
    enum class Kind { Unsatisfiable, Tautological };
    std::size_t clause_index = 0;
    Kind kind = Kind::Unsatisfiable;
    std::string message;
};

/// Clauses that are constant-valued over the whole domain, e.g. (X < 0), (X >= 0), (X = X).
std::vector<ClauseWarning> degenerate_check(const Formula &f);

nlohmann::json to_json(const Formula &f);
Formula formula_from_json(const nlohmann::json &j);

}  // namespace qsat
