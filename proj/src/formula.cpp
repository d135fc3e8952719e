#include "qsat/formula.hpp"

#include <algorithm>
#include <cctype>
#include <limits>
#include <sstream>

#include "qsat/errors.hpp"

namespace qsat {

namespace {

constexpr std::pair<CmpOp, std::string_view> kOpTable[] = {
    {CmpOp::LT, "<"}, {CmpOp::LE, "<="}, {CmpOp::EQ, "="}, {CmpOp::NE, "!="}, {CmpOp::GE, ">="}, {CmpOp::GT, ">"},
};

class Parser {
   public:
    Parser(std::string_view text, int bits, ParseOptions options) : text_(text), bits_(bits), options_(options) {
    }

    Formula parse() {
        if (bits_ < 1 || bits_ > kMaxBits) {
            throw RangeError("bit width must be in [1, " + std::to_string(kMaxBits) + "], got " + std::to_string(bits_));
        }
        Formula f;
        f.bits = bits_;
        parse_clause(f);
        skip_ws();
        while (pos_ < text_.size()) {
            expect('&');
            parse_clause(f);
            skip_ws();
        }
        return f;
    }

   private:
    void skip_ws() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) {
            ++pos_;
        }
    }

    void expect(char c) {
        skip_ws();
        if (pos_ >= text_.size()) {
            throw ParseError(std::string("expected '") + c + "' but reached end of input", pos_);
        }
        if (text_[pos_] != c) {
            throw ParseError(std::string("expected '") + c + "' but found '" + text_[pos_] + "'", pos_);
        }
        ++pos_;
    }

    static bool ident_start(char c) {
        return std::isalpha(static_cast<unsigned char>(c)) || c == '_';
    }
    static bool ident_char(char c) {
        return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
    }

    std::string parse_ident() {
        skip_ws();
        if (pos_ >= text_.size() || !ident_start(text_[pos_])) {
            throw ParseError("expected variable name", pos_);
        }
        std::size_t start = pos_;
        while (pos_ < text_.size() && ident_char(text_[pos_])) {
            ++pos_;
        }
        return std::string(text_.substr(start, pos_ - start));
    }

    CmpOp parse_op() {
        skip_ws();
        std::size_t start = pos_;
        while (pos_ < text_.size() && std::string_view("<>=!").find(text_[pos_]) != std::string_view::npos) {
            ++pos_;
        }
        if (start == pos_) {
            throw ParseError("expected comparison operator", start);
        }
        auto symbol = text_.substr(start, pos_ - start);
        auto op = op_from_symbol(symbol);
        if (!op) {
            throw ParseError("unknown operator '" + std::string(symbol) + "'", start);
        }
        return *op;
    }

    Operand parse_operand() {
        skip_ws();
        if (pos_ < text_.size() && ident_start(text_[pos_])) {
            return parse_ident();
        }
        std::size_t start = pos_;
        bool negative = false;
        if (options_.signed_constants && pos_ < text_.size() && text_[pos_] == '-') {
            negative = true;
            ++pos_;
        }
        if (pos_ >= text_.size() || !std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
            throw ParseError("expected variable name or unsigned integer", start);
        }
        std::int64_t value = 0;
        constexpr std::int64_t kLimit = std::int64_t{1} << 40;
        while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
            value = value * 10 + (text_[pos_] - '0');
            if (value > kLimit) {
                throw ParseError("integer literal too large", start);
            }
            ++pos_;
        }
        if (negative) {
            value = -value;
        }
        if (!options_.signed_constants && value > static_cast<std::int64_t>((std::uint64_t{1} << bits_) - 1)) {
            throw ParseError("constant " + std::to_string(value) + " out of range for " + std::to_string(bits_) +
                                 "-bit variables (max " + std::to_string((std::uint64_t{1} << bits_) - 1) + ")",
                             start);
        }
        return value;
    }

    void declare(Formula &f, const std::string &name) {
        if (std::find(f.variables.begin(), f.variables.end(), name) == f.variables.end()) {
            f.variables.push_back(name);
        }
    }

    void parse_clause(Formula &f) {
        expect('(');
        Clause c;
        c.lhs = parse_ident();
        declare(f, c.lhs);
        c.op = parse_op();
        c.rhs = parse_operand();
        if (c.rhs_is_variable()) {
            declare(f, c.rhs_variable());
        }
        expect(')');
        f.clauses.push_back(std::move(c));
    }

    std::string_view text_;
    int bits_;
    ParseOptions options_;
    std::size_t pos_ = 0;
};

std::string render_operand(const Operand &o) {
    if (const auto *name = std::get_if<std::string>(&o)) {
        return *name;
    }
    return std::to_string(std::get<std::int64_t>(o));
}

std::optional<bool> constant_truth(CmpOp op, std::int64_t c, std::int64_t max) {
    switch (op) {
        case CmpOp::LT:
            if (c <= 0) return false;
            if (c > max) return true;
            break;
        case CmpOp::LE:
            if (c < 0) return false;
            if (c >= max) return true;
            break;
        case CmpOp::GT:
            if (c >= max) return false;
            if (c < 0) return true;
            break;
        case CmpOp::GE:
            if (c > max) return false;
            if (c <= 0) return true;
            break;
        case CmpOp::EQ:
            if (c < 0 || c > max) return false;
            break;
        case CmpOp::NE:
            if (c < 0 || c > max) return true;
            break;
    }
    return std::nullopt;
}

}  // namespace

std::string_view op_symbol(CmpOp op) {
    for (auto [o, s] : kOpTable) {
        if (o == op) return s;
    }
    return "?";
}

std::optional<CmpOp> op_from_symbol(std::string_view symbol) {
    for (auto [o, s] : kOpTable) {
        if (s == symbol) return o;
    }
    return std::nullopt;
}

std::size_t Formula::variable_index(std::string_view name) const {
    auto it = std::find(variables.begin(), variables.end(), name);
    if (it == variables.end()) {
        throw std::invalid_argument("unknown variable '" + std::string(name) + "'");
    }
    return static_cast<std::size_t>(it - variables.begin());
}

Formula parse_formula(std::string_view text, int bits, ParseOptions options) {
    return Parser(text, bits, options).parse();
}

std::string render_formula(const Formula &f) {
    std::ostringstream out;
    for (std::size_t i = 0; i < f.clauses.size(); ++i) {
        const auto &c = f.clauses[i];
        if (i) out << " & ";
        out << '(' << c.lhs << ' ' << op_symbol(c.op) << ' ' << render_operand(c.rhs) << ')';
    }
    return out.str();
}

void validate(const Formula &f) {
    if (f.bits < 1 || f.bits > kMaxBits) {
        throw RangeError("bit width must be in [1, " + std::to_string(kMaxBits) + "]");
    }
    if (f.clauses.empty()) {
        throw std::invalid_argument("formula has no clauses");
    }
    auto max = static_cast<std::int64_t>(f.max_value());
    for (const auto &c : f.clauses) {
        f.variable_index(c.lhs);
        if (c.rhs_is_variable()) {
            f.variable_index(c.rhs_variable());
        } else if (c.rhs_constant() < 0 || c.rhs_constant() > max) {
            throw RangeError("constant " + std::to_string(c.rhs_constant()) + " outside [0, " + std::to_string(max) +
                             "]");
        }
    }
}

Formula normalize_domain(const Formula &f, std::int64_t lo, std::int64_t hi) {
    if (lo >= hi) {
        throw std::invalid_argument("domain requires lo < hi");
    }
    if (static_cast<std::uint64_t>(hi - lo) > f.max_value()) {
        throw RangeError("domain [" + std::to_string(lo) + ", " + std::to_string(hi) + "] does not fit in " +
                         std::to_string(f.bits) + " bits");
    }
    Formula out = f;
    out.offset = f.offset + lo;
    auto max = static_cast<std::int64_t>(f.max_value());
    for (auto &c : out.clauses) {
        if (c.rhs_is_variable()) continue;
        std::int64_t v = c.rhs_constant();
        if (v < lo || v > hi) {
            throw RangeError("constant " + std::to_string(v) + " outside domain [" + std::to_string(lo) + ", " +
                             std::to_string(hi) + "]");
        }
        std::int64_t shifted = v - lo;
        if (shifted < 0 || shifted > max) {
            throw RangeError("shifted constant " + std::to_string(shifted) + " not representable");
        }
        c.rhs = shifted;
    }
    // Register values above hi - lo fall outside the original domain; exclude them.
    auto span = hi - lo;
    if (span < max) {
        for (const auto &v : f.variables) {
            out.clauses.push_back(Clause{v, CmpOp::LE, span});
        }
    }
    return out;
}

std::vector<ClauseWarning> degenerate_check(const Formula &f) {
    std::vector<ClauseWarning> warnings;
    auto max = static_cast<std::int64_t>(f.max_value());
    for (std::size_t i = 0; i < f.clauses.size(); ++i) {
        const auto &c = f.clauses[i];
        std::optional<bool> truth;
        if (c.rhs_is_variable()) {
            if (c.rhs_variable() == c.lhs) {
                truth = c.op == CmpOp::LE || c.op == CmpOp::GE || c.op == CmpOp::EQ;
            }
        } else {
            truth = constant_truth(c.op, c.rhs_constant(), max);
        }
        if (!truth) continue;
        ClauseWarning w;
        w.clause_index = i;
        w.kind = *truth ? ClauseWarning::Kind::Tautological : ClauseWarning::Kind::Unsatisfiable;
        w.message = "clause " + std::to_string(i) + " (" + c.lhs + " " + std::string(op_symbol(c.op)) + " " +
                    render_operand(c.rhs) + ") is " + (*truth ? "tautological" : "unsatisfiable") + " over [0, " +
                    std::to_string(max) + "]";
        warnings.push_back(std::move(w));
    }
    return warnings;
}

nlohmann::json to_json(const Formula &f) {
    nlohmann::json clauses = nlohmann::json::array();
    for (const auto &c : f.clauses) {
        nlohmann::json jc{{"lhs", c.lhs}, {"op", std::string(op_symbol(c.op))}};
        if (c.rhs_is_variable()) {
            jc["rhs"] = c.rhs_variable();
        } else {
            jc["rhs"] = c.rhs_constant();
        }
        clauses.push_back(std::move(jc));
    }
    return {{"bits", f.bits}, {"variables", f.variables}, {"clauses", clauses}, {"offset", f.offset}};
}

Formula formula_from_json(const nlohmann::json &j) {
    Formula f;
    f.bits = j.at("bits").get<int>();
    f.variables = j.at("variables").get<std::vector<std::string>>();
    f.offset = j.value("offset", std::int64_t{0});
    for (const auto &jc : j.at("clauses")) {
        Clause c;
        c.lhs = jc.at("lhs").get<std::string>();
        auto op = op_from_symbol(jc.at("op").get<std::string>());
        if (!op) {
            throw std::invalid_argument("unknown operator '" + jc.at("op").get<std::string>() + "'");
        }
        c.op = *op;
        const auto &rhs = jc.at("rhs");
        if (rhs.is_string()) {
            c.rhs = rhs.get<std::string>();
        } else {
            c.rhs = rhs.get<std::int64_t>();
        }
        f.clauses.push_back(std::move(c));
    }
    validate(f);
    return f;
}

}  // namespace qsat
