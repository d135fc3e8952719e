#include "qsat/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "qsat/bruteforce.hpp"
#include "qsat/errors.hpp"
#include "qsat/grover.hpp"
#include "qsat/noise.hpp"
#include "qsat/sampling.hpp"
#include "qsat/statevector.hpp"
#include "qsat/transpiler.hpp"

namespace qsat {

namespace {

std::uint64_t default_shots() {
    if (const char *env = std::getenv("QSAT_SHOTS")) {
        char *end = nullptr;
        const unsigned long long v = std::strtoull(env, &end, 10);
        if (end && *end == '\0' && v > 0) return v;
        throw ParseError(std::string("QSAT_SHOTS must be a positive integer, got '") + env + "'", 0);
    }
    return 8192;
}

struct FormulaArgs {
    std::string text;
    int bits = 0;
    std::string domain;  // "lo,hi"

    void add(CLI::App *cmd) {
        cmd->add_option("--formula", text, "Conjunction such as \"(X < 8) & (Y = 4) & (X > Y)\"")->required();
        cmd->add_option("--bits", bits, "Bit width of every variable")->required()->check(CLI::Range(1, kMaxBits));
        cmd->add_option("--domain", domain, "Signed domain lo,hi (shifted to start at 0)");
    }

    Formula load(std::ostream &err) const {
        Formula f;
        if (domain.empty()) {
            f = parse_formula(text, bits);
        } else {
            const auto comma = domain.find(',');
            if (comma == std::string::npos) throw ParseError("--domain expects lo,hi", 0);
            std::int64_t lo = 0, hi = 0;
            try {
                lo = std::stoll(domain.substr(0, comma));
                hi = std::stoll(domain.substr(comma + 1));
            } catch (const std::exception &) {
                throw ParseError("--domain expects two integers lo,hi", 0);
            }
            f = normalize_domain(parse_formula(text, bits, {.signed_constants = true}), lo, hi);
        }
        for (const auto &w : degenerate_check(f)) err << "warning: " << w.message << "\n";
        return f;
    }
};

void write_file(const std::string &path, const std::string &content) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("cannot write '" + path + "'");
    os << content;
}

std::string fixed(double x, int digits = 4) {
    std::ostringstream os;
    os << std::fixed << std::setprecision(digits) << x;
    return os.str();
}

Decoding decoding_for(const Formula &f, const SolutionSet &sol) {
    Decoding d;
    d.variables = f.variables;
    d.bits = f.bits;
    d.offset = f.offset;
    for (const auto &a : sol.assignments) d.solutions.insert(SolutionSet::pack(a, f.bits));
    return d;
}

std::vector<std::int64_t> decode(const Decoding &d, std::uint64_t outcome) {
    std::vector<std::int64_t> v(d.variables.size());
    const std::uint64_t mask = (std::uint64_t{1} << d.bits) - 1;
    for (std::size_t i = 0; i < v.size(); ++i) {
        v[i] = static_cast<std::int64_t>((outcome >> (i * d.bits)) & mask) + d.offset;
    }
    return v;
}

std::string tuple_text(const std::vector<std::int64_t> &v) {
    std::string s = "(";
    for (std::size_t i = v.size(); i-- > 0;) {
        s += std::to_string(v[i]);
        if (i) s += ", ";
    }
    return s + ")";
}

std::string order_text(const std::vector<std::string> &vars) {
    std::string s = "(";
    for (std::size_t i = vars.size(); i-- > 0;) {
        s += vars[i];
        if (i) s += ", ";
    }
    return s + ")";
}

std::string histogram_csv(const Histogram &h, const Decoding &d) {
    std::ostringstream os;
    os << "bitstring";
    for (std::size_t i = d.variables.size(); i-- > 0;) os << "," << d.variables[i];
    os << ",probability,is_solution\n";
    for (const auto &[k, v] : h.ranked()) {
        os << h.bitstring(k);
        auto vals = decode(d, k);
        for (std::size_t i = vals.size(); i-- > 0;) os << "," << vals[i];
        os << "," << fixed(h.frequency(k), 6) << "," << (d.solutions.count(k) ? 1 : 0) << "\n";
    }
    return os.str();
}

bool top_matches(const Histogram &h, const std::set<std::uint64_t> &solutions) {
    auto ranked = h.ranked();
    if (ranked.size() < solutions.size()) return false;
    for (std::size_t i = 0; i < solutions.size(); ++i) {
        if (!solutions.count(ranked[i].first)) return false;
    }
    return true;
}

void check_restored(const StateVector &s, const RegisterLayout &layout) {
    const double p = s.probability_all_zero(layout.work_qubits());
    if (std::abs(p - 1.0) > 1e-9) {
        throw InvariantError("work registers not restored to |0> (probability " + fixed(p, 12) + ")");
    }
}

Histogram simulate(const Circuit &ir, const RegisterLayout &layout, const std::vector<int> &measured, bool optimized,
                   const std::string &noise, std::uint64_t shots, std::uint64_t trajectories, std::uint64_t seed,
                   Circuit &executed) {
    if (noise.empty()) {
        executed = optimized ? optimize(ir) : ir;
        if (executed.width() > kMaxStatevectorWidth) {
            throw ResourceError("circuit needs " + std::to_string(executed.width()) + " qubits; the limit is " +
                                std::to_string(kMaxStatevectorWidth));
        }
        StateVector s = run_statevector(executed);
        check_restored(s, layout);
        return sample_counts(s, measured, shots, seed);
    }
    const NoiseModel model = NoiseModel::parse(noise);
    if (ir.width() > kMaxNoisyWidth) {
        throw ResourceError("noisy simulation needs " + std::to_string(ir.width()) + " qubits; the limit is " +
                            std::to_string(kMaxNoisyWidth) + ". Use fewer bits or clauses.");
    }
    executed = optimized ? optimize(ir) : baseline(ir);
    TrajectoryOptions opt;
    opt.shots = shots;
    opt.trajectories = trajectories ? trajectories : shots;
    opt.seed = seed;
    return run_noisy_trajectories(executed, model, measured, opt);
}

struct SolveArgs {
    FormulaArgs formula;
    int iterations = 1;
    std::uint64_t shots = 0;
    std::uint64_t seed = 0;
    std::string optimize = "off";
    std::string noise;
    std::uint64_t trajectories = 0;
    std::string mode = "mcx";
    std::string out, qasm, csv;
};

int cmd_solve(const SolveArgs &a, std::ostream &out, std::ostream &err) {
    const Formula f = a.formula.load(err);
    const SolutionSet sol = enumerate_solutions(f);
    GroverPlan plan = make_plan(f, a.iterations, kickback_from_name(a.mode));
    plan.shots = a.shots;
    plan.seed = a.seed;
    const Circuit ir = build_grover_circuit(plan);
    const auto measured = measured_qubits(plan);

    Circuit executed;
    Histogram h = simulate(ir, plan.layout, measured, a.optimize == "on", a.noise, a.shots, a.trajectories, a.seed,
                           executed);
    const Decoding dec = decoding_for(f, sol);
    const double p_tot = solution_probability(h, dec.solutions);
    const bool has_solutions = sol.count() > 0;
    const double analytic =
        has_solutions ? grover_success_probability(sol.total_space, sol.count(), a.iterations) : 0.0;
    const bool matches = has_solutions && top_matches(h, dec.solutions);

    out << "formula     " << render_formula(f) << "  (bits " << f.bits << ", width " << plan.layout.width
        << ", iterations " << a.iterations << ")\n";
    out << "brute force M = " << sol.count() << " of N = " << sol.total_space;
    if (has_solutions) {
        out << ", " << order_text(f.variables) << " =";
        for (const auto &s : sol.assignments) {
            std::vector<std::int64_t> v(s.begin(), s.end());
            for (auto &x : v) x += f.offset;
            out << " " << tuple_text(v);
        }
    }
    out << "\n";
    if (!has_solutions) out << "no solutions: nothing is marked, the distribution stays near uniform\n";
    const std::size_t top = std::min<std::size_t>(h.counts.size(), std::max<std::size_t>(8, sol.count()));
    out << "top outcomes " << order_text(f.variables) << "\n";
    auto ranked = h.ranked();
    for (std::size_t i = 0; i < top; ++i) {
        const auto [k, v] = ranked[i];
        out << "  " << h.bitstring(k) << "  " << std::setw(12) << std::left << tuple_text(decode(dec, k))
            << std::right << std::setw(7) << v << "  " << fixed(h.frequency(k)) << (dec.solutions.count(k) ? "  *" : "")
            << "\n";
    }
    out << "P_tot " << fixed(p_tot) << "  analytic " << fixed(analytic) << "  shots " << h.shots << "\n";
    if (has_solutions && !matches) {
        out << "note: the " << sol.count() << " most frequent outcomes are not exactly the brute-force solutions\n";
    }

    if (!a.out.empty()) {
        auto j = to_json(h, &dec);
        j["formula"] = render_formula(f);
        j["bits"] = f.bits;
        j["iterations"] = a.iterations;
        j["optimize"] = a.optimize;
        if (!a.noise.empty()) j["noise"] = to_json(NoiseModel::parse(a.noise));
        j["p_analytic"] = analytic;
        j["top_matches_solutions"] = matches;
        j["solutions"] = nlohmann::ordered_json::parse(to_json(sol).dump());
        write_file(a.out, j.dump(2) + "\n");
    }
    if (!a.csv.empty()) write_file(a.csv, histogram_csv(h, dec));
    if (!a.qasm.empty()) {
        const Circuit exported = a.optimize == "on" ? executed : baseline(ir);
        write_file(a.qasm, to_qasm(exported));
    }
    return kExitOk;
}

struct CheckArgs {
    FormulaArgs formula;
    std::uint64_t shots = 0;
    std::uint64_t seed = 0;
    std::string optimize = "off";
    std::string noise;
    std::uint64_t trajectories = 0;
    std::string out;
};

std::string verdict(std::uint64_t ones, std::uint64_t shots) {
    const double p = static_cast<double>(ones) / static_cast<double>(shots);
    const double n = static_cast<double>(shots);
    const double sigma = std::sqrt(std::max(p * (1 - p), 1.0 / n) / n);
    if (p < 4 * sigma) return "UNSAT";
    if (1 - p < 4 * sigma) return "TAUTOLOGY";
    return "SAT";
}

int cmd_check_sat(const CheckArgs &a, std::ostream &out, std::ostream &err) {
    const Formula f = a.formula.load(err);
    const RegisterLayout layout = build_layout(f);
    const Circuit ir = build_satcheck_circuit(f, layout);
    const std::vector<int> measured{layout.flag};
    Circuit executed;
    Histogram h =
        simulate(ir, layout, measured, a.optimize == "on", a.noise, a.shots, a.trajectories, a.seed, executed);
    const std::uint64_t ones = h.counts.count(1) ? h.counts.at(1) : 0;
    const double p = static_cast<double>(ones) / static_cast<double>(h.shots);
    const SolutionSet sol = enumerate_solutions(f);
    const double expected = static_cast<double>(sol.count()) / static_cast<double>(sol.total_space);
    const std::string v = verdict(ones, h.shots);

    out << "formula  " << render_formula(f) << "  (bits " << f.bits << ", width " << layout.width << ")\n";
    out << "P(flag=1) " << fixed(p) << "  expected M/N " << fixed(expected) << "  shots " << h.shots << "\n";
    out << "verdict  " << v << "\n";
    if (!a.out.empty()) {
        nlohmann::ordered_json j{{"formula", render_formula(f)},
                                 {"bits", f.bits},
                                 {"shots", h.shots},
                                 {"seed", h.seed},
                                 {"flag_ones", ones},
                                 {"p_flag", p},
                                 {"p_expected", expected},
                                 {"verdict", v}};
        write_file(a.out, j.dump(2) + "\n");
    }
    return kExitOk;
}

struct CostArgs {
    FormulaArgs formula;
    int iterations = 1;
    std::string optimize = "both";
    std::string target = "grover";
    std::string basis = "u3_cx";
    std::string out;
};

int cmd_cost(const CostArgs &a, std::ostream &out, std::ostream &err) {
    const Formula f = a.formula.load(err);
    const RegisterLayout layout = build_layout(f);
    Circuit ir;
    if (a.target == "grover") {
        ir = build_grover_circuit(make_plan(f, a.iterations));
    } else if (a.target == "oracle") {
        ir = build_oracle(f, layout);
    } else {
        ir = build_satcheck_circuit(f, layout);
    }
    const Basis basis = basis_from_name(a.basis);
    nlohmann::ordered_json j{{"formula", render_formula(f)}, {"target", a.target}, {"width", layout.width}};
    auto report = [&](const char *label, const Circuit &c) {
        const Circuit counted = basis == Basis::U3_CX ? c : simplify(unroll_to_basis(c, Basis::U3_CX));
        CostReport r = cost_report(counted);
        out << std::left << std::setw(10) << label << std::right << " u3 " << std::setw(6) << r.n_u3 << "  cx "
            << std::setw(6) << r.n_cx << "  cost " << std::setw(7) << r.cost << "  depth " << r.depth;
        if (basis != Basis::U3_CX) out << "  (" << basis_name(basis) << " gates " << c.size() << ")";
        out << "\n";
        auto rj = to_json(r);
        if (basis != Basis::U3_CX) rj["basis_gates"] = c.size();
        j[label] = rj;
        return r;
    };
    out << "formula  " << render_formula(f) << "  (bits " << f.bits << ", " << f.clauses.size() << " clauses)\n";
    out << "width    " << layout.width << "\n";
    std::optional<CostReport> base, opt;
    if (a.optimize != "on") base = report("baseline", baseline(ir, basis));
    if (a.optimize != "off") opt = report("optimized", optimize(ir, basis));
    if (base && opt) {
        const double red = cost_reduction(*base, *opt);
        out << "reduction " << fixed(100 * red, 1) << "%\n";
        j["reduction"] = red;
    }
    if (!a.out.empty()) write_file(a.out, j.dump(2) + "\n");
    return kExitOk;
}

struct SweepArgs {
    FormulaArgs formula;
    std::string start = "55.72,60.51,928,928,1e-3,1e-2";
    std::string step = "10,10,-3,-3,-6.6e-6,-6.6e-5";
    int steps = 110;
    int every = 10;
    double target = 0.15;
    std::uint64_t shots = 0;
    std::uint64_t trajectories = 0;
    std::uint64_t seed = 0;
    std::string out, csv;
};

std::array<double, 6> parse_six(const std::string &text, const char *what) {
    std::array<double, 6> v{};
    std::stringstream ss(text);
    std::string item;
    std::size_t i = 0;
    while (std::getline(ss, item, ',')) {
        if (i == 6) break;
        try {
            std::size_t used = 0;
            v[i] = std::stod(item, &used);
            if (used != item.size()) throw std::invalid_argument(item);
        } catch (const std::exception &) {
            throw ParseError(std::string(what) + ": '" + item + "' is not a number", i);
        }
        ++i;
    }
    if (i != 6 || std::getline(ss, item, ',')) {
        throw ParseError(std::string(what) + " needs 6 comma-separated values t1,t2,t1q,t2q,l1,l2", 0);
    }
    return v;
}

int cmd_noise_sweep(const SweepArgs &a, std::ostream &out, std::ostream &err) {
    if (a.steps <= 0 || a.every <= 0) throw ParseError("--steps and --every must be positive", 0);
    const Formula f = a.formula.load(err);
    const SolutionSet sol = enumerate_solutions(f);
    GroverPlan plan = make_plan(f, 1);
    if (plan.layout.width > kMaxNoisyWidth) {
        throw ResourceError("noisy simulation needs " + std::to_string(plan.layout.width) + " qubits; the limit is " +
                            std::to_string(kMaxNoisyWidth));
    }
    const Circuit c = optimize(build_grover_circuit(plan));
    const auto measured = measured_qubits(plan);
    const Decoding dec = decoding_for(f, sol);
    const auto s0 = parse_six(a.start, "--start");
    const auto ds = parse_six(a.step, "--step");

    nlohmann::ordered_json rows = nlohmann::ordered_json::array();
    std::ostringstream csv;
    csv << "step,t1_us,t2_us,t1q_ns,t2q_ns,lambda1,lambda2,p_tot,top_matches\n";
    out << "step      T1      T2   t1q   t2q   lambda1   lambda2   P_tot\n";
    std::optional<int> first_hit;
    for (int s = 0; s <= a.steps; s += a.every) {
        NoiseModel m;
        m.t1_us = s0[0] + s * ds[0];
        m.t2_us = s0[1] + s * ds[1];
        m.gate_time_1q_ns = std::max(0.0, s0[2] + s * ds[2]);
        m.gate_time_2q_ns = std::max(0.0, s0[3] + s * ds[3]);
        m.lambda1 = std::clamp(s0[4] + s * ds[4], 0.0, 1.0);
        m.lambda2 = std::clamp(s0[5] + s * ds[5], 0.0, 1.0);
        TrajectoryOptions opt;
        opt.shots = a.shots;
        opt.trajectories = a.trajectories ? a.trajectories : a.shots;
        opt.seed = a.seed;
        Histogram h = run_noisy_trajectories(c, m, measured, opt);
        const double p = solution_probability(h, dec.solutions);
        const bool matches = sol.count() > 0 && top_matches(h, dec.solutions);
        if (!first_hit && p >= a.target) first_hit = s;
        out << std::setw(4) << s << std::setw(8) << fixed(m.t1_us, 2) << std::setw(8) << fixed(m.t2_us, 2)
            << std::setw(6) << fixed(m.gate_time_1q_ns, 0) << std::setw(6) << fixed(m.gate_time_2q_ns, 0)
            << std::setw(10) << std::scientific << std::setprecision(2) << m.lambda1 << std::setw(10) << m.lambda2
            << std::defaultfloat << "   " << fixed(p) << (matches ? "  solutions on top" : "") << "\n";
        csv << s << "," << m.t1_us << "," << m.t2_us << "," << m.gate_time_1q_ns << "," << m.gate_time_2q_ns << ","
            << m.lambda1 << "," << m.lambda2 << "," << fixed(p, 6) << "," << (matches ? 1 : 0) << "\n";
        auto row = to_json(m);
        row["step"] = s;
        row["p_tot"] = p;
        row["top_matches"] = matches;
        rows.push_back(row);
    }
    if (first_hit) {
        out << "target P_tot >= " << fixed(a.target, 3) << " first met at step " << *first_hit << "\n";
    } else {
        out << "target P_tot >= " << fixed(a.target, 3) << " not met\n";
    }
    if (!a.out.empty()) {
        nlohmann::ordered_json j{{"formula", render_formula(f)},
                                 {"target_ptot", a.target},
                                 {"threshold_step", first_hit ? nlohmann::ordered_json(*first_hit) : nullptr},
                                 {"rows", rows}};
        write_file(a.out, j.dump(2) + "\n");
    }
    if (!a.csv.empty()) write_file(a.csv, csv.str());
    return kExitOk;
}

}  // namespace

int run_cli(int argc, const char *const *argv, std::ostream &out, std::ostream &err) {
    CLI::App app{"Grover-search solver for conjunctive integer inequalities"};
    app.require_subcommand(1);
    std::uint64_t shots = 0;
    try {
        shots = default_shots();
    } catch (const ParseError &e) {
        err << "error: " << e.what() << "\n";
        return kExitParse;
    }

    SolveArgs solve;
    solve.shots = shots;
    auto *s = app.add_subcommand("solve", "Build, simulate and sample a Grover circuit");
    solve.formula.add(s);
    s->add_option("--iterations", solve.iterations, "Grover iterations")->check(CLI::Range(1, 1000));
    s->add_option("--shots", solve.shots, "Shots (default 8192 or $QSAT_SHOTS)")->check(CLI::PositiveNumber);
    s->add_option("--seed", solve.seed, "RNG seed");
    s->add_option("--optimize", solve.optimize, "Simulate the optimized circuit")->check(CLI::IsMember({"on", "off"}));
    s->add_option("--noise", solve.noise, "t1_us,t2_us,t1q_ns,t2q_ns,lambda1,lambda2");
    s->add_option("--trajectories", solve.trajectories, "Noisy trajectories (default = shots)")
        ->check(CLI::PositiveNumber);
    s->add_option("--mode", solve.mode, "Phase kickback")->check(CLI::IsMember({"mcx", "mcz"}));
    s->add_option("--out", solve.out, "Histogram JSON");
    s->add_option("--qasm", solve.qasm, "OpenQASM 2.0 export");
    s->add_option("--csv", solve.csv, "Probability bars CSV");

    CheckArgs check;
    check.shots = shots;
    auto *c = app.add_subcommand("check-sat", "Measure the flag: UNSAT, SAT or TAUTOLOGY");
    check.formula.add(c);
    c->add_option("--shots", check.shots, "Shots")->check(CLI::PositiveNumber);
    c->add_option("--seed", check.seed, "RNG seed");
    c->add_option("--optimize", check.optimize, "Simulate the optimized circuit")->check(CLI::IsMember({"on", "off"}));
    c->add_option("--noise", check.noise, "t1_us,t2_us,t1q_ns,t2q_ns,lambda1,lambda2");
    c->add_option("--trajectories", check.trajectories, "Noisy trajectories")->check(CLI::PositiveNumber);
    c->add_option("--out", check.out, "Report JSON");

    CostArgs cost;
    auto *k = app.add_subcommand("cost", "Gate counts and cost n_u3 + 10 n_cx");
    cost.formula.add(k);
    k->add_option("--iterations", cost.iterations, "Grover iterations")->check(CLI::Range(1, 1000));
    k->add_option("--optimize", cost.optimize, "on, off or both")->check(CLI::IsMember({"on", "off", "both"}));
    k->add_option("--target", cost.target, "grover, oracle or satcheck")
        ->check(CLI::IsMember({"grover", "oracle", "satcheck"}));
    k->add_option("--basis", cost.basis, "u3_cx or device")->check(CLI::IsMember({"u3_cx", "device"}));
    k->add_option("--out", cost.out, "Report JSON");

    SweepArgs sweep;
    sweep.shots = shots;
    auto *w = app.add_subcommand("noise-sweep", "P_tot along a schedule of noise parameters");
    sweep.formula.add(w);
    w->add_option("--start", sweep.start, "Starting t1,t2,t1q,t2q,l1,l2");
    w->add_option("--step", sweep.step, "Per-step change of t1,t2,t1q,t2q,l1,l2");
    w->add_option("--steps", sweep.steps, "Number of steps");
    w->add_option("--every", sweep.every, "Evaluate every k-th step");
    w->add_option("--target-ptot", sweep.target, "Success criterion");
    w->add_option("--shots", sweep.shots, "Shots per step")->check(CLI::PositiveNumber);
    w->add_option("--trajectories", sweep.trajectories, "Trajectories per step")->check(CLI::PositiveNumber);
    w->add_option("--seed", sweep.seed, "RNG seed");
    w->add_option("--out", sweep.out, "Sweep JSON");
    w->add_option("--csv", sweep.csv, "Sweep CSV");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitParse;
    }

    try {
        if (s->parsed()) return cmd_solve(solve, out, err);
        if (c->parsed()) return cmd_check_sat(check, out, err);
        if (k->parsed()) return cmd_cost(cost, out, err);
        return cmd_noise_sweep(sweep, out, err);
    } catch (const ParseError &e) {
        err << "parse error: " << e.what() << "\n";
        return kExitParse;
    } catch (const RangeError &e) {
        err << "parse error: " << e.what() << "\n";
        return kExitParse;
    } catch (const ResourceError &e) {
        err << "resource limit: " << e.what() << "\n";
        return kExitResource;
    } catch (const InvariantError &e) {
        err << "invariant violated: " << e.what() << "\n";
        return kExitInvariant;
    } catch (const std::invalid_argument &e) {
        err << "invalid input: " << e.what() << "\n";
        return kExitParse;
    } catch (const std::exception &e) {
        err << "error: " << e.what() << "\n";
        return kExitFailure;
    }
}

}  // namespace qsat
