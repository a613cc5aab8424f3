// Batch front end: exact trace evaluation, identity suites, Toda simulation.

#include "htalg/checks.hpp"
#include "htalg/serialization.hpp"
#include "htalg/toda.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <string>

namespace {

using namespace htalg;

int log_level() {
    const char* env = std::getenv("HT_ALGEBRA_LOG");
    if (!env) return 0;
    std::string v(env);
    if (v == "debug") return 2;
    if (v == "info") return 1;
    return 0;
}

void log_info(const std::string& msg) {
    if (log_level() >= 1) std::cerr << "[htalg] " << msg << "\n";
}

struct ParseError : std::runtime_error {
    std::size_t pos;
    ParseError(const std::string& what, std::size_t at)
        : std::runtime_error(what + " at position " + std::to_string(at)), pos(at) {}
};

/// Recursive descent over: integers, rationals p/q, tau(l), T^n(.),
/// Delta(.), Dbar(.), dtau(.), + - * /, parentheses. Division requires the
/// divisor to be a polynomial with integer roots.
class ExprParser {
public:
    explicit ExprParser(std::string src) : s_(std::move(src)) {}

    KElement parse() {
        KElement e = expr();
        skip_ws();
        if (pos_ != s_.size()) throw ParseError("trailing input", pos_);
        return e;
    }

private:
    std::string s_;
    std::size_t pos_ = 0;

    void skip_ws() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }
    bool eat(char c) {
        skip_ws();
        if (pos_ < s_.size() && s_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }
    bool peek_word(const std::string& w) {
        skip_ws();
        return s_.compare(pos_, w.size(), w) == 0;
    }
    bool eat_word(const std::string& w) {
        if (!peek_word(w)) return false;
        pos_ += w.size();
        return true;
    }
    long integer() {
        skip_ws();
        std::size_t start = pos_;
        if (pos_ < s_.size() && (s_[pos_] == '-' || s_[pos_] == '+')) ++pos_;
        while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
        if (pos_ == start || (pos_ == start + 1 && !std::isdigit(static_cast<unsigned char>(s_[start]))))
            throw ParseError("expected integer", start);
        return std::stol(s_.substr(start, pos_ - start));
    }

    KElement expr() {
        KElement acc = term();
        for (;;) {
            skip_ws();
            if (eat('+')) acc = acc + term();
            else if (eat('-')) acc = acc - term();
            else return acc;
        }
    }

    KElement term() {
        KElement acc = factor();
        for (;;) {
            skip_ws();
            if (eat('*')) acc = k_mul(acc, factor());
            else if (eat('/')) acc = divide(acc, factor());
            else return acc;
        }
    }

    KElement divide(const KElement& num, const KElement& den) {
        if (!den.is_polynomial())
            throw std::domain_error("division only by polynomials with integer roots");
        XPoly d = czpol_to_xpoly(den.pol());
        if (d.is_zero()) throw std::domain_error("division by zero");
        std::map<long, long> roots = integer_roots_complete(d);  // throws on non-integral roots
        Rational lead = d.coeff(d.degree());
        RationalForm inv;
        inv.numerator = CzpolElement::tau(0, Rational(1) / lead);
        inv.den_roots = roots;
        return k_mul(num, k_normalize(inv));
    }

    KElement factor() {
        skip_ws();
        if (eat('-')) return factor() * Rational(-1);
        return atom();
    }

    KElement atom() {
        skip_ws();
        std::size_t at = pos_;
        if (eat('(')) {
            KElement e = expr();
            if (!eat(')')) throw ParseError("expected ')'", pos_);
            return e;
        }
        if (eat_word("tau")) {
            if (!eat('(')) throw ParseError("expected '(' after tau", pos_);
            long l = integer();
            if (!eat(')')) throw ParseError("expected ')'", pos_);
            if (l < 0) throw ParseError("tau takes a nonnegative index", at);
            return KElement(CzpolElement::tau(l));
        }
        if (eat_word("T^")) {
            long n = integer();
            if (!eat('(')) throw ParseError("expected '(' after T^n", pos_);
            KElement e = expr();
            if (!eat(')')) throw ParseError("expected ')'", pos_);
            return k_shift(e, n);
        }
        if (eat_word("T(")) {
            KElement e = expr();
            if (!eat(')')) throw ParseError("expected ')'", pos_);
            return k_shift(e, 1);
        }
        if (eat_word("Delta(")) {
            KElement e = expr();
            if (!eat(')')) throw ParseError("expected ')'", pos_);
            return ht_act_k(HtElement::delta(), e);
        }
        if (eat_word("Dbar(")) {
            KElement e = expr();
            if (!eat(')')) throw ParseError("expected ')'", pos_);
            return ht_act_k(HtElement::delta_bar(), e);
        }
        if (eat_word("dtau(")) {
            KElement e = expr();
            if (!eat(')')) throw ParseError("expected ')'", pos_);
            return dtau_act_k(e);
        }
        if (pos_ < s_.size() && (std::isdigit(static_cast<unsigned char>(s_[pos_])))) {
            long n = integer();
            return KElement(CzpolElement::tau(0, Rational(n)));
        }
        throw ParseError("expected expression", at);
    }
};

int cmd_trace(const std::string& expr_text) {
    try {
        ExprParser p(expr_text);
        KElement e = p.parse();
        log_info("parsed: " + e.str());
        std::cout << trace(e).str() << "\n";
        return 0;
    } catch (const ParseError& pe) {
        std::cerr << "parse error: " << pe.what() << "\n";
        return 2;
    } catch (const std::exception& ex) {
        std::cerr << "error: " << ex.what() << "\n";
        return 2;
    }
}

int cmd_identities(const std::string& suite, const std::string& algebra, long window,
                   const std::string& out_path) {
    SuiteResult result;
    if (suite == "hopf") result = run_suite_hopf(window > 0 ? window : 6);
    else if (suite == "sequences") result = run_suite_sequences(window > 0 ? window : 20);
    else if (suite == "localization") result = run_suite_localization(window > 0 ? window : 8);
    else if (suite == "distributions") result = run_suite_distributions(window > 0 ? window : 5);
    else if (suite == "conformal") result = run_suite_conformal(algebra.empty() ? "ctoda" : algebra,
                                                                window > 0 ? window : 3);
    else if (suite == "toda-symbolic") result = run_suite_toda_symbolic();
    else if (suite == "vertex") result = run_suite_vertex(algebra.empty() ? "vtoda" : algebra,
                                                          window > 0 ? window : 4);
    else {
        std::cerr << "unknown suite: " << suite << "\n";
        return 2;
    }
    std::string text = result.to_json().dump(2) + "\n";
    if (out_path.empty()) {
        std::cout << text;
    } else {
        std::ofstream f(out_path);
        f << text;
    }
    log_info("suite " + result.suite + (result.pass() ? " passed" : " failed"));
    return result.pass() ? 0 : 1;
}

int cmd_toda_sim(const SimConfig& cfg, const std::string& out_path) {
    if (cfg.n < 2) {
        std::cerr << "config error: N must be at least 2\n";
        return 2;
    }
    if (cfg.dt <= 0 || cfg.steps < 0 || cfg.kmax < 1 || cfg.kmax > cfg.n) {
        std::cerr << "config error: need dt > 0, steps >= 0, 1 <= kmax <= N\n";
        return 2;
    }
    try {
        std::string csv = simulate_csv(cfg);
        if (out_path.empty()) {
            std::cout << csv;
        } else {
            std::ofstream f(out_path, std::ios::binary);
            f << csv;
            log_info("trajectory written to " + out_path);
        }
        return 0;
    } catch (const DivergenceError& de) {
        std::cerr << "divergence: " << de.what() << "\n";
        return 1;
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"exact difference-Hopf calculus and Toda lattice toolkit"};
    app.require_subcommand(1);

    std::string expr_text, trace_json;
    auto* trace_cmd = app.add_subcommand("trace", "evaluate the trace of an expression exactly");
    trace_cmd->add_option("expr", expr_text, "expression, e.g. \"tau(1)/tau(2)\"");
    trace_cmd->add_option("--json", trace_json, "path of a serialized element to trace instead");

    std::string suite, algebra, out_path, format = "json";
    long window = 0;
    auto* id_cmd = app.add_subcommand("identities", "run an identity suite and report JSON");
    id_cmd->add_option("suite", suite,
                       "hopf | sequences | localization | distributions | conformal | toda-symbolic | vertex")
        ->required();
    id_cmd->add_option("--algebra", algebra, "conformal/vertex algebra name");
    id_cmd->add_option("--window", window, "index window / shift bound");
    id_cmd->add_option("--out", out_path, "output path (default stdout)");
    id_cmd->add_option("--format", format, "json");

    SimConfig cfg;
    std::string topology = "periodic", sim_out, config_path;
    auto* sim_cmd = app.add_subcommand("toda-sim", "integrate the finite Toda lattice and track traces");
    sim_cmd->add_option("--n", cfg.n, "lattice size");
    sim_cmd->add_option("--dt", cfg.dt, "time step");
    sim_cmd->add_option("--steps", cfg.steps, "number of steps");
    sim_cmd->add_option("--kmax", cfg.kmax, "number of traces tr(L^k) to track");
    sim_cmd->add_option("--topology", topology, "open | periodic");
    sim_cmd->add_option("--seed", cfg.seed, "random seed for the initial state");
    sim_cmd->add_option("--out", sim_out, "CSV output path (default stdout)");
    sim_cmd->add_option("--config", config_path, "JSON config {n, dt, steps, topology, seed, kmax}");

    CLI11_PARSE(app, argc, argv);

    if (trace_cmd->parsed()) {
        if (!trace_json.empty()) {
            std::ifstream f(trace_json);
            if (!f) {
                std::cerr << "error: cannot open " << trace_json << "\n";
                return 2;
            }
            try {
                nlohmann::json j;
                f >> j;
                std::cout << htalg::trace(htalg::k_from_json(j)).str() << "\n";
                return 0;
            } catch (const std::exception& ex) {
                std::cerr << "error: " << ex.what() << "\n";
                return 2;
            }
        }
        if (expr_text.empty()) {
            std::cerr << "error: provide an expression or --json\n";
            return 2;
        }
        return cmd_trace(expr_text);
    }
    if (id_cmd->parsed()) {
        if (format != "json") {
            std::cerr << "identities reports support only json\n";
            return 2;
        }
        return cmd_identities(suite, algebra, window, out_path);
    }
    if (sim_cmd->parsed()) {
        if (!config_path.empty()) {
            std::ifstream f(config_path);
            if (!f) {
                std::cerr << "config error: cannot open " << config_path << "\n";
                return 2;
            }
            nlohmann::json j;
            try {
                f >> j;
                cfg.n = j.value("n", cfg.n);
                cfg.dt = j.value("dt", cfg.dt);
                cfg.steps = j.value("steps", cfg.steps);
                cfg.seed = j.value("seed", cfg.seed);
                cfg.kmax = j.value("kmax", cfg.kmax);
                topology = j.value("topology", topology);
            } catch (const std::exception& ex) {
                std::cerr << "config error: " << ex.what() << "\n";
                return 2;
            }
        }
        if (topology == "open") cfg.topology = htalg::Topology::Open;
        else if (topology == "periodic") cfg.topology = htalg::Topology::Periodic;
        else {
            std::cerr << "config error: topology must be open or periodic\n";
            return 2;
        }
        return cmd_toda_sim(cfg, sim_out);
    }
    return 2;
}
