#include "gevo/interpreter.hpp"

#include <charconv>
#include <cmath>
#include <map>
#include <memory>
#include <optional>
#include <vector>

namespace gevo {

namespace {

struct PExpr {
    enum class Kind { number, variable, add, sub, mul };
    Kind kind = Kind::number;
    double value = 0.0;
    std::string name;
    std::vector<PExpr> kids;
};

struct PStmt {
    enum class Kind { assign, repeat, ret };
    Kind kind = Kind::assign;
    std::string name;          // assign target or returned variable
    PExpr expr;                // assigned value or repeat count
    std::vector<PStmt> body;   // repeat body
};

struct Lexer {
    std::string_view text;
    std::size_t pos = 0;

    void skip_ws() {
        while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
    }

    char peek() {
        skip_ws();
        return pos < text.size() ? text[pos] : '\0';
    }

    bool consume(char c) {
        if (peek() != c) return false;
        ++pos;
        return true;
    }

    void expect(char c) {
        if (!consume(c))
            throw ProgramParseError("expected '" + std::string(1, c) + "' at position " +
                                    std::to_string(pos) + " in program");
    }

    bool at_ident() {
        char c = peek();
        return std::isalpha(static_cast<unsigned char>(c)) || c == '_';
    }

    std::string ident() {
        skip_ws();
        std::size_t start = pos;
        while (pos < text.size() &&
               (std::isalnum(static_cast<unsigned char>(text[pos])) || text[pos] == '_'))
            ++pos;
        if (start == pos)
            throw ProgramParseError("expected a name at position " + std::to_string(pos) +
                                    " in program");
        return std::string(text.substr(start, pos - start));
    }

    double number() {
        skip_ws();
        double v = 0.0;
        auto [ptr, ec] = std::from_chars(text.data() + pos, text.data() + text.size(), v);
        if (ec != std::errc{} || ptr == text.data() + pos)
            throw ProgramParseError("expected a number at position " + std::to_string(pos) +
                                    " in program");
        pos = static_cast<std::size_t>(ptr - text.data());
        return v;
    }
};

PExpr parse_expr(Lexer& lex);

PExpr parse_primary(Lexer& lex) {
    char c = lex.peek();
    if (c == '(') {
        lex.expect('(');
        PExpr inner = parse_expr(lex);
        lex.expect(')');
        return inner;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
        PExpr e;
        e.kind = PExpr::Kind::number;
        e.value = lex.number();
        return e;
    }
    if (lex.at_ident()) {
        PExpr e;
        e.kind = PExpr::Kind::variable;
        e.name = lex.ident();
        return e;
    }
    throw ProgramParseError("unexpected character '" + std::string(1, c) + "' at position " +
                            std::to_string(lex.pos) + " in program");
}

PExpr parse_term(Lexer& lex) {
    PExpr left = parse_primary(lex);
    while (lex.consume('*')) {
        PExpr node;
        node.kind = PExpr::Kind::mul;
        node.kids.push_back(std::move(left));
        node.kids.push_back(parse_primary(lex));
        left = std::move(node);
    }
    return left;
}

PExpr parse_expr(Lexer& lex) {
    PExpr left = parse_term(lex);
    while (true) {
        PExpr::Kind kind;
        if (lex.consume('+'))
            kind = PExpr::Kind::add;
        else if (lex.consume('-'))
            kind = PExpr::Kind::sub;
        else
            return left;
        PExpr node;
        node.kind = kind;
        node.kids.push_back(std::move(left));
        node.kids.push_back(parse_term(lex));
        left = std::move(node);
    }
}

std::vector<PStmt> parse_stmts(Lexer& lex, bool in_block);

PStmt parse_stmt(Lexer& lex) {
    std::string name = lex.ident();
    PStmt stmt;
    if (name == "repeat") {
        stmt.kind = PStmt::Kind::repeat;
        stmt.expr = parse_expr(lex);
        lex.expect('{');
        stmt.body = parse_stmts(lex, true);
        lex.expect('}');
        return stmt;
    }
    if (name == "return") {
        stmt.kind = PStmt::Kind::ret;
        stmt.name = lex.ident();
        return stmt;
    }
    stmt.kind = PStmt::Kind::assign;
    stmt.name = std::move(name);
    lex.expect('=');
    stmt.expr = parse_expr(lex);
    return stmt;
}

std::vector<PStmt> parse_stmts(Lexer& lex, bool in_block) {
    std::vector<PStmt> stmts;
    while (true) {
        while (lex.consume(';')) {}  // tolerate empty statements
        char c = lex.peek();
        if (c == '\0' || (in_block && c == '}')) return stmts;
        stmts.push_back(parse_stmt(lex));
        if (!lex.consume(';')) {
            char next = lex.peek();
            if (next == '\0' || (in_block && next == '}')) return stmts;
            throw ProgramParseError("expected ';' at position " + std::to_string(lex.pos) +
                                    " in program");
        }
    }
}

struct Machine {
    const InterpreterLimits& limits;
    std::map<std::string, double> vars;
    long steps = 0;
    bool limited = false;

    double clamp(double v) const {
        if (v > limits.max_magnitude) return limits.max_magnitude;
        if (v < -limits.max_magnitude) return -limits.max_magnitude;
        return v;
    }

    double read(const std::string& name) const {
        auto it = vars.find(name);
        return it == vars.end() ? 0.0 : it->second;
    }

    // Charges one step; refuses (and flags the limit) once the budget is gone,
    // so `steps` never exceeds max_steps.
    bool charge() {
        if (steps >= limits.max_steps) {
            limited = true;
            return false;
        }
        ++steps;
        return true;
    }

    double eval(const PExpr& e) const {
        switch (e.kind) {
            case PExpr::Kind::number: return e.value;
            case PExpr::Kind::variable: return read(e.name);
            case PExpr::Kind::add: return eval(e.kids[0]) + eval(e.kids[1]);
            case PExpr::Kind::sub: return eval(e.kids[0]) - eval(e.kids[1]);
            default: return eval(e.kids[0]) * eval(e.kids[1]);
        }
    }

    // Returns the value of a hit 'return'; nullopt means fell through (or ran
    // out of steps, flagged in `limited`).
    std::optional<double> exec(const std::vector<PStmt>& stmts) {
        for (const auto& stmt : stmts) {
            if (limited) return std::nullopt;
            if (!charge()) return std::nullopt;
            switch (stmt.kind) {
                case PStmt::Kind::assign:
                    vars[stmt.name] = clamp(eval(stmt.expr));
                    break;
                case PStmt::Kind::ret: return read(stmt.name);
                case PStmt::Kind::repeat: {
                    double raw = eval(stmt.expr);
                    long count = std::isfinite(raw) && raw > 0 ? static_cast<long>(raw) : 0;
                    for (long i = 0; i < count; ++i) {
                        if (!charge()) return std::nullopt;  // one step per iteration
                        if (auto r = exec(stmt.body)) return r;
                        if (limited) return std::nullopt;
                    }
                    break;
                }
            }
        }
        return std::nullopt;
    }
};

}  // namespace

ProgramResult run_program(std::string_view text, const InterpreterLimits& limits) {
    Lexer lex{text};
    auto stmts = parse_stmts(lex, false);
    if (lex.peek() != '\0')
        throw ProgramParseError("trailing characters at position " + std::to_string(lex.pos) +
                                " in program");

    Machine m{limits, {}, 0, false};
    auto returned = m.exec(stmts);

    ProgramResult out;
    out.value = returned ? *returned : m.read("v");
    out.steps = m.steps;
    out.step_limited = m.limited;
    return out;
}

double run_program_strict(std::string_view text, const InterpreterLimits& limits) {
    auto r = run_program(text, limits);
    if (r.step_limited)
        throw InterpreterStepLimit("program exceeded the budget of " +
                                       std::to_string(limits.max_steps) + " steps",
                                   r.value);
    return r.value;
}

}  // namespace gevo
