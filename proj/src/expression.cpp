#include "gevo/expression.hpp"

#include <charconv>
#include <cmath>

namespace gevo {

namespace {

struct Lexer {
    std::string_view text;
    std::size_t pos = 0;

    void skip_ws() {
        while (pos < text.size() && (text[pos] == ' ' || text[pos] == '\t' || text[pos] == '\n'))
            ++pos;
    }

    bool eof() {
        skip_ws();
        return pos >= text.size();
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
            throw ExpressionParseError("expected '" + std::string(1, c) + "' at position " +
                                       std::to_string(pos) + " in expression");
    }

    std::string ident() {
        skip_ws();
        std::size_t start = pos;
        while (pos < text.size() &&
               (std::isalnum(static_cast<unsigned char>(text[pos])) || text[pos] == '_'))
            ++pos;
        return std::string(text.substr(start, pos - start));
    }

    double number() {
        skip_ws();
        double v = 0.0;
        auto [ptr, ec] = std::from_chars(text.data() + pos, text.data() + text.size(), v);
        if (ec != std::errc{} || ptr == text.data() + pos)
            throw ExpressionParseError("expected a number at position " + std::to_string(pos) +
                                       " in expression");
        pos = static_cast<std::size_t>(ptr - text.data());
        return v;
    }
};

Expr make(Expr::Op op, std::vector<Expr> kids) {
    Expr e;
    e.op = op;
    e.kids = std::move(kids);
    return e;
}

Expr parse_expr(Lexer& lex);

Expr parse_primary(Lexer& lex) {
    char c = lex.peek();
    if (c == '(') {
        lex.expect('(');
        Expr inner = parse_expr(lex);
        lex.expect(')');
        return inner;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
        Expr e;
        e.op = Expr::Op::constant;
        e.value = lex.number();
        return e;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
        std::string name = lex.ident();
        if (name == "x") {
            lex.expect('[');
            double idx = lex.number();
            lex.expect(']');
            Expr e;
            e.op = Expr::Op::variable;
            e.index = static_cast<int>(idx);
            return e;
        }
        Expr::Op op;
        int arity;
        if (name == "pdiv") {
            op = Expr::Op::pdiv;
            arity = 2;
        } else if (name == "plog") {
            op = Expr::Op::plog;
            arity = 1;
        } else if (name == "psqrt") {
            op = Expr::Op::psqrt;
            arity = 1;
        } else {
            throw ExpressionParseError("unknown function or variable '" + name + "' in expression");
        }
        lex.expect('(');
        std::vector<Expr> kids;
        kids.push_back(parse_expr(lex));
        for (int i = 1; i < arity; ++i) {
            lex.expect(',');
            kids.push_back(parse_expr(lex));
        }
        lex.expect(')');
        return make(op, std::move(kids));
    }
    throw ExpressionParseError("unexpected character '" + std::string(1, c) + "' at position " +
                               std::to_string(lex.pos) + " in expression");
}

Expr parse_factor(Lexer& lex) {
    if (lex.consume('-')) return make(Expr::Op::neg, {parse_factor(lex)});
    return parse_primary(lex);
}

Expr parse_term(Lexer& lex) {
    Expr left = parse_factor(lex);
    while (true) {
        if (lex.consume('*'))
            left = make(Expr::Op::mul, {std::move(left), parse_factor(lex)});
        else if (lex.consume('/'))
            left = make(Expr::Op::pdiv, {std::move(left), parse_factor(lex)});
        else
            return left;
    }
}

Expr parse_expr(Lexer& lex) {
    Expr left = parse_term(lex);
    while (true) {
        if (lex.consume('+'))
            left = make(Expr::Op::add, {std::move(left), parse_term(lex)});
        else if (lex.consume('-'))
            left = make(Expr::Op::sub, {std::move(left), parse_term(lex)});
        else
            return left;
    }
}

double protected_div(double a, double b, const EvalOptions& opts) {
    return b == 0.0 ? opts.pdiv_zero_result : a / b;
}

double protected_log(double x) { return x == 0.0 ? 0.0 : std::log(std::fabs(x)); }

}  // namespace

Expr parse_expression(std::string_view text) {
    Lexer lex{text};
    Expr e = parse_expr(lex);
    if (!lex.eof())
        throw ExpressionParseError("trailing characters at position " + std::to_string(lex.pos) +
                                   " in expression");
    return e;
}

void check_variables(const Expr& e, int n_vars) {
    if (e.op == Expr::Op::variable && (e.index < 0 || e.index >= n_vars))
        throw ExpressionParseError("variable x[" + std::to_string(e.index) +
                                   "] outside the dataset's " + std::to_string(n_vars) +
                                   " input columns");
    for (const auto& kid : e.kids) check_variables(kid, n_vars);
}

double eval_row(const Expr& e, const std::vector<double>& row, const EvalOptions& opts) {
    switch (e.op) {
        case Expr::Op::constant: return e.value;
        case Expr::Op::variable: return row.at(static_cast<std::size_t>(e.index));
        case Expr::Op::add: return eval_row(e.kids[0], row, opts) + eval_row(e.kids[1], row, opts);
        case Expr::Op::sub: return eval_row(e.kids[0], row, opts) - eval_row(e.kids[1], row, opts);
        case Expr::Op::mul: return eval_row(e.kids[0], row, opts) * eval_row(e.kids[1], row, opts);
        case Expr::Op::pdiv:
            return protected_div(eval_row(e.kids[0], row, opts), eval_row(e.kids[1], row, opts),
                                 opts);
        case Expr::Op::plog: return protected_log(eval_row(e.kids[0], row, opts));
        case Expr::Op::psqrt: return std::sqrt(std::fabs(eval_row(e.kids[0], row, opts)));
        default: return -eval_row(e.kids[0], row, opts);
    }
}

std::vector<double> eval_columns(const Expr& e, const std::vector<std::vector<double>>& columns,
                                 std::size_t rows, const EvalOptions& opts) {
    switch (e.op) {
        case Expr::Op::constant: return std::vector<double>(rows, e.value);
        case Expr::Op::variable: {
            const auto& col = columns.at(static_cast<std::size_t>(e.index));
            return std::vector<double>(col.begin(), col.begin() + static_cast<std::ptrdiff_t>(rows));
        }
        case Expr::Op::add: {
            auto a = eval_columns(e.kids[0], columns, rows, opts);
            auto b = eval_columns(e.kids[1], columns, rows, opts);
            for (std::size_t i = 0; i < rows; ++i) a[i] += b[i];
            return a;
        }
        case Expr::Op::sub: {
            auto a = eval_columns(e.kids[0], columns, rows, opts);
            auto b = eval_columns(e.kids[1], columns, rows, opts);
            for (std::size_t i = 0; i < rows; ++i) a[i] -= b[i];
            return a;
        }
        case Expr::Op::mul: {
            auto a = eval_columns(e.kids[0], columns, rows, opts);
            auto b = eval_columns(e.kids[1], columns, rows, opts);
            for (std::size_t i = 0; i < rows; ++i) a[i] *= b[i];
            return a;
        }
        case Expr::Op::pdiv: {
            auto a = eval_columns(e.kids[0], columns, rows, opts);
            auto b = eval_columns(e.kids[1], columns, rows, opts);
            for (std::size_t i = 0; i < rows; ++i) a[i] = protected_div(a[i], b[i], opts);
            return a;
        }
        case Expr::Op::plog: {
            auto a = eval_columns(e.kids[0], columns, rows, opts);
            for (auto& v : a) v = protected_log(v);
            return a;
        }
        case Expr::Op::psqrt: {
            auto a = eval_columns(e.kids[0], columns, rows, opts);
            for (auto& v : a) v = std::sqrt(std::fabs(v));
            return a;
        }
        default: {
            auto a = eval_columns(e.kids[0], columns, rows, opts);
            for (auto& v : a) v = -v;
            return a;
        }
    }
}

}  // namespace gevo
