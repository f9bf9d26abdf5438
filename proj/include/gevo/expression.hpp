#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace gevo {

// Anything that stops a phenotype from being scored: evaluation blows up,
// the phenotype does not parse, and so on. The evaluation step downgrades
// individuals that raise this to the worst fitness instead of aborting.
struct FitnessRuntimeError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ExpressionParseError : FitnessRuntimeError {
    using FitnessRuntimeError::FitnessRuntimeError;
};

// Evaluation conventions for the protected operators. pdiv(a, 0) returns
// pdiv_zero_result (1 by default); plog takes log(|x|) with plog(0) = 0;
// psqrt takes sqrt(|x|); '/' always means pdiv.
struct EvalOptions {
    double pdiv_zero_result = 1.0;
};

// Arithmetic expression tree over dataset variables x[i], numeric constants
// and the operators + - * pdiv plog psqrt, plus unary minus and parentheses.
struct Expr {
    enum class Op { constant, variable, add, sub, mul, pdiv, plog, psqrt, neg };

    Op op = Op::constant;
    double value = 0.0;  // constant payload
    int index = 0;       // variable payload
    std::vector<Expr> kids;
};

// Recursive-descent parser with the usual precedence: + and - bind looser
// than * and /. Throws ExpressionParseError with a position hint.
Expr parse_expression(std::string_view text);

// Rejects variable references outside [0, n_vars).
void check_variables(const Expr& e, int n_vars);

// Scalar route: evaluates on one row of inputs (row[i] is x[i]).
double eval_row(const Expr& e, const std::vector<double>& row, const EvalOptions& opts = {});

// Vector route: evaluates whole columns at once (columns[var][row]) and
// returns one value per row. Kept as an independent implementation of the
// same semantics as eval_row; the two must agree and the tests hold them to
// that.
std::vector<double> eval_columns(const Expr& e, const std::vector<std::vector<double>>& columns,
                                 std::size_t rows, const EvalOptions& opts = {});

}  // namespace gevo
