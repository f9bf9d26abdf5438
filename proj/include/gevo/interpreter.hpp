#pragma once

#include <string>
#include <string_view>

#include "gevo/expression.hpp"

namespace gevo {

struct ProgramParseError : FitnessRuntimeError {
    using FitnessRuntimeError::FitnessRuntimeError;
};

// Raised by run_program_strict when the step budget runs out; carries the
// value the program had accumulated at interruption.
struct InterpreterStepLimit : FitnessRuntimeError {
    InterpreterStepLimit(const std::string& msg, double v)
        : FitnessRuntimeError(msg), value_at_limit(v) {}
    double value_at_limit;
};

// Sandbox bounds for evolved programs: the step budget stops runaway loops
// and the magnitude clamp keeps values finite.
struct InterpreterLimits {
    long max_steps = 10000;
    double max_magnitude = 1e12;
};

struct ProgramResult {
    double value = 0.0;
    long steps = 0;
    bool step_limited = false;
};

// Runs a program in the mini-language:
//   program   := stmt (';' stmt)*
//   stmt      := name '=' expr | 'repeat' count '{' program '}' | 'return' name
//   expr      := arithmetic over numbers, variables, + - * and parentheses
// Variables default to 0; every statement execution costs one step; each
// assignment clamps to +-max_magnitude. 'return' ends the run with that
// variable; otherwise the final value of v is returned. When the step budget
// runs out the result carries the value so far with step_limited set.
ProgramResult run_program(std::string_view text, const InterpreterLimits& limits = {});

// Same, but an exhausted step budget raises InterpreterStepLimit.
double run_program_strict(std::string_view text, const InterpreterLimits& limits = {});

}  // namespace gevo
