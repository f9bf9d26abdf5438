#pragma once

#include <string>
#include <string_view>

#include "gevo/dataset.hpp"
#include "gevo/expression.hpp"
#include "gevo/interpreter.hpp"

namespace gevo {

enum class ErrorMetric { rmse, mse, mae };

ErrorMetric parse_metric(std::string_view name);  // throws std::invalid_argument

// Classic dynamic-programming edit distance (insert, delete, substitute, all
// cost 1).
int levenshtein(std::string_view a, std::string_view b);

enum class Split { train, test };

// Edit distance to the target string; 0 is a perfect match. Minimised.
double fitness_string_match(const std::string& phenotype, const std::string& target);

// Parses the phenotype as an arithmetic expression and scores it against the
// dataset targets under the metric, via the vectorised evaluator. Minimised.
// Parse failures and non-finite scores raise FitnessRuntimeError.
double fitness_regression(const std::string& phenotype, const Dataset& ds, ErrorMetric metric,
                          Split split = Split::train, const EvalOptions& opts = {});

// Slow-path twin of fitness_regression that scores row by row with the scalar
// evaluator. Exists to cross-check the vectorised route; both must agree to
// high precision and the tests enforce that.
double fitness_regression_rowwise(const std::string& phenotype, const Dataset& ds,
                                  ErrorMetric metric, Split split = Split::train,
                                  const EvalOptions& opts = {});

// Binary classification by thresholding the expression at 0: output > 0 is
// class 1, otherwise class 0. Returns the misclassified fraction. Minimised.
double fitness_classification(const std::string& phenotype, const Dataset& ds,
                              Split split = Split::train, const EvalOptions& opts = {});

// Runs the phenotype in the sandboxed interpreter and returns the value it
// produces; bigger is better. Maximised. Parse failures and non-finite
// results raise FitnessRuntimeError.
double fitness_program_max(const std::string& phenotype, const InterpreterLimits& limits = {});

}  // namespace gevo
