#include "gevo/problems.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

namespace gevo {

namespace {

double finish_metric(double accum, std::size_t n, ErrorMetric metric) {
    double mean = accum / static_cast<double>(n);
    return metric == ErrorMetric::rmse ? std::sqrt(mean) : mean;
}

double accumulate_term(double predicted, double target, ErrorMetric metric) {
    double diff = predicted - target;
    return metric == ErrorMetric::mae ? std::fabs(diff) : diff * diff;
}

const std::vector<std::vector<double>>& split_inputs(const Dataset& ds, Split split) {
    return split == Split::train ? ds.train_inputs : ds.test_inputs;
}

const std::vector<double>& split_targets(const Dataset& ds, Split split) {
    return split == Split::train ? ds.train_targets : ds.test_targets;
}

}  // namespace

ErrorMetric parse_metric(std::string_view name) {
    if (name == "rmse") return ErrorMetric::rmse;
    if (name == "mse") return ErrorMetric::mse;
    if (name == "mae") return ErrorMetric::mae;
    throw std::invalid_argument("unknown error metric: " + std::string(name));
}

int levenshtein(std::string_view a, std::string_view b) {
    // Two-row DP over the edit matrix.
    std::vector<int> prev(b.size() + 1), cur(b.size() + 1);
    std::iota(prev.begin(), prev.end(), 0);
    for (std::size_t i = 1; i <= a.size(); ++i) {
        cur[0] = static_cast<int>(i);
        for (std::size_t j = 1; j <= b.size(); ++j) {
            int sub = prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1);
            cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, sub});
        }
        std::swap(prev, cur);
    }
    return prev[b.size()];
}

double fitness_string_match(const std::string& phenotype, const std::string& target) {
    return levenshtein(phenotype, target);
}

double fitness_regression(const std::string& phenotype, const Dataset& ds, ErrorMetric metric,
                          Split split, const EvalOptions& opts) {
    const auto& targets = split_targets(ds, split);
    if (targets.empty()) throw FitnessRuntimeError("dataset split has no rows");

    Expr expr = parse_expression(phenotype);
    check_variables(expr, ds.n_vars);
    auto predicted = eval_columns(expr, split_inputs(ds, split), targets.size(), opts);

    double accum = 0.0;
    for (std::size_t i = 0; i < targets.size(); ++i)
        accum += accumulate_term(predicted[i], targets[i], metric);
    double score = finish_metric(accum, targets.size(), metric);
    if (!std::isfinite(score))
        throw FitnessRuntimeError("regression error is not finite for: " + phenotype);
    return score;
}

double fitness_regression_rowwise(const std::string& phenotype, const Dataset& ds,
                                  ErrorMetric metric, Split split, const EvalOptions& opts) {
    const auto& inputs = split_inputs(ds, split);
    const auto& targets = split_targets(ds, split);
    if (targets.empty()) throw FitnessRuntimeError("dataset split has no rows");

    Expr expr = parse_expression(phenotype);
    check_variables(expr, ds.n_vars);

    std::vector<double> row(static_cast<std::size_t>(ds.n_vars));
    double accum = 0.0;
    for (std::size_t r = 0; r < targets.size(); ++r) {
        for (std::size_t v = 0; v < row.size(); ++v) row[v] = inputs[v][r];
        accum += accumulate_term(eval_row(expr, row, opts), targets[r], metric);
    }
    double score = finish_metric(accum, targets.size(), metric);
    if (!std::isfinite(score))
        throw FitnessRuntimeError("regression error is not finite for: " + phenotype);
    return score;
}

double fitness_classification(const std::string& phenotype, const Dataset& ds, Split split,
                              const EvalOptions& opts) {
    const auto& targets = split_targets(ds, split);
    if (targets.empty()) throw FitnessRuntimeError("dataset split has no rows");

    Expr expr = parse_expression(phenotype);
    check_variables(expr, ds.n_vars);
    auto outputs = eval_columns(expr, split_inputs(ds, split), targets.size(), opts);

    std::size_t wrong = 0;
    for (std::size_t i = 0; i < targets.size(); ++i) {
        int predicted = outputs[i] > 0.0 ? 1 : 0;
        int actual = targets[i] > 0.5 ? 1 : 0;
        if (predicted != actual) ++wrong;
    }
    return static_cast<double>(wrong) / static_cast<double>(targets.size());
}

double fitness_program_max(const std::string& phenotype, const InterpreterLimits& limits) {
    auto result = run_program(phenotype, limits);
    if (!std::isfinite(result.value))
        throw FitnessRuntimeError("program result is not finite for: " + phenotype);
    return result.value;
}

}  // namespace gevo
