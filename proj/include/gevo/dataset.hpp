#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace gevo {

struct DatasetError : std::runtime_error {
    enum class Kind { missing_file, ragged_rows, non_numeric_cell, empty_data };

    DatasetError(Kind k, const std::string& msg) : std::runtime_error(msg), kind(k) {}
    Kind kind;
};

// Train/test split with inputs stored column-major (inputs[var][row]) for the
// vectorised evaluator. The last CSV column is the regression target or class
// label; everything before it is an input variable.
struct Dataset {
    std::vector<std::vector<double>> train_inputs;
    std::vector<double> train_targets;
    std::vector<std::vector<double>> test_inputs;
    std::vector<double> test_targets;
    int n_vars = 0;

    std::size_t train_rows() const { return train_targets.size(); }
    std::size_t test_rows() const { return test_targets.size(); }
};

// Loads <dir>/Train.csv and <dir>/Test.csv. A header row is skipped when any
// cell of the first line fails to parse as a number. Both files must agree on
// the column count. Errors carry the offending file and line number.
Dataset load_dataset(const std::string& dir);

}  // namespace gevo
