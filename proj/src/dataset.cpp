#include "gevo/dataset.hpp"

#include <charconv>
#include <fstream>
#include <optional>

namespace gevo {

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r'))
        s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
        s.remove_suffix(1);
    return s;
}

std::optional<double> parse_cell(std::string_view cell) {
    cell = trim(cell);
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
    if (ec != std::errc{} || ptr != cell.data() + cell.size() || cell.empty()) return std::nullopt;
    return v;
}

std::vector<std::string_view> split_cells(std::string_view line) {
    std::vector<std::string_view> cells;
    std::size_t start = 0;
    while (true) {
        auto comma = line.find(',', start);
        if (comma == std::string_view::npos) {
            cells.push_back(line.substr(start));
            return cells;
        }
        cells.push_back(line.substr(start, comma - start));
        start = comma + 1;
    }
}

// Rows-by-columns table of one CSV file.
std::vector<std::vector<double>> load_table(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DatasetError(DatasetError::Kind::missing_file, "cannot open " + path);

    std::vector<std::vector<double>> rows;
    std::string line;
    int line_no = 0;
    std::size_t width = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::string_view stripped = trim(line);
        if (stripped.empty()) continue;

        auto cells = split_cells(stripped);
        std::vector<double> row;
        row.reserve(cells.size());
        bool numeric = true;
        for (auto cell : cells) {
            if (auto v = parse_cell(cell)) {
                row.push_back(*v);
            } else {
                numeric = false;
                break;
            }
        }
        if (!numeric) {
            // Only the very first line may be non-numeric: that is the header.
            if (rows.empty() && width == 0) {
                width = cells.size();
                continue;
            }
            throw DatasetError(DatasetError::Kind::non_numeric_cell,
                               path + ":" + std::to_string(line_no) + ": non-numeric cell");
        }
        if (width == 0) width = row.size();
        if (row.size() != width)
            throw DatasetError(DatasetError::Kind::ragged_rows,
                               path + ":" + std::to_string(line_no) + ": expected " +
                                   std::to_string(width) + " columns, got " +
                                   std::to_string(row.size()));
        rows.push_back(std::move(row));
    }
    if (rows.empty())
        throw DatasetError(DatasetError::Kind::empty_data, path + ": no data rows");
    if (rows.front().size() < 2)
        throw DatasetError(DatasetError::Kind::empty_data,
                           path + ": need at least one input column and the target column");
    return rows;
}

void fill_split(const std::vector<std::vector<double>>& rows,
                std::vector<std::vector<double>>& inputs, std::vector<double>& targets) {
    std::size_t n_vars = rows.front().size() - 1;
    inputs.assign(n_vars, {});
    for (auto& col : inputs) col.reserve(rows.size());
    targets.reserve(rows.size());
    for (const auto& row : rows) {
        for (std::size_t v = 0; v < n_vars; ++v) inputs[v].push_back(row[v]);
        targets.push_back(row.back());
    }
}

}  // namespace

Dataset load_dataset(const std::string& dir) {
    auto train = load_table(dir + "/Train.csv");
    auto test = load_table(dir + "/Test.csv");
    if (train.front().size() != test.front().size())
        throw DatasetError(DatasetError::Kind::ragged_rows,
                           dir + ": Train.csv has " + std::to_string(train.front().size()) +
                               " columns but Test.csv has " +
                               std::to_string(test.front().size()));

    Dataset ds;
    ds.n_vars = static_cast<int>(train.front().size() - 1);
    fill_split(train, ds.train_inputs, ds.train_targets);
    fill_split(test, ds.test_inputs, ds.test_targets);
    return ds;
}

}  // namespace gevo
