#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "gevo/engine.hpp"

namespace gevo {

// Stable-format CSV of the run history; equal histories serialize to
// identical bytes. Wall-clock time is deliberately not a column.
std::string stats_csv(const std::vector<GenerationStats>& history);

// Human-readable best-of-run report (phenotype, fitness, genome, shape).
std::string best_report(const RunResult& result);

// Named line series over generations; gaps (nullopt) are skipped.
using ChartSeries = std::pair<std::string, std::vector<std::optional<double>>>;

// Self-contained SVG line chart, no external assets. A series with a single
// point is drawn as a marker instead of a line.
std::string line_chart_svg(const std::vector<ChartSeries>& series);

// Writes fitness.csv (generation, best, mean) and fitness.svg for the run.
void emit_chart(const std::vector<GenerationStats>& history, const std::filesystem::path& dir);

// Creates <results_dir>/<label>_<timestamp>_s<seed>, suffixed -1, -2, ... if
// taken; never reuses an existing folder.
std::filesystem::path allocate_run_folder(const std::filesystem::path& results_dir,
                                          const std::string& label, std::uint64_t seed);

// Fills a run folder: parameters.txt, stats.csv, best.txt, fitness.csv,
// fitness.svg.
void write_run_folder(const std::filesystem::path& dir, const RunResult& result);

// Deterministic float formatting used across all result files.
std::string format_double(double v);

}  // namespace gevo
