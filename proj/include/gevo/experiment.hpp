#pragma once

#include <filesystem>

#include "gevo/results.hpp"

namespace gevo {

struct SeedOutcome {
    std::uint64_t seed = 0;
    bool ok = false;
    std::string error;  // when !ok
    Fitness best;
    std::optional<double> best_test;
    std::filesystem::path folder;
    std::vector<GenerationStats> history;
};

// Aggregate over a batch of seeded runs of one configuration. Per-generation
// rows hold mean/median/std of the best fitness across the successful runs.
struct ExperimentReport {
    std::vector<SeedOutcome> runs;  // in seed order, independent of scheduling
    std::vector<std::optional<double>> mean_best;
    std::vector<std::optional<double>> median_best;
    std::vector<std::optional<double>> std_best;
};

// Runs the configuration once per seed (jobs > 1 runs them on a small thread
// pool), each run writing its own folder under out_dir. A failing seed is
// recorded and does not stop the batch.
ExperimentReport run_experiment(const Parameters& base, const std::vector<std::uint64_t>& seeds,
                                int jobs, const std::filesystem::path& out_dir);

std::string experiment_report_csv(const ExperimentReport& report);
std::string experiment_summary_csv(const ExperimentReport& report);

// Writes report.csv, summary.csv and an SVG of the aggregate curves.
void write_experiment(const std::filesystem::path& dir, const ExperimentReport& report);

}  // namespace gevo
