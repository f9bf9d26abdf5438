#include "gevo/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <sstream>
#include <thread>

namespace gevo {

namespace {

void run_one(const Parameters& base, SeedOutcome& outcome,
             const std::filesystem::path& out_dir) {
    Parameters params = base;
    params.random_seed = outcome.seed;
    try {
        RunResult result = search_loop(params);
        outcome.folder = out_dir / ("seed_" + std::to_string(outcome.seed));
        write_run_folder(outcome.folder, result);
        outcome.best = result.best.fitness;
        outcome.best_test = result.best_test_fitness;
        outcome.history = std::move(result.history);
        outcome.ok = true;
    } catch (const std::exception& e) {
        outcome.ok = false;
        outcome.error = e.what();
    }
}

void write_text_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << content;
}

}  // namespace

ExperimentReport run_experiment(const Parameters& base, const std::vector<std::uint64_t>& seeds,
                                int jobs, const std::filesystem::path& out_dir) {
    if (seeds.empty()) throw std::invalid_argument("experiment needs at least one seed");
    std::filesystem::create_directories(out_dir);

    ExperimentReport report;
    report.runs.resize(seeds.size());
    for (std::size_t i = 0; i < seeds.size(); ++i) report.runs[i].seed = seeds[i];

    if (jobs <= 1) {
        for (auto& outcome : report.runs) run_one(base, outcome, out_dir);
    } else {
        std::atomic<std::size_t> next{0};
        auto worker = [&] {
            while (true) {
                std::size_t i = next.fetch_add(1);
                if (i >= report.runs.size()) return;
                run_one(base, report.runs[i], out_dir);
            }
        };
        std::vector<std::thread> threads;
        auto n = static_cast<std::size_t>(std::min<int>(jobs, static_cast<int>(seeds.size())));
        threads.reserve(n);
        for (std::size_t t = 0; t < n; ++t) threads.emplace_back(worker);
        for (auto& t : threads) t.join();
    }

    // Per-generation aggregates of the best fitness across successful runs.
    std::size_t generations = 0;
    for (const auto& r : report.runs)
        if (r.ok) generations = std::max(generations, r.history.size());
    for (std::size_t g = 0; g < generations; ++g) {
        std::vector<double> best;
        for (const auto& r : report.runs)
            if (r.ok && g < r.history.size() && r.history[g].best.value)
                best.push_back(*r.history[g].best.value);
        if (best.empty()) {
            report.mean_best.emplace_back();
            report.median_best.emplace_back();
            report.std_best.emplace_back();
            continue;
        }
        double sum = 0.0;
        for (double v : best) sum += v;
        double mean = sum / static_cast<double>(best.size());
        double sq = 0.0;
        for (double v : best) sq += (v - mean) * (v - mean);
        std::sort(best.begin(), best.end());
        std::size_t mid = best.size() / 2;
        double median = best.size() % 2 == 1 ? best[mid] : (best[mid - 1] + best[mid]) / 2.0;
        report.mean_best.push_back(mean);
        report.median_best.push_back(median);
        report.std_best.push_back(std::sqrt(sq / static_cast<double>(best.size())));
    }
    return report;
}

std::string experiment_report_csv(const ExperimentReport& report) {
    std::ostringstream out;
    out << "generation,mean_best,median_best,std_best\n";
    for (std::size_t g = 0; g < report.mean_best.size(); ++g) {
        out << g << ',';
        if (report.mean_best[g]) out << format_double(*report.mean_best[g]);
        out << ',';
        if (report.median_best[g]) out << format_double(*report.median_best[g]);
        out << ',';
        if (report.std_best[g]) out << format_double(*report.std_best[g]);
        out << '\n';
    }
    return out.str();
}

std::string experiment_summary_csv(const ExperimentReport& report) {
    std::ostringstream out;
    out << "seed,status,best_fitness,test_fitness,folder\n";
    for (const auto& r : report.runs) {
        out << r.seed << ',' << (r.ok ? "ok" : "failed") << ',';
        if (r.best.value) out << format_double(*r.best.value);
        out << ',';
        if (r.best_test) out << format_double(*r.best_test);
        std::string tail = r.ok ? r.folder.filename().string() : r.error;
        std::string quoted = "\"";
        for (char c : tail) quoted += c == '"' ? std::string("\"\"") : std::string(1, c);
        out << ',' << quoted << "\"\n";
    }
    return out.str();
}

void write_experiment(const std::filesystem::path& dir, const ExperimentReport& report) {
    std::filesystem::create_directories(dir);
    write_text_file(dir / "report.csv", experiment_report_csv(report));
    write_text_file(dir / "summary.csv", experiment_summary_csv(report));
    write_text_file(dir / "fitness.svg",
                    line_chart_svg({{"mean best", report.mean_best},
                                    {"median best", report.median_best}}));
}

}  // namespace gevo
