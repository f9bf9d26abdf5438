#include "gevo/results.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <sstream>

namespace gevo {

namespace {

std::string csv_quote(const std::string& s) {
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += "\"\"";
        else out += c;
    }
    out += '"';
    return out;
}

std::string opt_cell(const std::optional<double>& v) {
    return v ? format_double(*v) : std::string{};
}

void write_text_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << content;
}

}  // namespace

std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string stats_csv(const std::vector<GenerationStats>& history) {
    std::ostringstream out;
    out << "generation,best_fitness,mean_fitness,median_fitness,invalids,fitness_evals,"
           "cache_hits,mean_used_codons,mean_depth,mean_nodes,best_phenotype\n";
    for (const auto& s : history) {
        out << s.generation << ',' << opt_cell(s.best.value) << ',' << opt_cell(s.mean) << ','
            << opt_cell(s.median) << ',' << s.invalids << ',' << s.fitness_calls << ','
            << s.cache_hits << ',' << format_double(s.mean_used_codons) << ','
            << format_double(s.mean_depth) << ',' << format_double(s.mean_nodes) << ','
            << csv_quote(s.best_phenotype) << '\n';
    }
    return out.str();
}

std::string best_report(const RunResult& result) {
    const Individual& best = result.best;
    std::ostringstream out;
    out << "problem: " << result.params.problem << '\n';
    out << "seed: " << *result.params.random_seed << '\n';
    out << "fitness: " << (best.fitness.value ? format_double(*best.fitness.value) : "none")
        << '\n';
    if (result.best_test_fitness)
        out << "test_fitness: " << format_double(*result.best_test_fitness) << '\n';
    out << "phenotype: " << best.phenotype.value_or("(invalid)") << '\n';
    out << "invalid: " << (best.invalid ? "true" : "false") << '\n';
    out << "used_codons: " << best.used_codons << '\n';
    if (best.depth) out << "tree_depth: " << *best.depth << '\n';
    if (best.nodes) out << "tree_nodes: " << *best.nodes << '\n';
    out << "genome_length: " << best.genome.size() << '\n';
    out << "genome:";
    for (std::size_t i = 0; i < best.genome.size(); ++i) out << ' ' << best.genome[i];
    out << '\n';
    return out.str();
}

std::string line_chart_svg(const std::vector<ChartSeries>& series) {
    constexpr double width = 640, height = 400;
    constexpr double left = 64, right = 616, top = 24, bottom = 360;
    static const char* colours[] = {"#1f6fb2", "#d97118", "#3f9142", "#a23b72"};

    // Data ranges over every present point.
    double ymin = 0, ymax = 0;
    std::size_t max_len = 0;
    bool any = false;
    for (const auto& [name, points] : series) {
        max_len = std::max(max_len, points.size());
        for (const auto& p : points) {
            if (!p) continue;
            if (!any || *p < ymin) ymin = *p;
            if (!any || *p > ymax) ymax = *p;
            any = true;
        }
    }
    if (!any) ymin = 0, ymax = 1;
    if (ymax == ymin) {
        ymin -= 1;
        ymax += 1;
    }
    double xmax = max_len > 1 ? static_cast<double>(max_len - 1) : 1.0;

    auto xpix = [&](std::size_t i) {
        return left + (right - left) * static_cast<double>(i) / xmax;
    };
    auto ypix = [&](double v) { return top + (bottom - top) * (ymax - v) / (ymax - ymin); };

    std::ostringstream svg;
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\""
        << height << "\" viewBox=\"0 0 " << width << ' ' << height << "\">\n";
    svg << "  <rect x=\"0\" y=\"0\" width=\"" << width << "\" height=\"" << height
        << "\" fill=\"white\"/>\n";
    svg << "  <line x1=\"" << left << "\" y1=\"" << bottom << "\" x2=\"" << right << "\" y2=\""
        << bottom << "\" stroke=\"#444\"/>\n";
    svg << "  <line x1=\"" << left << "\" y1=\"" << top << "\" x2=\"" << left << "\" y2=\""
        << bottom << "\" stroke=\"#444\"/>\n";
    svg << "  <text x=\"" << left - 6 << "\" y=\"" << top + 4
        << "\" font-size=\"11\" text-anchor=\"end\">" << format_double(ymax) << "</text>\n";
    svg << "  <text x=\"" << left - 6 << "\" y=\"" << bottom + 4
        << "\" font-size=\"11\" text-anchor=\"end\">" << format_double(ymin) << "</text>\n";
    svg << "  <text x=\"" << left << "\" y=\"" << bottom + 18
        << "\" font-size=\"11\" text-anchor=\"middle\">0</text>\n";
    svg << "  <text x=\"" << right << "\" y=\"" << bottom + 18
        << "\" font-size=\"11\" text-anchor=\"middle\">" << (max_len > 0 ? max_len - 1 : 0)
        << "</text>\n";
    svg << "  <text x=\"" << (left + right) / 2 << "\" y=\"" << height - 6
        << "\" font-size=\"12\" text-anchor=\"middle\">generation</text>\n";

    int colour_i = 0;
    double legend_y = top + 8;
    for (const auto& [name, points] : series) {
        const char* colour = colours[colour_i++ % 4];
        std::vector<std::pair<double, double>> pix;
        for (std::size_t i = 0; i < points.size(); ++i)
            if (points[i]) pix.emplace_back(xpix(i), ypix(*points[i]));

        if (pix.size() == 1) {
            svg << "  <circle cx=\"" << pix[0].first << "\" cy=\"" << pix[0].second
                << "\" r=\"4\" fill=\"" << colour << "\"/>\n";
        } else if (pix.size() > 1) {
            svg << "  <polyline fill=\"none\" stroke=\"" << colour
                << "\" stroke-width=\"1.5\" points=\"";
            for (std::size_t i = 0; i < pix.size(); ++i) {
                if (i > 0) svg << ' ';
                svg << pix[i].first << ',' << pix[i].second;
            }
            svg << "\"/>\n";
        }
        svg << "  <text x=\"" << right - 4 << "\" y=\"" << legend_y << "\" font-size=\"11\" "
            << "text-anchor=\"end\" fill=\"" << colour << "\">" << name << "</text>\n";
        legend_y += 14;
    }
    svg << "</svg>\n";
    return svg.str();
}

void emit_chart(const std::vector<GenerationStats>& history, const std::filesystem::path& dir) {
    std::ostringstream csv;
    csv << "generation,best_fitness,mean_fitness\n";
    for (const auto& s : history)
        csv << s.generation << ',' << opt_cell(s.best.value) << ',' << opt_cell(s.mean) << '\n';
    write_text_file(dir / "fitness.csv", csv.str());

    std::vector<std::optional<double>> best, mean;
    for (const auto& s : history) {
        best.push_back(s.best.value);
        mean.push_back(s.mean);
    }
    write_text_file(dir / "fitness.svg", line_chart_svg({{"best", best}, {"mean", mean}}));
}

std::filesystem::path allocate_run_folder(const std::filesystem::path& results_dir,
                                          const std::string& label, std::uint64_t seed) {
    std::time_t now = std::time(nullptr);
    std::tm tm{};
    gmtime_r(&now, &tm);
    char stamp[32];
    std::strftime(stamp, sizeof stamp, "%Y%m%d-%H%M%S", &tm);

    std::string base = label + "_" + stamp + "_s" + std::to_string(seed);
    std::filesystem::create_directories(results_dir);
    std::filesystem::path candidate = results_dir / base;
    for (int suffix = 1; std::filesystem::exists(candidate); ++suffix)
        candidate = results_dir / (base + "-" + std::to_string(suffix));
    std::filesystem::create_directories(candidate);
    return candidate;
}

void write_run_folder(const std::filesystem::path& dir, const RunResult& result) {
    std::filesystem::create_directories(dir);
    write_text_file(dir / "parameters.txt", save_parameters(result.params));
    write_text_file(dir / "stats.csv", stats_csv(result.history));
    write_text_file(dir / "best.txt", best_report(result));
    emit_chart(result.history, dir);
}

}  // namespace gevo
