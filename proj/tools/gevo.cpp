// gevo: grammar-guided evolutionary search from the command line.
//
//   gevo run [--parameters FILE] [--KEY VALUE ...]
//   gevo experiment --seeds 1-30 [--jobs N] [--parameters FILE] [--KEY VALUE ...]
//   gevo parse-grammar FILE [--dataset-n-vars N]
//
// With no arguments, runs the default configuration (regression). Exit codes:
// 0 success, 1 runtime failure, 2 configuration problem.

#include <charconv>
#include <iostream>
#include <map>
#include <string>

#include <CLI11.hpp>

#include "gevo/experiment.hpp"
#include "gevo/results.hpp"

namespace {

// One --flag per parameter key; values stay strings and flow through the same
// decoder as the parameters file, so precedence is plain application order:
// defaults, then file, then command line.
struct KeyOptions {
    std::map<std::string, std::string> values;
    std::map<std::string, CLI::Option*> options;

    void attach(CLI::App* cmd) {
        for (const auto& key : gevo::parameter_keys())
            options[key] = cmd->add_option("--" + key, values[key]);
    }

    void apply(gevo::Parameters& params) const {
        for (const auto& [key, opt] : options)
            if (opt->count() > 0) gevo::apply_parameter(params, key, values.at(key));
    }
};

gevo::Parameters assemble(const std::string& parameters_file, const KeyOptions& overrides) {
    gevo::Parameters params;
    if (!parameters_file.empty()) gevo::load_parameters_file(params, parameters_file);
    overrides.apply(params);
    return params;
}

// "1,2,10" and "1-30" (inclusive), mixed: "1-3,7".
std::vector<std::uint64_t> parse_seeds(const std::string& text) {
    std::vector<std::uint64_t> seeds;
    std::size_t pos = 0;
    auto parse_u64 = [&](std::string_view piece) {
        std::uint64_t v = 0;
        auto [ptr, ec] = std::from_chars(piece.data(), piece.data() + piece.size(), v);
        if (ec != std::errc{} || ptr != piece.data() + piece.size())
            throw gevo::ConfigurationError("seeds", "parameter 'seeds': cannot parse '" +
                                                        std::string(piece) + "'");
        return v;
    };
    while (pos <= text.size()) {
        auto comma = text.find(',', pos);
        if (comma == std::string::npos) comma = text.size();
        std::string_view piece(text.data() + pos, comma - pos);
        if (!piece.empty()) {
            auto dash = piece.find('-');
            if (dash == std::string_view::npos) {
                seeds.push_back(parse_u64(piece));
            } else {
                std::uint64_t lo = parse_u64(piece.substr(0, dash));
                std::uint64_t hi = parse_u64(piece.substr(dash + 1));
                if (hi < lo)
                    throw gevo::ConfigurationError("seeds", "parameter 'seeds': empty range '" +
                                                                std::string(piece) + "'");
                for (std::uint64_t s = lo; s <= hi; ++s) seeds.push_back(s);
            }
        }
        pos = comma + 1;
    }
    if (seeds.empty())
        throw gevo::ConfigurationError("seeds", "parameter 'seeds': no seeds given");
    return seeds;
}

int do_run(const gevo::Parameters& params) {
    gevo::RunResult result = gevo::search_loop(params);
    auto folder = gevo::allocate_run_folder(result.params.results_dir, result.params.problem,
                                            *result.params.random_seed);
    gevo::write_run_folder(folder, result);

    std::cout << "results: " << folder.string() << '\n';
    std::cout << "seed: " << *result.params.random_seed << '\n';
    std::cout << "generations: " << result.history.size() - 1
              << "  evaluations: " << result.total_evaluated
              << "  fitness calls: " << result.total_fitness_calls << '\n';
    std::cout << "best fitness: "
              << (result.best.fitness.value ? gevo::format_double(*result.best.fitness.value)
                                            : "none");
    if (result.best_test_fitness)
        std::cout << "  (test: " << gevo::format_double(*result.best_test_fitness) << ")";
    std::cout << '\n';
    std::cout << "best phenotype: " << result.best.phenotype.value_or("(invalid)") << '\n';
    return 0;
}

int do_experiment(const gevo::Parameters& params, const std::string& seeds_text, int jobs) {
    auto seeds = parse_seeds(seeds_text);

    gevo::Parameters base = params;
    gevo::finalize_parameters(base);  // fix the shared settings before fanning out
    gevo::validate_parameters(base);

    auto folder = gevo::allocate_run_folder(base.results_dir, base.problem + "_experiment",
                                            seeds.front());
    auto report = gevo::run_experiment(base, seeds, jobs, folder);
    gevo::write_experiment(folder, report);

    int failures = 0;
    for (const auto& r : report.runs)
        if (!r.ok) ++failures;
    std::cout << "experiment: " << folder.string() << '\n';
    std::cout << "seeds: " << seeds.size() << "  failed: " << failures << '\n';
    if (!report.median_best.empty() && report.median_best.back())
        std::cout << "final median best: " << gevo::format_double(*report.median_best.back())
                  << '\n';
    for (const auto& r : report.runs)
        if (!r.ok) std::cerr << "seed " << r.seed << " failed: " << r.error << '\n';
    return failures == 0 ? 0 : 1;
}

int do_parse_grammar(const std::string& path, int dataset_n_vars) {
    gevo::GrammarContext ctx;
    if (dataset_n_vars > 0) ctx.dataset_n_vars = dataset_n_vars;
    gevo::Grammar grammar = gevo::load_grammar(path, ctx);

    std::cout << "start symbol: <" << grammar.start << ">\n";
    std::cout << "rules: " << grammar.rules.size()
              << "  non-terminals: " << grammar.non_terminals.size()
              << "  terminals: " << grammar.terminals.size() << "\n\n";
    for (const auto& rule : grammar.rules) {
        std::cout << '<' << rule.lhs << ">  choices: " << rule.num_choices()
                  << "  min depth: " << rule.min_depth
                  << (rule.recursive ? "  recursive" : "") << '\n';
        for (int c = 0; c < rule.num_choices(); ++c) {
            const auto& prod = rule.choices[c];
            std::cout << "  " << c << ':';
            for (const auto& sym : prod.symbols) {
                if (sym.is_terminal()) std::cout << " '" << sym.text << '\'';
                else std::cout << " <" << sym.text << '>';
            }
            std::cout << "   [min depth " << prod.min_depth
                      << (prod.recursive ? ", recursive" : "") << "]\n";
        }
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"grammar-guided evolutionary search"};
    app.require_subcommand(0, 1);

    std::string run_params_file, exp_params_file;
    std::string seeds_text;
    int jobs = 1;
    std::string grammar_path;
    int dataset_n_vars = 0;

    auto* run_cmd = app.add_subcommand("run", "run one evolutionary search");
    run_cmd->add_option("--parameters", run_params_file, "parameters file (key: value lines)");
    KeyOptions run_keys;
    run_keys.attach(run_cmd);

    auto* exp_cmd = app.add_subcommand("experiment", "run one configuration across many seeds");
    exp_cmd->add_option("--parameters", exp_params_file, "parameters file (key: value lines)");
    exp_cmd->add_option("--seeds", seeds_text, "seed list, e.g. 1,2,3 or 1-30")->required();
    exp_cmd->add_option("--jobs", jobs, "parallel runs (default 1)");
    KeyOptions exp_keys;
    exp_keys.attach(exp_cmd);

    auto* parse_cmd = app.add_subcommand("parse-grammar", "analyze a grammar file");
    parse_cmd->add_option("file", grammar_path, "grammar file")->required();
    parse_cmd->add_option("--dataset-n-vars", dataset_n_vars,
                          "input column count for GE_RANGE:dataset_n_vars");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;  // bad flags are configuration errors
    }

    try {
        if (run_cmd->parsed()) return do_run(assemble(run_params_file, run_keys));
        if (exp_cmd->parsed())
            return do_experiment(assemble(exp_params_file, exp_keys), seeds_text, jobs);
        if (parse_cmd->parsed()) return do_parse_grammar(grammar_path, dataset_n_vars);
        return do_run(gevo::Parameters{});  // bare invocation: default run
    } catch (const gevo::ConfigurationError& e) {
        std::cerr << "configuration error: " << e.what() << '\n';
        return 2;
    } catch (const gevo::ParameterFileError& e) {
        std::cerr << "configuration error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}
