#include "gevo/engine.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>

#include "gevo/problems.hpp"

namespace gevo {

namespace {

CrossoverVariant linear_variant(const std::string& name) {
    if (name == "fixed_onepoint") return CrossoverVariant::fixed_onepoint;
    if (name == "fixed_twopoint") return CrossoverVariant::fixed_twopoint;
    if (name == "variable_onepoint") return CrossoverVariant::variable_onepoint;
    return CrossoverVariant::variable_twopoint;
}

bool needs_dataset(const Parameters& p) {
    return p.problem == "regression" || p.problem == "classification";
}

double resolve_mutation_rate(const Parameters& p, const Individual& child) {
    if (p.mutation_rate == "auto")
        return 1.0 / static_cast<double>(std::max<std::size_t>(1, child.used_codons));
    double rate = 0.0;
    std::from_chars(p.mutation_rate.data(), p.mutation_rate.data() + p.mutation_rate.size(), rate);
    return rate;
}

Individual remap(SearchContext& ctx, Genome genome) {
    return make_individual(ctx.grammar, std::move(genome), ctx.params.max_wraps, ctx.with_tree,
                           ctx.params.mapping_depth_limit);
}

void mutate_child(Individual& child, SearchContext& ctx) {
    const Parameters& p = ctx.params;
    if (p.mutation == "codon_flip") {
        child = remap(ctx, mutate_codon_flip(child, resolve_mutation_rate(p, child), p.within_used,
                                             ctx.rng));
    } else if (p.mutation == "genome_flip") {
        child = remap(ctx,
                      mutate_genome_flip(child, p.mutation_events, p.within_used, ctx.rng));
    } else if (!child.invalid && child.tree) {
        child = mutate_subtree(child, ctx.grammar, p.max_tree_depth, ctx.rng);
    }
}

// Crossover (with its probability) then mutation, yielding two unevaluated
// children.
std::pair<Individual, Individual> breed(const Individual& a, const Individual& b,
                                        SearchContext& ctx) {
    const Parameters& p = ctx.params;
    std::uniform_real_distribution<double> coin(0.0, 1.0);

    std::pair<Individual, Individual> kids;
    if (coin(ctx.rng) >= p.crossover_probability) {
        kids = {a, b};
    } else if (p.crossover == "subtree") {
        // Invalid parents cannot offer subtrees; fall back to copies.
        if (!a.invalid && a.tree && !b.invalid && b.tree)
            kids = crossover_subtree(a, b, ctx.grammar, p.max_tree_depth, ctx.rng);
        else
            kids = {a, b};
    } else {
        auto [g1, g2] = crossover_linear(a, b, linear_variant(p.crossover), p.within_used, ctx.rng);
        kids = {remap(ctx, std::move(g1)), remap(ctx, std::move(g2))};
    }
    mutate_child(kids.first, ctx);
    mutate_child(kids.second, ctx);
    return kids;
}

Population select_parents(const Population& pop, int generation_size, SearchContext& ctx) {
    const Parameters& p = ctx.params;
    if (p.selection == "truncation")
        return select_truncation(pop, p.truncation_proportion, ctx.direction);
    return select_tournament(pop, generation_size, p.tournament_size, p.allow_invalid_selection,
                             ctx.direction, ctx.rng);
}

Population initialise(SearchContext& ctx) {
    const Parameters& p = ctx.params;
    try {
        if (p.initialisation == "random_genome")
            return init_random_genome(ctx.grammar, p.population_size, p.genome_length, p.codon_size,
                                      p.max_wraps, ctx.with_tree, ctx.rng);
        InitMethod method = p.initialisation == "rhh"       ? InitMethod::rhh
                            : p.initialisation == "pi_grow" ? InitMethod::pi_grow
                                                            : InitMethod::random_grow;
        return init_tree_based(ctx.grammar, p.population_size, p.init_depth_min, p.init_depth_max,
                               method, p.codon_size, ctx.rng);
    } catch (const DepthInfeasible& e) {
        throw ConfigurationError("init_depth_min", std::string("parameter 'init_depth_min': ") +
                                                       e.what());
    }
}

std::size_t best_index(const Population& pop, Direction direction) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < pop.size(); ++i)
        if (fitness_better(pop[i].fitness, pop[best].fitness, direction)) best = i;
    return best;
}

GenerationStats snapshot(const Population& pop, int generation, SearchContext& ctx,
                         std::uint64_t calls_before, std::uint64_t hits_before,
                         double elapsed_seconds) {
    GenerationStats s;
    s.generation = generation;

    std::size_t best = best_index(pop, ctx.direction);
    s.best = pop[best].fitness;
    s.best_phenotype = pop[best].phenotype.value_or("");

    std::vector<double> values;
    double used = 0.0, depth = 0.0, nodes = 0.0;
    std::size_t valid = 0;
    for (const auto& ind : pop) {
        if (ind.invalid) {
            ++s.invalids;
            continue;
        }
        ++valid;
        used += static_cast<double>(ind.used_codons);
        depth += ind.depth ? *ind.depth : 0;
        nodes += ind.nodes ? *ind.nodes : 0;
        if (ind.fitness.value) values.push_back(*ind.fitness.value);
    }
    if (valid > 0) {
        s.mean_used_codons = used / static_cast<double>(valid);
        s.mean_depth = depth / static_cast<double>(valid);
        s.mean_nodes = nodes / static_cast<double>(valid);
    }
    if (!values.empty()) {
        double sum = 0.0;
        for (double v : values) sum += v;
        s.mean = sum / static_cast<double>(values.size());
        std::sort(values.begin(), values.end());
        std::size_t mid = values.size() / 2;
        s.median = values.size() % 2 == 1 ? values[mid] : (values[mid - 1] + values[mid]) / 2.0;
    }

    s.fitness_calls = ctx.total_fitness_calls - calls_before;
    s.cache_hits = ctx.total_cache_hits - hits_before;
    s.elapsed_seconds = elapsed_seconds;
    return s;
}

}  // namespace

void evaluate(Population& pop, SearchContext& ctx) {
    for (auto& ind : pop) {
        ++ctx.total_evaluated;
        if (ind.invalid) {
            ind.fitness = Fitness::worst();
            continue;
        }
        const std::string& phenotype = *ind.phenotype;
        if (const auto* entry = ctx.cache.get(phenotype)) {
            ind.fitness = Fitness{entry->fitness};
            ++ctx.total_cache_hits;
            continue;
        }
        ++ctx.total_fitness_calls;
        try {
            double value = ctx.fitness(phenotype);
            ind.fitness = Fitness{value};
            ctx.cache.put(phenotype, value);
        } catch (const FitnessRuntimeError&) {
            ind.fitness = Fitness::worst();
            ctx.cache.put(phenotype, std::nullopt);
        }
    }
}

Population step_generational(Population pop, SearchContext& ctx) {
    const Parameters& p = ctx.params;
    auto gen_size = static_cast<std::size_t>(p.population_size - p.elite_size);

    Population parents = select_parents(pop, static_cast<int>(gen_size), ctx);
    std::uniform_int_distribution<std::size_t> pick(0, parents.size() - 1);

    Population children;
    children.reserve(gen_size);
    while (children.size() < gen_size) {
        auto [c1, c2] = breed(parents[pick(ctx.rng)], parents[pick(ctx.rng)], ctx);
        children.push_back(std::move(c1));
        if (children.size() < gen_size) children.push_back(std::move(c2));
    }
    evaluate(children, ctx);
    return replace_generational(pop, std::move(children), p.elite_size, ctx.direction);
}

Population step_steady_state(Population pop, SearchContext& ctx) {
    Population parents = select_parents(pop, 2, ctx);

    const Individual* a = &parents[0];
    const Individual* b = parents.size() > 1 ? &parents[1] : &parents[0];
    if (parents.size() > 2) {
        // Truncation returns a whole pool; breed from two uniform picks.
        std::uniform_int_distribution<std::size_t> pick(0, parents.size() - 1);
        a = &parents[pick(ctx.rng)];
        b = &parents[pick(ctx.rng)];
    }

    auto kids = breed(*a, *b, ctx);
    Population pair;
    pair.push_back(std::move(kids.first));
    pair.push_back(std::move(kids.second));
    evaluate(pair, ctx);
    return replace_steady_state(std::move(pop),
                                {std::move(pair[0]), std::move(pair[1])}, ctx.direction);
}

std::function<double(const std::string&)> make_fitness_function(const Parameters& params,
                                                                const Dataset* dataset) {
    if (params.problem == "string_match") {
        std::string target = params.target;
        return [target](const std::string& ph) { return fitness_string_match(ph, target); };
    }
    if (params.problem == "max_program") {
        return [](const std::string& ph) { return fitness_program_max(ph); };
    }
    if (!dataset)
        throw ConfigurationError("dataset", "problem '" + params.problem + "' needs a dataset");
    if (params.problem == "regression") {
        ErrorMetric metric = parse_metric(params.error_metric);
        return [dataset, metric](const std::string& ph) {
            return fitness_regression(ph, *dataset, metric);
        };
    }
    return [dataset](const std::string& ph) { return fitness_classification(ph, *dataset); };
}

Direction run_direction(const Parameters& params) {
    if (params.fitness_direction == "maximise") return Direction::maximise;
    if (params.fitness_direction == "minimise") return Direction::minimise;
    return params.problem == "max_program" ? Direction::maximise : Direction::minimise;
}

RunResult search_loop(const Parameters& raw_params, const StepFunction& custom_step) {
    Parameters params = raw_params;
    finalize_parameters(params);
    validate_parameters(params);

    std::optional<Dataset> dataset;
    if (needs_dataset(params)) dataset = load_dataset(params.datasets_dir + "/" + params.dataset);

    GrammarContext gctx;
    if (dataset) gctx.dataset_n_vars = dataset->n_vars;
    Grammar grammar = load_grammar(params.grammars_dir + "/" + params.grammar_file, gctx);

    SearchContext ctx{params,
                      grammar,
                      run_direction(params),
                      make_fitness_function(params, dataset ? &*dataset : nullptr),
                      FitnessCache(params.cache == "off" ? CachePolicy::off : CachePolicy::lookup),
                      std::mt19937{},
                      params.crossover == "subtree" || params.mutation == "subtree"};
    std::seed_seq seed{static_cast<std::uint32_t>(*params.random_seed),
                       static_cast<std::uint32_t>(*params.random_seed >> 32)};
    ctx.rng.seed(seed);

    auto t0 = std::chrono::steady_clock::now();
    auto elapsed = [&t0] {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    };

    Population pop = initialise(ctx);
    evaluate(pop, ctx);

    RunResult result;
    result.history.push_back(snapshot(pop, 0, ctx, 0, 0, elapsed()));
    result.best = pop[best_index(pop, ctx.direction)];

    StepFunction step = custom_step;
    int steps_per_generation = 1;
    if (!step) {
        if (params.replacement == "steady_state") {
            step = step_steady_state;
            steps_per_generation =
                std::max(1, (params.population_size - params.elite_size) / 2);
        } else {
            step = step_generational;
        }
    }

    for (int gen = 1; gen <= params.generations; ++gen) {
        std::uint64_t calls_before = ctx.total_fitness_calls;
        std::uint64_t hits_before = ctx.total_cache_hits;
        for (int k = 0; k < steps_per_generation; ++k) pop = step(std::move(pop), ctx);
        result.history.push_back(snapshot(pop, gen, ctx, calls_before, hits_before, elapsed()));

        std::size_t best = best_index(pop, ctx.direction);
        if (fitness_better(pop[best].fitness, result.best.fitness, ctx.direction))
            result.best = pop[best];
    }

    if (dataset && result.best.phenotype && !result.best.invalid) {
        try {
            if (params.problem == "regression")
                result.best_test_fitness =
                    fitness_regression(*result.best.phenotype, *dataset,
                                       parse_metric(params.error_metric), Split::test);
            else
                result.best_test_fitness =
                    fitness_classification(*result.best.phenotype, *dataset, Split::test);
        } catch (const FitnessRuntimeError&) {
            result.best_test_fitness = std::nullopt;
        }
    }

    result.params = std::move(params);
    result.total_fitness_calls = ctx.total_fitness_calls;
    result.total_cache_hits = ctx.total_cache_hits;
    result.total_evaluated = ctx.total_evaluated;
    return result;
}

}  // namespace gevo
