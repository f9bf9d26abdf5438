#pragma once

#include <functional>
#include <optional>

#include "gevo/cache.hpp"
#include "gevo/dataset.hpp"
#include "gevo/operators.hpp"
#include "gevo/parameters.hpp"

namespace gevo {

// Per-generation snapshot. Wall-clock time stays out of the serialized stats
// so that equal-seed runs replay byte for byte.
struct GenerationStats {
    int generation = 0;
    Fitness best;
    std::string best_phenotype;
    std::optional<double> mean;    // over valid individuals; absent when none
    std::optional<double> median;
    int invalids = 0;
    std::uint64_t fitness_calls = 0;  // fresh fitness-function invocations this generation
    std::uint64_t cache_hits = 0;
    double mean_used_codons = 0.0;
    double mean_depth = 0.0;
    double mean_nodes = 0.0;
    double elapsed_seconds = 0.0;  // since run start; reporting only
};

// Everything a step function needs to advance the population. Owned by
// search_loop; custom step functions receive it by reference.
struct SearchContext {
    const Parameters& params;
    const Grammar& grammar;
    Direction direction;
    std::function<double(const std::string&)> fitness;
    FitnessCache cache;
    std::mt19937 rng;
    bool with_tree = false;
    std::uint64_t total_fitness_calls = 0;
    std::uint64_t total_cache_hits = 0;
    std::uint64_t total_evaluated = 0;  // individuals scored, cached or fresh
};

struct RunResult {
    Individual best;                       // best ever seen, with fitness
    std::vector<GenerationStats> history;  // generation 0 plus one entry per generation
    Parameters params;                     // finalized settings, seed included
    std::optional<double> best_test_fitness;  // for dataset problems: best scored on Test
    std::uint64_t total_fitness_calls = 0;
    std::uint64_t total_cache_hits = 0;
    std::uint64_t total_evaluated = 0;
};

// Scores every individual in place. Invalid individuals get the worst
// sentinel without touching the fitness function; valid ones go through the
// cache; a FitnessRuntimeError downgrades the individual to the sentinel and
// the sweep continues.
void evaluate(Population& pop, SearchContext& ctx);

// One generation of the generational scheme: select, pair into children by
// crossover, mutate, re-map, evaluate, then elites plus children replace the
// parents.
Population step_generational(Population pop, SearchContext& ctx);

// One steady-state event: two parents breed two children which replace the
// two worst individuals. Exactly two evaluations.
Population step_steady_state(Population pop, SearchContext& ctx);

// The loop body can be swapped out wholesale; the default dispatches on
// params.replacement. A "generation" of the steady-state scheme is
// (population_size - elite_size) / 2 events so both schemes spend the same
// evaluation budget per recorded generation.
using StepFunction = std::function<Population(Population, SearchContext&)>;

// Runs the configured search end to end: finalize and validate parameters,
// load grammar (and dataset when the problem needs one), initialise, then
// `generations` steps with stats recorded for generation 0 and after each
// step. Deterministic for a fixed parameter set including the seed.
RunResult search_loop(const Parameters& params, const StepFunction& custom_step = {});

// The fitness closure search_loop would build for these settings; exposed so
// tools can score phenotypes (e.g. on the test split) outside the loop.
std::function<double(const std::string&)> make_fitness_function(const Parameters& params,
                                                                const Dataset* dataset);

Direction run_direction(const Parameters& params);  // resolved fitness direction

}  // namespace gevo
