#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace gevo {

// A setting rejected at configuration time; `key` names the offending
// parameter so callers can point straight at it.
struct ConfigurationError : std::runtime_error {
    ConfigurationError(std::string key_, const std::string& msg)
        : std::runtime_error(msg), key(std::move(key_)) {}
    std::string key;
};

// Problems reading a parameters file (as opposed to problems with a value).
struct ParameterFileError : std::runtime_error {
    enum class Kind { missing_file, malformed_line, unknown_key };

    ParameterFileError(Kind k, const std::string& msg) : std::runtime_error(msg), kind(k) {}
    Kind kind;
};

// Every knob of a run. String-typed fields hold the serialized spelling and
// are decoded where they are used; finalize_parameters resolves the "auto"
// and empty defaults so a saved file replays the exact same run.
struct Parameters {
    std::string problem = "regression";  // string_match | regression | classification | max_program
    std::string grammar_file;            // empty: problem default
    std::string dataset;                 // empty: problem default
    std::string fitness_direction = "auto";  // auto | minimise | maximise
    std::string target = "Hello world!";     // string_match goal
    std::string error_metric = "rmse";       // rmse | mse | mae

    int population_size = 500;
    int generations = 50;
    int elite_size = 1;

    std::string selection = "tournament";  // tournament | truncation
    int tournament_size = 2;
    double truncation_proportion = 0.5;

    // fixed_onepoint | fixed_twopoint | variable_onepoint | variable_twopoint | subtree
    std::string crossover = "variable_onepoint";
    double crossover_probability = 0.75;
    bool within_used = true;

    std::string mutation = "codon_flip";  // codon_flip | genome_flip | subtree
    std::string mutation_rate = "auto";   // auto: one expected flip per used codon
    int mutation_events = 1;              // genome_flip draw count

    std::string replacement = "generational";  // generational | steady_state
    std::string initialisation = "rhh";  // random_genome | random_grow | rhh | pi_grow
    int init_depth_min = 2;
    int init_depth_max = 8;
    int genome_length = 200;  // random_genome initial length

    int max_wraps = 0;
    std::uint32_t codon_size = 100000;
    int max_tree_depth = 17;      // ceiling for tree building and tree operators
    int mapping_depth_limit = 0;  // runaway-derivation guard in the mapper; 0 disables

    std::string cache = "lookup";  // lookup | off
    bool allow_invalid_selection = false;
    std::optional<std::uint64_t> random_seed;  // auto-generated and recorded when unset

    std::string results_dir;  // empty: $GEVO_RESULTS, then "results"
    std::string grammars_dir = "grammars";
    std::string datasets_dir = "datasets";

    bool operator==(const Parameters&) const = default;
};

// All serializable keys in file order.
const std::vector<std::string>& parameter_keys();

// Sets one field from its serialized spelling. Unknown keys raise
// ParameterFileError(unknown_key); unparseable values raise
// ConfigurationError naming the key.
void apply_parameter(Parameters& params, const std::string& key, const std::string& value);

// Serialized "key: value" form, one key per line, stable order.
std::string save_parameters(const Parameters& params);
void save_parameters_file(const Parameters& params, const std::string& path);

// Reads "key: value" lines into params (missing keys keep their current
// values). '#' lines are comments; blank lines are skipped. Malformed lines
// report file, line and column.
void load_parameters_file(Parameters& params, const std::string& path);

// Resolves "auto"/empty fields: seed drawn and recorded if absent, fitness
// direction and grammar/dataset defaults chosen per problem, results_dir
// falling back to $GEVO_RESULTS then "results".
void finalize_parameters(Parameters& params);

// Rejects inconsistent settings with ConfigurationError naming the key.
void validate_parameters(const Parameters& params);

}  // namespace gevo
