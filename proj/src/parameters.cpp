#include "gevo/parameters.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>

namespace gevo {

namespace {

std::string trim(const std::string& s) {
    auto is_ws = [](char c) { return c == ' ' || c == '\t' || c == '\r'; };
    std::size_t b = 0, e = s.size();
    while (b < e && is_ws(s[b])) ++b;
    while (e > b && is_ws(s[e - 1])) --e;
    return s.substr(b, e - b);
}

template <typename T>
T parse_number(const std::string& key, const std::string& value) {
    T v{};
    auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), v);
    if (ec != std::errc{} || ptr != value.data() + value.size())
        throw ConfigurationError(key, "parameter '" + key + "': cannot parse '" + value + "'");
    return v;
}

double parse_double(const std::string& key, const std::string& value) {
    return parse_number<double>(key, value);
}

bool parse_bool(const std::string& key, const std::string& value) {
    if (value == "true" || value == "1") return true;
    if (value == "false" || value == "0") return false;
    throw ConfigurationError(key, "parameter '" + key + "': expected true or false, got '" + value +
                                      "'");
}

std::string fmt_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

struct Handler {
    std::string name;
    std::function<std::string(const Parameters&)> get;
    std::function<void(Parameters&, const std::string&)> set;
};

const std::vector<Handler>& handlers() {
    auto str = [](std::string Parameters::* field, const char* name) {
        return Handler{name, [field](const Parameters& p) { return p.*field; },
                       [field](Parameters& p, const std::string& v) { p.*field = v; }};
    };
    auto num_int = [](int Parameters::* field, const char* name) {
        return Handler{name,
                       [field](const Parameters& p) { return std::to_string(p.*field); },
                       [field, name = std::string(name)](Parameters& p, const std::string& v) {
                           p.*field = parse_number<int>(name, v);
                       }};
    };
    auto num_double = [](double Parameters::* field, const char* name) {
        return Handler{name, [field](const Parameters& p) { return fmt_double(p.*field); },
                       [field, name = std::string(name)](Parameters& p, const std::string& v) {
                           p.*field = parse_double(name, v);
                       }};
    };
    auto boolean = [](bool Parameters::* field, const char* name) {
        return Handler{name,
                       [field](const Parameters& p) { return p.*field ? "true" : "false"; },
                       [field, name = std::string(name)](Parameters& p, const std::string& v) {
                           p.*field = parse_bool(name, v);
                       }};
    };

    static const std::vector<Handler> table = {
        str(&Parameters::problem, "problem"),
        str(&Parameters::grammar_file, "grammar_file"),
        str(&Parameters::dataset, "dataset"),
        str(&Parameters::fitness_direction, "fitness_direction"),
        str(&Parameters::target, "target"),
        str(&Parameters::error_metric, "error_metric"),
        num_int(&Parameters::population_size, "population_size"),
        num_int(&Parameters::generations, "generations"),
        num_int(&Parameters::elite_size, "elite_size"),
        str(&Parameters::selection, "selection"),
        num_int(&Parameters::tournament_size, "tournament_size"),
        num_double(&Parameters::truncation_proportion, "truncation_proportion"),
        str(&Parameters::crossover, "crossover"),
        num_double(&Parameters::crossover_probability, "crossover_probability"),
        boolean(&Parameters::within_used, "within_used"),
        str(&Parameters::mutation, "mutation"),
        str(&Parameters::mutation_rate, "mutation_rate"),
        num_int(&Parameters::mutation_events, "mutation_events"),
        str(&Parameters::replacement, "replacement"),
        str(&Parameters::initialisation, "initialisation"),
        num_int(&Parameters::init_depth_min, "init_depth_min"),
        num_int(&Parameters::init_depth_max, "init_depth_max"),
        num_int(&Parameters::genome_length, "genome_length"),
        num_int(&Parameters::max_wraps, "max_wraps"),
        Handler{"codon_size",
                [](const Parameters& p) { return std::to_string(p.codon_size); },
                [](Parameters& p, const std::string& v) {
                    p.codon_size = parse_number<std::uint32_t>("codon_size", v);
                }},
        num_int(&Parameters::max_tree_depth, "max_tree_depth"),
        num_int(&Parameters::mapping_depth_limit, "mapping_depth_limit"),
        str(&Parameters::cache, "cache"),
        boolean(&Parameters::allow_invalid_selection, "allow_invalid_selection"),
        Handler{"random_seed",
                [](const Parameters& p) {
                    return p.random_seed ? std::to_string(*p.random_seed) : std::string{};
                },
                [](Parameters& p, const std::string& v) {
                    p.random_seed = parse_number<std::uint64_t>("random_seed", v);
                }},
        str(&Parameters::results_dir, "results_dir"),
        str(&Parameters::grammars_dir, "grammars_dir"),
        str(&Parameters::datasets_dir, "datasets_dir"),
    };
    return table;
}

bool value_in(const std::string& v, std::initializer_list<const char*> allowed) {
    return std::any_of(allowed.begin(), allowed.end(),
                       [&](const char* a) { return v == a; });
}

void require(bool ok, const char* key, const std::string& msg) {
    if (!ok) throw ConfigurationError(key, "parameter '" + std::string(key) + "': " + msg);
}

}  // namespace

const std::vector<std::string>& parameter_keys() {
    static const std::vector<std::string> keys = [] {
        std::vector<std::string> out;
        for (const auto& h : handlers()) out.push_back(h.name);
        return out;
    }();
    return keys;
}

void apply_parameter(Parameters& params, const std::string& key, const std::string& value) {
    for (const auto& h : handlers()) {
        if (h.name == key) {
            h.set(params, value);
            return;
        }
    }
    throw ParameterFileError(ParameterFileError::Kind::unknown_key, "unknown parameter '" + key + "'");
}

std::string save_parameters(const Parameters& params) {
    std::ostringstream out;
    for (const auto& h : handlers()) {
        std::string value = h.get(params);
        if (h.name == "random_seed" && value.empty()) continue;  // not drawn yet
        out << h.name << ": " << value << '\n';
    }
    return out.str();
}

void save_parameters_file(const Parameters& params, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write parameters file: " + path);
    out << save_parameters(params);
}

void load_parameters_file(Parameters& params, const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw ParameterFileError(ParameterFileError::Kind::missing_file,
                                 "cannot open parameters file: " + path);

    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::string stripped = trim(line);
        if (stripped.empty() || stripped.front() == '#') continue;
        auto colon = stripped.find(':');
        if (colon == std::string::npos)
            throw ParameterFileError(ParameterFileError::Kind::malformed_line,
                                     path + ":" + std::to_string(line_no) + ":" +
                                         std::to_string(stripped.size() + 1) +
                                         ": expected 'key: value'");
        std::string key = trim(stripped.substr(0, colon));
        std::string value = trim(stripped.substr(colon + 1));
        try {
            apply_parameter(params, key, value);
        } catch (const ParameterFileError& e) {
            throw ParameterFileError(e.kind,
                                     path + ":" + std::to_string(line_no) + ": " + e.what());
        }
    }
}

void finalize_parameters(Parameters& params) {
    require(value_in(params.problem, {"string_match", "regression", "classification", "max_program"}),
            "problem", "unknown problem '" + params.problem + "'");

    if (params.results_dir.empty()) {
        const char* env = std::getenv("GEVO_RESULTS");
        params.results_dir = env && *env ? env : "results";
    }
    if (params.grammar_file.empty()) {
        if (params.problem == "string_match") params.grammar_file = "letters.bnf";
        else if (params.problem == "regression") params.grammar_file = "regression.bnf";
        else if (params.problem == "classification") params.grammar_file = "classification.bnf";
        else params.grammar_file = "max_program.bnf";
    }
    if (params.dataset.empty()) {
        if (params.problem == "regression") params.dataset = "Vladislavleva4";
        else if (params.problem == "classification") params.dataset = "Separable2";
    }
    if (params.fitness_direction == "auto")
        params.fitness_direction = params.problem == "max_program" ? "maximise" : "minimise";
    if (!params.random_seed) {
        std::random_device rd;
        params.random_seed = (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
    }
}

void validate_parameters(const Parameters& params) {
    require(value_in(params.problem, {"string_match", "regression", "classification", "max_program"}),
            "problem", "unknown problem '" + params.problem + "'");
    require(params.population_size >= 1, "population_size", "must be >= 1");
    require(params.generations >= 0, "generations", "must be >= 0");
    require(params.elite_size >= 0, "elite_size", "must be >= 0");
    require(params.elite_size < params.population_size, "elite_size",
            "must be smaller than population_size");
    require(value_in(params.selection, {"tournament", "truncation"}), "selection",
            "unknown selection '" + params.selection + "'");
    require(params.tournament_size >= 1, "tournament_size", "must be >= 1");
    require(params.truncation_proportion > 0.0 && params.truncation_proportion <= 1.0,
            "truncation_proportion", "must be in (0, 1]");
    require(value_in(params.crossover, {"fixed_onepoint", "fixed_twopoint", "variable_onepoint",
                                        "variable_twopoint", "subtree"}),
            "crossover", "unknown crossover '" + params.crossover + "'");
    require(params.crossover_probability >= 0.0 && params.crossover_probability <= 1.0,
            "crossover_probability", "must be in [0, 1]");
    require(value_in(params.mutation, {"codon_flip", "genome_flip", "subtree"}), "mutation",
            "unknown mutation '" + params.mutation + "'");
    if (params.mutation_rate != "auto") {
        double rate = parse_double("mutation_rate", params.mutation_rate);
        require(rate >= 0.0 && rate <= 1.0, "mutation_rate", "must be 'auto' or in [0, 1]");
    }
    require(params.mutation_events >= 0, "mutation_events", "must be >= 0");
    require(value_in(params.replacement, {"generational", "steady_state"}), "replacement",
            "unknown replacement '" + params.replacement + "'");
    require(value_in(params.initialisation, {"random_genome", "random_grow", "rhh", "pi_grow"}),
            "initialisation", "unknown initialisation '" + params.initialisation + "'");
    require(params.init_depth_min >= 1, "init_depth_min", "must be >= 1");
    require(params.init_depth_min <= params.init_depth_max, "init_depth_max",
            "must be >= init_depth_min");
    require(params.genome_length >= 1, "genome_length", "must be >= 1");
    require(params.max_wraps >= 0, "max_wraps", "must be >= 0");
    require(params.codon_size >= 2, "codon_size", "must be >= 2");
    require(params.max_tree_depth >= 0, "max_tree_depth", "must be >= 0");
    require(params.mapping_depth_limit >= 0, "mapping_depth_limit", "must be >= 0");
    if (params.crossover == "subtree" || params.mutation == "subtree")
        require(params.max_tree_depth >= 1, "max_tree_depth",
                "subtree operators need a positive depth limit");
    require(value_in(params.cache, {"lookup", "off"}), "cache",
            "unknown cache policy '" + params.cache + "'");
    require(value_in(params.fitness_direction, {"auto", "minimise", "maximise"}),
            "fitness_direction", "unknown direction '" + params.fitness_direction + "'");
    require(value_in(params.error_metric, {"rmse", "mse", "mae"}), "error_metric",
            "unknown metric '" + params.error_metric + "'");
}

}  // namespace gevo
