#pragma once

#include <optional>
#include <string>
#include <vector>

#include "gevo/mapper.hpp"

namespace gevo {

enum class Direction { minimise, maximise };

// Fitness with a dedicated worst sentinel for unevaluated or invalid
// individuals. The sentinel loses every comparison against a real value in
// either direction; it is not an extreme float, so it cannot leak into
// statistics.
struct Fitness {
    std::optional<double> value;

    static Fitness worst() { return {}; }
    bool is_worst() const { return !value.has_value(); }
    bool operator==(const Fitness&) const = default;
};

// Strict "a beats b" under the given direction. Two sentinels never beat each
// other; equal real values do not either.
inline bool fitness_better(const Fitness& a, const Fitness& b, Direction d) {
    if (a.is_worst()) return false;
    if (b.is_worst()) return true;
    return d == Direction::minimise ? *a.value < *b.value : *a.value > *b.value;
}

struct Individual {
    Genome genome;
    std::optional<DerivationTree> tree;
    std::optional<std::string> phenotype;
    Fitness fitness;
    bool invalid = false;
    std::size_t used_codons = 0;
    std::optional<int> depth;
    std::optional<int> nodes;
};

using Population = std::vector<Individual>;

// Maps the genome and fills in everything but fitness. with_tree also stores
// the derivation tree (needed by the tree-based operators).
Individual make_individual(const Grammar& grammar, Genome genome, int max_wraps = 0,
                           bool with_tree = false, int max_tree_depth = 0);

// Builds the individual a tree already encodes: genome, phenotype and the
// derivation statistics all come from the tree, so it is valid by
// construction.
Individual individual_from_tree(const Grammar& grammar, DerivationTree tree,
                                std::uint32_t codon_size);

}  // namespace gevo
