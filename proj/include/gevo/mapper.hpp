#pragma once

#include <optional>
#include <string>

#include "gevo/genome.hpp"
#include "gevo/grammar.hpp"
#include "gevo/tree.hpp"

namespace gevo {

// Outcome of mapping a genome through a grammar. When the derivation does not
// finish within the wrapping budget (or trips the depth guard) the individual
// is invalid: no phenotype, no tree statistics, but used_codons and wraps
// still report how far the mapping got.
struct MappingResult {
    std::optional<std::string> phenotype;
    bool invalid = true;
    std::size_t used_codons = 0;  // consumption events; exceeds genome length when wrapping
    int wraps = 0;
    std::optional<int> depth;
    std::optional<int> nodes;
};

struct TreeMappingResult {
    MappingResult result;
    std::optional<DerivationTree> tree;  // present iff the mapping completed
};

// Decodes the genome left to right: each non-terminal consumes one codon and
// picks alternative `codon % num_choices`. Unit rules consume a codon too.
// When the genome runs out the read restarts from codon 0, at most max_wraps
// times. max_tree_depth 0 disables the runaway-derivation guard; a positive
// value invalidates any mapping that expands a node deeper than the limit.
MappingResult map_genome(const Grammar& grammar, const Genome& genome, int max_wraps = 0,
                         int max_tree_depth = 0);

// Same decoding, but also records the derivation tree. Field-for-field
// equivalent to map_genome on every input.
TreeMappingResult map_genome_with_tree(const Grammar& grammar, const Genome& genome,
                                       int max_wraps = 0, int max_tree_depth = 0);

}  // namespace gevo
