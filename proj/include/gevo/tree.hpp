#pragma once

#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "gevo/genome.hpp"
#include "gevo/grammar.hpp"

namespace gevo {

// Requested tree cannot exist: every alternative of some rule needs more depth
// than the limit allows.
struct DepthInfeasible : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// codon_size leaves no room to synthesize a codon for this choice count.
struct RangeTooSmall : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// One expanded non-terminal in a derivation. The root of a tree sits at depth
// 1; children of a node at depth d sit at d+1. Terminals are not stored as
// nodes; they are recovered from the grammar production when the phenotype is
// rendered.
struct DerivationTree {
    std::string rule;         // the non-terminal this node expands
    int choice_index = 0;     // which alternative was taken
    std::uint32_t codon = 0;  // codon that encodes the choice under the mod rule
    int depth = 1;
    std::vector<DerivationTree> children;  // one per non-terminal of the chosen alternative

    bool operator==(const DerivationTree&) const = default;
};

// Encodes choice_index as `multiple + choice_index` where multiple is a
// positive multiple of num_choices, so the mod rule decodes it back. The
// randomized variant draws the multiple; both reject parameters for which no
// in-range codon exists (RangeTooSmall).
std::uint32_t make_codon(int choice_index, int num_choices, std::uint32_t multiple);
std::uint32_t synthesize_codon(int choice_index, int num_choices, std::uint32_t codon_size,
                               std::mt19937& rng);

enum class BuildMode { grow, full, pi_grow };

// Builds a random derivation tree for the grammar's start symbol.
//   grow    - uniform choice among alternatives that fit in max_depth.
//   full    - prefer recursive fitting alternatives (deepest otherwise) so
//             branches keep extending until the limit.
//   pi_grow - grow with a random expansion order that forces at least one
//             branch to reach max_depth exactly.
// Throws DepthInfeasible when max_depth < the grammar's minimal tree depth.
// Synthesized codons stay below codon_size.
DerivationTree build_tree(const Grammar& grammar, int max_depth, BuildMode mode, std::mt19937& rng,
                          std::uint32_t codon_size = Genome::kDefaultCodonSize);

// Grow-mode subtree rooted at `rule` starting at tree depth `at_depth`,
// keeping the whole construction within max_depth. Used by tree-based
// mutation as well as build_tree.
DerivationTree grow_subtree(const Grammar& grammar, const std::string& rule, int at_depth,
                            int max_depth, std::mt19937& rng,
                            std::uint32_t codon_size = Genome::kDefaultCodonSize);

// Reads the codons back out of a tree in derivation order (node before its
// children, children left to right), i.e. exactly the order in which mapping
// a genome consumes them.
Genome tree_to_genome(const DerivationTree& tree, std::uint32_t codon_size = Genome::kDefaultCodonSize);

// Renders the string the tree derives.
std::string tree_phenotype(const DerivationTree& tree, const Grammar& grammar);

int tree_depth(const DerivationTree& tree);
int tree_node_count(const DerivationTree& tree);

// Re-assigns depth fields so the subtree is rooted at `at_depth`. Needed after
// subtrees move between parents.
void reroot_depths(DerivationTree& tree, int at_depth);

}  // namespace gevo
