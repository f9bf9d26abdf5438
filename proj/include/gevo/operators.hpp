#pragma once

#include <random>
#include <stdexcept>
#include <utility>

#include "gevo/individual.hpp"

namespace gevo {

// Selection was asked to draw from a pool with nothing eligible in it.
struct EmptyCandidatePool : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Replacement arithmetic does not add up (elites + children != parents).
struct SizeMismatch : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// ---- initialisation -------------------------------------------------------

// Random linear genomes of fixed length, mapped as-is; individuals whose
// mapping does not complete are kept and marked invalid.
Population init_random_genome(const Grammar& grammar, int pop_size, int genome_length,
                              std::uint32_t codon_size, int max_wraps, bool with_tree,
                              std::mt19937& rng);

enum class InitMethod {
    random_grow,  // every tree grown with the same depth limit
    rhh,          // ramped half-and-half: full/grow pairs over a depth ramp
    pi_grow,      // ramped, each tree forced to hit its depth exactly
};

// Tree-based initialisation over the depth ramp [depth_min, depth_max]. Each
// genome gets a random tail of half its used length so crossover has slack to
// work with. Throws DepthInfeasible when depth_min is below the grammar's
// minimal tree depth.
Population init_tree_based(const Grammar& grammar, int pop_size, int depth_min, int depth_max,
                           InitMethod method, std::uint32_t codon_size, std::mt19937& rng);

// ---- selection ------------------------------------------------------------

// Tournament selection with replacement: each of generation_size winners is
// the best of tournament_size uniform draws. Invalid individuals only enter
// the pool when allow_invalids is set; an empty pool throws
// EmptyCandidatePool.
Population select_tournament(const Population& pop, int generation_size, int tournament_size,
                             bool allow_invalids, Direction direction, std::mt19937& rng);

// Keeps the best ceil(proportion * size) individuals, best first.
Population select_truncation(const Population& pop, double proportion, Direction direction);

// ---- crossover ------------------------------------------------------------

enum class CrossoverVariant { fixed_onepoint, fixed_twopoint, variable_onepoint, variable_twopoint };

// Linear crossover over codon lists; always returns two children. Points are
// drawn within the used portion of each parent when within_used is set (the
// default), falling back to the full length for parents that used fewer than
// two codons.
std::pair<Genome, Genome> crossover_linear(const Individual& a, const Individual& b,
                                           CrossoverVariant variant, bool within_used,
                                           std::mt19937& rng);

// Deterministic splice cores behind crossover_linear, exposed for direct
// testing. Points must satisfy pa <= a.size(), pb <= b.size() etc.
std::pair<Genome, Genome> splice_onepoint(const Genome& a, const Genome& b, std::size_t pa,
                                          std::size_t pb);
std::pair<Genome, Genome> splice_twopoint(const Genome& a, const Genome& b, std::size_t pa1,
                                          std::size_t pa2, std::size_t pb1, std::size_t pb2);

// Swaps subtrees rooted at a shared non-terminal and rebuilds both children
// from their trees. Parents must be valid and carry trees. When the parents
// share no non-terminal the children are plain copies. A positive
// max_tree_depth rejects oversize children; after 10 rejected attempts the
// parents are returned unchanged.
std::pair<Individual, Individual> crossover_subtree(const Individual& a, const Individual& b,
                                                    const Grammar& grammar, int max_tree_depth,
                                                    std::mt19937& rng);

// ---- mutation -------------------------------------------------------------

// Each codon in scope is redrawn uniformly with probability per_codon_p. The
// scope is the used portion when within_used is set, the whole genome
// otherwise.
Genome mutate_codon_flip(const Individual& ind, double per_codon_p, bool within_used,
                         std::mt19937& rng);

// Redraws exactly num_events positions (chosen with replacement) in scope.
Genome mutate_genome_flip(const Individual& ind, int num_events, bool within_used,
                          std::mt19937& rng);

// Picks a uniform node of the tree and regrows it in place, keeping the tree
// within max_tree_depth. The individual must be valid and carry a tree.
Individual mutate_subtree(const Individual& ind, const Grammar& grammar, int max_tree_depth,
                          std::mt19937& rng);

// ---- replacement ----------------------------------------------------------

// Children plus the elite_size best parents form the next generation;
// elite_size + children.size() must equal parents.size().
Population replace_generational(const Population& parents, Population children, int elite_size,
                                Direction direction);

// Steady state: drops the two worst and inserts both children unconditionally.
Population replace_steady_state(Population pop, std::pair<Individual, Individual> children,
                                Direction direction);

}  // namespace gevo
