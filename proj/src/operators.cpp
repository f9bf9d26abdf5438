#include "gevo/operators.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

namespace gevo {

namespace {

// Best-first index order, stable so ties keep their population order.
std::vector<std::size_t> ranked_indices(const Population& pop, Direction direction) {
    std::vector<std::size_t> idx(pop.size());
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
        return fitness_better(pop[a].fitness, pop[b].fitness, direction);
    });
    return idx;
}

std::size_t crossover_bound(const Individual& ind, bool within_used) {
    std::size_t len = ind.genome.size();
    if (within_used) {
        std::size_t used = std::min(ind.used_codons, len);
        if (used >= 2) return used;
    }
    return len;
}

// Uniform point in [1, bound-1]; degenerate bounds collapse to the boundary,
// which makes the splice a copy.
std::size_t draw_point(std::size_t bound, std::mt19937& rng) {
    if (bound < 2) return bound;
    std::uniform_int_distribution<std::size_t> dist(1, bound - 1);
    return dist(rng);
}

std::pair<std::size_t, std::size_t> draw_point_pair(std::size_t bound, std::mt19937& rng) {
    std::size_t p1 = draw_point(bound, rng);
    std::size_t p2 = draw_point(bound, rng);
    if (p2 < p1) std::swap(p1, p2);
    return {p1, p2};
}

void collect_nodes(DerivationTree& node, std::vector<DerivationTree*>& out) {
    out.push_back(&node);
    for (auto& child : node.children) collect_nodes(child, out);
}

void collect_rule_names(const DerivationTree& node, std::set<std::string>& out) {
    out.insert(node.rule);
    for (const auto& child : node.children) collect_rule_names(child, out);
}

std::vector<std::uint32_t> slice(const Genome& g, std::size_t from, std::size_t to) {
    return {g.codons().begin() + static_cast<std::ptrdiff_t>(from),
            g.codons().begin() + static_cast<std::ptrdiff_t>(to)};
}

void require_parents(const Individual& a, const Individual& b) {
    if (a.genome.empty() || b.genome.empty())
        throw std::invalid_argument("crossover parents need non-empty genomes");
    if (a.genome.codon_size() != b.genome.codon_size())
        throw std::invalid_argument("crossover parents disagree on codon_size");
}

}  // namespace

Individual make_individual(const Grammar& grammar, Genome genome, int max_wraps, bool with_tree,
                           int max_tree_depth) {
    Individual ind;
    MappingResult r;
    if (with_tree) {
        auto tm = map_genome_with_tree(grammar, genome, max_wraps, max_tree_depth);
        r = std::move(tm.result);
        ind.tree = std::move(tm.tree);
    } else {
        r = map_genome(grammar, genome, max_wraps, max_tree_depth);
    }
    ind.genome = std::move(genome);
    ind.phenotype = std::move(r.phenotype);
    ind.invalid = r.invalid;
    ind.used_codons = r.used_codons;
    ind.depth = r.depth;
    ind.nodes = r.nodes;
    return ind;
}

Individual individual_from_tree(const Grammar& grammar, DerivationTree tree,
                                std::uint32_t codon_size) {
    Individual ind;
    ind.genome = tree_to_genome(tree, codon_size);
    ind.phenotype = tree_phenotype(tree, grammar);
    ind.invalid = false;
    ind.used_codons = ind.genome.size();
    ind.depth = tree_depth(tree);
    ind.nodes = tree_node_count(tree);
    ind.tree = std::move(tree);
    return ind;
}

Population init_random_genome(const Grammar& grammar, int pop_size, int genome_length,
                              std::uint32_t codon_size, int max_wraps, bool with_tree,
                              std::mt19937& rng) {
    if (pop_size < 1) throw std::invalid_argument("population size must be positive");
    if (genome_length < 1) throw std::invalid_argument("genome length must be positive");

    Population pop;
    pop.reserve(static_cast<std::size_t>(pop_size));
    for (int i = 0; i < pop_size; ++i)
        pop.push_back(make_individual(
            grammar, random_genome(static_cast<std::size_t>(genome_length), codon_size, rng),
            max_wraps, with_tree));
    return pop;
}

Population init_tree_based(const Grammar& grammar, int pop_size, int depth_min, int depth_max,
                           InitMethod method, std::uint32_t codon_size, std::mt19937& rng) {
    if (pop_size < 1) throw std::invalid_argument("population size must be positive");
    if (depth_min < 1 || depth_min > depth_max)
        throw std::invalid_argument("need 1 <= depth_min <= depth_max");
    if (depth_min < grammar.start_rule().min_depth)
        throw DepthInfeasible("ramp starts at depth " + std::to_string(depth_min) +
                              " but the grammar needs " +
                              std::to_string(grammar.start_rule().min_depth));

    int buckets = depth_max - depth_min + 1;
    std::uniform_int_distribution<std::uint32_t> tail_dist(0, codon_size - 1);

    Population pop;
    pop.reserve(static_cast<std::size_t>(pop_size));
    for (int i = 0; i < pop_size; ++i) {
        int depth;
        BuildMode mode;
        switch (method) {
            case InitMethod::rhh:
                depth = depth_min + (i / 2) % buckets;
                mode = i % 2 == 0 ? BuildMode::full : BuildMode::grow;
                break;
            case InitMethod::pi_grow:
                depth = depth_min + i % buckets;
                mode = BuildMode::pi_grow;
                break;
            default:
                depth = depth_max;
                mode = BuildMode::grow;
        }

        Individual ind =
            individual_from_tree(grammar, build_tree(grammar, depth, mode, rng, codon_size),
                                 codon_size);

        // Tail of random codons, half the used length, so linear operators
        // have material past the coding region.
        std::size_t tail = ind.used_codons / 2;
        if (tail > 0) {
            auto codons = ind.genome.codons();
            for (std::size_t t = 0; t < tail; ++t) codons.push_back(tail_dist(rng));
            ind.genome = Genome(std::move(codons), codon_size);
        }
        pop.push_back(std::move(ind));
    }
    return pop;
}

Population select_tournament(const Population& pop, int generation_size, int tournament_size,
                             bool allow_invalids, Direction direction, std::mt19937& rng) {
    if (generation_size < 0) throw std::invalid_argument("generation_size must be >= 0");
    if (tournament_size < 1) throw std::invalid_argument("tournament_size must be >= 1");

    std::vector<std::size_t> pool;
    for (std::size_t i = 0; i < pop.size(); ++i)
        if (allow_invalids || !pop[i].invalid) pool.push_back(i);
    if (pool.empty()) throw EmptyCandidatePool("no eligible individuals to select from");

    std::uniform_int_distribution<std::size_t> dist(0, pool.size() - 1);
    Population winners;
    winners.reserve(static_cast<std::size_t>(generation_size));
    for (int w = 0; w < generation_size; ++w) {
        std::size_t best = pool[dist(rng)];
        for (int t = 1; t < tournament_size; ++t) {
            std::size_t cand = pool[dist(rng)];
            if (fitness_better(pop[cand].fitness, pop[best].fitness, direction)) best = cand;
        }
        winners.push_back(pop[best]);
    }
    return winners;
}

Population select_truncation(const Population& pop, double proportion, Direction direction) {
    if (!(proportion > 0.0) || proportion > 1.0)
        throw std::invalid_argument("truncation proportion must be in (0, 1]");
    if (pop.empty()) throw EmptyCandidatePool("cannot truncate an empty population");

    auto keep = static_cast<std::size_t>(std::ceil(proportion * static_cast<double>(pop.size())));
    auto idx = ranked_indices(pop, direction);
    Population out;
    out.reserve(keep);
    for (std::size_t i = 0; i < keep; ++i) out.push_back(pop[idx[i]]);
    return out;
}

std::pair<Genome, Genome> splice_onepoint(const Genome& a, const Genome& b, std::size_t pa,
                                          std::size_t pb) {
    if (pa > a.size() || pb > b.size()) throw std::invalid_argument("crossover point out of range");
    auto c1 = slice(a, 0, pa);
    auto t1 = slice(b, pb, b.size());
    c1.insert(c1.end(), t1.begin(), t1.end());
    auto c2 = slice(b, 0, pb);
    auto t2 = slice(a, pa, a.size());
    c2.insert(c2.end(), t2.begin(), t2.end());
    return {Genome(std::move(c1), a.codon_size()), Genome(std::move(c2), b.codon_size())};
}

std::pair<Genome, Genome> splice_twopoint(const Genome& a, const Genome& b, std::size_t pa1,
                                          std::size_t pa2, std::size_t pb1, std::size_t pb2) {
    if (pa1 > pa2 || pa2 > a.size() || pb1 > pb2 || pb2 > b.size())
        throw std::invalid_argument("crossover points out of range");
    auto c1 = slice(a, 0, pa1);
    auto m1 = slice(b, pb1, pb2);
    auto e1 = slice(a, pa2, a.size());
    c1.insert(c1.end(), m1.begin(), m1.end());
    c1.insert(c1.end(), e1.begin(), e1.end());
    auto c2 = slice(b, 0, pb1);
    auto m2 = slice(a, pa1, pa2);
    auto e2 = slice(b, pb2, b.size());
    c2.insert(c2.end(), m2.begin(), m2.end());
    c2.insert(c2.end(), e2.begin(), e2.end());
    return {Genome(std::move(c1), a.codon_size()), Genome(std::move(c2), b.codon_size())};
}

std::pair<Genome, Genome> crossover_linear(const Individual& a, const Individual& b,
                                           CrossoverVariant variant, bool within_used,
                                           std::mt19937& rng) {
    require_parents(a, b);
    std::size_t ba = crossover_bound(a, within_used);
    std::size_t bb = crossover_bound(b, within_used);

    switch (variant) {
        case CrossoverVariant::fixed_onepoint: {
            std::size_t p = draw_point(std::min(ba, bb), rng);
            return splice_onepoint(a.genome, b.genome, p, p);
        }
        case CrossoverVariant::fixed_twopoint: {
            auto [p1, p2] = draw_point_pair(std::min(ba, bb), rng);
            return splice_twopoint(a.genome, b.genome, p1, p2, p1, p2);
        }
        case CrossoverVariant::variable_onepoint: {
            std::size_t pa = draw_point(ba, rng);
            std::size_t pb = draw_point(bb, rng);
            return splice_onepoint(a.genome, b.genome, pa, pb);
        }
        default: {
            auto [pa1, pa2] = draw_point_pair(ba, rng);
            auto [pb1, pb2] = draw_point_pair(bb, rng);
            return splice_twopoint(a.genome, b.genome, pa1, pa2, pb1, pb2);
        }
    }
}

std::pair<Individual, Individual> crossover_subtree(const Individual& a, const Individual& b,
                                                    const Grammar& grammar, int max_tree_depth,
                                                    std::mt19937& rng) {
    if (a.invalid || !a.tree || b.invalid || !b.tree)
        throw std::invalid_argument("subtree crossover needs valid parents with trees");
    require_parents(a, b);
    std::uint32_t codon_size = a.genome.codon_size();

    std::set<std::string> in_a, in_b;
    collect_rule_names(*a.tree, in_a);
    collect_rule_names(*b.tree, in_b);
    std::vector<std::string> common;
    std::set_intersection(in_a.begin(), in_a.end(), in_b.begin(), in_b.end(),
                          std::back_inserter(common));
    if (common.empty()) return {a, b};

    std::uniform_int_distribution<std::size_t> pick_nt(0, common.size() - 1);
    for (int attempt = 0; attempt < 10; ++attempt) {
        const std::string& nt = common[pick_nt(rng)];
        DerivationTree ta = *a.tree;
        DerivationTree tb = *b.tree;

        std::vector<DerivationTree*> all_a, all_b;
        collect_nodes(ta, all_a);
        collect_nodes(tb, all_b);
        std::vector<DerivationTree*> at, bt;
        for (auto* n : all_a)
            if (n->rule == nt) at.push_back(n);
        for (auto* n : all_b)
            if (n->rule == nt) bt.push_back(n);

        std::uniform_int_distribution<std::size_t> da(0, at.size() - 1);
        std::uniform_int_distribution<std::size_t> db(0, bt.size() - 1);
        DerivationTree* na = at[da(rng)];
        DerivationTree* nb = bt[db(rng)];

        int depth_a = na->depth;
        int depth_b = nb->depth;
        std::swap(*na, *nb);
        reroot_depths(*na, depth_a);
        reroot_depths(*nb, depth_b);

        if (max_tree_depth > 0 &&
            (tree_depth(ta) > max_tree_depth || tree_depth(tb) > max_tree_depth))
            continue;

        return {individual_from_tree(grammar, std::move(ta), codon_size),
                individual_from_tree(grammar, std::move(tb), codon_size)};
    }
    return {a, b};
}

Genome mutate_codon_flip(const Individual& ind, double per_codon_p, bool within_used,
                         std::mt19937& rng) {
    if (per_codon_p < 0.0 || per_codon_p > 1.0)
        throw std::invalid_argument("mutation probability must be in [0, 1]");
    std::size_t len = ind.genome.size();
    std::size_t scope = within_used ? std::min(ind.used_codons, len) : len;

    auto codons = ind.genome.codons();
    std::uniform_real_distribution<double> coin(0.0, 1.0);
    std::uniform_int_distribution<std::uint32_t> redraw(0, ind.genome.codon_size() - 1);
    for (std::size_t i = 0; i < scope; ++i)
        if (coin(rng) < per_codon_p) codons[i] = redraw(rng);
    return Genome(std::move(codons), ind.genome.codon_size());
}

Genome mutate_genome_flip(const Individual& ind, int num_events, bool within_used,
                          std::mt19937& rng) {
    if (num_events < 0) throw std::invalid_argument("num_events must be >= 0");
    std::size_t len = ind.genome.size();
    std::size_t scope = within_used ? std::min(ind.used_codons, len) : len;

    auto codons = ind.genome.codons();
    if (scope > 0) {
        std::uniform_int_distribution<std::size_t> pos(0, scope - 1);
        std::uniform_int_distribution<std::uint32_t> redraw(0, ind.genome.codon_size() - 1);
        for (int e = 0; e < num_events; ++e) codons[pos(rng)] = redraw(rng);
    }
    return Genome(std::move(codons), ind.genome.codon_size());
}

Individual mutate_subtree(const Individual& ind, const Grammar& grammar, int max_tree_depth,
                          std::mt19937& rng) {
    if (ind.invalid || !ind.tree)
        throw std::invalid_argument("subtree mutation needs a valid individual with a tree");
    if (max_tree_depth < 1) throw std::invalid_argument("subtree mutation needs a depth limit");

    DerivationTree tree = *ind.tree;
    std::vector<DerivationTree*> nodes;
    collect_nodes(tree, nodes);
    std::uniform_int_distribution<std::size_t> pick(0, nodes.size() - 1);
    DerivationTree* target = nodes[pick(rng)];

    *target = grow_subtree(grammar, target->rule, target->depth, max_tree_depth, rng,
                           ind.genome.codon_size());
    return individual_from_tree(grammar, std::move(tree), ind.genome.codon_size());
}

Population replace_generational(const Population& parents, Population children, int elite_size,
                                Direction direction) {
    if (elite_size < 0 || static_cast<std::size_t>(elite_size) > parents.size())
        throw std::invalid_argument("elite_size out of range");
    if (static_cast<std::size_t>(elite_size) + children.size() != parents.size())
        throw SizeMismatch("elites (" + std::to_string(elite_size) + ") + children (" +
                           std::to_string(children.size()) + ") != parents (" +
                           std::to_string(parents.size()) + ")");

    auto idx = ranked_indices(parents, direction);
    Population next;
    next.reserve(parents.size());
    for (int e = 0; e < elite_size; ++e) next.push_back(parents[idx[static_cast<std::size_t>(e)]]);
    for (auto& child : children) next.push_back(std::move(child));
    return next;
}

Population replace_steady_state(Population pop, std::pair<Individual, Individual> children,
                                Direction direction) {
    if (pop.size() < 2) throw SizeMismatch("steady-state replacement needs at least 2 individuals");

    auto idx = ranked_indices(pop, direction);
    std::size_t worst1 = idx[idx.size() - 1];
    std::size_t worst2 = idx[idx.size() - 2];

    Population next;
    next.reserve(pop.size());
    for (std::size_t i = 0; i < pop.size(); ++i)
        if (i != worst1 && i != worst2) next.push_back(std::move(pop[i]));
    next.push_back(std::move(children.first));
    next.push_back(std::move(children.second));
    return next;
}

}  // namespace gevo
